/* Copyright 2026 The PIM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "pim_cli/studies.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "pim/direct.hpp"
#include "pim/error.hpp"
#include "pim/far_zone.hpp"
#include "pim/near_zone.hpp"
#include "pim/pgf.hpp"
#include "pim/solver.hpp"
#include "pim_cli/clouds.hpp"

namespace pim::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<Complex> add(const std::vector<Complex>& a,
                         const std::vector<Complex>& b) {
  std::vector<Complex> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

std::vector<Complex> sub(const std::vector<Complex>& a,
                         const std::vector<Complex>& b) {
  std::vector<Complex> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

}  // namespace

std::vector<ConvergenceRow> run_convergence(const PeriodicityConfig& config,
                                            const Vec3& point, int max_m) {
  TruncationPolicy ref_policy;
  ref_policy.tol = 1e-15;
  const PgfSample ref = pgf_total(point, config, ref_policy);
  require_converged(ref, point);
  const std::vector<Complex> partials =
      pgf_shell_partial_sums(point, config, max_m + 1);
  std::vector<ConvergenceRow> rows;
  rows.reserve(partials.size());
  for (std::size_t m = 0; m < partials.size(); ++m) {
    rows.push_back({static_cast<int>(m), partials[m],
                    std::abs(partials[m] - ref.value) / std::abs(ref.value)});
  }
  return rows;
}

std::vector<ErrorStudyRow> run_error_study(const PeriodicityConfig& config,
                                           const TargetBox& box,
                                           const SourcePointSet& src,
                                           const ObserverPointSet& obs,
                                           const SolverParams& base,
                                           const ErrorStudyOptions& options) {
  if (src.size() > options.max_points) {
    throw InvalidArgument("error study limited to " +
                          std::to_string(options.max_points) +
                          " sources (oracle cost)");
  }
  TruncationPolicy policy;
  policy.tol = std::min(base.series_tol, 1e-12);
  const std::vector<Complex> total =
      require_ok(eval_direct(config, src, obs, policy)).values;

  std::map<int, std::vector<Complex>> near_exact;
  auto near_for = [&](int i_d) -> const std::vector<Complex>& {
    auto it = near_exact.find(i_d);
    if (it == near_exact.end()) {
      it = near_exact
               .emplace(i_d, require_ok(eval_direct_nearzone(config, src, obs,
                                                             i_d))
                                 .values)
               .first;
    }
    return it->second;
  };

  std::vector<ErrorStudyRow> rows;
  for (int i_d : options.i_ds) {
    const std::vector<Complex>& near_ref = near_for(i_d);
    const std::vector<Complex> far_ref = sub(total, near_ref);
    for (int grid : options.grids) {
      for (int order : options.orders) {
        if (order + 1 > grid) continue;
        SolverParams p = base;
        p.i_d = i_d;
        p.far_order = order;
        p.far_grid = {grid, grid, grid};
        require_valid(config, box, src, obs, p);
        const FarZonePlan far = build_far_plan(config, box, src, obs, p);
        const std::vector<Complex> u_far = eval_far(far, src.amplitudes);
        std::vector<Complex> u;
        if (options.near == NearMode::Exact) {
          u = add(u_far, near_ref);
        } else {
          const NearZonePlan near = build_near_plan(config, box, src, obs, p);
          u = add(u_far, eval_near(near, src.amplitudes));
        }
        rows.push_back({order, grid, i_d, max_relative_error(u, total),
                        max_relative_error(u_far, far_ref)});
      }
    }
  }
  return rows;
}

std::vector<BenchRow> run_bench(const PeriodicityConfig& config,
                                const TargetBox& box, const SolverParams& base,
                                const BenchOptions& options) {
  std::vector<BenchRow> rows;
  for (std::size_t n : options.sizes) {
    const SourcePointSet src =
        random_neutral_sources(n, box, options.seed + n, true);
    ObserverPointSet obs;
    obs.positions = src.positions;

    BenchRow row;
    row.n = n;
    auto t0 = Clock::now();
    const PeriodicSolver solver(config, box, src, obs, base);
    row.build_ms = ms_since(t0);
    row.near_grid = solver.near_plan().grid.dims[0];

    SolverParams free = base;
    free.i_d = 0;
    t0 = Clock::now();
    const NearZonePlan free_plan = build_near_plan(config, box, src, obs, free);
    row.nonperiodic_build_ms = ms_since(t0);

    const double inf = 1e300;
    row.eval_ms = row.near_eval_ms = row.far_eval_ms = inf;
    row.nonperiodic_eval_ms = inf;
    for (int r = 0; r < std::max(options.repeats, 1); ++r) {
      t0 = Clock::now();
      (void)eval_near(free_plan, src.amplitudes);
      row.nonperiodic_eval_ms = std::min(row.nonperiodic_eval_ms, ms_since(t0));
      t0 = Clock::now();
      (void)solver.evaluate(src.amplitudes);
      row.eval_ms = std::min(row.eval_ms, ms_since(t0));
      t0 = Clock::now();
      (void)eval_near(solver.near_plan(), src.amplitudes);
      row.near_eval_ms = std::min(row.near_eval_ms, ms_since(t0));
      t0 = Clock::now();
      (void)eval_far(solver.far_plan(), src.amplitudes);
      row.far_eval_ms = std::min(row.far_eval_ms, ms_since(t0));
    }
    row.eval_overhead = row.eval_ms / row.nonperiodic_eval_ms - 1.0;
    row.build_overhead = row.build_ms / row.nonperiodic_build_ms - 1.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pim::cli
