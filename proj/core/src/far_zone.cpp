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

#include "pim/far_zone.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <filesystem>
#include <sstream>

#include "kernels.hpp"
#include "pim/error.hpp"

namespace pim {

Vec3 FarZonePlan::difference_vector(int dl, int dp, int dq) const {
  const int d[3] = {dl, dp, dq};
  Vec3 r;
  for (int a = 0; a < 3; ++a) {
    r[a] = observer_grid.origin[a] - source_grid.origin[a] +
           d[a] * source_grid.spacing[a];
  }
  return r;
}

namespace {

void finish_kernel(FarZonePlan& plan, const FarPlanOptions& options) {
  plan.kernel_re.resize(plan.kernel.size());
  plan.kernel_im.resize(plan.kernel.size());
  for (std::size_t i = 0; i < plan.kernel.size(); ++i) {
    plan.kernel_re[i] = plan.kernel[i].real();
    plan.kernel_im[i] = plan.kernel[i].imag();
  }
  if (!options.fft_grid_sum || !options.provider) return;
  plan.provider = options.provider;
  const GridDims n = plan.source_grid.dims;
  GridDims& M = plan.fft_dims;
  for (int a = 0; a < 3; ++a) {
    M[a] = n[a] > 1 ? detail::next_smooth_size(2 * n[a] - 1) : 1;
  }
  plan.kernel_hat.assign(static_cast<std::size_t>(M[0]) * M[1] * M[2], {});
  for (int dl = -(n[0] - 1); dl <= n[0] - 1; ++dl) {
    for (int dp = -(n[1] - 1); dp <= n[1] - 1; ++dp) {
      for (int dq = -(n[2] - 1); dq <= n[2] - 1; ++dq) {
        const std::size_t idx =
            (static_cast<std::size_t>((dl + M[0]) % M[0]) * M[1] +
             (dp + M[1]) % M[1]) *
                M[2] +
            (dq + M[2]) % M[2];
        plan.kernel_hat[idx] = plan.kernel_at(dl, dp, dq);
      }
    }
  }
  plan.provider->prepare(M);
  plan.provider->forward(plan.kernel_hat, M);
}

}  // namespace

FarZonePlan build_far_plan(const PeriodicityConfig& config,
                           const TargetBox& box, const SourcePointSet& src,
                           const ObserverPointSet& obs,
                           const SolverParams& params,
                           const FarPlanOptions& options) {
  if (params.i_d < 1) {
    throw InvalidArgument("the far zone needs i_d >= 1");
  }
  FarZonePlan plan;
  plan.config = config;
  plan.i_d = params.i_d;
  plan.series_tol = params.series_tol;
  auto [sg, og] = build_far_grids(box, params.far_grid);

  // A cloud lying on the periodic axis of a 1D lattice would put every
  // difference vector on that axis, where the series are singular.
  if (config.dim == Periodicity::P1D && sg.dims[1] == 1 && sg.dims[2] == 1) {
    const double offset =
        0.5 * (sg.spacing[0] > 0.0 ? sg.spacing[0] : config.L.x / 2.0);
    sg.origin.y += offset;
    std::ostringstream os;
    os << "cloud lies on the periodic axis; far source grid offset by "
       << offset << " in y";
    plan.warnings.push_back(os.str());
  }
  plan.source_grid = sg;
  plan.observer_grid = og;
  plan.proj = SparseInterpOperator(sg, src.positions, params.far_order,
                                   SparseInterpOperator::Direction::Project);
  plan.interp =
      SparseInterpOperator(og, obs.positions, params.far_order,
                           SparseInterpOperator::Direction::Interpolate);
  for (int a = 0; a < 3; ++a) plan.kernel_dims[a] = 2 * sg.dims[a] - 1;
  const std::size_t nk = static_cast<std::size_t>(plan.kernel_dims[0]) *
                         plan.kernel_dims[1] * plan.kernel_dims[2];

  if (!options.kernel_cache_path.empty() &&
      std::filesystem::exists(options.kernel_cache_path)) {
    plan.kernel = import_far_kernel(plan, options.kernel_cache_path);
    plan.kernel_from_cache = true;
    finish_kernel(plan, options);
    return plan;
  }

  plan.kernel.resize(nk);
  TruncationPolicy policy;
  policy.tol = params.series_tol;
  std::vector<std::exception_ptr> errors(nk);
  std::vector<long> terms(nk, 0);
  bool failed = false;
  const GridDims kd = plan.kernel_dims;
  auto unravel = [&](std::size_t idx) {
    return std::array<int, 3>{
        static_cast<int>(idx / (static_cast<std::size_t>(kd[1]) * kd[2])) -
            (sg.dims[0] - 1),
        static_cast<int>((idx / kd[2]) % kd[1]) - (sg.dims[1] - 1),
        static_cast<int>(idx % kd[2]) - (sg.dims[2] - 1)};
  };
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : failed)
  for (std::size_t idx = 0; idx < nk; ++idx) {
    const auto d = unravel(idx);
    const Vec3 r = plan.difference_vector(d[0], d[1], d[2]);
    try {
      const PgfSample s = pgf_far(r, config, params.i_d, policy);
      require_converged(s, r);
      plan.kernel[idx] = s.value;
      terms[idx] = s.terms_used;
    } catch (...) {
      errors[idx] = std::current_exception();
      failed = true;
    }
  }
  if (failed) {
    for (std::size_t idx = 0; idx < nk; ++idx) {
      if (!errors[idx]) continue;
      const auto d = unravel(idx);
      std::ostringstream os;
      os << "far kernel at difference (" << d[0] << "," << d[1] << ","
         << d[2] << "): ";
      rethrow_with_context(errors[idx], os.str());
    }
  }
  for (long t : terms) plan.max_series_terms = std::max(plan.max_series_terms, t);
  finish_kernel(plan, options);

  if (!options.kernel_cache_path.empty()) {
    export_far_kernel(plan, options.kernel_cache_path);
  }
  return plan;
}

std::vector<Complex> far_grid_sum(const FarZonePlan& plan,
                                  const std::vector<Complex>& q_grid) {
  if (!plan.provider || plan.kernel_hat.empty()) {
    return far_grid_sum_direct(plan, q_grid);
  }
  const UniformGrid& sg = plan.source_grid;
  if (q_grid.size() != sg.size()) {
    throw InvalidArgument("far_grid_sum(): grid array has the wrong size");
  }
  const GridDims n = sg.dims;
  const GridDims M = plan.fft_dims;
  std::vector<Complex> buf(plan.kernel_hat.size());
  for (int l = 0; l < n[0]; ++l) {
    for (int p = 0; p < n[1]; ++p) {
      std::copy_n(q_grid.begin() + sg.index(l, p, 0), n[2],
                  buf.begin() + (static_cast<std::size_t>(l) * M[1] + p) * M[2]);
    }
  }
  plan.provider->forward(buf, M);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    buf[i] = detail::mul(buf[i], plan.kernel_hat[i]);
  }
  plan.provider->inverse(buf, M);
  std::vector<Complex> u(plan.observer_grid.size());
  for (int l = 0; l < n[0]; ++l) {
    for (int p = 0; p < n[1]; ++p) {
      std::copy_n(buf.begin() + (static_cast<std::size_t>(l) * M[1] + p) * M[2],
                  n[2], u.begin() + plan.observer_grid.index(l, p, 0));
    }
  }
  return u;
}

std::vector<Complex> far_grid_sum_direct(const FarZonePlan& plan,
                                         const std::vector<Complex>& q_grid) {
  const UniformGrid& sg = plan.source_grid;
  const GridDims n = sg.dims;
  const GridDims kd = plan.kernel_dims;
  if (q_grid.size() != sg.size()) {
    throw InvalidArgument("far_grid_sum(): grid array has the wrong size");
  }
  if (plan.kernel_re.size() != plan.kernel.size()) {
    throw InvalidArgument("far_grid_sum(): plan kernel is not initialised");
  }
  std::vector<double> qr(q_grid.size());
  std::vector<double> qi(q_grid.size());
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    qr[i] = q_grid[i].real();
    qi[i] = q_grid[i].imag();
  }
  std::vector<Complex> u(plan.observer_grid.size());
  const int nz = n[2];
  const int columns = n[0] * n[1];
  // Each (l_o, p_o, l_s, p_s) couples two z-columns through a Toeplitz
  // block; accumulate it as axpys over the observer column.
#pragma omp parallel for schedule(static)
  for (int col = 0; col < columns; ++col) {
    const int lo = col / n[1];
    const int po = col % n[1];
    std::vector<double> ur(nz, 0.0);
    std::vector<double> ui(nz, 0.0);
    for (int ls = 0; ls < n[0]; ++ls) {
      for (int ps = 0; ps < n[1]; ++ps) {
        const std::size_t krow =
            (static_cast<std::size_t>(lo - ls + n[0] - 1) * kd[1] +
             (po - ps + n[1] - 1)) *
            kd[2];
        const std::size_t qrow = sg.index(ls, ps, 0);
        for (int qs = 0; qs < nz; ++qs) {
          const double sr = qr[qrow + qs];
          const double si = qi[qrow + qs];
          const double* tr = plan.kernel_re.data() + krow + (nz - 1 - qs);
          const double* ti = plan.kernel_im.data() + krow + (nz - 1 - qs);
          for (int qo = 0; qo < nz; ++qo) {
            ur[qo] += tr[qo] * sr - ti[qo] * si;
            ui[qo] += tr[qo] * si + ti[qo] * sr;
          }
        }
      }
    }
    const std::size_t out = plan.observer_grid.index(lo, po, 0);
    for (int qo = 0; qo < nz; ++qo) u[out + qo] = {ur[qo], ui[qo]};
  }
  return u;
}

std::vector<Complex> eval_far(const FarZonePlan& plan,
                              const std::vector<Complex>& q) {
  const std::vector<Complex> q_grid = project(plan.proj, q);
  return interpolate(plan.interp, far_grid_sum(plan, q_grid));
}

}  // namespace pim
