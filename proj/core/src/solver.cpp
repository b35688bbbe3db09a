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

#include "pim/solver.hpp"

#include <chrono>

#include "pim/error.hpp"

namespace pim {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

PeriodicSolver::PeriodicSolver(
    const PeriodicityConfig& config, const TargetBox& box,
    const SourcePointSet& src, const ObserverPointSet& obs,
    const SolverParams& params,
    std::shared_ptr<const SpectralTransformProvider> provider,
    const FarPlanOptions& far_options)
    : config_(config), params_(params) {
  require_valid(config, box, src, obs, params);
  auto t0 = std::chrono::steady_clock::now();
  near_ = build_near_plan(config, box, src, obs, params, std::move(provider));
  timings_.near_seconds = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  far_ = build_far_plan(config, box, src, obs, params, far_options);
  timings_.far_seconds = seconds_since(t0);
}

std::vector<Complex> PeriodicSolver::evaluate(
    const std::vector<Complex>& q) const {
  if (config_.regime == Regime::NPSP) {
    Complex total{0.0, 0.0};
    double total_abs = 0.0;
    for (const Complex& z : q) {
      total += z;
      total_abs += std::abs(z);
    }
    if (std::abs(total) > params_.neutrality_tol * total_abs) {
      throw InvalidArgument("neutrality violated by the amplitude vector");
    }
  }
  std::vector<Complex> u = eval_near(near_, q);
  const std::vector<Complex> uf = eval_far(far_, q);
  for (std::size_t m = 0; m < u.size(); ++m) u[m] += uf[m];
  return u;
}

PotentialField solve(const PeriodicityConfig& config, const TargetBox& box,
                     const SourcePointSet& src, const ObserverPointSet& obs,
                     const SolverParams& params) {
  const PeriodicSolver solver(config, box, src, obs, params);
  return {solver.evaluate(src.amplitudes)};
}

}  // namespace pim
