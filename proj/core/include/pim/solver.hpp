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

// Full pipeline: near-zone plan plus far-zone plan over one geometry.

#ifndef PIM_SOLVER_HPP_
#define PIM_SOLVER_HPP_

#include <memory>
#include <vector>

#include "pim/far_zone.hpp"
#include "pim/model.hpp"
#include "pim/near_zone.hpp"
#include "pim/transform.hpp"

namespace pim {

struct BuildTimings {
  double near_seconds = 0.0;
  double far_seconds = 0.0;
};

class PeriodicSolver {
 public:
  // Validates the problem, then builds both plans. The amplitudes in `src`
  // are only used for validation; evaluate() takes its own vector.
  PeriodicSolver(const PeriodicityConfig& config, const TargetBox& box,
                 const SourcePointSet& src, const ObserverPointSet& obs,
                 const SolverParams& params,
                 std::shared_ptr<const SpectralTransformProvider> provider =
                     default_transform_provider(),
                 const FarPlanOptions& far_options = {});

  // u = u_near + u_far at every observer.
  std::vector<Complex> evaluate(const std::vector<Complex>& q) const;

  const NearZonePlan& near_plan() const { return near_; }
  const FarZonePlan& far_plan() const { return far_; }
  const BuildTimings& build_timings() const { return timings_; }
  const SolverParams& params() const { return params_; }

 private:
  PeriodicityConfig config_;
  SolverParams params_;
  NearZonePlan near_;
  FarZonePlan far_;
  BuildTimings timings_;
};

// One-shot convenience wrapper.
PotentialField solve(const PeriodicityConfig& config, const TargetBox& box,
                     const SourcePointSet& src, const ObserverPointSet& obs,
                     const SolverParams& params);

}  // namespace pim

#endif  // PIM_SOLVER_HPP_
