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

// Synthetic point clouds for studies, benchmarks and tests.

#ifndef PIM_CLI_CLOUDS_HPP_
#define PIM_CLI_CLOUDS_HPP_

#include <cstdint>

#include "pim/model.hpp"

namespace pim::cli {

// Uniform points in the box with amplitudes uniform in [-1, 1] (real and,
// unless `real_amplitudes`, imaginary part), shifted to a zero sum.
SourcePointSet random_neutral_sources(std::size_t n, const TargetBox& box,
                                      std::uint64_t seed,
                                      bool real_amplitudes = false);

ObserverPointSet random_observers(std::size_t n, const TargetBox& box,
                                  std::uint64_t seed);

// Two coaxial cylindrical shells along x, centred at y = z = r2, with
// uniform surface charge densities. Each shell gets about
// `points_per_shell` points on an axial x angular lattice whose cells are
// close to square. Charges are equal within a shell; when the densities
// are neutral (rho1 r1 = -rho2 r2) the outer total is set to exactly minus
// the inner total.
struct CoaxSpec {
  double r1 = 1.0;
  double r2 = 2.0;
  double rho1 = -1.0;
  double rho2 = 0.5;
  double length = 1.0;
  std::size_t points_per_shell = 10000;
};

SourcePointSet coax_sources(const CoaxSpec& spec);
TargetBox coax_box(const CoaxSpec& spec);

// n points on the axis at x = (i + 0.5) * length / n.
ObserverPointSet coax_axis_observers(const CoaxSpec& spec, std::size_t n);

}  // namespace pim::cli

#endif  // PIM_CLI_CLOUDS_HPP_
