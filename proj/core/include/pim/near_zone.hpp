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

// Near-zone engine: coinciding grid, circulant FFT convolution with the
// near-image kernel, and sparse precorrection inside the correction range.

#ifndef PIM_NEAR_ZONE_HPP_
#define PIM_NEAR_ZONE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "pim/grid.hpp"
#include "pim/model.hpp"
#include "pim/transform.hpp"

namespace pim {

// Image index of a neighbor: the source image sits at r_n + o * L (per axis
// o in {-1, 0, 1}), so the kernel argument is r_m - r_n - o * L.
using ImageOffset = std::array<int, 3>;

struct NeighborBox {
  std::uint32_t box;
  ImageOffset offset;
};

// Kernel values on a window of grid displacement indices.
struct DisplacementTable {
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> n{1, 1, 1};
  std::vector<Complex> values;

  bool contains(int dx, int dy, int dz) const {
    return dx >= lo[0] && dx < lo[0] + n[0] && dy >= lo[1] &&
           dy < lo[1] + n[1] && dz >= lo[2] && dz < lo[2] + n[2];
  }
  std::size_t index(int dx, int dy, int dz) const {
    return (static_cast<std::size_t>(dx - lo[0]) * n[1] + (dy - lo[1])) *
               n[2] +
           (dz - lo[2]);
  }
  Complex at(int dx, int dy, int dz) const {
    return values[index(dx, dy, dz)];
  }
};

struct NearZonePlan {
  PeriodicityConfig config;
  int i_d = 1;
  int er_range_boxes = 1;
  NearCorrection correction = NearCorrection::SingleImage;
  UniformGrid grid;
  SparseInterpOperator proj;
  SparseInterpOperator interp;
  double coincidence_radius = 0.0;

  // G_near at every grid displacement, entries that hit an image exactly
  // set to zero.
  DisplacementTable kernel;
  // Circulant size: the smallest 7-smooth value >= 2 N_a on active axes.
  GridDims fft_dims{1, 1, 1};
  std::vector<Complex> kernel_hat;

  // Box partition: box b covers nodes [b, b + 1] per axis.
  GridDims box_dims{1, 1, 1};
  std::vector<std::size_t> box_src_ptr;
  std::vector<std::uint32_t> box_src;
  std::vector<std::uint32_t> observer_box;
  std::vector<std::size_t> neighbor_ptr;
  std::vector<NeighborBox> neighbors;

  // Single-image kernels g0(d h - o L) * phase(o), one table per offset.
  std::map<ImageOffset, DisplacementTable> image_tables;

  // Precorrection: observer m receives sum_k corr_val[k] * q[corr_src[k]].
  std::vector<std::size_t> corr_ptr;
  std::vector<std::uint32_t> corr_src;
  std::vector<Complex> corr_val;

  std::shared_ptr<const SpectralTransformProvider> provider;

  std::size_t num_boxes() const {
    return static_cast<std::size_t>(box_dims[0]) * box_dims[1] * box_dims[2];
  }
  std::size_t box_of(const Vec3& p) const;
};

NearZonePlan build_near_plan(
    const PeriodicityConfig& config, const TargetBox& box,
    const SourcePointSet& src, const ObserverPointSet& obs,
    const SolverParams& params,
    std::shared_ptr<const SpectralTransformProvider> provider =
        default_transform_provider());

std::vector<Complex> eval_near(const NearZonePlan& plan,
                               const std::vector<Complex>& q);

// Step 2 alone: u_g = K * q_g through the transform provider.
std::vector<Complex> near_grid_convolve(const NearZonePlan& plan,
                                        const std::vector<Complex>& q_grid);

// Step 2 as an explicit double sum over grid nodes.
std::vector<Complex> near_grid_convolve_direct(
    const NearZonePlan& plan, const std::vector<Complex>& q_grid);

// Steps 1-3 for the pair (m, n): sum of w_o(m, m') K(m' - n') w_s(n', n).
Complex grid_green(const NearZonePlan& plan, std::size_t m, std::size_t n);

// Same bilinear form with the single-image kernel of `offset`.
Complex grid_green_image(const NearZonePlan& plan, std::size_t m,
                         std::size_t n, const ImageOffset& offset);

// G_near(r) with every |i| <= i_d image.
Complex near_kernel(const NearZonePlan& plan, const Vec3& r);

}  // namespace pim

#endif  // PIM_NEAR_ZONE_HPP_
