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

// Uniform grids and sparse Lagrange projection/interpolation operators.

#ifndef PIM_GRID_HPP_
#define PIM_GRID_HPP_

#include <array>
#include <cstdint>
#include <cstddef>
#include <utility>
#include <vector>

#include "pim/model.hpp"

namespace pim {

inline constexpr int kMaxInterpOrder = 10;

struct UniformGrid {
  GridDims dims{1, 1, 1};
  Vec3 origin;   // first node, shift included
  Vec3 spacing;  // zero on collapsed axes
  Vec3 shift;    // 0 or half a spacing per axis

  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  // n = l * Ngz * Ngy + p * Ngz + q
  std::size_t index(int l, int p, int q) const {
    return (static_cast<std::size_t>(l) * dims[1] + p) * dims[2] + q;
  }
  std::array<int, 3> unravel(std::size_t n) const {
    const int q = static_cast<int>(n % dims[2]);
    n /= dims[2];
    const int p = static_cast<int>(n % dims[1]);
    return {static_cast<int>(n / dims[1]), p, q};
  }
  double coord(int axis, int i) const {
    return origin[axis] + i * spacing[axis];
  }
  Vec3 point(int l, int p, int q) const {
    return {coord(0, l), coord(1, p), coord(2, q)};
  }
  // Axes with more than one node.
  int active_axes() const {
    return (dims[0] > 1) + (dims[1] > 1) + (dims[2] > 1);
  }
};

// Source grid x_l = l * D/N (l = 0..N-1) and the observer grid shifted by
// half a spacing. Axes with D_a = 0 collapse to a single node.
std::pair<UniformGrid, UniformGrid> build_far_grids(const TargetBox& box,
                                                    const GridDims& dims);

// Coinciding grid spanning [0, D_a] with spacing D_a / (N_a - 1).
UniformGrid build_near_grid(const TargetBox& box, const GridDims& dims);

// Smallest n with n^d >= 1.15 * num_points over the d active axes, at least
// max(3, order + 1), rounded up to an odd value.
GridDims auto_near_grid(std::size_t num_points, const TargetBox& box,
                        int order);

// The user's near grid, or the Auto choice for max(#sources, #observers).
// With image subtraction (i_d >= 1) Auto is refined further until twice the
// correction range is shorter than every period.
GridDims resolve_near_grid(const SolverParams& params, const TargetBox& box,
                           std::size_t num_points,
                           const PeriodicityConfig& config);

// 1D factor of a tensor-product stencil.
struct AxisStencil {
  int start = 0;
  int count = 1;
  std::array<double, kMaxInterpOrder + 1> w{1.0};
};

struct Stencil {
  std::array<AxisStencil, 3> axis;

  std::size_t size() const {
    return static_cast<std::size_t>(axis[0].count) * axis[1].count *
           axis[2].count;
  }

  // Calls f(linear grid index, weight) for every node, in index order.
  template <typename F>
  void for_each(const UniformGrid& grid, F&& f) const {
    for (int i = 0; i < axis[0].count; ++i) {
      for (int j = 0; j < axis[1].count; ++j) {
        const double wij = axis[0].w[i] * axis[1].w[j];
        const std::size_t row =
            grid.index(axis[0].start + i, axis[1].start + j, axis[2].start);
        for (int k = 0; k < axis[2].count; ++k) {
          f(row + k, wij * axis[2].w[k]);
        }
      }
    }
  }
};

// Order-q Lagrange weights over the q+1 nearest nodes per active axis,
// shifted inward at the grid edges. Points up to one spacing beyond the node
// hull are accepted and extrapolated; farther points raise DomainError.
Stencil lagrange_weights(const UniformGrid& grid, const Vec3& point, int order);

class SparseInterpOperator {
 public:
  enum class Direction { Project, Interpolate };

  SparseInterpOperator() = default;
  SparseInterpOperator(const UniformGrid& grid, const std::vector<Vec3>& points,
                       int order, Direction direction);

  // Same weights, opposite direction.
  SparseInterpOperator transpose() const;

  Direction direction() const { return direction_; }
  const UniformGrid& grid() const { return grid_; }
  int order() const { return order_; }
  std::size_t num_points() const { return stencils_.size(); }
  std::size_t grid_size() const { return grid_.size(); }
  const std::vector<Stencil>& stencils() const { return stencils_; }

  // Expanded (grid index, weight) pairs of one point, in index order.
  std::vector<std::pair<std::size_t, double>> entries(std::size_t point) const;

  // Points bucketed by x-slab of width order + 1 nodes, keyed on the first
  // stencil node; slabs of equal parity touch disjoint grid nodes.
  std::size_t num_slabs() const { return slab_ptr_.size() - 1; }
  const std::vector<std::size_t>& slab_ptr() const { return slab_ptr_; }
  const std::vector<std::uint32_t>& slab_points() const { return slab_points_; }

 private:
  UniformGrid grid_;
  int order_ = 0;
  Direction direction_ = Direction::Project;
  std::vector<Stencil> stencils_;
  std::vector<std::size_t> slab_ptr_{0, 0};
  std::vector<std::uint32_t> slab_points_;

 public:
  // Compact copy of the stencils in slab order for the apply kernels: per
  // point the three start nodes, then counts()[0] + counts()[1] +
  // counts()[2] weights. Counts are the same for every point.
  const std::array<int, 3>& counts() const { return counts_; }
  const std::vector<std::int32_t>& packed_starts() const { return starts_; }
  const std::vector<double>& packed_weights() const { return weights_; }

 private:
  std::array<int, 3> counts_{1, 1, 1};
  std::vector<std::int32_t> starts_;
  std::vector<double> weights_;
};

// q_g(r_s) = sum_n w(r_s, r_n) q_n. Even slabs are scattered in parallel,
// then odd slabs; each node sums its terms in a fixed order, so the result
// does not depend on the thread count.
std::vector<Complex> project(const SparseInterpOperator& op,
                             const std::vector<Complex>& q);

// u(r_m) = sum_o w(r_m, r_o) u_g(r_o).
std::vector<Complex> interpolate(const SparseInterpOperator& op,
                                 const std::vector<Complex>& u_grid);

}  // namespace pim

#endif  // PIM_GRID_HPP_
