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

#include "pim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "pim/error.hpp"

namespace pim {

namespace {

void check_dims(const GridDims& dims) {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 1) {
      throw InvalidArgument("grid dimension on axis " + std::to_string(a) +
                            " must be positive");
    }
  }
}

}  // namespace

std::pair<UniformGrid, UniformGrid> build_far_grids(const TargetBox& box,
                                                    const GridDims& dims) {
  check_dims(dims);
  UniformGrid src;
  for (int a = 0; a < 3; ++a) {
    if (box.D[a] > 0.0) {
      if (dims[a] < 2) {
        throw InvalidArgument("far grid needs >= 2 nodes on axis " +
                              std::to_string(a));
      }
      src.dims[a] = dims[a];
      src.spacing[a] = box.D[a] / dims[a];
    } else {
      src.dims[a] = 1;
    }
  }
  UniformGrid obs = src;
  for (int a = 0; a < 3; ++a) {
    obs.shift[a] = 0.5 * src.spacing[a];
    obs.origin[a] = src.origin[a] + obs.shift[a];
  }
  return {src, obs};
}

UniformGrid build_near_grid(const TargetBox& box, const GridDims& dims) {
  check_dims(dims);
  UniformGrid g;
  for (int a = 0; a < 3; ++a) {
    if (box.D[a] > 0.0) {
      if (dims[a] < 2) {
        throw InvalidArgument("near grid needs >= 2 nodes on axis " +
                              std::to_string(a));
      }
      g.dims[a] = dims[a];
      g.spacing[a] = box.D[a] / (dims[a] - 1);
    } else {
      g.dims[a] = 1;
    }
  }
  return g;
}

GridDims auto_near_grid(std::size_t num_points, const TargetBox& box,
                        int order) {
  int active = 0;
  for (int a = 0; a < 3; ++a) active += box.D[a] > 0.0;
  GridDims dims{1, 1, 1};
  if (active == 0) return dims;
  const double target = 1.15 * static_cast<double>(num_points);
  long n = std::max(1L, std::lround(std::floor(std::pow(target, 1.0 / active))));
  while (std::pow(static_cast<double>(n), active) < target) ++n;
  while (n > 1 && std::pow(static_cast<double>(n - 1), active) >= target) --n;
  n = std::max<long>({n, 3, order + 1});
  if (n % 2 == 0) ++n;
  for (int a = 0; a < 3; ++a) {
    if (box.D[a] > 0.0) dims[a] = static_cast<int>(n);
  }
  return dims;
}

GridDims resolve_near_grid(const SolverParams& params, const TargetBox& box,
                           std::size_t num_points,
                           const PeriodicityConfig& config) {
  if (params.near_grid) {
    GridDims dims = *params.near_grid;
    for (int a = 0; a < 3; ++a) {
      if (!(box.D[a] > 0.0)) dims[a] = 1;
    }
    return dims;
  }
  GridDims dims = auto_near_grid(num_points, box, params.near_order);
  if (params.i_d < 1) return dims;
  // Refine until the correction range 2 * er * h fits inside every period.
  const double dmax = std::max({box.D.x, box.D.y, box.D.z});
  int need = 0;
  for (int a = 0; a < config.periodic_axes(); ++a) {
    if (!(config.L[a] > 0.0) || !std::isfinite(config.L[a])) continue;
    const double ratio = 2.0 * params.er_range_boxes * dmax / config.L[a];
    if (ratio < 1e6) need = std::max(need, static_cast<int>(ratio) + 2);
  }
  need += (need % 2 == 0) ? 1 : 0;
  for (int a = 0; a < 3; ++a) {
    if (dims[a] > 1) dims[a] = std::max(dims[a], need);
  }
  return dims;
}

Stencil lagrange_weights(const UniformGrid& grid, const Vec3& point,
                         int order) {
  if (order < 0 || order > kMaxInterpOrder) {
    throw InvalidArgument("interpolation order must lie in [0, " +
                          std::to_string(kMaxInterpOrder) + "]");
  }
  Stencil s;
  for (int a = 0; a < 3; ++a) {
    AxisStencil& ax = s.axis[a];
    const int n = grid.dims[a];
    if (n == 1) {
      ax.start = 0;
      ax.count = 1;
      ax.w[0] = 1.0;
      continue;
    }
    if (order + 1 > n) {
      throw InvalidArgument("interpolation order " + std::to_string(order) +
                            " needs more nodes than axis " +
                            std::to_string(a) + " provides");
    }
    const double t = (point[a] - grid.origin[a]) / grid.spacing[a];
    constexpr double kHullSlack = 1e-9;
    if (!(t >= -1.0 - kHullSlack && t <= n + kHullSlack)) {
      std::ostringstream os;
      os << "point coordinate " << point[a] << " on axis " << a
         << " lies outside the grid hull";
      throw DomainError(os.str());
    }
    int start = static_cast<int>(std::floor(t - 0.5 * order + 0.5));
    start = std::clamp(start, 0, n - order - 1);
    ax.start = start;
    ax.count = order + 1;
    for (int i = 0; i <= order; ++i) {
      double w = 1.0;
      const double ti = start + i;
      for (int j = 0; j <= order; ++j) {
        if (j == i) continue;
        const double tj = start + j;
        w *= (t - tj) / (ti - tj);
      }
      ax.w[i] = w;
    }
  }
  return s;
}

SparseInterpOperator::SparseInterpOperator(const UniformGrid& grid,
                                           const std::vector<Vec3>& points,
                                           int order, Direction direction)
    : grid_(grid), order_(order), direction_(direction) {
  const std::size_t np = points.size();
  stencils_.resize(np);
  // Construction errors are collected and rethrown outside the parallel loop.
  std::vector<std::exception_ptr> errors(np);
  bool failed = false;
#pragma omp parallel for schedule(static) reduction(|| : failed)
  for (std::size_t i = 0; i < np; ++i) {
    try {
      stencils_[i] = lagrange_weights(grid, points[i], order);
    } catch (...) {
      errors[i] = std::current_exception();
      failed = true;
    }
  }
  if (failed) {
    for (std::size_t i = 0; i < np; ++i) {
      if (errors[i]) {
        rethrow_with_context(errors[i], "point #" + std::to_string(i) + ": ");
      }
    }
  }
  // Stable counting sort into slabs.
  const int width = order + 1;
  const std::size_t slabs =
      static_cast<std::size_t>((grid.dims[0] + width - 1) / width);
  slab_ptr_.assign(slabs + 1, 0);
  for (const Stencil& st : stencils_) ++slab_ptr_[st.axis[0].start / width + 1];
  for (std::size_t b = 0; b < slabs; ++b) slab_ptr_[b + 1] += slab_ptr_[b];
  slab_points_.resize(np);
  std::vector<std::size_t> fill(slab_ptr_.begin(), slab_ptr_.end() - 1);
  for (std::size_t i = 0; i < np; ++i) {
    slab_points_[fill[stencils_[i].axis[0].start / width]++] =
        static_cast<std::uint32_t>(i);
  }

  for (int a = 0; a < 3; ++a) counts_[a] = grid.dims[a] > 1 ? order + 1 : 1;
  const std::size_t nw = counts_[0] + counts_[1] + counts_[2];
  starts_.resize(3 * np);
  weights_.resize(nw * np);
  for (std::size_t k = 0; k < np; ++k) {
    const Stencil& st = stencils_[slab_points_[k]];
    double* w = weights_.data() + nw * k;
    for (int a = 0; a < 3; ++a) {
      starts_[3 * k + a] = st.axis[a].start;
      w = std::copy_n(st.axis[a].w.begin(), counts_[a], w);
    }
  }
}

SparseInterpOperator SparseInterpOperator::transpose() const {
  SparseInterpOperator t = *this;
  t.direction_ = direction_ == Direction::Project ? Direction::Interpolate
                                                  : Direction::Project;
  return t;
}

std::vector<std::pair<std::size_t, double>> SparseInterpOperator::entries(
    std::size_t point) const {
  std::vector<std::pair<std::size_t, double>> out;
  const Stencil& s = stencils_.at(point);
  out.reserve(s.size());
  s.for_each(grid_, [&](std::size_t g, double w) { out.emplace_back(g, w); });
  return out;
}

namespace {

// Apply kernels over the packed stencils. CZ > 0 fixes the innermost count
// so the compiler can unroll it; CZ = 0 reads it at run time.
struct PackedView {
  const std::int32_t* starts;
  const double* weights;
  std::array<int, 3> counts;
  std::size_t stride;  // weights per point
  int ny, nz;
};

PackedView packed_view(const SparseInterpOperator& op) {
  const auto& c = op.counts();
  return {op.packed_starts().data(), op.packed_weights().data(), c,
          static_cast<std::size_t>(c[0] + c[1] + c[2]), op.grid().dims[1],
          op.grid().dims[2]};
}

template <int CZ>
void scatter_one(const PackedView& v, std::size_t k, Complex qn,
                 Complex* out) {
  const int cz = CZ > 0 ? CZ : v.counts[2];
  const std::int32_t* s = v.starts + 3 * k;
  const double* wx = v.weights + v.stride * k;
  const double* wy = wx + v.counts[0];
  // Local copy: the grid rows could alias the weights otherwise.
  std::array<double, kMaxInterpOrder + 1> wz;
  std::copy_n(wy + v.counts[1], cz, wz.begin());
  for (int i = 0; i < v.counts[0]; ++i) {
    for (int j = 0; j < v.counts[1]; ++j) {
      const double wij = wx[i] * wy[j];
      const double qr = wij * qn.real();
      const double qi = wij * qn.imag();
      double* row = reinterpret_cast<double*>(
          out + (static_cast<std::size_t>(s[0] + i) * v.ny + (s[1] + j)) *
                    v.nz +
          s[2]);
      for (int c = 0; c < cz; ++c) {
        row[2 * c] += wz[c] * qr;
        row[2 * c + 1] += wz[c] * qi;
      }
    }
  }
}

template <int CZ>
Complex gather_one(const PackedView& v, std::size_t k, const Complex* u) {
  const int cz = CZ > 0 ? CZ : v.counts[2];
  const std::int32_t* s = v.starts + 3 * k;
  const double* wx = v.weights + v.stride * k;
  const double* wy = wx + v.counts[0];
  const double* wz = wy + v.counts[1];
  // One accumulator per z offset keeps the chains independent.
  std::array<double, 2 * (kMaxInterpOrder + 1)> acc{};
  for (int i = 0; i < v.counts[0]; ++i) {
    for (int j = 0; j < v.counts[1]; ++j) {
      const double* row = reinterpret_cast<const double*>(
          u + (static_cast<std::size_t>(s[0] + i) * v.ny + (s[1] + j)) * v.nz +
          s[2]);
      const double wij = wx[i] * wy[j];
      for (int c = 0; c < 2 * cz; ++c) acc[c] += wij * row[c];
    }
  }
  double ar = 0.0;
  double ai = 0.0;
  for (int c = 0; c < cz; ++c) {
    ar += wz[c] * acc[2 * c];
    ai += wz[c] * acc[2 * c + 1];
  }
  return {ar, ai};
}

// Scatters packed points [first, last) of slab order.
template <int CZ>
void scatter_span(const PackedView& v, const std::uint32_t* order,
                  const std::vector<Complex>& q, std::size_t first,
                  std::size_t last, Complex* out) {
  for (std::size_t k = first; k < last; ++k) {
    scatter_one<CZ>(v, k, q[order[k]], out);
  }
}

template <int CZ>
void gather_all(const PackedView& v, const std::uint32_t* order,
                const Complex* u, Complex* out, std::size_t np) {
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < np; ++k) out[order[k]] = gather_one<CZ>(v, k, u);
}

}  // namespace

std::vector<Complex> project(const SparseInterpOperator& op,
                             const std::vector<Complex>& q) {
  if (op.direction() != SparseInterpOperator::Direction::Project) {
    throw InvalidArgument("project() needs a projection operator");
  }
  if (q.size() != op.num_points()) {
    throw InvalidArgument("project(): expected " +
                          std::to_string(op.num_points()) + " amplitudes, got " +
                          std::to_string(q.size()));
  }
  std::vector<Complex> out(op.grid_size());
  const PackedView v = packed_view(op);
  const auto& ptr = op.slab_ptr();
  const std::uint32_t* order = op.slab_points().data();
  const std::size_t slabs = op.num_slabs();
  for (std::size_t parity = 0; parity < 2; ++parity) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t b = parity; b < slabs; b += 2) {
      switch (v.counts[2]) {
        case 1: scatter_span<1>(v, order, q, ptr[b], ptr[b + 1], out.data()); break;
        case 2: scatter_span<2>(v, order, q, ptr[b], ptr[b + 1], out.data()); break;
        case 3: scatter_span<3>(v, order, q, ptr[b], ptr[b + 1], out.data()); break;
        case 4: scatter_span<4>(v, order, q, ptr[b], ptr[b + 1], out.data()); break;
        default: scatter_span<0>(v, order, q, ptr[b], ptr[b + 1], out.data()); break;
      }
    }
  }
  return out;
}

std::vector<Complex> interpolate(const SparseInterpOperator& op,
                                 const std::vector<Complex>& u_grid) {
  if (op.direction() != SparseInterpOperator::Direction::Interpolate) {
    throw InvalidArgument("interpolate() needs an interpolation operator");
  }
  if (u_grid.size() != op.grid_size()) {
    throw InvalidArgument("interpolate(): expected " +
                          std::to_string(op.grid_size()) +
                          " grid values, got " + std::to_string(u_grid.size()));
  }
  const std::size_t np = op.num_points();
  std::vector<Complex> out(np);
  const PackedView v = packed_view(op);
  const std::uint32_t* order = op.slab_points().data();
  switch (v.counts[2]) {
    case 1: gather_all<1>(v, order, u_grid.data(), out.data(), np); break;
    case 2: gather_all<2>(v, order, u_grid.data(), out.data(), np); break;
    case 3: gather_all<3>(v, order, u_grid.data(), out.data(), np); break;
    case 4: gather_all<4>(v, order, u_grid.data(), out.data(), np); break;
    default: gather_all<0>(v, order, u_grid.data(), out.data(), np); break;
  }
  return out;
}

}  // namespace pim
