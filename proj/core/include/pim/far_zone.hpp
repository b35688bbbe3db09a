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

// Far-zone engine: shifted source/observer grids, a kernel table over grid
// difference vectors, and project -> dense grid sum -> interpolate.

#ifndef PIM_FAR_ZONE_HPP_
#define PIM_FAR_ZONE_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pim/grid.hpp"
#include "pim/model.hpp"
#include "pim/pgf.hpp"
#include "pim/transform.hpp"

namespace pim {

struct FarZonePlan {
  PeriodicityConfig config;
  int i_d = 1;
  double series_tol = 1e-10;
  UniformGrid source_grid;
  UniformGrid observer_grid;
  SparseInterpOperator proj;    // sources -> source grid
  SparseInterpOperator interp;  // observer grid -> observers
  // G_far(r_o - r_s) at (l_o - l_s + Ngx - 1, p_o - p_s + Ngy - 1,
  // q_o - q_s + Ngz - 1), row-major.
  GridDims kernel_dims{1, 1, 1};
  std::vector<Complex> kernel;
  // Real and imaginary parts of `kernel` for the explicit grid sum.
  std::vector<double> kernel_re;
  std::vector<double> kernel_im;
  // Circulant embedding of `kernel` (7-smooth size >= 2 N_a - 1), transformed.
  GridDims fft_dims{1, 1, 1};
  std::vector<Complex> kernel_hat;
  std::shared_ptr<const SpectralTransformProvider> provider;
  long max_series_terms = 0;
  bool kernel_from_cache = false;
  std::vector<std::string> warnings;

  Complex kernel_at(int dl, int dp, int dq) const {
    const std::size_t idx =
        (static_cast<std::size_t>(dl + source_grid.dims[0] - 1) *
             kernel_dims[1] +
         (dp + source_grid.dims[1] - 1)) *
            kernel_dims[2] +
        (dq + source_grid.dims[2] - 1);
    return kernel[idx];
  }
  // r_o - r_s for a difference index.
  Vec3 difference_vector(int dl, int dp, int dq) const;
};

struct FarPlanOptions {
  // Grid sum through the transform provider; false keeps the explicit sum.
  bool fft_grid_sum = true;
  std::shared_ptr<const SpectralTransformProvider> provider =
      default_transform_provider();
  // When non-empty, a matching table is loaded from this file; otherwise the
  // table is tabulated and written there.
  std::string kernel_cache_path;
};

FarZonePlan build_far_plan(const PeriodicityConfig& config,
                           const TargetBox& box, const SourcePointSet& src,
                           const ObserverPointSet& obs,
                           const SolverParams& params,
                           const FarPlanOptions& options = {});

std::vector<Complex> eval_far(const FarZonePlan& plan,
                              const std::vector<Complex>& q);

// u_g(o) = sum_s K(o - s) q_g(s) on the grids of a plan, through the
// circulant transform when the plan has one.
std::vector<Complex> far_grid_sum(const FarZonePlan& plan,
                                  const std::vector<Complex>& q_grid);

// The same sum evaluated explicitly over all N_g^2 grid pairs.
std::vector<Complex> far_grid_sum_direct(const FarZonePlan& plan,
                                         const std::vector<Complex>& q_grid);

// FNV-1a hash of everything that determines the kernel table.
std::uint64_t far_kernel_hash(const FarZonePlan& plan);

// Binary table: 64-byte little-endian header ("PIMF", version, dims,
// regime, periodicity, i_d, hash, entry count) followed by complex doubles.
void export_far_kernel(const FarZonePlan& plan, const std::string& path);

// Reads a table written by export_far_kernel. Throws IoError on a missing
// file, bad magic or version, or a header that does not match `plan`.
std::vector<Complex> import_far_kernel(const FarZonePlan& plan,
                                       const std::string& path);

}  // namespace pim

#endif  // PIM_FAR_ZONE_HPP_
