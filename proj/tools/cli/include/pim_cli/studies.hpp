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

// Numerical studies behind the convergence, error-study and bench
// subcommands. The acceptance tests drive the same functions.

#ifndef PIM_CLI_STUDIES_HPP_
#define PIM_CLI_STUDIES_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pim/model.hpp"

namespace pim::cli {

// Series convergence at one point.
struct ConvergenceRow {
  int m = 0;  // every index with max |i| <= m is summed
  Complex partial;
  double rel_error = 0.0;
};

// Partial sums for m = 0..max_m against the series summed to tol = 1e-15.
std::vector<ConvergenceRow> run_convergence(const PeriodicityConfig& config,
                                            const Vec3& point, int max_m);

enum class NearMode {
  Exact,  // near-zone images summed directly; isolates the far-zone engine
  Grid    // full fast path, near zone on the FFT grid
};

struct ErrorStudyOptions {
  std::vector<int> orders{1, 3, 6};
  std::vector<int> grids{10};
  std::vector<int> i_ds{1};
  NearMode near = NearMode::Exact;
  std::size_t max_points = 20000;
};

struct ErrorStudyRow {
  int order = 0;
  int grid = 0;
  int i_d = 0;
  // max |u - u_ref| / max |u_ref| over observers, total potential
  double total_error = 0.0;
  // same metric restricted to the far-zone component
  double far_error = 0.0;
};

// One oracle pass, then one far plan per sweep point. Far grids are cubic
// (grid x grid x grid, collapsed on zero-extent axes); combinations with
// order + 1 > grid are skipped. Throws
// InvalidArgument when the cloud exceeds max_points.
std::vector<ErrorStudyRow> run_error_study(const PeriodicityConfig& config,
                                           const TargetBox& box,
                                           const SourcePointSet& src,
                                           const ObserverPointSet& obs,
                                           const SolverParams& base,
                                           const ErrorStudyOptions& options);

struct BenchOptions {
  std::vector<std::size_t> sizes{10000, 20000, 40000, 80000};
  int repeats = 5;
  std::uint64_t seed = 7;
};

struct BenchRow {
  std::size_t n = 0;
  int near_grid = 0;
  double build_ms = 0.0;
  double eval_ms = 0.0;
  double near_eval_ms = 0.0;
  double far_eval_ms = 0.0;
  double nonperiodic_build_ms = 0.0;
  double nonperiodic_eval_ms = 0.0;
  double eval_overhead = 0.0;   // eval_ms / nonperiodic_eval_ms - 1
  double build_overhead = 0.0;  // build_ms / nonperiodic_build_ms - 1
};

// N coinciding random sources and observers per size. The non-periodic
// reference is the near-zone engine with i_d = 0 and no periodic wrap.
// Periodic and non-periodic evaluations alternate and the minimum over
// `repeats` is kept for each.
std::vector<BenchRow> run_bench(const PeriodicityConfig& config,
                                const TargetBox& box, const SolverParams& base,
                                const BenchOptions& options);

}  // namespace pim::cli

#endif  // PIM_CLI_STUDIES_HPP_
