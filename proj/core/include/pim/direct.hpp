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

// Brute-force reference sums over every source-observer pair.

#ifndef PIM_DIRECT_HPP_
#define PIM_DIRECT_HPP_

#include <string>
#include <vector>

#include "pim/model.hpp"
#include "pim/pgf.hpp"

namespace pim {

struct OracleFailure {
  std::size_t observer;
  std::size_t source;
  std::string reason;
};

struct OracleReport {
  std::vector<Complex> values;
  long worst_terms = 0;
  std::vector<OracleFailure> failures;

  bool ok() const { return failures.empty(); }
};

// u(r_m) = sum_n G^p(r_m - r_n) q_n with the spectral or lattice series.
// Coincident pairs and unconverged series are reported, never skipped
// silently; the value for an affected observer excludes the failed pair.
OracleReport eval_direct(const PeriodicityConfig& config,
                         const SourcePointSet& src, const ObserverPointSet& obs,
                         const TruncationPolicy& policy);

// Same sum with G^p_far = G^p - (images |i| <= i_d).
OracleReport eval_direct_farzone(const PeriodicityConfig& config,
                                 const SourcePointSet& src,
                                 const ObserverPointSet& obs, int i_d,
                                 const TruncationPolicy& policy);

// Same sum with G^p_near, the explicit images |i| <= i_d.
OracleReport eval_direct_nearzone(const PeriodicityConfig& config,
                                  const SourcePointSet& src,
                                  const ObserverPointSet& obs, int i_d);

// Throws the first failure as NotConverged / DomainError.
const OracleReport& require_ok(const OracleReport& report);

// max_m |a_m - b_m| / max_m |b_m|
double max_relative_error(const std::vector<Complex>& a,
                          const std::vector<Complex>& b);

}  // namespace pim

#endif  // PIM_DIRECT_HPP_
