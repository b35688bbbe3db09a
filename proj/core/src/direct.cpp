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

#include "pim/direct.hpp"

#include <algorithm>
#include <sstream>

#include "pim/error.hpp"

namespace pim {

namespace {

struct PairResult {
  Complex value;
  long terms;
};

template <typename Kernel>
OracleReport run_oracle(const SourcePointSet& src, const ObserverPointSet& obs,
                        Kernel&& kernel) {
  if (src.positions.size() != src.amplitudes.size()) {
    throw InvalidArgument("source positions and amplitudes differ in length");
  }
  const std::size_t nobs = obs.positions.size();
  const std::size_t nsrc = src.positions.size();
  OracleReport rep;
  rep.values.assign(nobs, {});
  std::vector<std::vector<OracleFailure>> failures(nobs);
  std::vector<long> worst(nobs, 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t m = 0; m < nobs; ++m) {
    Complex acc{0.0, 0.0};
    for (std::size_t n = 0; n < nsrc; ++n) {
      const Vec3 r = obs.positions[m] - src.positions[n];
      try {
        const PairResult p = kernel(r);
        acc += p.value * src.amplitudes[n];
        worst[m] = std::max(worst[m], p.terms);
      } catch (const Error& e) {
        failures[m].push_back({m, n, e.what()});
      }
    }
    rep.values[m] = acc;
  }
  for (std::size_t m = 0; m < nobs; ++m) {
    rep.worst_terms = std::max(rep.worst_terms, worst[m]);
    for (auto& f : failures[m]) rep.failures.push_back(std::move(f));
  }
  return rep;
}

}  // namespace

OracleReport eval_direct(const PeriodicityConfig& config,
                         const SourcePointSet& src, const ObserverPointSet& obs,
                         const TruncationPolicy& policy) {
  return run_oracle(src, obs, [&](const Vec3& r) {
    const PgfSample s = require_converged(pgf_total(r, config, policy), r);
    return PairResult{s.value, s.terms_used};
  });
}

OracleReport eval_direct_farzone(const PeriodicityConfig& config,
                                 const SourcePointSet& src,
                                 const ObserverPointSet& obs, int i_d,
                                 const TruncationPolicy& policy) {
  return run_oracle(src, obs, [&](const Vec3& r) {
    const PgfSample s = require_converged(pgf_far(r, config, i_d, policy), r);
    return PairResult{s.value, s.terms_used};
  });
}

OracleReport eval_direct_nearzone(const PeriodicityConfig& config,
                                  const SourcePointSet& src,
                                  const ObserverPointSet& obs, int i_d) {
  return run_oracle(src, obs, [&](const Vec3& r) {
    return PairResult{pgf_image_sum(r, config, {i_d, i_d, i_d}), 0};
  });
}

const OracleReport& require_ok(const OracleReport& report) {
  if (report.ok()) return report;
  const OracleFailure& f = report.failures.front();
  std::ostringstream os;
  os << report.failures.size() << " oracle pair(s) failed; first: observer #"
     << f.observer << ", source #" << f.source << ": " << f.reason;
  throw NotConverged(os.str());
}

double max_relative_error(const std::vector<Complex>& a,
                          const std::vector<Complex>& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("max_relative_error(): length mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace pim
