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

// Periodic Green's function evaluators: free-space kernel, truncated image
// sums, Floquet spectral series (dynamic / phase-shifted static), lattice
// series (no-phase static), and the far-zone remainder.

#ifndef PIM_PGF_HPP_
#define PIM_PGF_HPP_

#include <array>
#include <functional>
#include <vector>

#include "pim/model.hpp"

namespace pim {

struct TruncationPolicy {
  double tol = 1e-10;
  long max_terms = 1'000'000;
  // Stop after this many consecutive shells whose magnitude bound falls
  // below tol * |partial sum|.
  int consecutive_small = 3;
};

struct PgfSample {
  Complex value{0.0, 0.0};
  long terms_used = 0;
  bool converged = true;
};

// Floquet wavenumbers of a configuration; every root satisfies Im <= 0.
class FloquetWavenumbers {
 public:
  explicit FloquetWavenumbers(const PeriodicityConfig& config);

  Complex kx(int m) const;
  Complex ky(int n) const;
  Complex krho(int m) const;
  Complex kz(int m, int n) const;

 private:
  Complex k0_;
  std::array<Complex, 3> kshift_;
  Vec3 L_;
};

// |k| below this value on any visited Floquet root is a Wood anomaly.
double anomaly_threshold(const PeriodicityConfig& config);

// exp(-j k0 |r|) / (4 pi |r|). Throws DomainError at r = 0.
Complex g0(const Vec3& r, Complex k0);

// Phase-weighted free-space images with |i_a| <= half_width[a] on the
// periodic axes (non-periodic entries are ignored).
Complex pgf_image_sum(const Vec3& r, const PeriodicityConfig& config,
                      const std::array<int, 3>& half_width);

// Same sum, but an image term landing exactly on the origin is skipped
// instead of raising. Used where the self interaction is regularised.
Complex pgf_image_sum_excluding_origin(const Vec3& r,
                                       const PeriodicityConfig& config,
                                       const std::array<int, 3>& half_width,
                                       double coincidence_radius);

PgfSample pgf_spectral(const Vec3& r, const PeriodicityConfig& config,
                       const TruncationPolicy& policy);

PgfSample pgf_lattice(const Vec3& r, const PeriodicityConfig& config,
                      const TruncationPolicy& policy);

// Spectral or lattice series, chosen by the configured regime.
PgfSample pgf_total(const Vec3& r, const PeriodicityConfig& config,
                    const TruncationPolicy& policy);

// Total PGF minus the images with |i_a| <= i_d on every periodic axis.
PgfSample pgf_far(const Vec3& r, const PeriodicityConfig& config, int i_d,
                  const TruncationPolicy& policy);

// Partial sums of the regime's series after shells 0..shells-1, with no
// early termination. Shell 0 is the m = 0 term (spectral) or the closed-form
// part (lattice); shell s adds every index with max |index| = s.
std::vector<Complex> pgf_shell_partial_sums(const Vec3& r,
                                            const PeriodicityConfig& config,
                                            int shells);

// Throws NotConverged naming `where` when the sample is flagged.
const PgfSample& require_converged(const PgfSample& sample, const Vec3& where);

}  // namespace pim

#endif  // PIM_PGF_HPP_
