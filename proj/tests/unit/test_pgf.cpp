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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pim/error.hpp"
#include "pim/pgf.hpp"
#include "reference_values.hpp"
#include "test_util.hpp"

namespace pim {
namespace {

using testing::fig2_dynamic;
using testing::rel_err;

constexpr Complex kJ{0.0, 1.0};

TruncationPolicy tight() {
  TruncationPolicy p;
  p.tol = 1e-15;
  return p;
}

TEST(G0, Examples) {
  EXPECT_NEAR(g0({1.0, 0.0, 0.0}, 0.0).real(), 1.0 / (4.0 * kPi), 1e-17);
  EXPECT_NEAR(g0({0.0, 0.0, 2.0}, 0.0).real(), 1.0 / (8.0 * kPi), 1e-17);
  const Complex v = g0({1.0, 0.0, 0.0}, {-1.0, -1.0});
  const Complex expected = std::exp(Complex(-1.0, 1.0)) / (4.0 * kPi);
  EXPECT_LT(rel_err(v, expected), 1e-15);
  EXPECT_NEAR(std::abs(v), std::exp(-1.0) / (4.0 * kPi), 1e-16);
  EXPECT_THROW(g0({0.0, 0.0, 0.0}, 1.0), DomainError);
}

TEST(ImageSum, ZeroHalfWidthIsFreeSpace) {
  const auto c = fig2_dynamic(Periodicity::P3D);
  const Vec3 r{0.3, -0.2, 0.4};
  EXPECT_EQ(pgf_image_sum(r, c, {0, 0, 0}), g0(r, c.k0));
}

TEST(ImageSum, ThreeTerms) {
  const auto c = PeriodicityConfig::npsp(Periodicity::P1D, {2.0, 1.0, 1.0});
  const Vec3 r{0.0, 0.5, 0.0};
  const Complex expected = g0(r, 0.0) + g0({-2.0, 0.5, 0.0}, 0.0) +
                           g0({2.0, 0.5, 0.0}, 0.0);
  EXPECT_LT(rel_err(pgf_image_sum(r, c, {1, 0, 0}), expected), 1e-15);
}

TEST(ImageSum, PhaseWeights) {
  const double L = 1.5;
  const auto c = PeriodicityConfig::dynamic(Periodicity::P1D, {L, 1.0, 1.0},
                                            {0.7, 0.0},
                                            {Complex{1.0, -1.0}, {}, {}});
  const Vec3 r{0.2, 0.3, 0.1};
  const Complex one = pgf_image_sum(r, c, {1, 0, 0}) -
                      pgf_image_sum(r, c, {0, 0, 0}) -
                      std::exp(-kJ * Complex(1.0, -1.0) * -L) *
                          g0({0.2 + L, 0.3, 0.1}, c.k0);
  const Complex expected =
      std::exp(-kJ * Complex(1.0, -1.0) * L) * g0({0.2 - L, 0.3, 0.1}, c.k0);
  EXPECT_LT(rel_err(one, expected), 1e-13);
}

TEST(ImageSum, CoincidentImage) {
  const auto c = PeriodicityConfig::npsp(Periodicity::P2D, {1.0, 1.0, 1.0});
  EXPECT_THROW(pgf_image_sum({1.0, -1.0, 0.0}, c, {1, 1, 0}), DomainError);
  EXPECT_NO_THROW(pgf_image_sum({1.0, -1.0, 0.0}, c, {0, 0, 0}));
  const Complex skipped =
      pgf_image_sum_excluding_origin({1.0, 0.0, 0.0}, c, {1, 1, 0}, 1e-9);
  Complex expected = 0.0;
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      if (i == 1 && j == 0) continue;
      expected += g0({1.0 - i, -1.0 * j, 0.0}, 0.0);  // unit periods
    }
  }
  EXPECT_LT(rel_err(skipped, expected), 1e-14);
}

TEST(Pgf, ReferenceValues) {
  const auto k0 = Complex(-1.0, -1.0);
  const std::array<Complex, 3> ks{Complex{1.0, -1.0}, Complex{1.0, 1.0},
                                  Complex{-1.0, 1.0}};
  for (const auto& ref : testing::kPgfRefs) {
    const auto dim = static_cast<Periodicity>(ref.dim);
    const Vec3 L = ref.fig_point ? Vec3{1.0, 1.0, 1.0} : Vec3{1.0, 1.25, 0.8};
    const Vec3 r =
        ref.fig_point ? Vec3{0.5, 0.5, 0.5} : Vec3{0.37, 0.21, 0.33};
    const PeriodicityConfig c = ref.lattice
                                    ? PeriodicityConfig::npsp(dim, L)
                                    : PeriodicityConfig::dynamic(dim, L, k0, ks);
    const PgfSample s = ref.lattice ? pgf_lattice(r, c, tight())
                                    : pgf_spectral(r, c, tight());
    EXPECT_TRUE(s.converged);
    EXPECT_LT(rel_err(s.value, ref.value), 1e-12)
        << ref.dim << "D lattice=" << ref.lattice << " fig=" << ref.fig_point;
    EXPECT_EQ(pgf_total(r, c, tight()).value, s.value);
  }
}

// Spectral series against the absolutely convergent image sum
// (Im k0 = -1, real phase shifts).
void check_spectral_vs_images(Periodicity dim, int half_width, int points) {
  const Vec3 L{1.0, 1.3, 0.9};
  const auto c = PeriodicityConfig::dynamic(
      dim, L, {1.3, -1.0},
      {Complex{0.4, 0.0}, Complex{-0.7, 0.0}, Complex{0.2, 0.0}});
  std::mt19937_64 rng(5 + static_cast<int>(dim));
  const double sep = 0.2 * L.x;
  int done = 0;
  while (done < points) {
    const Vec3 r = testing::random_in(rng, {-0.5, -0.6, -0.45},
                                      {0.5, 0.6, 0.45});
    const double transverse = dim == Periodicity::P1D
                                  ? std::hypot(r.y, r.z)
                                  : std::abs(r.z);
    if (transverse < sep) continue;
    ++done;
    const Complex spectral = pgf_spectral(r, c, tight()).value;
    const Complex images =
        pgf_image_sum(r, c, {half_width, half_width, half_width});
    EXPECT_LT(rel_err(images, spectral), 1e-6) << r.x << " " << r.y << " " << r.z;
  }
}

TEST(Pgf, SpectralMatchesImageSum1D) {
  check_spectral_vs_images(Periodicity::P1D, 60, 100);
}

TEST(Pgf, SpectralMatchesImageSum2D) {
  check_spectral_vs_images(Periodicity::P2D, 60, 100);
}

TEST(Pgf, SpectralMatchesImageSum3D) {
  check_spectral_vs_images(Periodicity::P3D, 18, 10);
}

void check_quasi_periodic(const PeriodicityConfig& c, std::mt19937_64& rng) {
  const Vec3 r = testing::random_in(rng, {-0.4, -0.4, 0.15}, {0.4, 0.4, 0.45});
  for (int a = 0; a < c.periodic_axes(); ++a) {
    Vec3 shifted = r;
    shifted[a] += c.L[a];
    const Complex phase = std::exp(-kJ * c.kshift[a] * c.L[a]);
    const Complex base = pgf_total(r, c, tight()).value;
    const Complex moved = pgf_total(shifted, c, tight()).value;
    EXPECT_LT(rel_err(moved, phase * base), 1e-10)
        << to_string(c.regime) << " axis " << a;
  }
}

TEST(Pgf, QuasiPeriodicity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int dim = 1; dim <= 3; ++dim) {
    const auto d = static_cast<Periodicity>(dim);
    for (int i = 0; i < 4; ++i) {
      const Vec3 L{1.0 + 0.3 * u(rng), 1.0 + 0.3 * u(rng), 1.0 + 0.3 * u(rng)};
      const std::array<Complex, 3> ks{Complex{u(rng), -std::abs(u(rng))},
                                      Complex{u(rng), 0.0},
                                      Complex{u(rng), u(rng)}};
      check_quasi_periodic(
          PeriodicityConfig::dynamic(d, L, {1.0 + u(rng), -0.5}, ks), rng);
      check_quasi_periodic(PeriodicityConfig::static_shifted(d, L, ks), rng);
      check_quasi_periodic(PeriodicityConfig::npsp(d, L), rng);
    }
  }
}

TEST(Pgf, LatticeParity) {
  const auto c1 = PeriodicityConfig::npsp(Periodicity::P1D, {1.0, 1.0, 1.0});
  EXPECT_LT(rel_err(pgf_lattice({-0.3, 0.2, 0.1}, c1, tight()).value,
                    pgf_lattice({0.3, 0.2, 0.1}, c1, tight()).value),
            1e-13);
  const auto c2 = PeriodicityConfig::npsp(Periodicity::P2D, {1.0, 1.3, 1.0});
  EXPECT_LT(rel_err(pgf_lattice({0.3, 0.2, -0.25}, c2, tight()).value,
                    pgf_lattice({0.3, 0.2, 0.25}, c2, tight()).value),
            1e-13);
}

TEST(Pgf, WoodAnomaly) {
  const double L = 1.0;
  const double k = 2.0 * kPi / L;
  const auto c2 = PeriodicityConfig::dynamic(Periodicity::P2D, {L, L, L}, k,
                                             {Complex{}, Complex{}, Complex{}});
  EXPECT_THROW(pgf_spectral({0.1, 0.2, 0.3}, c2, {}), WoodAnomaly);
  const auto c1 = PeriodicityConfig::dynamic(Periodicity::P1D, {L, L, L}, 1.0,
                                             {Complex{1.0, 0.0}, {}, {}});
  EXPECT_THROW(pgf_spectral({0.1, 0.2, 0.3}, c1, {}), WoodAnomaly);
  // Geometric image stack in z: exp(-j (k_z00 - k_z0) L_z) = 1.
  const auto c3 = PeriodicityConfig::dynamic(
      Periodicity::P3D, {L, L, L}, 1.0,
      {Complex{}, Complex{}, Complex{1.0 - 2.0 * kPi, 0.0}});
  EXPECT_THROW(pgf_spectral({0.1, 0.2, 0.3}, c3, {}), WoodAnomaly);
  EXPECT_GT(anomaly_threshold(c3), 0.0);
}

TEST(Pgf, NotConvergedIsFlaggedNotThrown) {
  const auto c = fig2_dynamic(Periodicity::P1D);
  TruncationPolicy p;
  p.tol = 1e-15;
  p.max_terms = 2;
  const Vec3 r{0.5, 0.01, 0.0};
  const PgfSample s = pgf_spectral(r, c, p);
  EXPECT_FALSE(s.converged);
  EXPECT_TRUE(std::isfinite(s.value.real()));
  EXPECT_THROW(require_converged(s, r), NotConverged);
}

TEST(Pgf, RegimeDispatch) {
  const auto n = PeriodicityConfig::npsp(Periodicity::P1D, {1.0, 1.0, 1.0});
  EXPECT_THROW(pgf_spectral({0.1, 0.2, 0.3}, n, {}), InvalidArgument);
  EXPECT_THROW(pgf_lattice({0.1, 0.2, 0.3}, fig2_dynamic(Periodicity::P1D), {}),
               InvalidArgument);
}

TEST(Pgf, TransverseSingularity) {
  const auto n = PeriodicityConfig::npsp(Periodicity::P1D, {1.0, 1.0, 1.0});
  EXPECT_THROW(pgf_lattice({0.3, 0.0, 0.0}, n, {}), DomainError);
}

TEST(PgfFar, ZeroHalfWidth) {
  const auto c = fig2_dynamic(Periodicity::P2D);
  const Vec3 r{0.2, 0.1, 0.3};
  const Complex far = pgf_far(r, c, 0, tight()).value;
  const Complex expected = pgf_total(r, c, tight()).value - g0(r, c.k0);
  EXPECT_LT(std::abs(far - expected), 1e-14 * std::abs(expected));
}

TEST(PgfFar, SmoothThroughSubtractedImages) {
  const auto c = PeriodicityConfig::npsp(Periodicity::P3D, {1.0, 1.0, 1.0});
  const double h = 1e-3;
  double max_far = 0.0, max_total = 0.0;
  for (int i = -100; i < 100; ++i) {
    const Vec3 a{i * 5e-3, 0.02, 0.03};
    const Vec3 b{a.x + h, a.y, a.z};
    max_far = std::max(max_far, std::abs(pgf_far(b, c, 1, tight()).value -
                                         pgf_far(a, c, 1, tight()).value) /
                                    h);
    max_total = std::max(max_total, std::abs(pgf_total(b, c, tight()).value -
                                             pgf_total(a, c, tight()).value) /
                                        h);
  }
  EXPECT_LT(max_far, 1.0);
  EXPECT_GT(max_total, 20.0);
}

TEST(Floquet, BranchConsistency) {
  const auto c = fig2_dynamic(Periodicity::P3D);
  const FloquetWavenumbers w(c);
  for (int m = -40; m <= 40; ++m) {
    EXPECT_LE(w.krho(m).imag(), 0.0);
    EXPECT_EQ(w.kx(m), c.kshift[0] + 2.0 * kPi * m / c.L.x);
    for (int n = -40; n <= 40; ++n) EXPECT_LE(w.kz(m, n).imag(), 0.0);
  }
}

TEST(Floquet, UsesLyForYWavenumbers) {
  auto c = fig2_dynamic(Periodicity::P2D);
  c.L = {1.0, 2.0, 7.0};
  const FloquetWavenumbers w(c);
  EXPECT_LT(std::abs(w.ky(3) - (c.kshift[1] + 2.0 * kPi * 3.0 / 2.0)), 1e-14);
}

TEST(Truncation, TighteningNeverHurts) {
  for (int dim = 1; dim <= 3; ++dim) {
    for (bool lattice : {false, true}) {
      const auto d = static_cast<Periodicity>(dim);
      const auto c = lattice ? PeriodicityConfig::npsp(d, {1.0, 1.0, 1.0})
                             : fig2_dynamic(d);
      const Vec3 r{0.3, 0.25, 0.2};
      const Complex ref = pgf_total(r, c, tight()).value;
      double previous = 1e300;
      for (double tol : {1e-3, 1e-5, 1e-7, 1e-9, 1e-11, 1e-13}) {
        TruncationPolicy p;
        p.tol = tol;
        const double err = rel_err(pgf_total(r, c, p).value, ref);
        EXPECT_LE(err, previous + 1e-15) << dim << " " << lattice << " " << tol;
        EXPECT_LT(err, 10.0 * tol);
        previous = err;
      }
    }
  }
}

TEST(ShellPartialSums, ApproachTotal) {
  for (int dim = 1; dim <= 3; ++dim) {
    for (bool lattice : {false, true}) {
      const auto d = static_cast<Periodicity>(dim);
      const auto c = lattice ? PeriodicityConfig::npsp(d, {1.0, 1.0, 1.0})
                             : fig2_dynamic(d);
      const Vec3 r{0.5, 0.5, 0.5};
      const auto partials = pgf_shell_partial_sums(r, c, 12);
      ASSERT_EQ(partials.size(), 12u);
      EXPECT_LT(rel_err(partials.back(), pgf_total(r, c, tight()).value),
                1e-13);
    }
  }
}

}  // namespace
}  // namespace pim
