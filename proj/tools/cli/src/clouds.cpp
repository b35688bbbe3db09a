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

#include "pim_cli/clouds.hpp"

#include <cmath>
#include <random>

#include "pim/error.hpp"

namespace pim::cli {

namespace {

Vec3 random_point(std::mt19937_64& rng, const TargetBox& box) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(rng), y = u(rng), z = u(rng);
  return {x * box.D.x, y * box.D.y, z * box.D.z};
}

// Axial and angular counts with near-square cells, product >= target.
std::pair<std::size_t, std::size_t> shell_lattice(double radius, double length,
                                                  std::size_t target) {
  const double circumference = 2.0 * kPi * radius;
  auto axial = static_cast<std::size_t>(
      std::lround(std::sqrt(target * length / circumference)));
  axial = std::max<std::size_t>(axial, 1);
  const std::size_t angular = (target + axial - 1) / axial;
  return {axial, angular};
}

void add_shell(SourcePointSet& src, const CoaxSpec& s, double radius,
               double charge) {
  const auto [na, nt] = shell_lattice(radius, s.length, s.points_per_shell);
  const double q = charge / static_cast<double>(na * nt);
  for (std::size_t i = 0; i < na; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * s.length / na;
    for (std::size_t j = 0; j < nt; ++j) {
      const double t = 2.0 * kPi * (static_cast<double>(j) + 0.5) / nt;
      src.positions.push_back(
          {x, s.r2 + radius * std::cos(t), s.r2 + radius * std::sin(t)});
      src.amplitudes.emplace_back(q, 0.0);
    }
  }
}

}  // namespace

SourcePointSet random_neutral_sources(std::size_t n, const TargetBox& box,
                                      std::uint64_t seed,
                                      bool real_amplitudes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  SourcePointSet src;
  src.positions.reserve(n);
  src.amplitudes.reserve(n);
  Complex sum{};
  for (std::size_t i = 0; i < n; ++i) {
    src.positions.push_back(random_point(rng, box));
    const double re = amp(rng);
    const double im = real_amplitudes ? 0.0 : amp(rng);
    src.amplitudes.emplace_back(re, im);
    sum += src.amplitudes.back();
  }
  if (n > 0) {
    const Complex mean = sum / static_cast<double>(n);
    for (Complex& q : src.amplitudes) q -= mean;
  }
  return src;
}

ObserverPointSet random_observers(std::size_t n, const TargetBox& box,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ObserverPointSet obs;
  obs.positions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    obs.positions.push_back(random_point(rng, box));
  }
  return obs;
}

SourcePointSet coax_sources(const CoaxSpec& s) {
  if (!(s.r1 > 0.0 && s.r2 > s.r1 && s.length > 0.0) ||
      s.points_per_shell == 0) {
    throw InvalidArgument("coax: need 0 < r1 < r2, length > 0, points > 0");
  }
  SourcePointSet src;
  const double q1 = s.rho1 * 2.0 * kPi * s.r1 * s.length;
  double q2 = s.rho2 * 2.0 * kPi * s.r2 * s.length;
  // Densities that are neutral up to rounding are made exactly neutral.
  if (std::abs(q1 + q2) <= 1e-9 * std::abs(q1)) q2 = -q1;
  add_shell(src, s, s.r1, q1);
  add_shell(src, s, s.r2, q2);
  return src;
}

TargetBox coax_box(const CoaxSpec& s) {
  return TargetBox{{s.length, 2.0 * s.r2, 2.0 * s.r2}};
}

ObserverPointSet coax_axis_observers(const CoaxSpec& s, std::size_t n) {
  ObserverPointSet obs;
  for (std::size_t i = 0; i < n; ++i) {
    obs.positions.push_back(
        {(static_cast<double>(i) + 0.5) * s.length / n, s.r2, s.r2});
  }
  return obs;
}

}  // namespace pim::cli
