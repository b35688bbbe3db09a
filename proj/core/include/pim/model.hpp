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

// Domain types shared by every stage of the periodic summation pipeline.

#ifndef PIM_MODEL_HPP_
#define PIM_MODEL_HPP_

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pim {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int axis) const {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }
  constexpr double& operator[](int axis) {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(double s, const Vec3& v) {
    return {s * v.x, s * v.y, s * v.z};
  }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

// Number of periodic directions. Periodic axes are x; x,y; x,y,z.
enum class Periodicity { P1D = 1, P2D = 2, P3D = 3 };

enum class Regime {
  Dynamic,        // k0 != 0 (Helmholtz kernel)
  StaticShifted,  // k0 == 0, some phase shift on a periodic axis
  NPSP            // k0 == 0 and no phase shift; neutral sources only
};

const char* to_string(Periodicity p);
const char* to_string(Regime r);

struct PeriodicityConfig {
  Periodicity dim = Periodicity::P1D;
  Vec3 L{1.0, 1.0, 1.0};
  Complex k0{0.0, 0.0};
  std::array<Complex, 3> kshift{};
  Regime regime = Regime::NPSP;

  int periodic_axes() const { return static_cast<int>(dim); }
  bool is_periodic(int axis) const { return axis < periodic_axes(); }

  // Largest period over the periodic axes.
  double max_period() const;

  // Phase factor exp(-j * sum_a k_a0 * i_a * L_a) attached to image (ix,iy,iz).
  Complex image_phase(int ix, int iy, int iz) const;

  static PeriodicityConfig npsp(Periodicity dim, Vec3 L);
  static PeriodicityConfig dynamic(Periodicity dim, Vec3 L, Complex k0,
                                   std::array<Complex, 3> kshift);
  static PeriodicityConfig static_shifted(Periodicity dim, Vec3 L,
                                          std::array<Complex, 3> kshift);
};

// Extent of the source/observer cloud; points live in [0,Dx]x[0,Dy]x[0,Dz].
struct TargetBox {
  Vec3 D{1.0, 1.0, 1.0};
};

struct SourcePointSet {
  std::vector<Vec3> positions;
  std::vector<Complex> amplitudes;

  std::size_t size() const { return positions.size(); }
};

struct ObserverPointSet {
  std::vector<Vec3> positions;

  std::size_t size() const { return positions.size(); }
};

struct PotentialField {
  std::vector<Complex> values;
};

using GridDims = std::array<int, 3>;

// How step-4 precorrection treats the periodic images of a nearby pair.
enum class NearCorrection {
  // Only the near-singular image of each (box, image offset) neighbor is
  // replaced by the direct kernel; the remaining images stay grid-mediated.
  SingleImage,
  // Every image of G_near is replaced for each pair inside the correction
  // region, so pair contributions equal the direct kernel exactly.
  FullImage
};

struct SolverParams {
  int i_d = 1;
  int far_order = 3;
  GridDims far_grid{10, 10, 10};
  int near_order = 2;
  std::optional<GridDims> near_grid;  // empty means Auto
  double series_tol = 1e-10;
  int er_range_boxes = 1;
  double neutrality_tol = 1e-12;  // relative to sum |q_n|
  NearCorrection near_correction = NearCorrection::SingleImage;
};

enum class IssueCode {
  NonPositivePeriod,
  RegimeMismatch,
  NegativeExtent,
  BoxExceedsPeriod,
  EmptySources,
  EmptyObservers,
  SizeMismatch,
  NonFinite,
  PointOutsideBox,
  NeutralityViolated,
  InvalidParams,
  CorrectionRangeTooLarge,
};

struct ValidationIssue {
  IssueCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has(IssueCode code) const;
  std::string to_string() const;
};

// Checks every invariant of the problem. An empty report means the plan
// builders will not reject it on precondition grounds.
ValidationReport validate_problem(const PeriodicityConfig& config,
                                  const TargetBox& box,
                                  const SourcePointSet& src,
                                  const ObserverPointSet& obs,
                                  const SolverParams& params);

// Throws InvalidArgument carrying the report text when validation fails.
void require_valid(const PeriodicityConfig& config, const TargetBox& box,
                   const SourcePointSet& src, const ObserverPointSet& obs,
                   const SolverParams& params);

}  // namespace pim

#endif  // PIM_MODEL_HPP_
