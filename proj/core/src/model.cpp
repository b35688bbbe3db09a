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

#include "pim/model.hpp"

#include <algorithm>
#include <sstream>

#include "pim/error.hpp"
#include "pim/grid.hpp"

namespace pim {

const char* to_string(Periodicity p) {
  switch (p) {
    case Periodicity::P1D:
      return "1D";
    case Periodicity::P2D:
      return "2D";
    case Periodicity::P3D:
      return "3D";
  }
  return "?";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Dynamic:
      return "dynamic";
    case Regime::StaticShifted:
      return "static";
    case Regime::NPSP:
      return "npsp";
  }
  return "?";
}

double PeriodicityConfig::max_period() const {
  double m = 0.0;
  for (int a = 0; a < periodic_axes(); ++a) m = std::max(m, L[a]);
  return m;
}

Complex PeriodicityConfig::image_phase(int ix, int iy, int iz) const {
  const int idx[3] = {ix, iy, iz};
  Complex arg{0.0, 0.0};
  for (int a = 0; a < periodic_axes(); ++a) {
    if (idx[a] != 0) arg += kshift[a] * (static_cast<double>(idx[a]) * L[a]);
  }
  if (arg == Complex{0.0, 0.0}) return {1.0, 0.0};
  return std::exp(Complex{0.0, -1.0} * arg);
}

PeriodicityConfig PeriodicityConfig::npsp(Periodicity dim, Vec3 L) {
  PeriodicityConfig c;
  c.dim = dim;
  c.L = L;
  c.regime = Regime::NPSP;
  return c;
}

PeriodicityConfig PeriodicityConfig::dynamic(Periodicity dim, Vec3 L,
                                             Complex k0,
                                             std::array<Complex, 3> kshift) {
  PeriodicityConfig c;
  c.dim = dim;
  c.L = L;
  c.k0 = k0;
  c.kshift = kshift;
  c.regime = Regime::Dynamic;
  return c;
}

PeriodicityConfig PeriodicityConfig::static_shifted(
    Periodicity dim, Vec3 L, std::array<Complex, 3> kshift) {
  PeriodicityConfig c;
  c.dim = dim;
  c.L = L;
  c.kshift = kshift;
  c.regime = Regime::StaticShifted;
  return c;
}

bool ValidationReport::has(IssueCode code) const {
  return std::any_of(issues.begin(), issues.end(),
                     [code](const ValidationIssue& i) { return i.code == code; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i != 0) os << "\n";
    os << issues[i].message;
  }
  return os.str();
}

namespace {

bool finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

bool finite(Complex c) {
  return std::isfinite(c.real()) && std::isfinite(c.imag());
}

// Absolute slack for containment checks, scaled to the box.
double containment_slack(const TargetBox& box) {
  return 1e-12 * std::max({1.0, box.D.x, box.D.y, box.D.z});
}

void check_points(const std::vector<Vec3>& pts, const TargetBox& box,
                  const char* what, ValidationReport& rep) {
  const double slack = containment_slack(box);
  std::size_t outside = 0;
  std::size_t first_outside = 0;
  std::size_t nonfinite = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!finite(pts[i])) {
      ++nonfinite;
      continue;
    }
    for (int a = 0; a < 3; ++a) {
      if (pts[i][a] < -slack || pts[i][a] > box.D[a] + slack) {
        if (outside == 0) first_outside = i;
        ++outside;
        break;
      }
    }
  }
  if (nonfinite != 0) {
    rep.issues.push_back({IssueCode::NonFinite,
                          std::to_string(nonfinite) + " " + what +
                              " position(s) are not finite"});
  }
  if (outside != 0) {
    const Vec3& p = pts[first_outside];
    std::ostringstream os;
    os << outside << " " << what << " point(s) outside the target box, first #"
       << first_outside << " at (" << p.x << ", " << p.y << ", " << p.z << ")";
    rep.issues.push_back({IssueCode::PointOutsideBox, os.str()});
  }
}

}  // namespace

ValidationReport validate_problem(const PeriodicityConfig& config,
                                  const TargetBox& box,
                                  const SourcePointSet& src,
                                  const ObserverPointSet& obs,
                                  const SolverParams& params) {
  ValidationReport rep;
  auto add = [&rep](IssueCode c, std::string msg) {
    rep.issues.push_back({c, std::move(msg)});
  };

  // Configuration.
  for (int a = 0; a < config.periodic_axes(); ++a) {
    if (!(config.L[a] > 0.0) || !std::isfinite(config.L[a])) {
      add(IssueCode::NonPositivePeriod,
          "period on axis " + std::to_string(a) + " must be positive and finite");
    }
  }
  bool any_shift = false;
  for (int a = 0; a < 3; ++a) {
    if (!finite(config.kshift[a])) {
      add(IssueCode::NonFinite, "kshift is not finite");
    }
    if (config.kshift[a] != Complex{0.0, 0.0}) any_shift = true;
  }
  if (!finite(config.k0)) add(IssueCode::NonFinite, "k0 is not finite");
  const bool zero_k0 = config.k0 == Complex{0.0, 0.0};
  switch (config.regime) {
    case Regime::NPSP:
      if (!zero_k0 || any_shift) {
        add(IssueCode::RegimeMismatch,
            "regime mismatch: npsp requires k0 = 0 and kshift = 0");
      }
      break;
    case Regime::StaticShifted:
      if (!zero_k0 || !any_shift) {
        add(IssueCode::RegimeMismatch,
            "regime mismatch: static-shifted requires k0 = 0 and a nonzero "
            "kshift");
      }
      break;
    case Regime::Dynamic:
      if (zero_k0) {
        add(IssueCode::RegimeMismatch,
            "regime mismatch: dynamic requires k0 != 0");
      }
      break;
  }

  // Target box.
  for (int a = 0; a < 3; ++a) {
    if (!(box.D[a] >= 0.0) || !std::isfinite(box.D[a])) {
      add(IssueCode::NegativeExtent,
          "target box extent on axis " + std::to_string(a) +
              " must be non-negative and finite");
    }
  }
  for (int a = 0; a < config.periodic_axes(); ++a) {
    if (config.L[a] > 0.0 && box.D[a] > config.L[a]) {
      std::ostringstream os;
      os << "target box exceeds period on axis " << a << ": D = " << box.D[a]
         << " > L = " << config.L[a];
      add(IssueCode::BoxExceedsPeriod, os.str());
    }
  }

  // Point sets.
  if (src.positions.empty()) add(IssueCode::EmptySources, "no source points");
  if (obs.positions.empty()) {
    add(IssueCode::EmptyObservers, "no observer points");
  }
  if (src.positions.size() != src.amplitudes.size()) {
    add(IssueCode::SizeMismatch,
        "source positions and amplitudes differ in length (" +
            std::to_string(src.positions.size()) + " vs " +
            std::to_string(src.amplitudes.size()) + ")");
  }
  check_points(src.positions, box, "source", rep);
  check_points(obs.positions, box, "observer", rep);
  Complex total{0.0, 0.0};
  double total_abs = 0.0;
  bool amps_finite = true;
  for (const Complex& q : src.amplitudes) {
    if (!finite(q)) amps_finite = false;
    total += q;
    total_abs += std::abs(q);
  }
  if (!amps_finite) add(IssueCode::NonFinite, "source amplitudes not finite");
  if (config.regime == Regime::NPSP && amps_finite &&
      std::abs(total) > params.neutrality_tol * total_abs) {
    std::ostringstream os;
    os << "neutrality violated: |sum q| = " << std::abs(total)
       << " exceeds " << params.neutrality_tol << " * sum |q| = "
       << params.neutrality_tol * total_abs;
    add(IssueCode::NeutralityViolated, os.str());
  }

  // Solver parameters.
  if (params.i_d < 1) {
    add(IssueCode::InvalidParams, "i_d must be >= 1 when the far zone is used");
  }
  if (params.far_order < 0 || params.near_order < 0) {
    add(IssueCode::InvalidParams, "interpolation orders must be >= 0");
  }
  if (params.far_order > kMaxInterpOrder ||
      params.near_order > kMaxInterpOrder) {
    add(IssueCode::InvalidParams, "interpolation orders must be <= " +
                                      std::to_string(kMaxInterpOrder));
  }
  for (int a = 0; a < 3; ++a) {
    if (params.far_grid[a] < 1) {
      add(IssueCode::InvalidParams, "far_grid entries must be positive");
      break;
    }
  }
  for (int a = 0; a < 3; ++a) {
    // Axes with zero extent collapse to one node and need no stencil.
    if (box.D[a] > 0.0 && params.far_order + 1 > params.far_grid[a]) {
      add(IssueCode::InvalidParams,
          "far_order + 1 exceeds far_grid on axis " + std::to_string(a));
    }
  }
  if (params.near_grid) {
    for (int a = 0; a < 3; ++a) {
      const int n = (*params.near_grid)[a];
      if (box.D[a] > 0.0 && (n < 2 || params.near_order + 1 > n)) {
        add(IssueCode::InvalidParams,
            "near_grid on axis " + std::to_string(a) +
                " must be >= max(2, near_order + 1)");
      }
    }
  }
  if (!(params.series_tol > 0.0) || params.series_tol >= 1.0) {
    add(IssueCode::InvalidParams, "series_tol must lie in (0, 1)");
  }
  if (params.er_range_boxes < 1) {
    add(IssueCode::InvalidParams, "er_range_boxes must be >= 1");
  }
  if (!(params.neutrality_tol >= 0.0)) {
    add(IssueCode::InvalidParams, "neutrality_tol must be non-negative");
  }

  // Step-4 wrap uses one extra image per axis, so the correction range must
  // not reach around the whole period.
  if (rep.ok()) {
    const GridDims n = resolve_near_grid(
        params, box, std::max(src.size(), obs.size()), config);
    double hmax = 0.0;
    for (int a = 0; a < 3; ++a) {
      if (n[a] > 1) hmax = std::max(hmax, box.D[a] / (n[a] - 1));
    }
    const double reach = params.er_range_boxes * hmax;
    for (int a = 0; a < config.periodic_axes(); ++a) {
      if (!(2.0 * reach < config.L[a])) {
        std::ostringstream os;
        os << "correction range too large: 2 * " << reach
           << " >= L on axis " << a;
        add(IssueCode::CorrectionRangeTooLarge, os.str());
      }
    }
  }
  return rep;
}

void require_valid(const PeriodicityConfig& config, const TargetBox& box,
                   const SourcePointSet& src, const ObserverPointSet& obs,
                   const SolverParams& params) {
  const ValidationReport rep =
      validate_problem(config, box, src, obs, params);
  if (!rep.ok()) throw InvalidArgument(rep.to_string());
}

}  // namespace pim
