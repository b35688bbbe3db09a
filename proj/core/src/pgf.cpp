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

#include "pim/pgf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pim/error.hpp"
#include "pim/special_functions.hpp"

namespace pim {

namespace {

constexpr Complex kJ{0.0, 1.0};

std::string describe(const Vec3& r) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << r.x << ", " << r.y << ", " << r.z << ")";
  return os.str();
}

struct ShellResult {
  Complex value{0.0, 0.0};
  double bound = 0.0;  // magnitude bound used by the stop rule
  long terms = 0;
};

// Drives a shell-by-shell series. With fixed_shells > 0 every shell is
// summed and recorded; otherwise the consecutive-small rule applies.
template <typename ShellFn>
PgfSample run_shells(ShellFn&& shell, const TruncationPolicy& policy,
                     int fixed_shells, std::vector<Complex>* partials) {
  PgfSample out;
  Complex sum{0.0, 0.0};
  int small = 0;
  for (int s = 0;; ++s) {
    const ShellResult r = shell(s);
    sum += r.value;
    out.terms_used += r.terms;
    if (partials != nullptr) partials->push_back(sum);
    if (fixed_shells > 0) {
      if (s + 1 >= fixed_shells) break;
      continue;
    }
    if (s > 0) {
      small = r.bound <= policy.tol * std::abs(sum) ? small + 1 : 0;
      if (small >= policy.consecutive_small) break;
    }
    if (out.terms_used >= policy.max_terms) {
      out.converged = false;
      break;
    }
  }
  out.value = sum;
  return out;
}

// Visits the 8s indices (or the single origin) of square ring s.
template <typename Fn>
void for_each_ring_index(int s, Fn&& fn) {
  if (s == 0) {
    fn(0, 0);
    return;
  }
  for (int m = -s; m <= s; ++m) {
    fn(m, -s);
    fn(m, s);
  }
  for (int n = -s + 1; n <= s - 1; ++n) {
    fn(-s, n);
    fn(s, n);
  }
}

// Nearest-multiple reduction: value = reduced + shift * period.
double reduce_periodic(double value, double period, long* shift) {
  const double k = std::nearbyint(value / period);
  *shift = static_cast<long>(k);
  return value - k * period;
}

void check_anomaly(Complex k, double threshold, const char* what, int m,
                   int n) {
  if (std::abs(k) < threshold) {
    std::ostringstream os;
    os << "Rayleigh-Wood anomaly: |" << what << "(" << m << "," << n
       << ")| = " << std::abs(k) << " below threshold " << threshold;
    throw WoodAnomaly(os.str());
  }
}

// ---------------------------------------------------------------------------
// Spectral (Floquet) series.

PgfSample spectral_series(const Vec3& r_in, const PeriodicityConfig& cfg,
                          const TruncationPolicy& policy, int fixed_shells,
                          std::vector<Complex>* partials) {
  const FloquetWavenumbers k(cfg);
  const double threshold = anomaly_threshold(cfg);
  const Vec3 L = cfg.L;

  switch (cfg.dim) {
    case Periodicity::P1D: {
      const double rho = std::hypot(r_in.y, r_in.z);
      if (rho == 0.0) {
        throw DomainError("1D spectral PGF needs sqrt(y^2+z^2) > 0 at " +
                          describe(r_in));
      }
      const Complex prefactor = 1.0 / (4.0 * kJ * L.x);
      auto term = [&](int m, ShellResult& acc) {
        const Complex krho = k.krho(m);
        check_anomaly(krho, threshold, "k_rho", m, 0);
        const Complex t = prefactor * std::exp(-kJ * k.kx(m) * r_in.x) *
                          special::hankel2_0(krho * rho);
        acc.value += t;
        acc.bound += std::abs(t);
        ++acc.terms;
      };
      return run_shells(
          [&](int s) {
            ShellResult acc;
            term(s, acc);
            if (s > 0) term(-s, acc);
            return acc;
          },
          policy, fixed_shells, partials);
    }
    case Periodicity::P2D: {
      const Complex prefactor = 1.0 / (2.0 * kJ * L.x * L.y);
      const double abs_z = std::abs(r_in.z);
      return run_shells(
          [&](int s) {
            ShellResult acc;
            for_each_ring_index(s, [&](int m, int n) {
              const Complex kz = k.kz(m, n);
              check_anomaly(kz, threshold, "k_z", m, n);
              const Complex t =
                  prefactor *
                  std::exp(-kJ * (k.kx(m) * r_in.x + k.ky(n) * r_in.y +
                                  kz * abs_z)) /
                  kz;
              acc.value += t;
              acc.bound += std::abs(t);
              ++acc.terms;
            });
            return acc;
          },
          policy, fixed_shells, partials);
    }
    case Periodicity::P3D: {
      long shift = 0;
      const double z = reduce_periodic(r_in.z, L.z, &shift);
      const Complex kz0 = cfg.kshift[2];
      const Complex phase =
          std::exp(-kJ * kz0 * (static_cast<double>(shift) * L.z));
      const Complex prefactor = 1.0 / (2.0 * kJ * L.x * L.y);
      const double abs_z = std::abs(z);
      const double stack_threshold = threshold * L.z;
      PgfSample sample = run_shells(
          [&](int s) {
            ShellResult acc;
            for_each_ring_index(s, [&](int m, int n) {
              const Complex kz = k.kz(m, n);
              check_anomaly(kz, threshold, "k_z", m, n);
              const Complex down = std::exp(-kJ * (kz - kz0) * L.z);
              const Complex up = std::exp(-kJ * (kz + kz0) * L.z);
              check_anomaly(1.0 - down, stack_threshold, "1-exp(-j(k_z-k_z0)L_z)",
                            m, n);
              check_anomaly(1.0 - up, stack_threshold, "1-exp(-j(k_z+k_z0)L_z)",
                            m, n);
              const Complex stack = std::exp(-kJ * kz * abs_z) +
                                    down * std::exp(-kJ * kz * z) / (1.0 - down) +
                                    up * std::exp(kJ * kz * z) / (1.0 - up);
              const Complex t =
                  prefactor *
                  std::exp(-kJ * (k.kx(m) * r_in.x + k.ky(n) * r_in.y)) / kz *
                  stack;
              acc.value += t;
              acc.bound += std::abs(t);
              ++acc.terms;
            });
            return acc;
          },
          policy, fixed_shells, partials);
      sample.value *= phase;
      if (partials != nullptr) {
        for (Complex& p : *partials) p *= phase;
      }
      return sample;
    }
  }
  throw InvalidArgument("unknown periodicity");
}

// ---------------------------------------------------------------------------
// Lattice (no-phase static) series.

// ln(1 - 2 e^{-a} cos b + e^{-2a}) for a >= 0, written to avoid cancellation.
double log_trig_term(double a, double b, const Vec3& where) {
  if (a > 1.0) {
    const double e = std::exp(-a);
    return std::log1p(e * e - 2.0 * e * std::cos(b));
  }
  const double em1 = -std::expm1(-a);
  const double s = std::sin(0.5 * b);
  const double arg = em1 * em1 + 4.0 * std::exp(-a) * s * s;
  if (!(arg > 0.0)) {
    throw DomainError("lattice PGF log argument vanishes at " +
                      describe(where));
  }
  return std::log(arg);
}

// Extra K0 arguments kept beyond the smallest one in a layer.
double layer_cutoff(const TruncationPolicy& policy) {
  return std::log(1.0 / policy.tol) + 8.0;
}

PgfSample lattice_series(const Vec3& r, const PeriodicityConfig& cfg,
                         const TruncationPolicy& policy, int fixed_shells,
                         std::vector<Complex>* partials) {
  const Vec3 L = cfg.L;
  const double cutoff = layer_cutoff(policy);
  const double inv_pi_lx = 1.0 / (kPi * L.x);

  switch (cfg.dim) {
    case Periodicity::P1D: {
      const double rho = std::hypot(r.y, r.z);
      if (rho == 0.0) {
        throw DomainError("1D lattice PGF needs sqrt(y^2+z^2) > 0 at " +
                          describe(r));
      }
      return run_shells(
          [&](int s) {
            ShellResult acc;
            acc.terms = 1;
            if (s == 0) {
              acc.value = -std::log(rho) / (2.0 * kPi * L.x);
              acc.bound = std::abs(acc.value);
              return acc;
            }
            const double k0v = special::bessel_k0(2.0 * kPi * s * rho / L.x);
            acc.value = inv_pi_lx * k0v * std::cos(2.0 * kPi * s * r.x / L.x);
            acc.bound = inv_pi_lx * k0v;
            return acc;
          },
          policy, fixed_shells, partials);
    }
    case Periodicity::P2D: {
      long ny = 0;
      const double y_red = reduce_periodic(r.y, L.y, &ny);
      const double abs_z = std::abs(r.z);
      const double rho_min = std::hypot(y_red, r.z);
      if (rho_min == 0.0) {
        throw DomainError("2D lattice PGF is singular at " + describe(r));
      }
      return run_shells(
          [&](int s) {
            ShellResult acc;
            if (s == 0) {
              const double a = 2.0 * kPi * abs_z / L.y;
              const double b = 2.0 * kPi * r.y / L.y;
              acc.value = -abs_z / (2.0 * L.x * L.y) -
                          log_trig_term(a, b, r) / (4.0 * kPi * L.x);
              acc.bound = std::abs(acc.value);
              acc.terms = 1;
              return acc;
            }
            const double c = 2.0 * kPi * s / L.x;
            const double reach = (c * rho_min + cutoff) / c;
            const double cos_x = std::cos(c * r.x);
            double layer = 0.0;
            const long n_span =
                static_cast<long>(std::ceil(reach / L.y)) + 1;
            for (long n = -n_span; n <= n_span; ++n) {
              const double dy = static_cast<double>(n) * L.y + y_red;
              const double dist = std::hypot(dy, r.z);
              if (dist > reach) continue;
              layer += special::bessel_k0(c * dist);
              ++acc.terms;
            }
            acc.value = inv_pi_lx * layer * cos_x;
            acc.bound = inv_pi_lx * layer;
            return acc;
          },
          policy, fixed_shells, partials);
    }
    case Periodicity::P3D: {
      long ny = 0;
      long nz = 0;
      const double y_red = reduce_periodic(r.y, L.y, &ny);
      const double z_red = reduce_periodic(r.z, L.z, &nz);
      const double rho_min = std::hypot(y_red, z_red);
      if (rho_min == 0.0) {
        throw DomainError("3D lattice PGF is singular at " + describe(r));
      }
      const double b = 2.0 * kPi * y_red / L.y;
      return run_shells(
          [&](int s) {
            ShellResult acc;
            if (s == 0) {
              double value = (z_red * z_red - std::abs(z_red) * L.z) /
                             (2.0 * L.x * L.y * L.z);
              // Sum over the z-stack of line-array log terms, nearest first.
              double log_sum = 0.0;
              const double log_reach = (cutoff + 2.0) * L.y / (2.0 * kPi);
              const long k_span =
                  static_cast<long>(std::ceil(log_reach / L.z)) + 1;
              for (long kk = -k_span; kk <= k_span; ++kk) {
                const double dz = std::abs(static_cast<double>(kk) * L.z + z_red);
                if (dz > log_reach) continue;
                log_sum += log_trig_term(2.0 * kPi * dz / L.y, b, r);
                ++acc.terms;
              }
              value -= log_sum / (4.0 * kPi * L.x);
              acc.value = value;
              acc.bound = std::abs(value);
              return acc;
            }
            const double c = 2.0 * kPi * s / L.x;
            const double reach = (c * rho_min + cutoff) / c;
            const double cos_x = std::cos(c * r.x);
            double layer = 0.0;
            const long k_span = static_cast<long>(std::ceil(reach / L.z)) + 1;
            for (long kk = -k_span; kk <= k_span; ++kk) {
              const double dz = static_cast<double>(kk) * L.z + z_red;
              if (std::abs(dz) > reach) continue;
              const double y_reach = std::sqrt(reach * reach - dz * dz);
              const long n_lo =
                  static_cast<long>(std::ceil((-y_reach - y_red) / L.y));
              const long n_hi =
                  static_cast<long>(std::floor((y_reach - y_red) / L.y));
              for (long n = n_lo; n <= n_hi; ++n) {
                const double dy = static_cast<double>(n) * L.y + y_red;
                layer += special::bessel_k0(c * std::hypot(dy, dz));
                ++acc.terms;
              }
            }
            acc.value = inv_pi_lx * layer * cos_x;
            acc.bound = inv_pi_lx * layer;
            return acc;
          },
          policy, fixed_shells, partials);
    }
  }
  throw InvalidArgument("unknown periodicity");
}

}  // namespace

// ---------------------------------------------------------------------------

FloquetWavenumbers::FloquetWavenumbers(const PeriodicityConfig& config)
    : k0_(config.k0), kshift_(config.kshift), L_(config.L) {}

Complex FloquetWavenumbers::kx(int m) const {
  return kshift_[0] + 2.0 * kPi * m / L_.x;
}

Complex FloquetWavenumbers::ky(int n) const {
  return kshift_[1] + 2.0 * kPi * n / L_.y;
}

Complex FloquetWavenumbers::krho(int m) const {
  const Complex kxm = kx(m);
  return special::sqrt_nonpos_imag(k0_ * k0_ - kxm * kxm);
}

Complex FloquetWavenumbers::kz(int m, int n) const {
  const Complex kxm = kx(m);
  const Complex kyn = ky(n);
  return special::sqrt_nonpos_imag(k0_ * k0_ - kxm * kxm - kyn * kyn);
}

double anomaly_threshold(const PeriodicityConfig& config) {
  return 1e-8 * 2.0 * kPi / config.max_period();
}

Complex g0(const Vec3& r, Complex k0) {
  const double d = r.norm();
  if (d == 0.0) throw DomainError("free-space Green's function at r = 0");
  return std::exp(-kJ * k0 * d) / (4.0 * kPi * d);
}

Complex pgf_image_sum(const Vec3& r, const PeriodicityConfig& config,
                      const std::array<int, 3>& half_width) {
  const int hx = config.is_periodic(0) ? half_width[0] : 0;
  const int hy = config.is_periodic(1) ? half_width[1] : 0;
  const int hz = config.is_periodic(2) ? half_width[2] : 0;
  Complex sum{0.0, 0.0};
  for (int ix = -hx; ix <= hx; ++ix) {
    for (int iy = -hy; iy <= hy; ++iy) {
      for (int iz = -hz; iz <= hz; ++iz) {
        const Vec3 d{r.x - ix * config.L.x, r.y - iy * config.L.y,
                     r.z - iz * config.L.z};
        if (d.norm() == 0.0) {
          throw DomainError("image (" + std::to_string(ix) + "," +
                            std::to_string(iy) + "," + std::to_string(iz) +
                            ") coincides with the observer at " + describe(r));
        }
        sum += config.image_phase(ix, iy, iz) * g0(d, config.k0);
      }
    }
  }
  return sum;
}

Complex pgf_image_sum_excluding_origin(const Vec3& r,
                                       const PeriodicityConfig& config,
                                       const std::array<int, 3>& half_width,
                                       double coincidence_radius) {
  const int hx = config.is_periodic(0) ? half_width[0] : 0;
  const int hy = config.is_periodic(1) ? half_width[1] : 0;
  const int hz = config.is_periodic(2) ? half_width[2] : 0;
  Complex sum{0.0, 0.0};
  for (int ix = -hx; ix <= hx; ++ix) {
    for (int iy = -hy; iy <= hy; ++iy) {
      for (int iz = -hz; iz <= hz; ++iz) {
        const Vec3 d{r.x - ix * config.L.x, r.y - iy * config.L.y,
                     r.z - iz * config.L.z};
        if (d.norm() <= coincidence_radius) continue;
        sum += config.image_phase(ix, iy, iz) * g0(d, config.k0);
      }
    }
  }
  return sum;
}

PgfSample pgf_spectral(const Vec3& r, const PeriodicityConfig& config,
                       const TruncationPolicy& policy) {
  if (config.regime == Regime::NPSP) {
    throw InvalidArgument("spectral PGF is undefined in the NPSP regime");
  }
  return spectral_series(r, config, policy, 0, nullptr);
}

PgfSample pgf_lattice(const Vec3& r, const PeriodicityConfig& config,
                      const TruncationPolicy& policy) {
  if (config.regime != Regime::NPSP) {
    throw InvalidArgument("lattice PGF applies to the NPSP regime only");
  }
  return lattice_series(r, config, policy, 0, nullptr);
}

PgfSample pgf_total(const Vec3& r, const PeriodicityConfig& config,
                    const TruncationPolicy& policy) {
  return config.regime == Regime::NPSP ? pgf_lattice(r, config, policy)
                                       : pgf_spectral(r, config, policy);
}

PgfSample pgf_far(const Vec3& r, const PeriodicityConfig& config, int i_d,
                  const TruncationPolicy& policy) {
  PgfSample total = pgf_total(r, config, policy);
  total.value -= pgf_image_sum(r, config, {i_d, i_d, i_d});
  return total;
}

std::vector<Complex> pgf_shell_partial_sums(const Vec3& r,
                                            const PeriodicityConfig& config,
                                            int shells) {
  std::vector<Complex> partials;
  if (shells <= 0) return partials;
  partials.reserve(static_cast<std::size_t>(shells));
  const TruncationPolicy policy;
  if (config.regime == Regime::NPSP) {
    lattice_series(r, config, policy, shells, &partials);
  } else {
    spectral_series(r, config, policy, shells, &partials);
  }
  return partials;
}

const PgfSample& require_converged(const PgfSample& sample, const Vec3& where) {
  if (!sample.converged) {
    throw NotConverged("PGF series hit the term cap (" +
                       std::to_string(sample.terms_used) + " terms) at " +
                       describe(where));
  }
  return sample;
}

}  // namespace pim
