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

#include "pim/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pim/error.hpp"

namespace pim::special {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double magnitude(double v) { return std::abs(v); }
double magnitude(const Complex& v) { return std::abs(v); }

// K0(z) = -(ln(z/2) + gamma) I0(z) + sum_k (z^2/4)^k / (k!)^2 H_k
template <typename T>
T k0_series_impl(T z) {
  const T quarter_z2 = z * z / 4.0;
  T term = 1.0;  // (z^2/4)^k / (k!)^2
  T i0 = 1.0;
  T tail = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= quarter_z2 / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    tail += term * harmonic;
    if (magnitude(term) * harmonic < kEps * 0.25 * magnitude(tail) &&
        magnitude(term) < kEps * 0.25 * magnitude(i0)) {
      break;
    }
  }
  return -(std::log(z / 2.0) + kEulerGamma) * i0 + tail;
}

// Steed's method (Temme's CF2) specialised to order zero.
template <typename T>
T k0_cf_impl(T z) {
  T b = 2.0 * (1.0 + z);
  T d = 1.0 / b;
  T delh = d;
  T h = d;
  T q1 = 0.0;
  T q2 = 1.0;
  const double a1 = 0.25;
  T q = a1;
  T c = a1;
  T a = -a1;
  T s = 1.0 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / static_cast<double>(i);
    const T qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const T dels = q * delh;
    s += dels;
    if (magnitude(dels) < kEps * 0.5 * magnitude(s)) {
      return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
    }
  }
  throw NotConverged("K0 continued fraction did not converge");
}

// K0(z) ~ sqrt(pi/2z) e^-z sum_k a_k / z^k, a_k = (-1)^k prod (2i-1)^2 / (k! 8^k)
template <typename T>
T k0_asymptotic_impl(T z) {
  T sum = 1.0;
  T term = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -odd * odd / (8.0 * k) / z;
    const double m = magnitude(term);
    if (m > previous) break;  // series has started to diverge
    sum += term;
    previous = m;
    if (m < kEps * 0.25 * magnitude(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum;
}

template <typename T>
T k0_dispatch(T z) {
  const double r = magnitude(z);
  if (r <= kK0SeriesRadius) return k0_series_impl(z);
  if (r < kK0AsymptoticRadius) return k0_cf_impl(z);
  return k0_asymptotic_impl(z);
}

}  // namespace

Complex sqrt_nonpos_imag(Complex z) {
  // The principal root has Re(w) >= 0; flipping it when Im(w) > 0 gives
  // Im(w) <= 0 and leaves real roots non-negative.
  Complex w = std::sqrt(z);
  if (w.imag() > 0.0) w = -w;
  return w;
}

namespace detail {

Complex k0_series(Complex z) { return k0_series_impl(z); }
Complex k0_continued_fraction(Complex z) { return k0_cf_impl(z); }
Complex k0_asymptotic(Complex z) { return k0_asymptotic_impl(z); }
double k0_series(double x) { return k0_series_impl(x); }
double k0_continued_fraction(double x) { return k0_cf_impl(x); }
double k0_asymptotic(double x) { return k0_asymptotic_impl(x); }

Complex k0_right_half(Complex z) {
  if (z == Complex(0.0, 0.0) || z.real() < 0.0) {
    throw DomainError("K0 evaluated outside the closed right half-plane");
  }
  return k0_dispatch(z);
}

Complex hankel2_0_series(Complex z) {
  // J0 = sum (-z^2/4)^k/(k!)^2,
  // Y0 = (2/pi)(ln(z/2)+gamma) J0 - (2/pi) sum (-1)^k H_k (z^2/4)^k/(k!)^2
  const Complex minus_quarter_z2 = -z * z / 4.0;
  Complex term = 1.0;
  Complex j0 = 1.0;
  Complex tail = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 400; ++k) {
    term *= minus_quarter_z2 / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    j0 += term;
    tail += term * harmonic;
    if (std::abs(term) * harmonic < kEps * 0.25 * std::abs(tail) &&
        std::abs(term) < kEps * 0.25 * std::abs(j0)) {
      break;
    }
  }
  // (-1)^k (z^2/4)^k == (-z^2/4)^k, so tail already carries the sign.
  const Complex y0 =
      (2.0 / kPi) * ((std::log(z / 2.0) + kEulerGamma) * j0 - tail);
  return j0 - Complex(0.0, 1.0) * y0;
}

Complex hankel2_0_asymptotic(Complex z) {
  // H0^(2)(z) ~ sqrt(2/(pi z)) e^{-j(z - pi/4)} sum_k (-j)^k a_k / z^k with
  // the same signed a_k as the K0 expansion.
  const Complex minus_j(0.0, -1.0);
  const Complex plus_j(0.0, 1.0);
  Complex sum = 1.0;
  Complex term = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= plus_j * (odd * odd / (8.0 * k)) / z;
    const double m = std::abs(term);
    if (m > previous) break;
    sum += term;
    previous = m;
    if (m < kEps * 0.25 * std::abs(sum)) break;
  }
  return std::sqrt(2.0 / (kPi * z)) * std::exp(minus_j * (z - kPi / 4.0)) *
         sum;
}

}  // namespace detail

Complex hankel2_0(Complex z) {
  if (z == Complex(0.0, 0.0)) {
    throw DomainError("H0^(2) has a logarithmic singularity at z = 0");
  }
  // On Im(z) <= 0 (excluding the negative real axis, which belongs to the
  // upper side of the principal cut) use H0^(2)(z) = (2j/pi) K0(jz).
  const bool on_cut = z.imag() == 0.0 && z.real() < 0.0;
  if (z.imag() <= 0.0 && !on_cut) {
    const Complex w(-z.imag(), z.real());  // j * z
    return Complex(0.0, 2.0 / kPi) * detail::k0_right_half(w);
  }
  if (std::abs(z) <= 12.0) return detail::hankel2_0_series(z);
  return detail::hankel2_0_asymptotic(z);
}

Complex bessel_k0(Complex z) {
  if (!(z.real() > 0.0)) {
    throw DomainError("K0 requires Re(z) > 0, got " + std::to_string(z.real()));
  }
  return k0_dispatch(z);
}

double bessel_k0(double x) {
  if (!(x > 0.0)) {
    throw DomainError("K0 requires x > 0, got " + std::to_string(x));
  }
  return k0_dispatch(x);
}

}  // namespace pim::special
