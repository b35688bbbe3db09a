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

// Zeroth-order Hankel (second kind) and modified Bessel (second kind)
// functions of complex argument, plus the branch-disciplined square root used
// for every Floquet wavenumber.

#ifndef PIM_SPECIAL_FUNCTIONS_HPP_
#define PIM_SPECIAL_FUNCTIONS_HPP_

#include <complex>

namespace pim::special {

using Complex = std::complex<double>;

// Radii at which K0 switches from the ascending series to Steed's continued
// fraction, and from the continued fraction to the large-argument expansion.
inline constexpr double kK0SeriesRadius = 2.0;
inline constexpr double kK0AsymptoticRadius = 20.0;

// Square root with Im(w) <= 0; on the real-root boundary Re(w) >= 0.
Complex sqrt_nonpos_imag(Complex z);

// H0^(2)(z) = J0(z) - j Y0(z) on the principal branch (cut along the
// negative real axis). Accurate to ~1e-13 relative on the closed lower
// half-plane, which holds every argument k_rho * rho produced by the
// spectral series. The open upper half-plane is supported at reduced
// accuracy (see README). Throws DomainError at z = 0.
Complex hankel2_0(Complex z);

// K0(z) for Re(z) > 0. Throws DomainError otherwise.
Complex bessel_k0(Complex z);
double bessel_k0(double x);

namespace detail {

// The three K0 evaluators, valid on the closed right half-plane minus the
// origin. Exposed so the crossover continuity can be tested directly.
Complex k0_series(Complex z);
Complex k0_continued_fraction(Complex z);
Complex k0_asymptotic(Complex z);
double k0_series(double x);
double k0_continued_fraction(double x);
double k0_asymptotic(double x);

// K0 on Re(z) >= 0, z != 0, with the radius dispatch above.
Complex k0_right_half(Complex z);

// Ascending series for J0 - j Y0 and the Hankel large-argument expansion;
// used only off the lower half-plane.
Complex hankel2_0_series(Complex z);
Complex hankel2_0_asymptotic(Complex z);

}  // namespace detail

}  // namespace pim::special

#endif  // PIM_SPECIAL_FUNCTIONS_HPP_
