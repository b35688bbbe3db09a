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

// Internal helpers for hot loops. std::complex multiplication follows the
// Annex G rules and does not vectorise; these use plain real arithmetic.

#ifndef PIM_SRC_KERNELS_HPP_
#define PIM_SRC_KERNELS_HPP_

#include <complex>

namespace pim::detail {

struct Acc {
  double re = 0.0;
  double im = 0.0;

  void mac(const std::complex<double>& a, const std::complex<double>& b) {
    re += a.real() * b.real() - a.imag() * b.imag();
    im += a.real() * b.imag() + a.imag() * b.real();
  }
  void mac(double w, const std::complex<double>& b) {
    re += w * b.real();
    im += w * b.imag();
  }
  std::complex<double> value() const { return {re, im}; }
};

inline std::complex<double> mul(const std::complex<double>& a,
                                const std::complex<double>& b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

// Smallest n' >= n whose prime factors are all in {2, 3, 5, 7}.
inline int next_smooth_size(int n) {
  for (int m = n > 1 ? n : 1;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace pim::detail

#endif  // PIM_SRC_KERNELS_HPP_
