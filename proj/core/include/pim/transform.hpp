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

// Pluggable 3D complex-to-complex transform used by the near-zone convolution.

#ifndef PIM_TRANSFORM_HPP_
#define PIM_TRANSFORM_HPP_

#include <memory>
#include <string>
#include <vector>

#include "pim/model.hpp"

namespace pim {

class SpectralTransformProvider {
 public:
  virtual ~SpectralTransformProvider() = default;

  // In-place transforms of a row-major dims[0] x dims[1] x dims[2] array.
  // forward is unnormalised; inverse divides by the element count, so
  // inverse(forward(x)) == x. Any positive sizes are allowed, and
  // concurrent calls on distinct buffers are safe.
  virtual void forward(std::vector<Complex>& data,
                       const GridDims& dims) const = 0;
  virtual void inverse(std::vector<Complex>& data,
                       const GridDims& dims) const = 0;

  // Optional hint to build any per-size state ahead of the first call.
  virtual void prepare(const GridDims& /*dims*/) const {}

  virtual std::string name() const = 0;
};

enum class FftwRigor { Estimate, Measure };

// FFTW3-backed provider. Plans are created once per size and cached.
std::shared_ptr<const SpectralTransformProvider> make_fftw_provider(
    FftwRigor rigor = FftwRigor::Estimate);

// Process-wide FFTW provider with estimate-level planning.
std::shared_ptr<const SpectralTransformProvider> default_transform_provider();

}  // namespace pim

#endif  // PIM_TRANSFORM_HPP_
