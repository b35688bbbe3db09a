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

#include "pim/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "pim/error.hpp"

namespace pim {

namespace {

// FFTW's planner is not thread safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftwProvider final : public SpectralTransformProvider {
 public:
  explicit FftwProvider(FftwRigor rigor) : rigor_(rigor) {}

  ~FftwProvider() override {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  void forward(std::vector<Complex>& data, const GridDims& dims) const override {
    run(data, dims, FFTW_FORWARD);
  }

  void inverse(std::vector<Complex>& data, const GridDims& dims) const override {
    run(data, dims, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (Complex& z : data) z *= scale;
  }

  void prepare(const GridDims& dims) const override {
    plan_for(dims, FFTW_FORWARD);
    plan_for(dims, FFTW_BACKWARD);
  }

  std::string name() const override {
    return rigor_ == FftwRigor::Measure ? "fftw3-measure" : "fftw3-estimate";
  }

 private:
  using Key = std::tuple<int, int, int, int>;

  fftw_plan plan_for(const GridDims& dims, int sign) const {
    const Key key{dims[0], dims[1], dims[2], sign};
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const std::size_t n =
        static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    // Plan on scratch memory so measuring never touches caller data.
    fftw_complex* scratch = fftw_alloc_complex(n);
    const unsigned flags =
        FFTW_UNALIGNED |
        (rigor_ == FftwRigor::Measure ? FFTW_MEASURE : FFTW_ESTIMATE);
    fftw_plan p = fftw_plan_dft_3d(dims[0], dims[1], dims[2], scratch, scratch,
                                   sign, flags);
    fftw_free(scratch);
    if (p == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, p);
    return p;
  }

  void run(std::vector<Complex>& data, const GridDims& dims, int sign) const {
    const std::size_t n =
        static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    if (data.size() != n || n == 0) {
      throw InvalidArgument("transform buffer does not match its dimensions");
    }
    fftw_plan p = plan_for(dims, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, buf, buf);
  }

  FftwRigor rigor_;
  mutable std::map<Key, fftw_plan> plans_;
};

}  // namespace

std::shared_ptr<const SpectralTransformProvider> make_fftw_provider(
    FftwRigor rigor) {
  return std::make_shared<FftwProvider>(rigor);
}

std::shared_ptr<const SpectralTransformProvider> default_transform_provider() {
  static const std::shared_ptr<const SpectralTransformProvider> provider =
      make_fftw_provider(FftwRigor::Estimate);
  return provider;
}

}  // namespace pim
