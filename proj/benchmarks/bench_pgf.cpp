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

#include <benchmark/benchmark.h>

#include "pim/pgf.hpp"

namespace {

using pim::Complex;
using pim::Periodicity;
using pim::PeriodicityConfig;

PeriodicityConfig config_for(int dim, bool dynamic) {
  const auto p = static_cast<Periodicity>(dim);
  const pim::Vec3 L{1.0, 1.0, 1.0};
  if (!dynamic) return PeriodicityConfig::npsp(p, L);
  return PeriodicityConfig::dynamic(p, L, {3.0, 0.0},
                                    {Complex{1.0, 0.0}, Complex{0.5, 0.0},
                                     Complex{0.0, 0.0}});
}

void BM_PgfTotal(benchmark::State& state) {
  const auto config =
      config_for(static_cast<int>(state.range(0)), state.range(1) != 0);
  const pim::TruncationPolicy policy;
  const pim::Vec3 r{0.31, 0.27, 0.35};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pim::pgf_total(r, config, policy));
  }
}
BENCHMARK(BM_PgfTotal)->ArgsProduct({{1, 2, 3}, {0, 1}});

void BM_PgfFar(benchmark::State& state) {
  const auto config = config_for(static_cast<int>(state.range(0)), false);
  const pim::TruncationPolicy policy;
  const pim::Vec3 r{0.31, 0.27, 0.35};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pim::pgf_far(r, config, static_cast<int>(state.range(1)), policy));
  }
}
BENCHMARK(BM_PgfFar)->ArgsProduct({{1, 2, 3}, {1, 2}});

}  // namespace
