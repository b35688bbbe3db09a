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

#include <cstddef>

#include "pim/far_zone.hpp"
#include "pim/near_zone.hpp"
#include "pim/solver.hpp"
#include "pim_cli/clouds.hpp"

namespace {

struct Setup {
  pim::PeriodicityConfig config = pim::PeriodicityConfig::npsp(
      pim::Periodicity::P3D, {101.0, 101.0, 101.0});
  pim::TargetBox box{{100.0, 100.0, 100.0}};
  pim::SourcePointSet src;
  pim::ObserverPointSet obs;
  pim::SolverParams params;

  explicit Setup(std::size_t n)
      : src(pim::cli::random_neutral_sources(n, box, 7 + n, true)) {
    obs.positions = src.positions;
  }
};

void BM_EvalNear(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  const auto plan =
      pim::build_near_plan(s.config, s.box, s.src, s.obs, s.params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pim::eval_near(plan, s.src.amplitudes));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvalNear)
    ->Arg(10000)
    ->Arg(20000)
    ->Arg(40000)
    ->Arg(80000)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNLogN);

void BM_EvalFar(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  const auto plan =
      pim::build_far_plan(s.config, s.box, s.src, s.obs, s.params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pim::eval_far(plan, s.src.amplitudes));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvalFar)
    ->Arg(10000)
    ->Arg(20000)
    ->Arg(40000)
    ->Arg(80000)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oN);

void BM_SolverEvaluate(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  const pim::PeriodicSolver solver(s.config, s.box, s.src, s.obs, s.params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.evaluate(s.src.amplitudes));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolverEvaluate)
    ->Arg(10000)
    ->Arg(20000)
    ->Arg(40000)
    ->Arg(80000)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNLogN);

void BM_SolverBuild(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const pim::PeriodicSolver solver(s.config, s.box, s.src, s.obs, s.params);
    benchmark::DoNotOptimize(&solver);
  }
}
BENCHMARK(BM_SolverBuild)->Arg(10000)->Arg(40000)->Unit(
    benchmark::kMillisecond);

}  // namespace
