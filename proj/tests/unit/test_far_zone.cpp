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

#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <thread>

#include "pim/direct.hpp"
#include "pim/error.hpp"
#include "pim/far_zone.hpp"
#include "pim/pgf.hpp"
#include "pim_cli/clouds.hpp"
#include "test_util.hpp"

namespace pim {
namespace {

using testing::max_abs;
using testing::random_complex;

// The lattice 1D setup used throughout: L_x = 50, 50^3 box.
struct BarCase {
  PeriodicityConfig config =
      PeriodicityConfig::npsp(Periodicity::P1D, {50.0, 50.0, 50.0});
  TargetBox box{{50.0, 50.0, 50.0}};
  SourcePointSet src;
  ObserverPointSet obs;

  explicit BarCase(std::size_t n = 2000, std::size_t m = 100) {
    src = cli::random_neutral_sources(n, box, 101, true);
    obs = cli::random_observers(m, box, 202);
  }
};

SolverParams far_params(int order, int grid, int i_d) {
  SolverParams p;
  p.far_order = order;
  p.far_grid = {grid, grid, grid};
  p.i_d = i_d;
  return p;
}

TEST(FarPlan, TwoNodeGridsGive27Entries) {
  const BarCase c(20, 5);
  const FarZonePlan plan =
      build_far_plan(c.config, c.box, c.src, c.obs, far_params(1, 2, 1));
  EXPECT_EQ(plan.kernel.size(), 27u);
  EXPECT_EQ(plan.kernel_dims, (GridDims{3, 3, 3}));
}

TEST(FarPlan, DefaultConfigurationBuilds) {
  const BarCase c(100, 10);
  const FarZonePlan plan =
      build_far_plan(c.config, c.box, c.src, c.obs, far_params(3, 10, 1));
  EXPECT_EQ(plan.kernel.size(), 19u * 19u * 19u);
  EXPECT_GT(plan.max_series_terms, 0);
  EXPECT_TRUE(plan.warnings.empty());
  for (const Complex& k : plan.kernel) EXPECT_TRUE(std::isfinite(std::abs(k)));
}

TEST(FarPlan, KernelMatchesPgfFar) {
  const BarCase c(50, 10);
  const FarZonePlan plan =
      build_far_plan(c.config, c.box, c.src, c.obs, far_params(3, 6, 1));
  TruncationPolicy policy;
  policy.tol = plan.series_tol;
  for (const auto [dl, dp, dq] : {std::array<int, 3>{0, 0, 0}, {5, -5, 2},
                                  {-5, 0, 5}, {3, 1, -4}}) {
    const Vec3 r = plan.difference_vector(dl, dp, dq);
    const Vec3 expected{plan.observer_grid.coord(0, std::max(dl, 0)) -
                            plan.source_grid.coord(0, std::max(-dl, 0)),
                        plan.observer_grid.coord(1, std::max(dp, 0)) -
                            plan.source_grid.coord(1, std::max(-dp, 0)),
                        plan.observer_grid.coord(2, std::max(dq, 0)) -
                            plan.source_grid.coord(2, std::max(-dq, 0))};
    for (int a = 0; a < 3; ++a) EXPECT_NEAR(r[a], expected[a], 1e-12);
    const Complex ref = pgf_far(r, c.config, 1, policy).value;
    EXPECT_LT(std::abs(plan.kernel_at(dl, dp, dq) - ref),
              1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(EvalFar, ZeroAndLinearity) {
  const BarCase c(300, 40);
  const FarZonePlan plan =
      build_far_plan(c.config, c.box, c.src, c.obs, far_params(3, 10, 1));
  const auto zero = eval_far(plan, std::vector<Complex>(c.src.size()));
  EXPECT_EQ(max_abs(zero), 0.0);

  std::mt19937_64 rng(3);
  const auto q1 = random_complex(rng, c.src.size());
  const auto q2 = random_complex(rng, c.src.size());
  const Complex a{0.3, -1.2}, b{-2.0, 0.5};
  std::vector<Complex> mix(q1.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * q1[i] + b * q2[i];
  const auto u1 = eval_far(plan, q1);
  const auto u2 = eval_far(plan, q2);
  const auto um = eval_far(plan, mix);
  double err = 0.0;
  for (std::size_t i = 0; i < um.size(); ++i) {
    err = std::max(err, std::abs(um[i] - (a * u1[i] + b * u2[i])));
  }
  EXPECT_LT(err, 1e-12 * max_abs(um));
  EXPECT_THROW(eval_far(plan, std::vector<Complex>(3)), InvalidArgument);
}

TEST(EvalFar, TransformSumEqualsExplicitSum) {
  for (const auto dims : {GridDims{10, 10, 10}, GridDims{7, 4, 5}}) {
    const BarCase c(50, 10);
    SolverParams p = far_params(3, 10, 1);
    p.far_grid = dims;
    const FarZonePlan plan = build_far_plan(c.config, c.box, c.src, c.obs, p);
    std::mt19937_64 rng(9);
    const auto qg = random_complex(rng, plan.source_grid.size());
    const auto fast = far_grid_sum(plan, qg);
    const auto slow = far_grid_sum_direct(plan, qg);
    double err = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i) {
      err = std::max(err, std::abs(fast[i] - slow[i]));
    }
    EXPECT_LT(err, 1e-12 * max_abs(slow));

    FarPlanOptions explicit_sum;
    explicit_sum.fft_grid_sum = false;
    const FarZonePlan plain =
        build_far_plan(c.config, c.box, c.src, c.obs, p, explicit_sum);
    EXPECT_TRUE(plain.kernel_hat.empty());
    EXPECT_EQ(far_grid_sum(plain, qg), slow);
  }
}

// Frozen from a pilot run of this configuration (N = 2000, 100 observers):
// far-zone errors 1.8e-2, 6.2e-4, 2.2e-5 for orders 1, 3, 6.
TEST(EvalFar, OracleAgreementByOrder) {
  const BarCase c(2000, 100);
  TruncationPolicy policy;
  policy.tol = 1e-12;
  const auto ref =
      require_ok(eval_direct_farzone(c.config, c.src, c.obs, 1, policy)).values;
  const std::pair<int, double> bounds[] = {{1, 5e-2}, {3, 1.5e-3}, {6, 6e-5}};
  double previous = 1.0;
  for (const auto& [order, bound] : bounds) {
    const FarZonePlan plan = build_far_plan(c.config, c.box, c.src, c.obs,
                                            far_params(order, 10, 1));
    const double err =
        max_relative_error(eval_far(plan, c.src.amplitudes), ref);
    EXPECT_LT(err, bound) << "order " << order;
    EXPECT_LT(err, previous);
    previous = err;
  }
}

TEST(EvalFar, ErrorTrendsInGridAndImages) {
  const BarCase c(1000, 60);
  TruncationPolicy policy;
  policy.tol = 1e-12;
  for (int i_d : {1, 2}) {
    const auto ref =
        require_ok(eval_direct_farzone(c.config, c.src, c.obs, i_d, policy))
            .values;
    double previous = 1.0;
    for (int grid : {6, 8, 10, 12}) {
      const FarZonePlan plan = build_far_plan(c.config, c.box, c.src, c.obs,
                                              far_params(3, grid, i_d));
      const double err =
          max_relative_error(eval_far(plan, c.src.amplitudes), ref);
      EXPECT_LT(err, 2.0 * previous) << "grid " << grid;
      previous = err;
    }
  }
  // Total error with more subtracted images at fixed interpolation.
  const auto total =
      require_ok(eval_direct(c.config, c.src, c.obs, policy)).values;
  double previous = 1.0;
  for (int i_d : {1, 2, 3}) {
    const FarZonePlan plan = build_far_plan(c.config, c.box, c.src, c.obs,
                                            far_params(3, 10, i_d));
    auto u = eval_far(plan, c.src.amplitudes);
    const auto near =
        require_ok(eval_direct_nearzone(c.config, c.src, c.obs, i_d)).values;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += near[i];
    const double err = max_relative_error(u, total);
    EXPECT_LE(err, previous) << "i_d " << i_d;
    previous = err;
  }
}

TEST(EvalFar, ConcurrentCallsOnOnePlan) {
  const BarCase c(500, 50);
  const FarZonePlan plan =
      build_far_plan(c.config, c.box, c.src, c.obs, far_params(3, 10, 1));
  std::mt19937_64 rng(12);
  const auto q1 = random_complex(rng, c.src.size());
  const auto q2 = random_complex(rng, c.src.size());
  const auto s1 = eval_far(plan, q1);
  const auto s2 = eval_far(plan, q2);
  std::vector<Complex> p1, p2;
  std::thread t1([&] { p1 = eval_far(plan, q1); });
  std::thread t2([&] { p2 = eval_far(plan, q2); });
  t1.join();
  t2.join();
  EXPECT_EQ(p1, s1);
  EXPECT_EQ(p2, s2);
}

TEST(FarPlan, OnAxisCloudIsOffsetWithWarning) {
  PeriodicityConfig cfg =
      PeriodicityConfig::npsp(Periodicity::P1D, {4.0, 1.0, 1.0});
  TargetBox box{{4.0, 0.0, 0.0}};
  SourcePointSet src{{{0.5, 0.0, 0.0}, {3.0, 0.0, 0.0}},
                     {Complex{1.0, 0.0}, Complex{-1.0, 0.0}}};
  ObserverPointSet obs{{{1.7, 0.0, 0.0}, {2.2, 0.0, 0.0}}};
  SolverParams p = far_params(3, 10, 1);
  const FarZonePlan plan = build_far_plan(cfg, box, src, obs, p);
  ASSERT_FALSE(plan.warnings.empty());
  EXPECT_GT(plan.source_grid.origin.y, 0.0);
  const auto u = eval_far(plan, src.amplitudes);
  TruncationPolicy policy;
  policy.tol = 1e-12;
  // The grid evaluates G_far one offset away from the axis.
  const double off = plan.source_grid.origin.y;
  for (std::size_t m = 0; m < obs.size(); ++m) {
    Complex ref = 0.0;
    for (std::size_t n = 0; n < src.size(); ++n) {
      const Vec3 r = obs.positions[m] - src.positions[n];
      ref += pgf_far({r.x, -off, 0.0}, cfg, 1, policy).value *
             src.amplitudes[n];
    }
    EXPECT_LT(std::abs(u[m] - ref), 1e-3 * std::abs(ref) + 1e-6);
  }
}

TEST(FarPlan, WoodAnomalyPropagates) {
  const double L = 1.0;
  const auto cfg = PeriodicityConfig::dynamic(
      Periodicity::P2D, {L, L, L}, 2.0 * kPi / L, {Complex{}, Complex{}, Complex{}});
  TargetBox box{{1.0, 1.0, 1.0}};
  SourcePointSet src{{{0.2, 0.2, 0.2}}, {Complex{1.0, 0.0}}};
  ObserverPointSet obs{{{0.6, 0.6, 0.6}}};
  EXPECT_THROW(build_far_plan(cfg, box, src, obs, far_params(1, 4, 1)),
               WoodAnomaly);
}

class KernelCache : public ::testing::Test {
 protected:
  std::string path;
  void SetUp() override {
    path = (std::filesystem::temp_directory_path() /
            (std::string("pim_far_kernel_") + ::testing::UnitTest::GetInstance()->current_test_info()->name() + ".bin"))
               .string();
    std::filesystem::remove(path);
  }
  void TearDown() override { std::filesystem::remove(path); }
};

TEST_F(KernelCache, RoundTripAndReuse) {
  const BarCase c(200, 20);
  const SolverParams p = far_params(3, 8, 1);
  const FarZonePlan plan = build_far_plan(c.config, c.box, c.src, c.obs, p);
  export_far_kernel(plan, path);
  EXPECT_EQ(std::filesystem::file_size(path),
            64u + plan.kernel.size() * 2 * sizeof(double));
  EXPECT_EQ(import_far_kernel(plan, path), plan.kernel);

  FarPlanOptions opt;
  opt.kernel_cache_path = path;
  const FarZonePlan cached =
      build_far_plan(c.config, c.box, c.src, c.obs, p, opt);
  EXPECT_TRUE(cached.kernel_from_cache);
  EXPECT_EQ(eval_far(cached, c.src.amplitudes),
            eval_far(plan, c.src.amplitudes));

  std::ifstream in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "PIMF");
}

TEST_F(KernelCache, WritesWhenMissing) {
  const BarCase c(200, 20);
  FarPlanOptions opt;
  opt.kernel_cache_path = path;
  const FarZonePlan plan =
      build_far_plan(c.config, c.box, c.src, c.obs, far_params(3, 8, 1), opt);
  EXPECT_FALSE(plan.kernel_from_cache);
  EXPECT_TRUE(std::filesystem::exists(path));
}

TEST_F(KernelCache, RejectsMismatchAndCorruption) {
  const BarCase c(200, 20);
  const FarZonePlan plan =
      build_far_plan(c.config, c.box, c.src, c.obs, far_params(3, 8, 1));
  EXPECT_THROW(import_far_kernel(plan, path), IoError);
  export_far_kernel(plan, path);

  const FarZonePlan other =
      build_far_plan(c.config, c.box, c.src, c.obs, far_params(3, 8, 2));
  EXPECT_NE(far_kernel_hash(plan), far_kernel_hash(other));
  EXPECT_THROW(import_far_kernel(other, path), IoError);

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  EXPECT_THROW(import_far_kernel(plan, path), IoError);
  export_far_kernel(plan, path);
  std::filesystem::resize_file(path, 70);
  EXPECT_THROW(import_far_kernel(plan, path), IoError);
}

}  // namespace
}  // namespace pim
