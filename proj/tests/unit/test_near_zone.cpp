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
#include <omp.h>

#include <random>

#include "pim/error.hpp"
#include "pim/near_zone.hpp"
#include "pim/pgf.hpp"
#include "pim_cli/clouds.hpp"
#include "test_util.hpp"

namespace pim {
namespace {

using testing::max_abs;
using testing::random_complex;
using testing::random_in;

SolverParams near_params(int n, int order = 2, int i_d = 1) {
  SolverParams p;
  p.i_d = i_d;
  p.near_order = order;
  p.near_grid = GridDims{n, n, n};
  return p;
}

struct Cloud {
  SourcePointSet src;
  ObserverPointSet obs;
};

Cloud random_cloud(const TargetBox& box, std::size_t n, std::size_t m,
                   std::uint64_t seed) {
  return {cli::random_neutral_sources(n, box, seed),
          cli::random_observers(m, box, seed + 1)};
}

std::vector<Complex> one_hot(std::size_t n, std::size_t k) {
  std::vector<Complex> q(n);
  q[k] = 1.0;
  return q;
}

class NearConvolve : public ::testing::TestWithParam<int> {};

TEST_P(NearConvolve, TransformMatchesDirectSum) {
  const int n = GetParam();
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::dynamic(
      Periodicity::P2D, {1.5, 1.5, 1.0}, {2.0, -0.5},
      {Complex{0.4, 0.0}, Complex{-0.7, 0.0}, Complex{}});
  const Cloud c = random_cloud(box, 30, 10, 4);
  const NearZonePlan plan =
      build_near_plan(cfg, box, c.src, c.obs, near_params(n));
  std::mt19937_64 rng(n);
  const auto qg = random_complex(rng, plan.grid.size());
  const auto fast = near_grid_convolve(plan, qg);
  const auto slow = near_grid_convolve_direct(plan, qg);
  ASSERT_EQ(fast.size(), slow.size());
  double err = 0.0;
  for (std::size_t i = 0; i < fast.size(); ++i) {
    err = std::max(err, std::abs(fast[i] - slow[i]));
  }
  EXPECT_LT(err, 1e-12 * max_abs(slow));
}

INSTANTIATE_TEST_SUITE_P(Grids, NearConvolve, ::testing::Values(7, 9));

TEST(NearPlan, PaddedSizesAreSmooth) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::npsp(Periodicity::P3D, {2, 2, 2});
  const Cloud c = random_cloud(box, 20, 5, 1);
  const NearZonePlan plan =
      build_near_plan(cfg, box, c.src, c.obs, near_params(11));
  for (int a = 0; a < 3; ++a) {
    int m = plan.fft_dims[a];
    EXPECT_GE(m, 22);
    for (int p : {2, 3, 5, 7}) {
      while (m % p == 0) m /= p;
    }
    EXPECT_EQ(m, 1);
  }
}

// Every pair inside the correction region contributes exactly G_near.
TEST(NearPlan, FullImagePairsAreExact) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::dynamic(
      Periodicity::P1D, {1.2, 1.0, 1.0}, {1.5, -1.0},
      {Complex{0.8, 0.0}, Complex{}, Complex{}});
  const Cloud c = random_cloud(box, 60, 40, 9);
  SolverParams p = near_params(6, 3);
  p.near_correction = NearCorrection::FullImage;
  const NearZonePlan plan = build_near_plan(cfg, box, c.src, c.obs, p);
  int checked = 0;
  for (std::size_t n = 0; n < c.src.size(); ++n) {
    const auto u = eval_near(plan, one_hot(c.src.size(), n));
    for (std::size_t m = 0; m < c.obs.size(); ++m) {
      const auto first = plan.corr_src.begin() + plan.corr_ptr[m];
      const auto last = plan.corr_src.begin() + plan.corr_ptr[m + 1];
      if (!std::binary_search(first, last, static_cast<std::uint32_t>(n))) {
        continue;
      }
      const Complex ref =
          near_kernel(plan, c.obs.positions[m] - c.src.positions[n]);
      EXPECT_LT(std::abs(u[m] - ref), 1e-12 * std::abs(ref))
          << "m " << m << " n " << n;
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

// Outside the correction region only steps 1-3 act.
TEST(NearPlan, UncorrectedPairsAreGridMediated) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::npsp(Periodicity::P2D, {3, 3, 3});
  const Cloud c = random_cloud(box, 40, 30, 17);
  const NearZonePlan plan =
      build_near_plan(cfg, box, c.src, c.obs, near_params(9));
  int checked = 0;
  for (std::size_t n = 0; n < c.src.size(); n += 3) {
    const auto u = eval_near(plan, one_hot(c.src.size(), n));
    for (std::size_t m = 0; m < c.obs.size(); ++m) {
      const auto first = plan.corr_src.begin() + plan.corr_ptr[m];
      const auto last = plan.corr_src.begin() + plan.corr_ptr[m + 1];
      const Complex g = grid_green(plan, m, n);
      if (std::binary_search(first, last, static_cast<std::uint32_t>(n))) {
        continue;
      }
      EXPECT_LT(std::abs(u[m] - g), 1e-12 * std::max(1.0, std::abs(g)));
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

// A source on a cell face belongs to the edge box whichever side it is
// rounded to; its wrapped neighbors must not depend on the rounding.
TEST(NearPlan, CellFaceLabelingIsContinuous) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::dynamic(
      Periodicity::P2D, {1.1, 1.1, 1.0}, {1.0, -1.0},
      {Complex{0.3, 0.0}, Complex{0.2, 0.0}, Complex{}});
  Cloud c = random_cloud(box, 50, 60, 23);
  for (NearCorrection mode :
       {NearCorrection::SingleImage, NearCorrection::FullImage}) {
    SolverParams p = near_params(9, 2);
    p.near_correction = mode;
    for (const double x : {0.0, 1.0}) {
      Cloud lo = c, hi = c;
      lo.src.positions[0].x = std::max(0.0, x - 1e-13);
      hi.src.positions[0].x = std::min(1.0, x + 1e-13);
      if (x == 0.0) lo.src.positions[0].x = 0.0;
      if (x == 1.0) hi.src.positions[0].x = 1.0;
      const auto pl = build_near_plan(cfg, box, lo.src, lo.obs, p);
      const auto ph = build_near_plan(cfg, box, hi.src, hi.obs, p);
      const auto q = one_hot(c.src.size(), 0);
      const auto ul = eval_near(pl, q);
      const auto uh = eval_near(ph, q);
      double err = 0.0;
      for (std::size_t m = 0; m < ul.size(); ++m) {
        err = std::max(err, std::abs(ul[m] - uh[m]));
      }
      EXPECT_LT(err, 1e-10 * max_abs(ul)) << "x " << x;
    }
  }
}

TEST(NearPlan, NeighborOffsetsAcrossTheCellFace) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::npsp(Periodicity::P1D, {1.05, 1, 1});
  const Cloud c = random_cloud(box, 20, 5, 2);
  const NearZonePlan plan =
      build_near_plan(cfg, box, c.src, c.obs, near_params(11));
  ASSERT_EQ(plan.box_dims, (GridDims{10, 10, 10}));
  auto offsets_of = [&](std::size_t b) {
    std::set<int> ox;
    for (std::size_t k = plan.neighbor_ptr[b]; k < plan.neighbor_ptr[b + 1];
         ++k) {
      ox.insert(plan.neighbors[k].offset[0]);
      EXPECT_EQ(plan.neighbors[k].offset[1], 0);
      EXPECT_EQ(plan.neighbors[k].offset[2], 0);
    }
    return ox;
  };
  const std::size_t interior = (5 * 10 + 5) * 10 + 5;
  EXPECT_EQ(offsets_of(interior), (std::set<int>{0}));
  EXPECT_EQ(plan.neighbor_ptr[interior + 1] - plan.neighbor_ptr[interior], 27u);
  EXPECT_EQ(offsets_of((0 * 10 + 5) * 10 + 5), (std::set<int>{-1, 0}));
  EXPECT_EQ(offsets_of((9 * 10 + 5) * 10 + 5), (std::set<int>{0, 1}));
}

TEST(NearPlan, NoImagesWithoutSubtraction) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::npsp(Periodicity::P3D, {1, 1, 1});
  const Cloud c = random_cloud(box, 40, 20, 5);
  SolverParams p = near_params(7, 2, 0);
  p.near_correction = NearCorrection::FullImage;
  const NearZonePlan plan = build_near_plan(cfg, box, c.src, c.obs, p);
  for (const NeighborBox& nb : plan.neighbors) {
    EXPECT_EQ(nb.offset, (ImageOffset{0, 0, 0}));
  }
  const Vec3 r{0.3, -0.2, 0.1};
  EXPECT_EQ(near_kernel(plan, r), g0(r, Complex{}));
}

TEST(EvalNear, ZeroChargesAndDeterminism) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::dynamic(
      Periodicity::P3D, {1.3, 1.3, 1.3}, {1.0, -1.0},
      {Complex{0.5, 0.0}, Complex{}, Complex{-0.2, 0.0}});
  const Cloud c = random_cloud(box, 400, 300, 31);
  const NearZonePlan plan =
      build_near_plan(cfg, box, c.src, c.obs, near_params(9));
  EXPECT_EQ(max_abs(eval_near(plan, std::vector<Complex>(c.src.size()))), 0.0);
  EXPECT_THROW(eval_near(plan, std::vector<Complex>(2)), InvalidArgument);

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto u1 = eval_near(plan, c.src.amplitudes);
  const auto plan1 = build_near_plan(cfg, box, c.src, c.obs, near_params(9));
  omp_set_num_threads(4);
  const auto u4 = eval_near(plan, c.src.amplitudes);
  const auto plan4 = build_near_plan(cfg, box, c.src, c.obs, near_params(9));
  omp_set_num_threads(saved);
  EXPECT_EQ(u1, u4);
  EXPECT_EQ(plan1.corr_val, plan4.corr_val);
  EXPECT_EQ(eval_near(plan1, c.src.amplitudes), u1);
}

TEST(NearPlan, CoincidentImageIsADomainError) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::npsp(Periodicity::P1D, {1.0, 1, 1});
  SourcePointSet src{{{0.0, 0.5, 0.5}, {0.5, 0.5, 0.5}},
                     {Complex{1.0}, Complex{-1.0}}};
  ObserverPointSet obs{{{1.0, 0.5, 0.5}}};
  for (NearCorrection mode :
       {NearCorrection::SingleImage, NearCorrection::FullImage}) {
    SolverParams p = near_params(9);
    p.near_correction = mode;
    EXPECT_THROW(build_near_plan(cfg, box, src, obs, p), DomainError);
  }
}

TEST(NearPlan, SelfPairIsExcluded) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::npsp(Periodicity::P2D, {2, 2, 2});
  const Cloud c = random_cloud(box, 30, 1, 8);
  ObserverPointSet obs{c.src.positions};
  SolverParams p = near_params(7);
  p.near_correction = NearCorrection::FullImage;
  const NearZonePlan plan = build_near_plan(cfg, box, c.src, obs, p);
  const auto u = eval_near(plan, one_hot(c.src.size(), 4));
  const Complex ref = pgf_image_sum_excluding_origin(
      Vec3{}, cfg, {1, 1, 1}, plan.coincidence_radius);
  EXPECT_LT(std::abs(u[4] - ref), 1e-12 * std::abs(ref));
}

}  // namespace
}  // namespace pim
