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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "pim/error.hpp"
#include "pim/direct.hpp"
#include "pim/solver.hpp"
#include "pim_cli/app.hpp"
#include "pim_cli/clouds.hpp"
#include "pim_cli/points_csv.hpp"
#include "pim_cli/problem.hpp"
#include "pim_cli/studies.hpp"
#include "test_util.hpp"

namespace pim::cli {
namespace {

namespace fs = std::filesystem;

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in, "<test>");
}

TEST(ProblemFile, DefaultsAndInference) {
  const Problem p = make_problem(parse("dim = 2\nLx = 2\nLy = 3\n"));
  EXPECT_EQ(p.config.dim, Periodicity::P2D);
  EXPECT_EQ(p.config.regime, Regime::NPSP);
  EXPECT_EQ(p.config.L.y, 3.0);
  EXPECT_FALSE(p.params.near_grid.has_value());

  const Problem d = make_problem(parse("k0_re = 1.5\nkx0_im = -0.25\n"));
  EXPECT_EQ(d.config.regime, Regime::Dynamic);
  EXPECT_EQ(d.config.kshift[0], (Complex{0.0, -0.25}));

  const Problem s =
      make_problem(parse("dim = 2\nky0_re = 0.5 # trailing comment\n"));
  EXPECT_EQ(s.config.regime, Regime::StaticShifted);
  // Shifts on non-periodic axes play no part in the inference.
  EXPECT_EQ(make_problem(parse("ky0_re = 0.5\n")).config.regime, Regime::NPSP);
}

TEST(ProblemFile, RoundTrip) {
  const Problem p = make_problem(parse(
      "# comment\ndim = 3\nLx = 1.25\nLy = 2\nLz = 0.1\nk0_re = -1\n"
      "k0_im = -1\nkz0_re = 0.3\nregime = dynamic\nDx = 1\nDy = 1.5\n"
      "Dz = 0.1\ni_d = 2\nfar_order = 4\nfar_grid = 8,9,3\nnear_order = 1\n"
      "near_grid = 11,13,3\nseries_tol = 1e-11\ner_range_boxes = 2\n"
      "near_correction = full\nsources_path = a.csv\n"));
  const Problem q = make_problem(parse(format_problem(p)));
  EXPECT_EQ(format_problem(q), format_problem(p));
  EXPECT_EQ(q.params.far_grid, (GridDims{8, 9, 3}));
  EXPECT_EQ(*q.params.near_grid, (GridDims{11, 13, 3}));
  EXPECT_EQ(q.params.near_correction, NearCorrection::FullImage);
  EXPECT_EQ(q.config.k0, (Complex{-1.0, -1.0}));
  EXPECT_EQ(q.config.L.x, 1.25);
  EXPECT_EQ(q.sources_path, "a.csv");
}

TEST(ProblemFile, Rejections) {
  EXPECT_THROW(make_problem(parse("colour = red\n")), InvalidArgument);
  EXPECT_THROW(parse("dim = 1\ndim = 2\n"), InvalidArgument);
  EXPECT_THROW(parse("just words\n"), InvalidArgument);
  EXPECT_THROW(make_problem(parse("far_order = three\n")), InvalidArgument);
  EXPECT_THROW(make_problem(parse("far_grid = 1,2\n")), InvalidArgument);
  EXPECT_THROW(make_problem(parse("regime = warp\n")), InvalidArgument);
  EXPECT_THROW(read_key_values("/nonexistent/problem.txt"), IoError);
}

TEST(PointsCsv, BitExactRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  SourcePointSet src;
  for (int i = 0; i < 200; ++i) {
    src.positions.push_back({u(rng), u(rng) * 1e-9, u(rng) * 1e12});
    src.amplitudes.emplace_back(u(rng), -u(rng) / 3.0);
  }
  src.positions.push_back({0.1, -0.0, 5e-324});
  src.amplitudes.emplace_back(1.0 / 3.0, 0.0);
  std::stringstream buf;
  write_sources_csv(buf, src);
  const SourcePointSet back = read_sources_csv(buf, "<buf>");
  ASSERT_EQ(back.size(), src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (int a = 0; a < 3; ++a) {
      EXPECT_EQ(back.positions[i][a], src.positions[i][a]);
    }
    EXPECT_EQ(back.amplitudes[i], src.amplitudes[i]);
  }
}

TEST(PointsCsv, HeaderAndFieldErrors) {
  std::istringstream no_header("1,2,3,4,5\n");
  EXPECT_THROW(read_sources_csv(no_header, "x"), InvalidArgument);
  std::istringstream short_row("x,y,z,q_re,q_im\n1,2,3\n");
  EXPECT_THROW(read_sources_csv(short_row, "x"), InvalidArgument);
  std::istringstream obs("x,y,z\n0.5,0.25,1\n");
  EXPECT_EQ(read_observers_csv(obs, "x").positions[0].y, 0.25);
  EXPECT_THROW(read_sources_csv("/nonexistent/src.csv"), IoError);
}

TEST(Clouds, NeutralAndInsideTheBox) {
  const TargetBox box{{2.0, 1.0, 0.5}};
  const auto src = random_neutral_sources(1000, box, 42);
  Complex total{0.0, 0.0};
  double total_abs = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    total += src.amplitudes[i];
    total_abs += std::abs(src.amplitudes[i]);
    for (int a = 0; a < 3; ++a) {
      EXPECT_GE(src.positions[i][a], 0.0);
      EXPECT_LE(src.positions[i][a], box.D[a]);
    }
  }
  EXPECT_LT(std::abs(total), 1e-13 * total_abs);
  EXPECT_EQ(random_neutral_sources(1000, box, 42).positions, src.positions);
}

TEST(Clouds, CoaxShellsAreNeutral) {
  CoaxSpec spec;
  spec.points_per_shell = 2000;
  const auto src = coax_sources(spec);
  EXPECT_NEAR(static_cast<double>(src.size()), 4000.0, 400.0);
  Complex total{0.0, 0.0};
  for (const Complex& q : src.amplitudes) total += q;
  EXPECT_LT(std::abs(total), 1e-12);
  const TargetBox box = coax_box(spec);
  for (const Vec3& p : src.positions) {
    const double r = std::hypot(p.y - spec.r2, p.z - spec.r2);
    EXPECT_TRUE(std::abs(r - spec.r1) < 1e-12 || std::abs(r - spec.r2) < 1e-12);
    EXPECT_LE(p.x, box.D.x);
  }
  const auto axis = coax_axis_observers(spec, 4);
  EXPECT_DOUBLE_EQ(axis.positions[1].x, 0.375);
  EXPECT_DOUBLE_EQ(axis.positions[1].y, spec.r2);
}

TEST(Solve, PermutationInvariance) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  const auto cfg = PeriodicityConfig::npsp(Periodicity::P2D, {1.5, 1.5, 1.0});
  const auto src = random_neutral_sources(600, box, 3);
  const auto obs = random_observers(50, box, 4);
  SolverParams params;
  const auto u = solve(cfg, box, src, obs, params).values;

  std::vector<std::size_t> perm(src.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(8));
  SourcePointSet shuffled;
  for (std::size_t i : perm) {
    shuffled.positions.push_back(src.positions[i]);
    shuffled.amplitudes.push_back(src.amplitudes[i]);
  }
  const auto v = solve(cfg, box, shuffled, obs, params).values;
  EXPECT_LT(max_relative_error(v, u), 1e-13);
}

class RunCli : public ::testing::Test {
 protected:
  fs::path dir;
  void SetUp() override {
    dir = fs::temp_directory_path() /
          (std::string("pim_cli_") +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int call(std::vector<std::string> args, std::string* out_text = nullptr) {
    args.insert(args.begin(), "pim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    return code;
  }
  std::string file(const std::string& name) const {
    return (dir / name).string();
  }
};

TEST_F(RunCli, SolveWritesPotentials) {
  const TargetBox box{{1.0, 1.0, 1.0}};
  write_sources_csv(file("src.csv"), random_neutral_sources(300, box, 1));
  write_observers_csv(file("obs.csv"), random_observers(20, box, 2));
  {
    std::ofstream p(file("problem.txt"));
    p << "dim = 1\nLx = 2\nDx = 1\nDy = 1\nDz = 1\n"
      << "sources_path = " << file("src.csv") << "\n"
      << "observers_path = " << file("obs.csv") << "\n";
  }
  EXPECT_EQ(call({"solve", "--problem", file("problem.txt"), "--output",
                  file("u.csv")}),
            kExitOk);
  std::ifstream u(file("u.csv"));
  std::string header;
  std::getline(u, header);
  EXPECT_EQ(header, "x,y,z,u_re,u_im");
  int rows = 0;
  for (std::string line; std::getline(u, line);) ++rows;
  EXPECT_EQ(rows, 20);
}

TEST_F(RunCli, ExitCodes) {
  EXPECT_EQ(call({"--help"}), kExitOk);
  EXPECT_EQ(call({"solve", "--bogus"}), kExitValidation);
  EXPECT_EQ(call({"solve", "--problem", file("missing.txt")}), kExitIo);
  { std::ofstream(file("empty.txt")); }
  EXPECT_EQ(call({"solve", "--problem", file("empty.txt")}), kExitValidation);
  {
    std::ofstream p(file("bad.txt"));
    p << "flavour = 3\n";
  }
  EXPECT_EQ(call({"solve", "--problem", file("bad.txt")}), kExitValidation);

  // Sources outside the box fail validation.
  const TargetBox box{{2.0, 2.0, 2.0}};
  write_sources_csv(file("src.csv"), random_neutral_sources(10, box, 1));
  EXPECT_EQ(call({"solve", "--sources_path", file("src.csv"), "--Dx", "1"}),
            kExitValidation);

  // Wood anomaly in the far kernel.
  write_sources_csv(file("small.csv"),
                    random_neutral_sources(10, TargetBox{{0.5, 0.5, 0.5}}, 1));
  EXPECT_EQ(call({"solve", "--sources_path", file("small.csv"), "--dim", "2",
                  "--Dx", "0.5", "--Dy", "0.5", "--Dz", "0.5", "--k0_re",
                  "6.283185307179586", "--far_grid", "4", "--far_order", "1",
                  "--near_grid", "5", "--near_order", "1"}),
            kExitPgf);
}

TEST_F(RunCli, ConvergenceTable) {
  std::string text;
  EXPECT_EQ(call({"convergence", "--dim", "2", "--max-m", "6"}, &text),
            kExitOk);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "m,partial_re,partial_im,rel_error");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 7);
}

TEST_F(RunCli, GenCoax) {
  EXPECT_EQ(call({"gen-coax", "--points-per-shell", "400", "--output",
                  file("coax.csv"), "--observers-output", file("axis.csv"),
                  "--num-observers", "7"}),
            kExitOk);
  const auto src = read_sources_csv(file("coax.csv"));
  EXPECT_GT(src.size(), 700u);
  EXPECT_EQ(read_observers_csv(file("axis.csv")).size(), 7u);
}

TEST(Studies, ConvergenceRowsDecay) {
  const auto rows = run_convergence(testing::fig2_dynamic(Periodicity::P1D),
                                    {0.5, 0.5, 0.5}, 12);
  ASSERT_EQ(rows.size(), 13u);
  EXPECT_LT(rows.back().rel_error, 1e-3 * rows[2].rel_error);
}

TEST(Studies, ErrorStudySkipsInvalidCombinations) {
  const TargetBox box{{50.0, 50.0, 50.0}};
  const auto cfg = PeriodicityConfig::npsp(Periodicity::P1D, {50, 50, 50});
  const auto src = random_neutral_sources(200, box, 1, true);
  const auto obs = random_observers(10, box, 2);
  ErrorStudyOptions opt;
  opt.orders = {1, 6};
  opt.grids = {4, 8};
  const auto rows = run_error_study(cfg, box, src, obs, SolverParams{}, opt);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_LE(r.order + 1, r.grid);
  opt.max_points = 100;
  EXPECT_THROW(run_error_study(cfg, box, src, obs, SolverParams{}, opt),
               InvalidArgument);
}

}  // namespace
}  // namespace pim::cli
