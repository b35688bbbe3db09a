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

#include "pim_cli/app.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "pim/error.hpp"
#include "pim/far_zone.hpp"
#include "pim/near_zone.hpp"
#include "pim/solver.hpp"
#include "pim_cli/clouds.hpp"
#include "pim_cli/points_csv.hpp"
#include "pim_cli/problem.hpp"
#include "pim_cli/studies.hpp"

namespace pim::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --problem FILE plus one --key VALUE override per problem key.
struct ProblemArgs {
  std::string file;
  std::map<std::string, std::string> overrides;

  // With `output_alias`, --output also sets output_path.
  void attach(CLI::App* cmd, bool output_alias = false) {
    cmd->add_option("--problem", file, "Problem file (key = value lines)");
    for (const std::string& key : problem_keys()) {
      std::string names = "--" + key;
      if (output_alias && key == "output_path") names += ",--output";
      cmd->add_option(names, overrides[key], "Problem key " + key);
    }
  }

  // File values, then command-line overrides, then `defaults` for keys
  // that neither sets.
  Problem resolve(CLI::App* cmd, const KeyValues& defaults = {}) const {
    KeyValues kv = file.empty() ? KeyValues{} : read_key_values(file);
    for (const auto& [key, value] : overrides) {
      if (cmd->count("--" + key) > 0) kv[key] = value;
    }
    for (const auto& [key, value] : defaults) kv.emplace(key, value);
    return make_problem(kv);
  }
};

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("bad ") + what + " list '" + s + "'");
    }
  }
  if (out.empty()) throw InvalidArgument(std::string("empty ") + what + " list");
  return out;
}

// Writes to `path` when given, else to `out`.
void emit(const std::string& path, std::ostream& out,
          const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot create '" + path + "'");
  body(f);
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string dims_text(const GridDims& d) {
  return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" +
         std::to_string(d[2]);
}

int cmd_solve(CLI::App* cmd, const ProblemArgs& args, std::ostream& out,
              std::ostream& err) {
  const Problem p = args.resolve(cmd);
  if (p.sources_path.empty()) throw InvalidArgument("sources_path is not set");
  const SourcePointSet src = read_sources_csv(p.sources_path);
  ObserverPointSet obs;
  if (p.observers_path.empty()) {
    obs.positions = src.positions;
  } else {
    obs = read_observers_csv(p.observers_path);
  }

  FarPlanOptions far_options;
  far_options.kernel_cache_path = p.far_kernel_cache;
  const auto t0 = Clock::now();
  const PeriodicSolver solver(p.config, p.box, src, obs, p.params,
                              default_transform_provider(), far_options);
  const double build = seconds_since(t0);
  const auto t1 = Clock::now();
  const std::vector<Complex> u = solver.evaluate(src.amplitudes);
  const double eval = seconds_since(t1);

  emit(p.output_path, out,
       [&](std::ostream& o) { write_potential_csv(o, obs, u); });

  const FarZonePlan& far = solver.far_plan();
  const NearZonePlan& near = solver.near_plan();
  err << "sources " << src.size() << ", observers " << obs.size() << "\n"
      << "far grid " << dims_text(far.source_grid.dims) << " order "
      << p.params.far_order << ", i_d " << p.params.i_d
      << (far.kernel_from_cache ? " (kernel from cache)" : "") << "\n"
      << "near grid " << dims_text(near.grid.dims) << " order "
      << p.params.near_order << ", fft " << dims_text(near.fft_dims) << "\n"
      << "build " << build << " s (near " << solver.build_timings().near_seconds
      << ", far " << solver.build_timings().far_seconds << "), eval " << eval
      << " s\n"
      << "max series terms " << far.max_series_terms << "\n";
  for (const std::string& w : far.warnings) err << "warning: " << w << "\n";
  return kExitOk;
}

struct ConvergenceArgs {
  int dim = 1;
  std::string regime = "dynamic";
  double L = 1.0;
  double x = 0.5, y = 0.5, z = 0.5;
  double k0_re = -1.0, k0_im = -1.0;
  std::array<double, 6> kshift{1.0, -1.0, 1.0, 1.0, -1.0, 1.0};
  int max_m = 30;
  std::string output;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dim", dim, "Periodic directions (1-3)")
        ->check(CLI::Range(1, 3));
    cmd->add_option("--regime", regime, "dynamic, static or npsp")
        ->check(CLI::IsMember({"dynamic", "static", "npsp"}));
    cmd->add_option("--L", L, "Period on every periodic axis");
    cmd->add_option("--x", x);
    cmd->add_option("--y", y);
    cmd->add_option("--z", z);
    cmd->add_option("--k0_re", k0_re);
    cmd->add_option("--k0_im", k0_im);
    const char* names[6] = {"--kx0_re", "--kx0_im", "--ky0_re",
                            "--ky0_im", "--kz0_re", "--kz0_im"};
    for (int i = 0; i < 6; ++i) cmd->add_option(names[i], kshift[i]);
    cmd->add_option("--max-m", max_m, "Largest shell index")
        ->check(CLI::Range(0, 100000));
    cmd->add_option("--output", output, "CSV path (default stdout)");
  }
};

int cmd_convergence(const ConvergenceArgs& a, std::ostream& out) {
  const auto dim = static_cast<Periodicity>(a.dim);
  const Vec3 L{a.L, a.L, a.L};
  const std::array<Complex, 3> ks{Complex{a.kshift[0], a.kshift[1]},
                                  Complex{a.kshift[2], a.kshift[3]},
                                  Complex{a.kshift[4], a.kshift[5]}};
  PeriodicityConfig cfg;
  if (a.regime == "npsp") {
    cfg = PeriodicityConfig::npsp(dim, L);
  } else if (a.regime == "static") {
    cfg = PeriodicityConfig::static_shifted(dim, L, ks);
  } else {
    cfg = PeriodicityConfig::dynamic(dim, L, {a.k0_re, a.k0_im}, ks);
  }
  const auto rows = run_convergence(cfg, {a.x, a.y, a.z}, a.max_m);
  emit(a.output, out, [&](std::ostream& o) {
    o << "m,partial_re,partial_im,rel_error\n";
    for (const auto& r : rows) {
      o << r.m << ',' << format_double(r.partial.real()) << ','
        << format_double(r.partial.imag()) << ','
        << format_double(r.rel_error) << '\n';
    }
  });
  return kExitOk;
}

// Defaults of the error study: 1D lattice case, 50^3 box, L_x = 50.
const KeyValues& error_study_defaults() {
  static const KeyValues kv = {{"dim", "1"},  {"Lx", "50"}, {"Dx", "50"},
                               {"Dy", "50"}, {"Dz", "50"}, {"i_d", "1"}};
  return kv;
}

// Defaults of the benchmark: 3D lattice case, D = 100, L = 101.
const KeyValues& bench_defaults() {
  static const KeyValues kv = {{"dim", "3"},   {"Lx", "101"}, {"Ly", "101"},
                               {"Lz", "101"},  {"Dx", "100"}, {"Dy", "100"},
                               {"Dz", "100"}};
  return kv;
}

struct ErrorStudyArgs {
  std::string orders = "1,3,6";
  std::string grids = "10";
  std::string ids = "1";
  std::string near = "exact";
  std::size_t num_sources = 7000;
  std::size_t num_observers = 189;
  std::size_t max_points = 20000;
  std::uint64_t seed = 1;
  std::string output;

  void attach(CLI::App* cmd) {
    cmd->add_option("--orders", orders, "Far interpolation orders");
    cmd->add_option("--grids", grids, "Far grid sizes (cubic)");
    cmd->add_option("--ids", ids, "Near-image half-widths");
    cmd->add_option("--near", near, "exact: direct near images; grid: FFT path")
        ->check(CLI::IsMember({"exact", "grid"}));
    cmd->add_option("--num-sources", num_sources);
    cmd->add_option("--num-observers", num_observers);
    cmd->add_option("--max-points", max_points, "Oracle size cap");
    cmd->add_option("--seed", seed);
    cmd->add_option("--output", output, "CSV path (default stdout)");
  }
};

int cmd_error_study(CLI::App* cmd, const ProblemArgs& pa,
                    const ErrorStudyArgs& a, std::ostream& out) {
  const Problem p = pa.resolve(cmd, error_study_defaults());
  const SourcePointSet src =
      p.sources_path.empty()
          ? random_neutral_sources(a.num_sources, p.box, a.seed, true)
          : read_sources_csv(p.sources_path);
  const ObserverPointSet obs =
      p.observers_path.empty()
          ? random_observers(a.num_observers, p.box, a.seed + 1)
          : read_observers_csv(p.observers_path);
  ErrorStudyOptions opt;
  opt.orders = parse_int_list(a.orders, "order");
  opt.grids = parse_int_list(a.grids, "grid");
  opt.i_ds = parse_int_list(a.ids, "i_d");
  opt.near = a.near == "grid" ? NearMode::Grid : NearMode::Exact;
  opt.max_points = a.max_points;
  const auto rows = run_error_study(p.config, p.box, src, obs, p.params, opt);
  emit(a.output, out, [&](std::ostream& o) {
    o << "order,grid,i_d,max_rel_error,far_rel_error\n";
    for (const auto& r : rows) {
      o << r.order << ',' << r.grid << ',' << r.i_d << ','
        << format_double(r.total_error) << ',' << format_double(r.far_error)
        << '\n';
    }
  });
  return kExitOk;
}

struct BenchArgs {
  std::string sizes = "10000,20000,40000,80000";
  int repeats = 5;
  std::uint64_t seed = 7;
  std::string output;

  void attach(CLI::App* cmd) {
    cmd->add_option("--sizes", sizes, "Point counts");
    cmd->add_option("--repeats", repeats)->check(CLI::Range(1, 1000));
    cmd->add_option("--seed", seed);
    cmd->add_option("--output", output, "CSV path (default stdout)");
  }
};

int cmd_bench(CLI::App* cmd, const ProblemArgs& pa, const BenchArgs& a,
              std::ostream& out) {
  const Problem p = pa.resolve(cmd, bench_defaults());
  BenchOptions opt;
  opt.sizes.clear();
  for (int n : parse_int_list(a.sizes, "size")) {
    if (n < 1) throw InvalidArgument("sizes must be positive");
    opt.sizes.push_back(static_cast<std::size_t>(n));
  }
  opt.repeats = a.repeats;
  opt.seed = a.seed;
  const auto rows = run_bench(p.config, p.box, p.params, opt);
  emit(a.output, out, [&](std::ostream& o) {
    o << "N,near_grid,build_ms,eval_ms,near_eval_ms,far_eval_ms,"
         "nonperiodic_build_ms,nonperiodic_eval_ms,periodic_overhead_ratio,"
         "build_overhead_ratio\n";
    for (const auto& r : rows) {
      o << r.n << ',' << r.near_grid << ',' << format_double(r.build_ms)
        << ',' << format_double(r.eval_ms) << ','
        << format_double(r.near_eval_ms) << ','
        << format_double(r.far_eval_ms) << ','
        << format_double(r.nonperiodic_build_ms) << ','
        << format_double(r.nonperiodic_eval_ms) << ','
        << format_double(r.eval_overhead) << ','
        << format_double(r.build_overhead) << '\n';
    }
  });
  return kExitOk;
}

struct CoaxArgs {
  CoaxSpec spec;
  std::size_t num_observers = 0;
  std::string output;
  std::string observers_output;

  void attach(CLI::App* cmd) {
    cmd->add_option("--r1", spec.r1, "Inner radius");
    cmd->add_option("--r2", spec.r2, "Outer radius");
    cmd->add_option("--rho1", spec.rho1, "Inner surface charge density");
    cmd->add_option("--rho2", spec.rho2, "Outer surface charge density");
    cmd->add_option("--length", spec.length, "Axial length (period)");
    cmd->add_option("--points-per-shell", spec.points_per_shell);
    cmd->add_option("--output", output, "Sources CSV (default stdout)");
    cmd->add_option("--observers-output", observers_output,
                    "Also write on-axis observers here");
    cmd->add_option("--num-observers", num_observers,
                    "On-axis observer count (default 101)");
  }
};

int cmd_gen_coax(const CoaxArgs& a, std::ostream& out, std::ostream& err) {
  const SourcePointSet src = coax_sources(a.spec);
  emit(a.output, out, [&](std::ostream& o) { write_sources_csv(o, src); });
  if (!a.observers_output.empty()) {
    const std::size_t n = a.num_observers > 0 ? a.num_observers : 101;
    write_observers_csv(a.observers_output, coax_axis_observers(a.spec, n));
  }
  const TargetBox box = coax_box(a.spec);
  err << src.size() << " sources; box Dx = " << format_double(box.D.x)
      << ", Dy = " << format_double(box.D.y)
      << ", Dz = " << format_double(box.D.z) << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Periodic scalar potentials by the FFT periodic interpolation "
               "method"};
  app.name("pim");
  app.require_subcommand(1);

  CLI::App* solve = app.add_subcommand("solve", "Evaluate u = u_near + u_far");
  ProblemArgs solve_args;
  solve_args.attach(solve, true);

  CLI::App* conv =
      app.add_subcommand("convergence", "Partial-sum errors of the PGF series");
  ConvergenceArgs conv_args;
  conv_args.attach(conv);

  CLI::App* study = app.add_subcommand(
      "error-study", "Fast path against the direct oracle over a sweep");
  ProblemArgs study_problem;
  ErrorStudyArgs study_args;
  study_problem.attach(study);
  study_args.attach(study);

  CLI::App* bench = app.add_subcommand(
      "bench", "Build/eval timings against the non-periodic engine");
  ProblemArgs bench_problem;
  BenchArgs bench_args;
  bench_problem.attach(bench);
  bench_args.attach(bench);

  CLI::App* coax =
      app.add_subcommand("gen-coax", "Write a coaxial two-shell source cloud");
  CoaxArgs coax_args;
  coax_args.attach(coax);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*solve) return cmd_solve(solve, solve_args, out, err);
    if (*conv) return cmd_convergence(conv_args, out);
    if (*study) return cmd_error_study(study, study_problem, study_args, out);
    if (*bench) return cmd_bench(bench, bench_problem, bench_args, out);
    if (*coax) return cmd_gen_coax(coax_args, out, err);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const WoodAnomaly& e) {
    err << "Wood anomaly: " << e.what() << "\n";
    return kExitPgf;
  } catch (const NotConverged& e) {
    err << "series did not converge: " << e.what() << "\n";
    return kExitPgf;
  } catch (const DomainError& e) {
    err << "singular kernel argument: " << e.what() << "\n";
    return kExitPgf;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPgf;
  }
  return kExitValidation;
}

}  // namespace pim::cli
