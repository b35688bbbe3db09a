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

#include "pim_cli/problem.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pim/error.hpp"
#include "pim_cli/points_csv.hpp"

namespace pim::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& v) {
  throw InvalidArgument("bad value for '" + key + "': '" + v + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) bad_value(key, v);
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) bad_value(key, v);
  return x;
}

// "n" or "a,b,c"
GridDims to_dims(const std::string& key, const std::string& v) {
  std::vector<int> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(to_int(key, trim(item)));
  if (parts.size() == 1) return {parts[0], parts[0], parts[0]};
  if (parts.size() != 3) bad_value(key, v);
  return {parts[0], parts[1], parts[2]};
}

std::string dims_string(const GridDims& d) {
  return std::to_string(d[0]) + "," + std::to_string(d[1]) + "," +
         std::to_string(d[2]);
}

}  // namespace

const std::vector<std::string>& problem_keys() {
  static const std::vector<std::string> keys = {
      "dim",           "Lx",           "Ly",
      "Lz",            "k0_re",        "k0_im",
      "kx0_re",        "kx0_im",       "ky0_re",
      "ky0_im",        "kz0_re",       "kz0_im",
      "regime",        "Dx",           "Dy",
      "Dz",            "i_d",          "far_order",
      "far_grid",      "near_order",   "near_grid",
      "series_tol",    "er_range_boxes", "near_correction",
      "neutrality_tol", "sources_path", "observers_path",
      "output_path",   "far_kernel_cache"};
  return keys;
}

KeyValues parse_key_values(std::istream& in, const std::string& origin) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw InvalidArgument(where + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InvalidArgument(where + ": empty key");
    if (!kv.emplace(key, value).second) {
      throw InvalidArgument(where + ": repeated key '" + key + "'");
    }
  }
  return kv;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open problem file '" + path + "'");
  return parse_key_values(in, path);
}

Problem make_problem(const KeyValues& kv) {
  const auto& keys = problem_keys();
  for (const auto& [k, v] : kv) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw InvalidArgument("unknown key '" + k + "'");
    }
  }
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string& k, double def) {
    const std::string* v = get(k);
    return v ? to_double(k, *v) : def;
  };

  Problem p;
  PeriodicityConfig& c = p.config;
  if (const std::string* v = get("dim")) {
    const int d = to_int("dim", *v);
    if (d < 1 || d > 3) bad_value("dim", *v);
    c.dim = static_cast<Periodicity>(d);
  }
  c.L = {num("Lx", 1.0), num("Ly", 1.0), num("Lz", 1.0)};
  c.k0 = {num("k0_re", 0.0), num("k0_im", 0.0)};
  c.kshift = {Complex{num("kx0_re", 0.0), num("kx0_im", 0.0)},
              Complex{num("ky0_re", 0.0), num("ky0_im", 0.0)},
              Complex{num("kz0_re", 0.0), num("kz0_im", 0.0)}};
  if (const std::string* v = get("regime")) {
    if (*v == "dynamic") {
      c.regime = Regime::Dynamic;
    } else if (*v == "static") {
      c.regime = Regime::StaticShifted;
    } else if (*v == "npsp") {
      c.regime = Regime::NPSP;
    } else {
      bad_value("regime", *v);
    }
  } else {
    bool shifted = false;
    for (int a = 0; a < c.periodic_axes(); ++a) {
      shifted = shifted || c.kshift[a] != Complex{};
    }
    c.regime = c.k0 != Complex{} ? Regime::Dynamic
               : shifted         ? Regime::StaticShifted
                                 : Regime::NPSP;
  }
  p.box.D = {num("Dx", 1.0), num("Dy", 1.0), num("Dz", 1.0)};

  SolverParams& s = p.params;
  if (const std::string* v = get("i_d")) s.i_d = to_int("i_d", *v);
  if (const std::string* v = get("far_order")) {
    s.far_order = to_int("far_order", *v);
  }
  if (const std::string* v = get("far_grid")) {
    s.far_grid = to_dims("far_grid", *v);
  }
  if (const std::string* v = get("near_order")) {
    s.near_order = to_int("near_order", *v);
  }
  if (const std::string* v = get("near_grid"); v && *v != "auto") {
    s.near_grid = to_dims("near_grid", *v);
  }
  s.series_tol = num("series_tol", s.series_tol);
  if (const std::string* v = get("er_range_boxes")) {
    s.er_range_boxes = to_int("er_range_boxes", *v);
  }
  if (const std::string* v = get("near_correction")) {
    if (*v == "single") {
      s.near_correction = NearCorrection::SingleImage;
    } else if (*v == "full") {
      s.near_correction = NearCorrection::FullImage;
    } else {
      bad_value("near_correction", *v);
    }
  }
  s.neutrality_tol = num("neutrality_tol", s.neutrality_tol);

  auto str = [&](const std::string& k) {
    const std::string* v = get(k);
    return v ? *v : std::string();
  };
  p.sources_path = str("sources_path");
  p.observers_path = str("observers_path");
  p.output_path = str("output_path");
  p.far_kernel_cache = str("far_kernel_cache");
  return p;
}

std::string format_problem(const Problem& p) {
  const PeriodicityConfig& c = p.config;
  const SolverParams& s = p.params;
  const char* regime = c.regime == Regime::Dynamic         ? "dynamic"
                       : c.regime == Regime::StaticShifted ? "static"
                                                           : "npsp";
  std::ostringstream os;
  auto put = [&](const char* k, const std::string& v) {
    os << k << " = " << v << "\n";
  };
  auto putd = [&](const char* k, double v) { put(k, format_double(v)); };
  put("dim", std::to_string(c.periodic_axes()));
  putd("Lx", c.L.x);
  putd("Ly", c.L.y);
  putd("Lz", c.L.z);
  putd("k0_re", c.k0.real());
  putd("k0_im", c.k0.imag());
  const char* names[3][2] = {
      {"kx0_re", "kx0_im"}, {"ky0_re", "ky0_im"}, {"kz0_re", "kz0_im"}};
  for (int a = 0; a < 3; ++a) {
    putd(names[a][0], c.kshift[a].real());
    putd(names[a][1], c.kshift[a].imag());
  }
  put("regime", regime);
  putd("Dx", p.box.D.x);
  putd("Dy", p.box.D.y);
  putd("Dz", p.box.D.z);
  put("i_d", std::to_string(s.i_d));
  put("far_order", std::to_string(s.far_order));
  put("far_grid", dims_string(s.far_grid));
  put("near_order", std::to_string(s.near_order));
  put("near_grid", s.near_grid ? dims_string(*s.near_grid) : "auto");
  putd("series_tol", s.series_tol);
  put("er_range_boxes", std::to_string(s.er_range_boxes));
  put("near_correction",
      s.near_correction == NearCorrection::FullImage ? "full" : "single");
  putd("neutrality_tol", s.neutrality_tol);
  if (!p.sources_path.empty()) put("sources_path", p.sources_path);
  if (!p.observers_path.empty()) put("observers_path", p.observers_path);
  if (!p.output_path.empty()) put("output_path", p.output_path);
  if (!p.far_kernel_cache.empty()) {
    put("far_kernel_cache", p.far_kernel_cache);
  }
  return os.str();
}

}  // namespace pim::cli
