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

#include "pim_cli/points_csv.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "pim/error.hpp"

namespace pim::cli {

namespace {

// Splits one CSV row into exactly `n` doubles.
template <std::size_t N>
std::array<double, N> parse_row(const std::string& line,
                                const std::string& where) {
  std::array<double, N> out{};
  const char* p = line.data();
  const char* end = p + line.size();
  if (end > p && end[-1] == '\r') --end;
  for (std::size_t i = 0; i < N; ++i) {
    while (p < end && *p == ' ') ++p;
    const auto [q, ec] = std::from_chars(p, end, out[i]);
    if (ec != std::errc()) {
      throw InvalidArgument(where + ": expected " + std::to_string(N) +
                            " numeric columns");
    }
    p = q;
    while (p < end && *p == ' ') ++p;
    if (i + 1 < N) {
      if (p == end || *p != ',') {
        throw InvalidArgument(where + ": expected " + std::to_string(N) +
                              " columns");
      }
      ++p;
    }
  }
  if (p != end) throw InvalidArgument(where + ": trailing data");
  return out;
}

template <std::size_t N, typename F>
void read_rows(std::istream& in, const std::string& origin,
               const std::string& header, F&& row) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidArgument(origin + ": missing header '" + header + "'");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw InvalidArgument(origin + ": header must be '" + header + "'");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    row(parse_row<N>(line, origin + ":" + std::to_string(lineno)));
  }
  if (in.bad()) throw IoError(origin + ": read error");
}

void put_point(std::ostream& out, const Vec3& p) {
  out << format_double(p.x) << ',' << format_double(p.y) << ','
      << format_double(p.z);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

template <typename F>
void write_file(const std::string& path, F&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create '" + path + "'");
  body(out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                               std::chars_format::general, 17);
  return std::string(buf.data(), r.ptr);
}

SourcePointSet read_sources_csv(std::istream& in, const std::string& origin) {
  SourcePointSet src;
  read_rows<5>(in, origin, "x,y,z,q_re,q_im", [&](const auto& r) {
    src.positions.push_back({r[0], r[1], r[2]});
    src.amplitudes.emplace_back(r[3], r[4]);
  });
  return src;
}

ObserverPointSet read_observers_csv(std::istream& in,
                                    const std::string& origin) {
  ObserverPointSet obs;
  read_rows<3>(in, origin, "x,y,z", [&](const auto& r) {
    obs.positions.push_back({r[0], r[1], r[2]});
  });
  return obs;
}

void write_sources_csv(std::ostream& out, const SourcePointSet& src) {
  out << "x,y,z,q_re,q_im\n";
  for (std::size_t i = 0; i < src.size(); ++i) {
    put_point(out, src.positions[i]);
    out << ',' << format_double(src.amplitudes[i].real()) << ','
        << format_double(src.amplitudes[i].imag()) << '\n';
  }
}

void write_observers_csv(std::ostream& out, const ObserverPointSet& obs) {
  out << "x,y,z\n";
  for (const Vec3& p : obs.positions) {
    put_point(out, p);
    out << '\n';
  }
}

void write_potential_csv(std::ostream& out, const ObserverPointSet& obs,
                         const std::vector<Complex>& u) {
  if (u.size() != obs.size()) {
    throw InvalidArgument("potential and observer counts differ");
  }
  out << "x,y,z,u_re,u_im\n";
  for (std::size_t i = 0; i < obs.size(); ++i) {
    put_point(out, obs.positions[i]);
    out << ',' << format_double(u[i].real()) << ','
        << format_double(u[i].imag()) << '\n';
  }
}

SourcePointSet read_sources_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_sources_csv(in, path);
}

ObserverPointSet read_observers_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_observers_csv(in, path);
}

void write_sources_csv(const std::string& path, const SourcePointSet& src) {
  write_file(path, [&](std::ostream& o) { write_sources_csv(o, src); });
}

void write_observers_csv(const std::string& path,
                         const ObserverPointSet& obs) {
  write_file(path, [&](std::ostream& o) { write_observers_csv(o, obs); });
}

void write_potential_csv(const std::string& path, const ObserverPointSet& obs,
                         const std::vector<Complex>& u) {
  write_file(path, [&](std::ostream& o) { write_potential_csv(o, obs, u); });
}

}  // namespace pim::cli
