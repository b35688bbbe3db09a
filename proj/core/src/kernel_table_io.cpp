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

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "pim/error.hpp"
#include "pim/far_zone.hpp"

namespace pim {

namespace {

constexpr char kMagic[4] = {'P', 'I', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 64;

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void f64(double v) {
    // Hash the little-endian bit pattern so the value is host independent.
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    u64(bits);
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void c(Complex z) {
    f64(z.real());
    f64(z.imag());
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

void put_u32(unsigned char* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
void put_u64(unsigned char* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::array<unsigned char, kHeaderBytes> make_header(const FarZonePlan& plan) {
  std::array<unsigned char, kHeaderBytes> h{};
  std::memcpy(h.data(), kMagic, 4);
  put_u32(h.data() + 4, kVersion);
  for (int a = 0; a < 3; ++a) {
    put_u32(h.data() + 8 + 4 * a,
            static_cast<std::uint32_t>(plan.source_grid.dims[a]));
  }
  put_u32(h.data() + 20, static_cast<std::uint32_t>(plan.config.regime));
  put_u32(h.data() + 24, static_cast<std::uint32_t>(plan.config.dim));
  put_u32(h.data() + 28, static_cast<std::uint32_t>(plan.i_d));
  put_u64(h.data() + 32, far_kernel_hash(plan));
  const std::uint64_t count = static_cast<std::uint64_t>(plan.kernel_dims[0]) *
                              plan.kernel_dims[1] * plan.kernel_dims[2];
  put_u64(h.data() + 40, count);
  return h;
}

}  // namespace

std::uint64_t far_kernel_hash(const FarZonePlan& plan) {
  Fnv1a h;
  const PeriodicityConfig& c = plan.config;
  h.u64(static_cast<std::uint64_t>(c.dim));
  h.u64(static_cast<std::uint64_t>(c.regime));
  for (int a = 0; a < 3; ++a) h.f64(c.L[a]);
  h.c(c.k0);
  for (int a = 0; a < 3; ++a) h.c(c.kshift[a]);
  h.u64(static_cast<std::uint64_t>(plan.i_d));
  h.f64(plan.series_tol);
  for (const UniformGrid* g : {&plan.source_grid, &plan.observer_grid}) {
    for (int a = 0; a < 3; ++a) {
      h.u64(static_cast<std::uint64_t>(g->dims[a]));
      h.f64(g->origin[a]);
      h.f64(g->spacing[a]);
    }
  }
  return h.value();
}

void export_far_kernel(const FarZonePlan& plan, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const auto header = make_header(plan);
  out.write(reinterpret_cast<const char*>(header.data()), header.size());
  unsigned char buf[16];
  for (const Complex& z : plan.kernel) {
    put_u64(buf, std::bit_cast<std::uint64_t>(z.real()));
    put_u64(buf + 8, std::bit_cast<std::uint64_t>(z.imag()));
    out.write(reinterpret_cast<const char*>(buf), 16);
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<Complex> import_far_kernel(const FarZonePlan& plan,
                                       const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::array<unsigned char, kHeaderBytes> h{};
  in.read(reinterpret_cast<char*>(h.data()), h.size());
  if (!in) throw IoError("'" + path + "': truncated header");
  if (std::memcmp(h.data(), kMagic, 4) != 0) {
    throw IoError("'" + path + "': not a far-kernel table (bad magic)");
  }
  if (get_u32(h.data() + 4) != kVersion) {
    throw IoError("'" + path + "': unsupported table version " +
                  std::to_string(get_u32(h.data() + 4)));
  }
  const auto expected = make_header(plan);
  if (get_u64(h.data() + 32) != get_u64(expected.data() + 32) ||
      std::memcmp(h.data(), expected.data(), kHeaderBytes) != 0) {
    throw IoError("'" + path +
                  "': table was built for a different configuration");
  }
  const std::uint64_t count = get_u64(h.data() + 40);
  std::vector<Complex> kernel(count);
  unsigned char buf[16];
  for (std::uint64_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(buf), 16);
    if (!in) throw IoError("'" + path + "': truncated payload");
    kernel[i] = {std::bit_cast<double>(get_u64(buf)),
                 std::bit_cast<double>(get_u64(buf + 8))};
  }
  return kernel;
}

}  // namespace pim
