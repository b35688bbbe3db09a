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

#include "pim/near_zone.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <sstream>

#include "kernels.hpp"
#include "pim/error.hpp"
#include "pim/pgf.hpp"

namespace pim {

namespace {

bool is_zero_offset(const ImageOffset& o) {
  return o[0] == 0 && o[1] == 0 && o[2] == 0;
}

Vec3 offset_vector(const ImageOffset& o, const Vec3& L) {
  return {o[0] * L.x, o[1] * L.y, o[2] * L.z};
}

double max_spacing(const UniformGrid& g) {
  return std::max({g.spacing.x, g.spacing.y, g.spacing.z});
}

// Full displacement window [-(N-1), N-1] on active axes.
DisplacementTable full_window(const UniformGrid& g) {
  DisplacementTable t;
  for (int a = 0; a < 3; ++a) {
    t.lo[a] = -(g.dims[a] - 1);
    t.n[a] = 2 * g.dims[a] - 1;
  }
  t.values.assign(static_cast<std::size_t>(t.n[0]) * t.n[1] * t.n[2], {});
  return t;
}

template <typename F>
void fill_table(DisplacementTable& t, const UniformGrid& g, F&& value_at) {
  const std::size_t total = t.values.size();
  std::vector<std::exception_ptr> errors(total);
  bool failed = false;
#pragma omp parallel for schedule(static) reduction(|| : failed)
  for (std::size_t idx = 0; idx < total; ++idx) {
    const int dz = static_cast<int>(idx % t.n[2]) + t.lo[2];
    const int dy = static_cast<int>((idx / t.n[2]) % t.n[1]) + t.lo[1];
    const int dx =
        static_cast<int>(idx / (static_cast<std::size_t>(t.n[1]) * t.n[2])) +
        t.lo[0];
    const Vec3 d{dx * g.spacing.x, dy * g.spacing.y, dz * g.spacing.z};
    try {
      t.values[idx] = value_at(d);
    } catch (...) {
      errors[idx] = std::current_exception();
      failed = true;
    }
  }
  if (failed) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (errors[idx]) rethrow_with_context(errors[idx], "near kernel table: ");
    }
  }
}

// sum_{m', n'} w_o(m') T(m' - n') w_s(n')
Complex bilinear(const Stencil& so, const Stencil& ss,
                 const DisplacementTable& t) {
  for (int a = 0; a < 3; ++a) {
    const int dmin = so.axis[a].start - (ss.axis[a].start + ss.axis[a].count - 1);
    const int dmax = so.axis[a].start + so.axis[a].count - 1 - ss.axis[a].start;
    if (dmin < t.lo[a] || dmax >= t.lo[a] + t.n[a]) {
      throw Error("internal: grid displacement outside the kernel table");
    }
  }
  Complex acc{0.0, 0.0};
  for (int i = 0; i < so.axis[0].count; ++i) {
    for (int j = 0; j < so.axis[1].count; ++j) {
      for (int k = 0; k < so.axis[2].count; ++k) {
        const int mi = so.axis[0].start + i;
        const int mj = so.axis[1].start + j;
        const int mk = so.axis[2].start + k;
        detail::Acc inner;
        for (int i2 = 0; i2 < ss.axis[0].count; ++i2) {
          for (int j2 = 0; j2 < ss.axis[1].count; ++j2) {
            const double wij = ss.axis[0].w[i2] * ss.axis[1].w[j2];
            const std::size_t base =
                t.index(mi - ss.axis[0].start - i2, mj - ss.axis[1].start - j2,
                        mk - ss.axis[2].start);
            // Displacement along z decreases as k2 grows.
            for (int k2 = 0; k2 < ss.axis[2].count; ++k2) {
              inner.mac(wij * ss.axis[2].w[k2], t.values[base - k2]);
            }
          }
        }
        acc += (so.axis[0].w[i] * so.axis[1].w[j] * so.axis[2].w[k]) *
               inner.value();
      }
    }
  }
  return acc;
}

std::string describe_pair(std::size_t m, std::size_t n) {
  return "observer #" + std::to_string(m) + " and source #" + std::to_string(n);
}

// G_near(r) dropping an exactly coincident zeroth image (the excluded self
// term); a coincident nonzero image is a genuine singularity.
Complex near_kernel_regularised(const PeriodicityConfig& cfg, int i_d,
                                const Vec3& r, double radius, std::size_t m,
                                std::size_t n) {
  const int hx = cfg.is_periodic(0) ? i_d : 0;
  const int hy = cfg.is_periodic(1) ? i_d : 0;
  const int hz = cfg.is_periodic(2) ? i_d : 0;
  Complex sum{0.0, 0.0};
  for (int ix = -hx; ix <= hx; ++ix) {
    for (int iy = -hy; iy <= hy; ++iy) {
      for (int iz = -hz; iz <= hz; ++iz) {
        const Vec3 d = r - Vec3{ix * cfg.L.x, iy * cfg.L.y, iz * cfg.L.z};
        if (d.norm() <= radius) {
          if (ix == 0 && iy == 0 && iz == 0) continue;
          throw DomainError(describe_pair(m, n) +
                            " coincide through a periodic image");
        }
        sum += cfg.image_phase(ix, iy, iz) * g0(d, cfg.k0);
      }
    }
  }
  return sum;
}

}  // namespace

std::size_t NearZonePlan::box_of(const Vec3& p) const {
  int b[3];
  for (int a = 0; a < 3; ++a) {
    if (box_dims[a] == 1 || grid.spacing[a] == 0.0) {
      b[a] = 0;
      continue;
    }
    const double t = (p[a] - grid.origin[a]) / grid.spacing[a];
    b[a] = std::clamp(static_cast<int>(std::floor(t)), 0, box_dims[a] - 1);
  }
  return (static_cast<std::size_t>(b[0]) * box_dims[1] + b[1]) * box_dims[2] +
         b[2];
}

NearZonePlan build_near_plan(
    const PeriodicityConfig& config, const TargetBox& box,
    const SourcePointSet& src, const ObserverPointSet& obs,
    const SolverParams& params,
    std::shared_ptr<const SpectralTransformProvider> provider) {
  if (!provider) throw InvalidArgument("no transform provider");
  if (params.i_d < 0) throw InvalidArgument("i_d must be >= 0");
  if (params.er_range_boxes < 1) {
    throw InvalidArgument("er_range_boxes must be >= 1");
  }
  NearZonePlan plan;
  plan.config = config;
  plan.i_d = params.i_d;
  plan.er_range_boxes = params.er_range_boxes;
  plan.correction = params.near_correction;
  plan.provider = std::move(provider);

  const GridDims dims = resolve_near_grid(
      params, box, std::max(src.positions.size(), obs.positions.size()),
      config);
  plan.grid = build_near_grid(box, dims);
  const UniformGrid& g = plan.grid;
  const double hmax = max_spacing(g);
  const double reach = params.er_range_boxes * hmax;
  plan.coincidence_radius = 1e-8 * (hmax > 0.0 ? hmax : config.max_period());

  const bool wrap = params.i_d >= 1;
  for (int a = 0; a < config.periodic_axes() && wrap; ++a) {
    if (!(2.0 * reach < config.L[a])) {
      std::ostringstream os;
      os << "correction range too large: 2 * " << reach
         << " >= L on axis " << a;
      throw InvalidArgument(os.str());
    }
  }

  plan.proj = SparseInterpOperator(g, src.positions, params.near_order,
                                   SparseInterpOperator::Direction::Project);
  plan.interp =
      SparseInterpOperator(g, obs.positions, params.near_order,
                           SparseInterpOperator::Direction::Interpolate);

  // Kernel table and its circulant embedding.
  const double radius = plan.coincidence_radius;
  const std::array<int, 3> hw{params.i_d, params.i_d, params.i_d};
  plan.kernel = full_window(g);
  fill_table(plan.kernel, g, [&](const Vec3& d) {
    return pgf_image_sum_excluding_origin(d, config, hw, radius);
  });
  for (int a = 0; a < 3; ++a) {
    // Any size >= 2N - 1 avoids wrap-around; a 7-smooth one keeps the
    // transform fast when 2N has a large prime factor.
    plan.fft_dims[a] =
        g.dims[a] > 1 ? detail::next_smooth_size(2 * g.dims[a]) : 1;
  }
  const GridDims M = plan.fft_dims;
  plan.kernel_hat.assign(static_cast<std::size_t>(M[0]) * M[1] * M[2], {});
  {
    const DisplacementTable& t = plan.kernel;
    for (int dx = t.lo[0]; dx < t.lo[0] + t.n[0]; ++dx) {
      const int ix = (dx + M[0]) % M[0];
      for (int dy = t.lo[1]; dy < t.lo[1] + t.n[1]; ++dy) {
        const int iy = (dy + M[1]) % M[1];
        for (int dz = t.lo[2]; dz < t.lo[2] + t.n[2]; ++dz) {
          const int iz = (dz + M[2]) % M[2];
          plan.kernel_hat[(static_cast<std::size_t>(ix) * M[1] + iy) * M[2] +
                          iz] = t.at(dx, dy, dz);
        }
      }
    }
  }
  plan.provider->prepare(M);
  plan.provider->forward(plan.kernel_hat, M);

  // Boxes.
  for (int a = 0; a < 3; ++a) {
    plan.box_dims[a] = g.dims[a] > 1 ? g.dims[a] - 1 : 1;
  }
  const std::size_t nb = plan.num_boxes();
  {
    std::vector<std::uint32_t> src_box(src.positions.size());
    plan.box_src_ptr.assign(nb + 1, 0);
    for (std::size_t n = 0; n < src.positions.size(); ++n) {
      src_box[n] = static_cast<std::uint32_t>(plan.box_of(src.positions[n]));
      ++plan.box_src_ptr[src_box[n] + 1];
    }
    for (std::size_t b = 0; b < nb; ++b) {
      plan.box_src_ptr[b + 1] += plan.box_src_ptr[b];
    }
    plan.box_src.resize(src.positions.size());
    std::vector<std::size_t> fill(plan.box_src_ptr.begin(),
                                  plan.box_src_ptr.end() - 1);
    for (std::size_t n = 0; n < src.positions.size(); ++n) {
      plan.box_src[fill[src_box[n]]++] = static_cast<std::uint32_t>(n);
    }
  }
  plan.observer_box.resize(obs.positions.size());
  for (std::size_t m = 0; m < obs.positions.size(); ++m) {
    plan.observer_box[m] =
        static_cast<std::uint32_t>(plan.box_of(obs.positions[m]));
  }

  // Neighbor map: per-axis candidates, then their product.
  const double limit = reach * (1.0 - 1e-9);
  auto axis_candidates = [&](int a, int b) {
    std::vector<std::pair<int, int>> out;  // (box index, image index)
    const int nba = plan.box_dims[a];
    const double h = g.spacing[a];
    const bool periodic_axis = config.is_periodic(a) && wrap;
    for (int o = periodic_axis ? -1 : 0; o <= (periodic_axis ? 1 : 0); ++o) {
      for (int bs = 0; bs < nba; ++bs) {
        double gap;
        if (o == 0) {
          gap = std::max(0, std::abs(bs - b) - 1) * h;
        } else {
          const double lo1 = b * h;
          const double hi1 = nba == 1 && h == 0.0 ? 0.0 : (b + 1) * h;
          const double lo2 = bs * h + o * config.L[a];
          const double hi2 = (nba == 1 && h == 0.0 ? 0.0 : (bs + 1) * h) +
                             o * config.L[a];
          gap = std::max({0.0, lo2 - hi1, lo1 - hi2});
        }
        if ((o == 0 && gap == 0.0) || gap < limit) out.emplace_back(bs, o);
      }
    }
    return out;
  };
  plan.neighbor_ptr.assign(nb + 1, 0);
  std::set<ImageOffset> used_offsets;
  for (std::size_t b = 0; b < nb; ++b) {
    const int bz = static_cast<int>(b % plan.box_dims[2]);
    const int by = static_cast<int>((b / plan.box_dims[2]) % plan.box_dims[1]);
    const int bx = static_cast<int>(b / (static_cast<std::size_t>(
                                             plan.box_dims[1]) *
                                         plan.box_dims[2]));
    const auto cx = axis_candidates(0, bx);
    const auto cy = axis_candidates(1, by);
    const auto cz = axis_candidates(2, bz);
    for (const auto& [sx, ox] : cx) {
      for (const auto& [sy, oy] : cy) {
        for (const auto& [sz, oz] : cz) {
          const std::size_t sb =
              (static_cast<std::size_t>(sx) * plan.box_dims[1] + sy) *
                  plan.box_dims[2] +
              sz;
          const ImageOffset o{ox, oy, oz};
          plan.neighbors.push_back({static_cast<std::uint32_t>(sb), o});
          used_offsets.insert(o);
        }
      }
    }
    plan.neighbor_ptr[b + 1] = plan.neighbors.size();
  }

  // Single-image tables over the displacement windows each offset can reach.
  if (plan.correction == NearCorrection::SingleImage) {
    for (const ImageOffset& o : used_offsets) {
      DisplacementTable t;
      for (int a = 0; a < 3; ++a) {
        if (g.dims[a] == 1) {
          t.lo[a] = 0;
          t.n[a] = 1;
          continue;
        }
        const double h = g.spacing[a];
        const double centre = o[a] * config.L[a] / h;
        const double w = std::ceil(reach / h) + params.near_order + 3;
        const int lo = std::max(-(g.dims[a] - 1),
                                static_cast<int>(std::floor(centre - w)));
        const int hi = std::min(g.dims[a] - 1,
                                static_cast<int>(std::ceil(centre + w)));
        t.lo[a] = lo;
        t.n[a] = std::max(0, hi - lo + 1);
      }
      t.values.assign(static_cast<std::size_t>(t.n[0]) * t.n[1] * t.n[2], {});
      const Vec3 shift = offset_vector(o, config.L);
      const Complex phase = config.image_phase(o[0], o[1], o[2]);
      fill_table(t, g, [&](const Vec3& d) -> Complex {
        const Vec3 r = d - shift;
        if (r.norm() <= radius) return {0.0, 0.0};
        return phase * g0(r, config.k0);
      });
      plan.image_tables.emplace(o, std::move(t));
    }
  }

  // Precorrection coefficients, one sparse row per observer.
  const std::size_t nobs = obs.positions.size();
  std::vector<std::vector<std::pair<std::uint32_t, Complex>>> rows(nobs);
  std::vector<std::exception_ptr> errors(nobs);
  bool failed = false;
  const auto& so = plan.interp.stencils();
  const auto& ss = plan.proj.stencils();
#pragma omp parallel for schedule(dynamic, 64) reduction(|| : failed)
  for (std::size_t m = 0; m < nobs; ++m) {
    try {
      auto& row = rows[m];
      const Vec3& rm = obs.positions[m];
      const std::size_t b = plan.observer_box[m];
      if (plan.correction == NearCorrection::SingleImage) {
        for (std::size_t k = plan.neighbor_ptr[b]; k < plan.neighbor_ptr[b + 1];
             ++k) {
          const NeighborBox& nbx = plan.neighbors[k];
          const DisplacementTable& t = plan.image_tables.at(nbx.offset);
          const Vec3 shift = offset_vector(nbx.offset, config.L);
          const Complex phase =
              config.image_phase(nbx.offset[0], nbx.offset[1], nbx.offset[2]);
          for (std::size_t s = plan.box_src_ptr[nbx.box];
               s < plan.box_src_ptr[nbx.box + 1]; ++s) {
            const std::uint32_t n = plan.box_src[s];
            const Vec3 r = rm - src.positions[n] - shift;
            Complex direct{0.0, 0.0};
            if (r.norm() <= radius) {
              if (!is_zero_offset(nbx.offset)) {
                throw DomainError(describe_pair(m, n) +
                                  " coincide through a periodic image");
              }
            } else {
              direct = phase * g0(r, config.k0);
            }
            row.emplace_back(n, direct - bilinear(so[m], ss[n], t));
          }
        }
      } else {
        std::vector<std::uint32_t> boxes;
        for (std::size_t k = plan.neighbor_ptr[b]; k < plan.neighbor_ptr[b + 1];
             ++k) {
          boxes.push_back(plan.neighbors[k].box);
        }
        std::sort(boxes.begin(), boxes.end());
        boxes.erase(std::unique(boxes.begin(), boxes.end()), boxes.end());
        for (std::uint32_t sb : boxes) {
          for (std::size_t s = plan.box_src_ptr[sb];
               s < plan.box_src_ptr[sb + 1]; ++s) {
            const std::uint32_t n = plan.box_src[s];
            const Complex direct = near_kernel_regularised(
                config, params.i_d, rm - src.positions[n], radius, m, n);
            row.emplace_back(n, direct - bilinear(so[m], ss[n], plan.kernel));
          }
        }
      }
      // Merge repeated sources so each row is sorted and duplicate free.
      std::stable_sort(row.begin(), row.end(), [](const auto& x, const auto& y) {
        return x.first < y.first;
      });
      std::size_t w = 0;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (w > 0 && row[w - 1].first == row[i].first) {
          row[w - 1].second += row[i].second;
        } else {
          row[w++] = row[i];
        }
      }
      row.resize(w);
    } catch (...) {
      errors[m] = std::current_exception();
      failed = true;
    }
  }
  if (failed) {
    for (std::size_t m = 0; m < nobs; ++m) {
      if (errors[m]) rethrow_with_context(errors[m], "near correction: ");
    }
  }
  plan.corr_ptr.assign(nobs + 1, 0);
  for (std::size_t m = 0; m < nobs; ++m) {
    plan.corr_ptr[m + 1] = plan.corr_ptr[m] + rows[m].size();
  }
  plan.corr_src.resize(plan.corr_ptr[nobs]);
  plan.corr_val.resize(plan.corr_ptr[nobs]);
  for (std::size_t m = 0; m < nobs; ++m) {
    std::size_t k = plan.corr_ptr[m];
    for (const auto& [n, c] : rows[m]) {
      plan.corr_src[k] = n;
      plan.corr_val[k] = c;
      ++k;
    }
  }
  return plan;
}

std::vector<Complex> near_grid_convolve(const NearZonePlan& plan,
                                        const std::vector<Complex>& q_grid) {
  const UniformGrid& g = plan.grid;
  if (q_grid.size() != g.size()) {
    throw InvalidArgument("near_grid_convolve(): grid array has the wrong size");
  }
  const GridDims M = plan.fft_dims;
  std::vector<Complex> buf(plan.kernel_hat.size());
  for (int l = 0; l < g.dims[0]; ++l) {
    for (int p = 0; p < g.dims[1]; ++p) {
      const std::size_t dst = (static_cast<std::size_t>(l) * M[1] + p) * M[2];
      std::copy_n(q_grid.begin() + g.index(l, p, 0), g.dims[2],
                  buf.begin() + dst);
    }
  }
  plan.provider->forward(buf, M);
  const std::size_t total = buf.size();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < total; ++i) {
    buf[i] = detail::mul(buf[i], plan.kernel_hat[i]);
  }
  plan.provider->inverse(buf, M);
  std::vector<Complex> u(g.size());
  for (int l = 0; l < g.dims[0]; ++l) {
    for (int p = 0; p < g.dims[1]; ++p) {
      const std::size_t src = (static_cast<std::size_t>(l) * M[1] + p) * M[2];
      std::copy_n(buf.begin() + src, g.dims[2], u.begin() + g.index(l, p, 0));
    }
  }
  return u;
}

std::vector<Complex> near_grid_convolve_direct(
    const NearZonePlan& plan, const std::vector<Complex>& q_grid) {
  const UniformGrid& g = plan.grid;
  if (q_grid.size() != g.size()) {
    throw InvalidArgument(
        "near_grid_convolve_direct(): grid array has the wrong size");
  }
  std::vector<Complex> u(g.size());
  const std::size_t total = g.size();
#pragma omp parallel for schedule(static)
  for (std::size_t o = 0; o < total; ++o) {
    const auto io = g.unravel(o);
    detail::Acc acc;
    for (std::size_t s = 0; s < total; ++s) {
      const auto is = g.unravel(s);
      acc.mac(plan.kernel.at(io[0] - is[0], io[1] - is[1], io[2] - is[2]),
              q_grid[s]);
    }
    u[o] = acc.value();
  }
  return u;
}

Complex grid_green(const NearZonePlan& plan, std::size_t m, std::size_t n) {
  return bilinear(plan.interp.stencils().at(m), plan.proj.stencils().at(n),
                  plan.kernel);
}

Complex grid_green_image(const NearZonePlan& plan, std::size_t m,
                         std::size_t n, const ImageOffset& offset) {
  auto it = plan.image_tables.find(offset);
  if (it == plan.image_tables.end()) {
    throw InvalidArgument("no single-image table for this offset");
  }
  return bilinear(plan.interp.stencils().at(m), plan.proj.stencils().at(n),
                  it->second);
}

Complex near_kernel(const NearZonePlan& plan, const Vec3& r) {
  return pgf_image_sum(r, plan.config, {plan.i_d, plan.i_d, plan.i_d});
}

std::vector<Complex> eval_near(const NearZonePlan& plan,
                               const std::vector<Complex>& q) {
  const std::vector<Complex> q_grid = project(plan.proj, q);
  std::vector<Complex> u =
      interpolate(plan.interp, near_grid_convolve(plan, q_grid));
  const std::size_t nobs = u.size();
#pragma omp parallel for schedule(static)
  for (std::size_t m = 0; m < nobs; ++m) {
    detail::Acc acc;
    for (std::size_t k = plan.corr_ptr[m]; k < plan.corr_ptr[m + 1]; ++k) {
      acc.mac(plan.corr_val[k], q[plan.corr_src[k]]);
    }
    u[m] += acc.value();
  }
  return u;
}

}  // namespace pim
