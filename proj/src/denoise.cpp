#include "proxekit/denoise.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "proxekit/parallel.hpp"

namespace proxekit {

namespace {

constexpr double kLatticeStep = 0x1p-32;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void check_state(const LatentGrid& z, const Denoiser& d) {
  if (z.n != d.resolution()) throw std::invalid_argument("latent resolution mismatch");
  if (z.t < 0 || z.t > d.total_steps()) throw std::invalid_argument("timestep out of range");
}

void check_mask_resolution(const MaskSet& masks, int n) {
  if (masks.uc.n != n || masks.ed.n != n || masks.nw.n != n) {
    throw std::invalid_argument("mask resolution mismatch");
  }
}

}  // namespace

LatentGrid LatentGrid::zeros(int n) {
  LatentGrid z;
  z.n = n;
  z.t = 0;
  z.values.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  return z;
}

BlendSchedule BlendSchedule::defaults(int total) {
  BlendSchedule sched;
  sched.total = total;
  sched.t_init = total - 12;
  sched.t_warp = total - 16;
  sched.t_uc = total - 20;
  sched.validate();
  return sched;
}

void BlendSchedule::validate() const {
  if (!(0 <= t_uc && t_uc < t_warp && t_warp < t_init && t_init <= total)) {
    throw std::invalid_argument("schedule must satisfy 0 <= t_uc < t_warp < t_init <= total");
  }
}

ReferenceDenoiser::ReferenceDenoiser(const LatentGrid& condition, int total, std::uint64_t seed)
    : n_(condition.n), total_(total) {
  if (total_ < 1) throw std::invalid_argument("total steps must be >= 1");
  if (condition.t != 0) throw std::invalid_argument("condition must be a t = 0 latent");
  const std::size_t count = condition.size();
  const int n = n_;

  // 3x3x3 box mean of the condition; neighbors outside the grid read -1.
  smoothed_.assign(count, 0.0);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int i = static_cast<int>(idx % n);
      const int j = static_cast<int>((idx / n) % n);
      const int k = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
      double acc = 0.0;
      for (int dk = -1; dk <= 1; ++dk) {
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            const int ci = i + di, cj = j + dj, ck = k + dk;
            if (ci < 0 || cj < 0 || ck < 0 || ci >= n || cj >= n || ck >= n) {
              acc += -1.0;
            } else {
              acc += condition.values[(static_cast<std::size_t>(ck) * n + cj) * n + ci];
            }
          }
        }
      }
      smoothed_[idx] = acc / 27.0;
    }
  });

  // Hashed pseudo-noise, uniform in [-1, 1) by cell, on the 2^-32 lattice.
  noise_.assign(count, 0.0);
  const std::uint64_t stream = splitmix64(seed);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const std::uint64_t h = splitmix64(stream ^ static_cast<std::uint64_t>(idx));
    const auto ticks = static_cast<std::int64_t>(h >> 31);  // 33 bits
    noise_[idx] = static_cast<double>(ticks - (std::int64_t{1} << 32)) * kLatticeStep;
  }

  // Quantizing the constant velocity to the lattice keeps every Euler step
  // exact on lattice-valued states.
  step_velocity_.assign(count, 0.0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const double exact = (noise_[idx] - smoothed_[idx]) / total_;
    step_velocity_[idx] = std::nearbyint(exact / kLatticeStep) * kLatticeStep;
  }
}

std::vector<double> ReferenceDenoiser::velocity(const LatentGrid& z, int t) const {
  check_state(z, *this);
  (void)t;  // straight-line flow: constant over t and independent of z
  return step_velocity_;
}

LatentGrid encode(const OccupancyGrid& grid) {
  LatentGrid z = LatentGrid::zeros(grid.n);
  for (std::size_t idx = 0; idx < grid.cells.size(); ++idx) {
    z.values[idx] = grid.cells[idx] ? 1.0 : -1.0;
  }
  return z;
}

OccupancyGrid decode(const LatentGrid& z) {
  if (z.t != 0) throw std::invalid_argument("cannot decode noisy latent");
  OccupancyGrid grid = OccupancyGrid::empty(z.n);
  for (std::size_t idx = 0; idx < z.values.size(); ++idx) {
    grid.cells[idx] = z.values[idx] > 0.0 ? 1 : 0;
  }
  return grid;
}

LatentGrid backward_step(const LatentGrid& z, const Denoiser& d) {
  check_state(z, d);
  if (z.t >= d.total_steps()) throw std::invalid_argument("already at the last timestep");
  const std::vector<double> v = d.velocity(z, z.t);
  LatentGrid out = z;
  out.t = z.t + 1;
  for (std::size_t idx = 0; idx < out.values.size(); ++idx) out.values[idx] += v[idx];
  return out;
}

LatentGrid forward_step(const LatentGrid& z, const Denoiser& d) {
  check_state(z, d);
  if (z.t <= 0) throw std::invalid_argument("already at t = 0");
  const std::vector<double> v = d.velocity(z, z.t);
  LatentGrid out = z;
  out.t = z.t - 1;
  for (std::size_t idx = 0; idx < out.values.size(); ++idx) out.values[idx] -= v[idx];
  return out;
}

std::vector<LatentGrid> invert(const LatentGrid& z0, const Denoiser& d, int t_stop) {
  if (z0.t != 0) throw std::invalid_argument("inversion starts from a t = 0 latent");
  if (t_stop < 0 || t_stop > d.total_steps()) {
    throw std::invalid_argument("t_stop out of [0, total]");
  }
  std::vector<LatentGrid> trajectory;
  trajectory.reserve(t_stop + 1);
  trajectory.push_back(z0);
  for (int t = 0; t < t_stop; ++t) trajectory.push_back(backward_step(trajectory.back(), d));
  return trajectory;
}

LatentGrid blended_denoise(const std::vector<LatentGrid>& proxy_traj,
                           const std::vector<LatentGrid>& orig_traj,
                           const std::vector<LatentGrid>& warp_traj, const MaskSet& masks,
                           const BlendSchedule& sched, const Denoiser& d,
                           const StepObserver& observer) {
  const bool ed_empty = masks.ed.count() == 0;
  if (!(0 <= sched.t_uc && sched.t_uc <= sched.t_warp && sched.t_warp < sched.t_init &&
        sched.t_init <= sched.total)) {
    throw std::invalid_argument("schedule must satisfy 0 <= t_uc < t_warp < t_init <= total");
  }
  if (sched.t_uc == sched.t_warp && !ed_empty) {
    throw std::invalid_argument(
        "schedule requires t_uc < t_warp when the edited mask is non-empty");
  }
  if (d.total_steps() != sched.total) throw std::invalid_argument("denoiser step count mismatch");
  const auto check_traj = [&](const std::vector<LatentGrid>& traj, const char* name) {
    if (static_cast<int>(traj.size()) <= sched.t_init) {
      throw std::invalid_argument(std::string(name) + " trajectory does not reach t_init");
    }
    for (int t = 0; t <= sched.t_init; ++t) {
      if (traj[t].n != d.resolution() || traj[t].t != t) {
        throw std::invalid_argument(std::string(name) + " trajectory is inconsistent");
      }
    }
  };
  check_traj(proxy_traj, "proxy");
  check_traj(orig_traj, "orig");
  check_traj(warp_traj, "warp");
  check_mask_resolution(masks, d.resolution());

  LatentGrid z = proxy_traj[sched.t_init];
  for (int t = sched.t_init; t >= 0; --t) {
    if (t < sched.t_init) z = forward_step(z, d);
    if (t > sched.t_uc) {
      const LatentGrid& ref = orig_traj[t];
      for (std::size_t idx = 0; idx < z.values.size(); ++idx) {
        if (masks.uc.cells[idx]) z.values[idx] = ref.values[idx];
      }
    }
    if (t > sched.t_warp) {
      const LatentGrid& ref = warp_traj[t];
      for (std::size_t idx = 0; idx < z.values.size(); ++idx) {
        if (masks.ed.cells[idx]) z.values[idx] = ref.values[idx];
      }
    }
    if (observer) observer(z, t);
  }
  return z;
}

FeatureGrid FeatureGrid::zeros(int n) {
  FeatureGrid grid;
  grid.n = n;
  grid.values.assign(static_cast<std::size_t>(n) * n * n, {0.0, 0.0, 0.0});
  grid.defined.assign(grid.values.size(), 0);
  return grid;
}

FeatureGrid transfer_features(const FeatureGrid& feat_orig, const MaskSet& masks,
                              const WarpField& field, int fill_iters) {
  if (fill_iters < 0) throw std::invalid_argument("fill_iters must be non-negative");
  const int n = feat_orig.n;
  check_mask_resolution(masks, n);
  FeatureGrid out = FeatureGrid::zeros(n);

  std::vector<Mat4> world_to_target;
  std::vector<Mat4> rel_inverse;
  for (const WarpEntry& entry : field.entries) {
    world_to_target.push_back(pose_matrix_inverse(entry.target));
    rel_inverse.push_back(affine_inverse(entry.rel));
  }

  std::vector<std::uint8_t> needed(out.values.size(), 0);
  for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
    const bool in_uc = masks.uc.cells[idx] != 0;
    const bool in_ed = masks.ed.cells[idx] != 0;
    const bool in_nw = masks.nw.cells[idx] != 0;
    if (!in_uc && !in_ed && !in_nw) continue;
    needed[idx] = 1;
    if (in_uc && feat_orig.defined[idx]) {
      out.values[idx] = feat_orig.values[idx];
      out.defined[idx] = 1;
      continue;
    }
    if (in_ed) {
      const int i = static_cast<int>(idx % n);
      const int j = static_cast<int>((idx / n) % n);
      const int k = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
      const Vec3 center = masks.ed.cell_center(i, j, k);
      int owner = -1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; e < field.entries.size(); ++e) {
        const double f = implicit_value_local(field.entries[e].target,
                                              transform_point(world_to_target[e], center));
        if (f <= 1.0 + field.slack && f < best) {
          best = f;
          owner = static_cast<int>(e);
        }
      }
      if (owner >= 0) {
        const Vec3 source = transform_point(rel_inverse[owner], center);
        const int si = static_cast<int>(std::floor((source.x + 0.5) * n));
        const int sj = static_cast<int>(std::floor((source.y + 0.5) * n));
        const int sk = static_cast<int>(std::floor((source.z + 0.5) * n));
        if (si >= 0 && sj >= 0 && sk >= 0 && si < n && sj < n && sk < n) {
          const std::size_t src = (static_cast<std::size_t>(sk) * n + sj) * n + si;
          if (feat_orig.defined[src]) {
            out.values[idx] = feat_orig.values[src];
            out.defined[idx] = 1;
          }
        }
      }
    }
    // in_nw cells and unmapped ed/uc cells stay undefined for the fill below.
  }

  for (int round = 0; round < fill_iters; ++round) {
    bool changed = false;
    FeatureGrid next = out;
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const std::size_t idx = (static_cast<std::size_t>(k) * n + j) * n + i;
          if (!needed[idx] || out.defined[idx]) continue;
          std::array<double, 3> acc{0.0, 0.0, 0.0};
          int sources = 0;
          const auto tap = [&](int ci, int cj, int ck) {
            if (ci < 0 || cj < 0 || ck < 0 || ci >= n || cj >= n || ck >= n) return;
            const std::size_t c = (static_cast<std::size_t>(ck) * n + cj) * n + ci;
            if (!out.defined[c]) return;
            acc[0] += out.values[c][0];
            acc[1] += out.values[c][1];
            acc[2] += out.values[c][2];
            ++sources;
          };
          tap(i - 1, j, k);
          tap(i + 1, j, k);
          tap(i, j - 1, k);
          tap(i, j + 1, k);
          tap(i, j, k - 1);
          tap(i, j, k + 1);
          if (sources == 0) continue;
          next.values[idx] = {acc[0] / sources, acc[1] / sources, acc[2] / sources};
          next.defined[idx] = 1;
          changed = true;
        }
      }
    }
    out = std::move(next);
    if (!changed) break;
  }
  return out;
}

void save_trajectory(const std::vector<LatentGrid>& trajectory, const std::string& path) {
  if (trajectory.empty()) throw std::invalid_argument("empty trajectory");
  const int n = trajectory.front().n;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "PXLF 1 " << n << ' ' << trajectory.size() - 1 << "\n";
  std::vector<float> block(trajectory.front().size());
  for (const LatentGrid& z : trajectory) {
    if (z.n != n) throw std::invalid_argument("trajectory resolution changes");
    for (std::size_t idx = 0; idx < block.size(); ++idx) {
      block[idx] = static_cast<float>(z.values[idx]);
    }
    out.write(reinterpret_cast<const char*>(block.data()),
              static_cast<std::streamsize>(block.size() * sizeof(float)));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<LatentGrid> load_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trajectory file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("missing PXLF header in " + path);
  std::istringstream fields(header);
  std::string magic;
  int version = 0, n = 0, t_max = 0;
  if (!(fields >> magic >> version >> n >> t_max) || magic != "PXLF" || version != 1 ||
      n < 1 || t_max < 0) {
    throw std::runtime_error("not a PXLF 1 file: " + path);
  }
  std::vector<LatentGrid> trajectory;
  std::vector<float> block(static_cast<std::size_t>(n) * n * n);
  for (int t = 0; t <= t_max; ++t) {
    in.read(reinterpret_cast<char*>(block.data()),
            static_cast<std::streamsize>(block.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(block.size() * sizeof(float))) {
      throw std::runtime_error("truncated PXLF payload in " + path);
    }
    LatentGrid z = LatentGrid::zeros(n);
    z.t = t;
    for (std::size_t idx = 0; idx < block.size(); ++idx) z.values[idx] = block[idx];
    trajectory.push_back(std::move(z));
  }
  return trajectory;
}

}  // namespace proxekit
