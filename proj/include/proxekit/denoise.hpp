#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "proxekit/voxel.hpp"
#include "proxekit/warp.hpp"

namespace proxekit {

// One scalar per voxel plus the timestep index of the flow state the values
// belong to (t = 0 is data, larger t is noisier).
struct LatentGrid {
  int n = 0;
  int t = 0;
  std::vector<double> values;

  static LatentGrid zeros(int n);
  std::size_t size() const { return values.size(); }
};

// Timestep layout for the masked blending loop: total step count plus the
// three injection cut-offs, 0 <= t_uc < t_warp < t_init <= total.
struct BlendSchedule {
  int total = 25;
  int t_init = 13;
  int t_warp = 9;
  int t_uc = 5;

  // Offsets total-12 / total-16 / total-20 from the step count.
  static BlendSchedule defaults(int total = 25);
  void validate() const;
};

// Deterministic velocity model over latent grids. Implementations must be
// deterministic so inversion is reproducible.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual int total_steps() const = 0;
  virtual int resolution() const = 0;
  // Per-step velocity field for the state (z, t).
  virtual std::vector<double> velocity(const LatentGrid& z, int t) const = 0;
};

// Straight-line flow between x0 (a 3x3x3 box smoothing of the conditioning
// latent, out-of-grid neighbors reading as empty) and a hashed pseudo-noise
// field. The per-step velocity (noise - x0) / total is constant in z and t
// and quantized to multiples of 2^-32, so adding and subtracting it on
// lattice-valued states (anything produced by encode) is exact in double
// precision: forward and backward Euler steps are bit-level mutual inverses.
class ReferenceDenoiser final : public Denoiser {
 public:
  ReferenceDenoiser(const LatentGrid& condition, int total = 25, std::uint64_t seed = 0);
  int total_steps() const override { return total_; }
  int resolution() const override { return n_; }
  std::vector<double> velocity(const LatentGrid& z, int t) const override;

  const std::vector<double>& smoothed_condition() const { return smoothed_; }
  const std::vector<double>& noise() const { return noise_; }

 private:
  int n_;
  int total_;
  std::vector<double> smoothed_;
  std::vector<double> noise_;
  std::vector<double> step_velocity_;
};

// Occupied cells become +1.0, empty cells -1.0, at t = 0.
LatentGrid encode(const OccupancyGrid& grid);
// Strictly positive values decode as occupied; requires t = 0.
OccupancyGrid decode(const LatentGrid& z);

// One Euler step towards noise (t -> t+1) / towards data (t -> t-1).
LatentGrid backward_step(const LatentGrid& z, const Denoiser& d);
LatentGrid forward_step(const LatentGrid& z, const Denoiser& d);

// Dense inversion trajectory [z at 0, z at 1, ..., z at t_stop].
std::vector<LatentGrid> invert(const LatentGrid& z0, const Denoiser& d, int t_stop);

// Called after the per-step overrides with the current state; used to watch
// or assert on intermediate latents.
using StepObserver = std::function<void(const LatentGrid&, int)>;

// Masked blending: start from the proxy trajectory at t_init, then walk to
// t = 0, overriding masks.uc from the original trajectory while t > t_uc and
// masks.ed from the warped trajectory while t > t_warp. Voxels in masks.nw
// (and outside all masks) evolve freely from the proxy initialization. The
// strict t_uc < t_warp ordering may relax to equality when masks.ed is
// empty.
LatentGrid blended_denoise(const std::vector<LatentGrid>& proxy_traj,
                           const std::vector<LatentGrid>& orig_traj,
                           const std::vector<LatentGrid>& warp_traj, const MaskSet& masks,
                           const BlendSchedule& sched, const Denoiser& d,
                           const StepObserver& observer = {});

// Per-voxel RGB features with a defined flag per voxel.
struct FeatureGrid {
  int n = 0;
  std::vector<std::array<double, 3>> values;
  std::vector<std::uint8_t> defined;

  static FeatureGrid zeros(int n);
};

// Moves appearance features to the edited layout: copy on masks.uc, gather
// through the owning warp entry's inverse transform on masks.ed, and fill
// masks.nw (plus unmapped cells) with fill_iters rounds of 6-neighbor
// averaging seeded by the copied cells.
FeatureGrid transfer_features(const FeatureGrid& feat_orig, const MaskSet& masks,
                              const WarpField& field, int fill_iters = 32);

// PXLF: text header "PXLF 1 <n> <t_max>\n" followed by t_max + 1 blocks of
// n^3 little-endian 32-bit floats.
void save_trajectory(const std::vector<LatentGrid>& trajectory, const std::string& path);
std::vector<LatentGrid> load_trajectory(const std::string& path);

}  // namespace proxekit
