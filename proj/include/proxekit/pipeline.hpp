#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "proxekit/denoise.hpp"
#include "proxekit/metrics.hpp"

namespace proxekit {

// End-to-end configuration. Defaults mirror each module's defaults: a 64^3
// grid and the 25-step schedule with cut-offs at 13 / 9 / 5.
struct PipelineConfig {
  int resolution = 64;
  int total_steps = 25;
  int t_init = 13;
  int t_warp = 9;
  int t_uc = 5;
  double slack = kDefaultWarpSlack;
  double diff_tolerance = kDefaultDiffTolerance;
  std::uint64_t seed = 0;
  int fill_iters = 32;
  int dilation_radius = 0;

  // Throws std::invalid_argument naming the violated bound.
  void validate() const;
  BlendSchedule schedule() const;
  // Re-derives the schedule cut-offs from total_steps (offsets 12/16/20).
  void apply_default_schedule();
};

struct PipelineResult {
  double chamfer = 0.0;
  std::optional<double> l_gd;  // absent when every sample lies in the region
  double grid_iou = 0.0;
};

// File-level pipeline stages. Every stage reads its inputs from disk and
// writes its outputs to disk, so a run can be resumed or re-run per stage
// with identical results.
void stage_voxelize_mesh(const std::string& mesh_path, int resolution,
                         const std::string& grid_out);
void stage_edit(const std::string& proxy_path, const std::string& script_path,
                const std::string& edited_out);
void stage_masks(const std::string& orig_proxy_path, const std::string& edited_proxy_path,
                 const std::string& grid_orig_path, const PipelineConfig& config,
                 const std::string& uc_out, const std::string& ed_out,
                 const std::string& nw_out);
void stage_warp(const std::string& orig_proxy_path, const std::string& edited_proxy_path,
                const std::string& grid_orig_path, const PipelineConfig& config,
                const std::string& warped_out);
void stage_denoise(const std::string& edited_proxy_path, const std::string& grid_orig_path,
                   const std::string& warped_path, const std::string& uc_path,
                   const std::string& ed_path, const std::string& nw_path,
                   const PipelineConfig& config, const std::string& denoised_out,
                   const std::string& proxy_grid_out = "");
void stage_extract(const std::string& grid_path, const std::string& mesh_out);
PipelineResult stage_metrics(const std::string& grid_orig_path,
                             const std::string& denoised_path,
                             const std::string& orig_proxy_path,
                             const std::string& edited_proxy_path,
                             const PipelineConfig& config, const std::string& report_out);

// Runs all stages into out_dir: edited.json, grid_orig.pxvg, mask_{uc,ed,new}
// .pxvg, warped.pxvg, proxy_grid.pxvg, denoised.pxvg, original.obj,
// edited.obj, and metrics.json. Deterministic for fixed inputs and config.
PipelineResult run_pipeline(const std::string& mesh_path, const std::string& proxy_path,
                            const std::string& script_path, const std::string& out_dir,
                            const PipelineConfig& config = {});

}  // namespace proxekit
