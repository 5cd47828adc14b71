#include "proxekit/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "proxekit/edit_dsl.hpp"

namespace proxekit {

namespace fs = std::filesystem;

void PipelineConfig::validate() const {
  if (resolution < kMinResolution || resolution > kMaxResolution) {
    throw std::invalid_argument("resolution must be in [8, 256]");
  }
  if (total_steps < 1) throw std::invalid_argument("total_steps must be >= 1");
  schedule().validate();
  if (slack < 0.0) throw std::invalid_argument("slack must be >= 0");
  if (diff_tolerance < 0.0) throw std::invalid_argument("diff_tolerance must be >= 0");
  if (fill_iters < 0) throw std::invalid_argument("fill_iters must be >= 0");
  if (dilation_radius < 0) throw std::invalid_argument("dilation_radius must be >= 0");
}

BlendSchedule PipelineConfig::schedule() const {
  BlendSchedule sched;
  sched.total = total_steps;
  sched.t_init = t_init;
  sched.t_warp = t_warp;
  sched.t_uc = t_uc;
  return sched;
}

void PipelineConfig::apply_default_schedule() {
  t_init = total_steps - 12;
  t_warp = total_steps - 16;
  t_uc = total_steps - 20;
}

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PrimitiveDiff load_diff(const std::string& orig_path, const std::string& edited_path,
                        const PipelineConfig& config, Proxy* orig_out = nullptr,
                        Proxy* edit_out = nullptr) {
  Proxy orig = load_proxy_file(orig_path);
  Proxy edit = load_proxy_file(edited_path);
  PrimitiveDiff diff = diff_proxies(orig, edit, config.diff_tolerance);
  if (orig_out) *orig_out = std::move(orig);
  if (edit_out) *edit_out = std::move(edit);
  return diff;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void stage_voxelize_mesh(const std::string& mesh_path, int resolution,
                         const std::string& grid_out) {
  const TriMesh mesh = load_obj(mesh_path);
  save_grid(voxelize_mesh(mesh, resolution), grid_out);
}

void stage_edit(const std::string& proxy_path, const std::string& script_path,
                const std::string& edited_out) {
  const Proxy proxy = load_proxy_file(proxy_path);
  const EditScript script = parse_script(read_text_file(script_path));
  save_proxy_file(apply_script(script, proxy), edited_out);
}

void stage_masks(const std::string& orig_proxy_path, const std::string& edited_proxy_path,
                 const std::string& grid_orig_path, const PipelineConfig& config,
                 const std::string& uc_out, const std::string& ed_out,
                 const std::string& nw_out) {
  Proxy orig, edit;
  const PrimitiveDiff diff = load_diff(orig_proxy_path, edited_proxy_path, config, &orig, &edit);
  const OccupancyGrid grid_orig = load_grid(grid_orig_path);
  const MaskSet masks = masks_from_diff(diff, grid_orig, orig, edit, config.dilation_radius);
  save_grid(masks.uc, uc_out);
  save_grid(masks.ed, ed_out);
  save_grid(masks.nw, nw_out);
}

void stage_warp(const std::string& orig_proxy_path, const std::string& edited_proxy_path,
                const std::string& grid_orig_path, const PipelineConfig& config,
                const std::string& warped_out) {
  const PrimitiveDiff diff = load_diff(orig_proxy_path, edited_proxy_path, config);
  const OccupancyGrid grid_orig = load_grid(grid_orig_path);
  const WarpField field = build_warp_field(diff, config.slack);
  save_grid(warp_grid(grid_orig, field), warped_out);
}

void stage_denoise(const std::string& edited_proxy_path, const std::string& grid_orig_path,
                   const std::string& warped_path, const std::string& uc_path,
                   const std::string& ed_path, const std::string& nw_path,
                   const PipelineConfig& config, const std::string& denoised_out,
                   const std::string& proxy_grid_out) {
  const Proxy edit = load_proxy_file(edited_proxy_path);
  const OccupancyGrid grid_orig = load_grid(grid_orig_path);
  const OccupancyGrid warped = load_grid(warped_path);
  MaskSet masks;
  masks.uc = load_grid(uc_path);
  masks.ed = load_grid(ed_path);
  masks.nw = load_grid(nw_path);

  const OccupancyGrid proxy_grid = voxelize_proxy(edit, grid_orig.n);
  if (!proxy_grid_out.empty()) save_grid(proxy_grid, proxy_grid_out);

  const BlendSchedule sched = config.schedule();
  const LatentGrid condition = encode(proxy_grid);
  const ReferenceDenoiser denoiser(condition, sched.total, config.seed);
  const auto proxy_traj = invert(condition, denoiser, sched.t_init);
  const auto orig_traj = invert(encode(grid_orig), denoiser, sched.t_init);
  const auto warp_traj = invert(encode(warped), denoiser, sched.t_init);

  const LatentGrid z0 =
      blended_denoise(proxy_traj, orig_traj, warp_traj, masks, sched, denoiser);
  save_grid(decode(z0), denoised_out);
}

void stage_extract(const std::string& grid_path, const std::string& mesh_out) {
  save_obj(extract_mesh(load_grid(grid_path)), mesh_out);
}

PipelineResult stage_metrics(const std::string& grid_orig_path,
                             const std::string& denoised_path,
                             const std::string& orig_proxy_path,
                             const std::string& edited_proxy_path,
                             const PipelineConfig& config, const std::string& report_out) {
  const OccupancyGrid grid_orig = load_grid(grid_orig_path);
  const OccupancyGrid denoised = load_grid(denoised_path);
  const PrimitiveDiff diff = load_diff(orig_proxy_path, edited_proxy_path, config);

  // Compare like with like: vertices of the extracted surfaces of both grids.
  const std::vector<Vec3> reference = extract_mesh(grid_orig).vertices;
  const std::vector<Vec3> output = extract_mesh(denoised).vertices;

  // The edited space covers both poses of every edited primitive plus all
  // added and deleted primitives.
  EditRegion region;
  region.slack = config.slack;
  for (const PrimitiveDiff::EditedPair& pair : diff.edited) {
    region.primitives.push_back(pair.orig.params);
    region.primitives.push_back(pair.edit.params);
  }
  for (const Primitive& p : diff.added) region.primitives.push_back(p.params);
  for (const Primitive& p : diff.deleted) region.primitives.push_back(p.params);

  PipelineResult result;
  result.grid_iou = grid_iou(denoised, grid_orig);
  if (!output.empty() && !reference.empty()) {
    result.chamfer = chamfer(output, reference);
    try {
      result.l_gd = l_gd(output, reference, region);
    } catch (const std::runtime_error&) {
      result.l_gd.reset();  // every sample fell inside the edited region
    }
  }

  std::ofstream out(report_out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + report_out);
  out << "{\n  \"chamfer\": " << fmt6(result.chamfer) << ",\n  \"l_gd\": "
      << (result.l_gd ? fmt6(*result.l_gd) : std::string("null"))
      << ",\n  \"grid_iou\": " << fmt6(result.grid_iou) << "\n}\n";
  if (!out) throw std::runtime_error("write failed: " + report_out);
  return result;
}

PipelineResult run_pipeline(const std::string& mesh_path, const std::string& proxy_path,
                            const std::string& script_path, const std::string& out_dir,
                            const PipelineConfig& config) {
  config.validate();
  fs::create_directories(out_dir);
  const auto at = [&out_dir](const char* name) { return (fs::path(out_dir) / name).string(); };

  const std::string grid_orig = at("grid_orig.pxvg");
  const std::string edited = at("edited.json");
  const std::string mask_uc = at("mask_uc.pxvg");
  const std::string mask_ed = at("mask_ed.pxvg");
  const std::string mask_nw = at("mask_new.pxvg");
  const std::string warped = at("warped.pxvg");
  const std::string denoised = at("denoised.pxvg");

  const auto staged = [](const char* stage, const auto& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(stage) + ": " + e.what());
    }
  };
  staged("voxelize", [&] { stage_voxelize_mesh(mesh_path, config.resolution, grid_orig); return 0; });
  staged("edit", [&] { stage_edit(proxy_path, script_path, edited); return 0; });
  staged("masks", [&] {
    stage_masks(proxy_path, edited, grid_orig, config, mask_uc, mask_ed, mask_nw);
    return 0;
  });
  staged("warp", [&] { stage_warp(proxy_path, edited, grid_orig, config, warped); return 0; });
  staged("denoise", [&] {
    stage_denoise(edited, grid_orig, warped, mask_uc, mask_ed, mask_nw, config, denoised,
                  at("proxy_grid.pxvg"));
    return 0;
  });
  staged("extract", [&] {
    stage_extract(grid_orig, at("original.obj"));
    stage_extract(denoised, at("edited.obj"));
    return 0;
  });
  return staged("metrics", [&] {
    return stage_metrics(grid_orig, denoised, proxy_path, edited, config, at("metrics.json"));
  });
}

}  // namespace proxekit
