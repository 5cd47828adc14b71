#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "proxekit/edit_dsl.hpp"
#include "proxekit/fit.hpp"
#include "proxekit/pipeline.hpp"

namespace {

using namespace proxekit;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

bool has_extension(const std::string& path, const char* ext) {
  return std::filesystem::path(path).extension() == ext;
}

void add_config_flags(CLI::App* cmd, PipelineConfig& config, bool* explicit_schedule) {
  cmd->add_option("-n,--resolution", config.resolution, "Grid resolution per axis")
      ->check(CLI::Range(kMinResolution, kMaxResolution));
  cmd->add_option("--steps", config.total_steps, "Total flow steps");
  cmd->add_option("--t-init", config.t_init, "Initialization timestep")
      ->each([explicit_schedule](const std::string&) { *explicit_schedule = true; });
  cmd->add_option("--t-warp", config.t_warp, "Warped-injection cut-off")
      ->each([explicit_schedule](const std::string&) { *explicit_schedule = true; });
  cmd->add_option("--t-uc", config.t_uc, "Unchanged-injection cut-off")
      ->each([explicit_schedule](const std::string&) { *explicit_schedule = true; });
  cmd->add_option("--slack", config.slack, "Membership slack on the implicit value");
  cmd->add_option("--tol", config.diff_tolerance, "Diff tolerance per parameter");
  cmd->add_option("--seed", config.seed, "Noise seed");
  cmd->add_option("--fill-iters", config.fill_iters, "Feature fill rounds");
  cmd->add_option("--dilate", config.dilation_radius, "Mask dilation radius");
}

int run(int argc, char** argv) {
  CLI::App app{"Primitive-based shape abstraction, proxy editing, and masked "
               "grid blending"};
  app.require_subcommand(1);

  // fit <points> --k K --seed S -o proxy.json
  std::string fit_points, fit_out = "proxy.json", fit_category;
  int fit_k = 1;
  std::uint64_t fit_seed = 0;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Decompose a point cloud into primitives");
  fit_cmd->add_option("points", fit_points, "OBJ vertices or XYZ text")->required();
  fit_cmd->add_option("-k,--k", fit_k, "Primitive count")->required()->check(CLI::PositiveNumber);
  fit_cmd->add_option("-s,--seed", fit_seed, "Clustering seed");
  fit_cmd->add_option("-c,--category", fit_category, "Category label");
  fit_cmd->add_option("-o,--output", fit_out, "Output proxy JSON");

  // edit <proxy.json> <script.pxe> -o edited.json
  std::string edit_proxy, edit_script, edit_out = "edited.json";
  CLI::App* edit_cmd = app.add_subcommand("edit", "Apply an edit script to a proxy");
  edit_cmd->add_option("proxy", edit_proxy, "Input proxy JSON")->required();
  edit_cmd->add_option("script", edit_script, "Edit script (.pxe)")->required();
  edit_cmd->add_option("-o,--output", edit_out, "Output proxy JSON");

  // voxelize <proxy.json|mesh.obj> -n N -o grid.pxvg [--ids ...]
  std::string vox_input, vox_out = "grid.pxvg";
  int vox_n = 64;
  std::vector<int> vox_ids;
  bool vox_ids_given = false;
  CLI::App* vox_cmd = app.add_subcommand("voxelize", "Voxelize a proxy or a mesh");
  vox_cmd->add_option("input", vox_input, "Proxy JSON or OBJ mesh")->required();
  vox_cmd->add_option("-n,--resolution", vox_n, "Grid resolution per axis")
      ->check(CLI::Range(kMinResolution, kMaxResolution));
  vox_cmd->add_option("--ids", vox_ids, "Primitive id subset (proxies only)")
      ->each([&vox_ids_given](const std::string&) { vox_ids_given = true; })
      ->expected(-1);
  vox_cmd->add_option("-o,--output", vox_out, "Output PXVG grid");

  // mesh <grid.pxvg> -o mesh.obj
  std::string mesh_grid, mesh_out = "mesh.obj";
  CLI::App* mesh_cmd = app.add_subcommand("mesh", "Extract a surface mesh from a grid");
  mesh_cmd->add_option("grid", mesh_grid, "Input PXVG grid")->required();
  mesh_cmd->add_option("-o,--output", mesh_out, "Output OBJ mesh");

  // metrics <a> <b> [--region proxy.json [--region-ids ...]] [--slack]
  std::string met_a, met_b, met_region;
  std::vector<int> met_region_ids;
  double met_slack = 0.1;
  CLI::App* met_cmd = app.add_subcommand("metrics", "Grid IoU or point-cloud Chamfer / l-GD");
  met_cmd->add_option("a", met_a, "PXVG grid, OBJ mesh, or XYZ cloud")->required();
  met_cmd->add_option("b", met_b, "Second input of the same kind")->required();
  met_cmd->add_option("--region", met_region, "Proxy JSON defining the edited region");
  met_cmd->add_option("--region-ids", met_region_ids, "Region primitive ids")->expected(-1);
  met_cmd->add_option("--slack", met_slack, "Region slack on the implicit value");

  // masks / warp / denoise: file-level pipeline stages
  PipelineConfig config;
  bool explicit_schedule = false;
  std::string st_orig, st_edit, st_grid, st_outdir = ".", st_warp_out = "warped.pxvg";
  CLI::App* masks_cmd = app.add_subcommand("masks", "Derive the blending masks from a diff");
  masks_cmd->add_option("orig", st_orig, "Original proxy JSON")->required();
  masks_cmd->add_option("edited", st_edit, "Edited proxy JSON")->required();
  masks_cmd->add_option("-g,--grid", st_grid, "Original occupancy PXVG")->required();
  masks_cmd->add_option("-o,--outdir", st_outdir, "Output directory");
  add_config_flags(masks_cmd, config, &explicit_schedule);

  CLI::App* warp_cmd = app.add_subcommand("warp", "Build the warped occupancy grid");
  warp_cmd->add_option("orig", st_orig, "Original proxy JSON")->required();
  warp_cmd->add_option("edited", st_edit, "Edited proxy JSON")->required();
  warp_cmd->add_option("-g,--grid", st_grid, "Original occupancy PXVG")->required();
  warp_cmd->add_option("-o,--output", st_warp_out, "Output PXVG grid");
  add_config_flags(warp_cmd, config, &explicit_schedule);

  std::string dn_edited, dn_grid, dn_warped, dn_uc, dn_ed, dn_nw, dn_out = "denoised.pxvg";
  CLI::App* dn_cmd = app.add_subcommand("denoise", "Run the masked blending loop");
  dn_cmd->add_option("edited", dn_edited, "Edited proxy JSON")->required();
  dn_cmd->add_option("--orig", dn_grid, "Original occupancy PXVG")->required();
  dn_cmd->add_option("--warped", dn_warped, "Warped occupancy PXVG")->required();
  dn_cmd->add_option("--mask-uc", dn_uc, "Unchanged mask PXVG")->required();
  dn_cmd->add_option("--mask-ed", dn_ed, "Edited mask PXVG")->required();
  dn_cmd->add_option("--mask-new", dn_nw, "New-region mask PXVG")->required();
  dn_cmd->add_option("-o,--output", dn_out, "Output PXVG grid");
  add_config_flags(dn_cmd, config, &explicit_schedule);

  // pipeline <orig-mesh> <proxy.json> <script.pxe> -o out-dir
  std::string pl_mesh, pl_proxy, pl_script, pl_out = "out";
  CLI::App* pl_cmd = app.add_subcommand("pipeline", "Run every stage end to end");
  pl_cmd->add_option("mesh", pl_mesh, "Original shape OBJ")->required();
  pl_cmd->add_option("proxy", pl_proxy, "Original proxy JSON")->required();
  pl_cmd->add_option("script", pl_script, "Edit script (.pxe)")->required();
  pl_cmd->add_option("-o,--outdir", pl_out, "Output directory");
  add_config_flags(pl_cmd, config, &explicit_schedule);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (!explicit_schedule) config.apply_default_schedule();

  try {
    if (fit_cmd->parsed()) {
      const std::vector<Vec3> points = load_points(fit_points);
      const Proxy proxy = decompose(points, fit_k, fit_seed, fit_category);
      save_proxy_file(proxy, fit_out);
      std::cout << "wrote " << fit_out << " (" << proxy.primitives.size() << " primitives)\n";
    } else if (edit_cmd->parsed()) {
      stage_edit(edit_proxy, edit_script, edit_out);
      std::cout << "wrote " << edit_out << "\n";
    } else if (vox_cmd->parsed()) {
      OccupancyGrid grid;
      if (has_extension(vox_input, ".obj")) {
        grid = voxelize_mesh(load_obj(vox_input), vox_n);
      } else {
        const Proxy proxy = load_proxy_file(vox_input);
        grid = vox_ids_given ? voxelize_proxy(proxy, vox_ids, vox_n)
                             : voxelize_proxy(proxy, vox_n);
      }
      save_grid(grid, vox_out);
      std::cout << "wrote " << vox_out << " (" << grid.count() << " occupied cells)\n";
    } else if (mesh_cmd->parsed()) {
      const TriMesh mesh = extract_mesh(load_grid(mesh_grid));
      save_obj(mesh, mesh_out);
      std::cout << "wrote " << mesh_out << " (" << mesh.vertices.size() << " vertices, "
                << mesh.triangles.size() << " triangles)\n";
    } else if (met_cmd->parsed()) {
      char buf[64];
      if (has_extension(met_a, ".pxvg")) {
        const double iou = grid_iou(load_grid(met_a), load_grid(met_b));
        std::snprintf(buf, sizeof(buf), "grid_iou = %.6g\n", iou);
        std::cout << buf;
      } else {
        const std::vector<Vec3> a = load_points(met_a);
        const std::vector<Vec3> b = load_points(met_b);
        std::snprintf(buf, sizeof(buf), "chamfer = %.6g\n", chamfer(a, b));
        std::cout << buf;
        if (!met_region.empty()) {
          const Proxy proxy = load_proxy_file(met_region);
          EditRegion region;
          region.slack = met_slack;
          for (const Primitive& p : proxy.primitives) {
            if (met_region_ids.empty() ||
                std::find(met_region_ids.begin(), met_region_ids.end(), p.id) !=
                    met_region_ids.end()) {
              region.primitives.push_back(p.params);
            }
          }
          std::snprintf(buf, sizeof(buf), "l_gd = %.6g\n", l_gd(a, b, region));
          std::cout << buf;
        }
      }
    } else if (masks_cmd->parsed()) {
      namespace fs = std::filesystem;
      fs::create_directories(st_outdir);
      stage_masks(st_orig, st_edit, st_grid, config,
                  (fs::path(st_outdir) / "mask_uc.pxvg").string(),
                  (fs::path(st_outdir) / "mask_ed.pxvg").string(),
                  (fs::path(st_outdir) / "mask_new.pxvg").string());
      std::cout << "wrote masks to " << st_outdir << "\n";
    } else if (warp_cmd->parsed()) {
      stage_warp(st_orig, st_edit, st_grid, config, st_warp_out);
      std::cout << "wrote " << st_warp_out << "\n";
    } else if (dn_cmd->parsed()) {
      stage_denoise(dn_edited, dn_grid, dn_warped, dn_uc, dn_ed, dn_nw, config, dn_out);
      std::cout << "wrote " << dn_out << "\n";
    } else if (pl_cmd->parsed()) {
      const PipelineResult result =
          run_pipeline(pl_mesh, pl_proxy, pl_script, pl_out, config);
      char buf[160];
      std::snprintf(buf, sizeof(buf), "chamfer = %.6g\nl_gd = %.6g\ngrid_iou = %.6g\n",
                    result.chamfer, result.l_gd.value_or(-1.0), result.grid_iou);
      std::cout << buf << "outputs in " << pl_out << "\n";
    }
  } catch (const DecompositionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
