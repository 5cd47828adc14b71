// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line with its runtime. Exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "proxekit/denoise.hpp"
#include "proxekit/edit_dsl.hpp"
#include "proxekit/fit.hpp"
#include "proxekit/metrics.hpp"
#include "proxekit/pipeline.hpp"

using namespace proxekit;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define REQUIRE_THAT(cond, message)                                       \
  do {                                                                    \
    if (!(cond)) throw Failure(std::string(message) + " [" #cond "]");   \
  } while (0)

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return testing::uniform(rng, lo, hi);
}

// --- 1. implicit-equation consistency --------------------------------------

void criterion_implicit_consistency() {
  std::mt19937_64 rng = make_rng(1001);
  for (int i = 0; i < 1000; ++i) {
    const SuperquadricParams q = testing::random_params(rng);

    const Vec3 local{uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5),
                     uniform(rng, -1.5, 1.5)};
    const Vec3 world = transform_point(pose_matrix(q), local);
    const double via_world = implicit_value(q, world);
    const double via_local = implicit_value_local(q, local);
    REQUIRE_THAT(std::abs(via_world - via_local) <= 1e-9 * std::max(1.0, std::abs(via_local)),
                 "frame consistency");

    const Mat4 round_trip = pose_matrix_inverse(q) * pose_matrix(q);
    REQUIRE_THAT(max_abs_diff(round_trip, Mat4::identity()) < 1e-9, "pose round trip");

    for (const Vec3& p : sample_surface(q, 8)) {
      REQUIRE_THAT(std::abs(implicit_value(q, p) - 1.0) < 1e-6, "surface sample residual");
    }
  }
}

// --- 2. transform algebra ---------------------------------------------------

void criterion_transform_algebra() {
  std::mt19937_64 rng = make_rng(1002);
  for (int i = 0; i < 1000; ++i) {
    const SuperquadricParams q0 = testing::random_params(rng);
    const SuperquadricParams q1 = testing::random_params(rng);
    const SuperquadricParams q2 = testing::random_params(rng);
    REQUIRE_THAT(max_abs_diff(relative_transform(q0, q0), Mat4::identity()) < 1e-8,
                 "relative transform identity");
    const Mat4 direct = relative_transform(q0, q2);
    const Mat4 chained = relative_transform(q1, q2) * relative_transform(q0, q1);
    REQUIRE_THAT(max_abs_diff(direct, chained) < 1e-8, "relative transform composition");
  }
}

// --- 3. voxel volume oracle -------------------------------------------------

void criterion_voxel_volume() {
  Proxy sphere;
  sphere.primitives.push_back(
      testing::make_primitive(0, make_superquadric({0.4, 0.4, 0.4}, 1, 1)));
  const OccupancyGrid grid = voxelize_proxy(sphere, 64);
  const double analytic = (4.0 / 3.0) * 3.14159265358979323846 * std::pow(0.4, 3) *
                          std::pow(64.0, 3);
  REQUIRE_THAT(std::abs(static_cast<double>(grid.count()) - analytic) <= 0.02 * analytic,
               "sphere occupancy vs analytic volume");

  const TriMesh box = testing::box_mesh({-0.25, -0.25, -0.25}, {0.25, 0.25, 0.25});
  const OccupancyGrid box_grid = voxelize_mesh(box, 64);
  const double count = static_cast<double>(box_grid.count());
  REQUIRE_THAT(count >= 31.0 * 31.0 * 31.0 && count <= 33.0 * 33.0 * 33.0,
               "box occupancy within one shell of 32^3");
}

// --- 4. mask algebra --------------------------------------------------------

void criterion_mask_algebra() {
  std::mt19937_64 rng = make_rng(1004);
  for (int round = 0; round < 200; ++round) {
    Proxy orig;
    const int count = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i) {
      orig.primitives.push_back(testing::make_primitive(
          i, make_superquadric(
                 {uniform(rng, 0.05, 0.22), uniform(rng, 0.05, 0.22), uniform(rng, 0.05, 0.22)},
                 uniform(rng, 0.3, 1.7), uniform(rng, 0.3, 1.7),
                 {uniform(rng, -0.25, 0.25), uniform(rng, -0.25, 0.25),
                  uniform(rng, -0.25, 0.25)})));
    }
    Proxy edit = orig;
    if (rng() % 2 == 0) edit.primitives[0].params.translation.x += uniform(rng, 0.05, 0.2);
    if (count > 1 && rng() % 3 == 0) edit.primitives.pop_back();
    if (rng() % 3 == 0) {
      edit.primitives.push_back(testing::make_primitive(
          40 + round % 8,
          make_superquadric({0.08, 0.08, 0.08}, 1, 1, {uniform(rng, -0.3, 0.3), 0, 0})));
    }

    const OccupancyGrid grid = voxelize_proxy(orig, 16);
    const PrimitiveDiff diff = diff_proxies(orig, edit);
    const MaskSet masks = masks_from_diff(diff, grid, orig, edit);

    REQUIRE_THAT(grid_and(masks.uc, masks.ed).count() == 0, "uc/ed disjoint");
    REQUIRE_THAT(grid_and(masks.uc, masks.nw).count() == 0, "uc/new disjoint");
    REQUIRE_THAT(grid_and(masks.ed, masks.nw).count() == 0, "ed/new disjoint");

    // Brute-force re-computation of the definitions, cell for cell.
    const auto any_inside = [&](const Proxy& proxy, const std::vector<int>& ids,
                                const Vec3& c) {
      for (int id : ids) {
        if (inside(find_primitive(proxy, id)->params, c)) return true;
      }
      return false;
    };
    const int n = grid.n;
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const Vec3 c = grid.cell_center(i, j, k);
          const bool in_ed = any_inside(edit, diff.edited_ids(), c);
          const bool in_new = any_inside(edit, diff.added_ids(), c) ||
                              any_inside(orig, diff.deleted_ids(), c);
          const bool in_old = any_inside(orig, diff.edited_ids(), c);
          REQUIRE_THAT(masks.nw.at(i, j, k) == in_new, "new mask matches brute force");
          REQUIRE_THAT(masks.ed.at(i, j, k) == (in_ed && !in_new),
                       "ed mask matches brute force");
          REQUIRE_THAT(masks.uc.at(i, j, k) ==
                           (grid.at(i, j, k) && !in_ed && !in_new && !in_old),
                       "uc mask matches brute force");
        }
      }
    }

    const PrimitiveDiff same = diff_proxies(orig, orig);
    const MaskSet identity = masks_from_diff(same, grid, orig, orig);
    REQUIRE_THAT(identity.uc == grid, "identity diff: uc equals the original grid");
    REQUIRE_THAT(identity.ed.count() == 0 && identity.nw.count() == 0,
                 "identity diff: ed and new empty");
  }
}

// --- 5. inversion exactness -------------------------------------------------

void criterion_inversion_exactness() {
  std::mt19937_64 rng = make_rng(1005);
  for (int round = 0; round < 50; ++round) {
    OccupancyGrid shape = OccupancyGrid::empty(16);
    for (auto& cell : shape.cells) cell = rng() % 2;
    OccupancyGrid cond = OccupancyGrid::empty(16);
    for (auto& cell : cond.cells) cell = rng() % 2;

    const ReferenceDenoiser d(encode(cond), 25);
    const auto trajectory = invert(encode(shape), d, 25);
    LatentGrid z = trajectory[25];
    for (int t = 25; t > 0; --t) {
      REQUIRE_THAT(z.values == trajectory[t].values, "state matches the stored trajectory");
      z = forward_step(z, d);
      REQUIRE_THAT(z.values == trajectory[t - 1].values, "denoise step is bit-exact");
    }
  }
}

// --- 6. injection dominance -------------------------------------------------

void criterion_injection_dominance() {
  std::mt19937_64 rng = make_rng(1006);
  const BlendSchedule sched = BlendSchedule::defaults(25);
  for (int round = 0; round < 20; ++round) {
    Proxy orig;
    orig.primitives.push_back(testing::make_primitive(
        0, make_superquadric(
               {uniform(rng, 0.08, 0.16), uniform(rng, 0.08, 0.16), uniform(rng, 0.08, 0.16)},
               1, 1, {uniform(rng, -0.3, -0.1), uniform(rng, -0.1, 0.1), 0})));
    orig.primitives.push_back(testing::make_primitive(
        1, make_superquadric(
               {uniform(rng, 0.08, 0.16), uniform(rng, 0.08, 0.16), uniform(rng, 0.08, 0.16)},
               1, 1, {uniform(rng, 0.1, 0.3), uniform(rng, -0.1, 0.1), 0})));
    Proxy edit = orig;
    edit.primitives[0].params.translation.y += uniform(rng, 0.08, 0.2);

    const OccupancyGrid grid_orig = voxelize_proxy(orig, 16);
    const PrimitiveDiff diff = diff_proxies(orig, edit);
    const MaskSet masks = masks_from_diff(diff, grid_orig, orig, edit);
    const OccupancyGrid warped = warp_grid(grid_orig, build_warp_field(diff));
    const OccupancyGrid proxy_grid = voxelize_proxy(edit, 16);

    const ReferenceDenoiser d(encode(proxy_grid), sched.total);
    const auto proxy_traj = invert(encode(proxy_grid), d, sched.t_init);
    const auto orig_traj = invert(encode(grid_orig), d, sched.t_init);
    const auto warp_traj = invert(encode(warped), d, sched.t_init);

    blended_denoise(proxy_traj, orig_traj, warp_traj, masks, sched, d,
                    [&](const LatentGrid& z, int t) {
                      if (t <= sched.t_uc) return;
                      for (std::size_t i = 0; i < z.values.size(); ++i) {
                        if (!masks.uc.cells[i]) continue;
                        if (z.values[i] != orig_traj[t].values[i]) {
                          throw Failure("latent diverges from the original on uc at t=" +
                                        std::to_string(t));
                        }
                      }
                    });
  }
}

// --- 7. end-to-end identity edit ---------------------------------------------

void criterion_identity_pipeline() {
  const auto dir = testing::make_temp_dir("accept_identity");
  const TriMesh mesh = testing::icosphere({0, 0, 0}, 0.4, 5);
  const std::string mesh_path = (dir / "sphere.obj").string();
  save_obj(mesh, mesh_path);

  const Proxy proxy = decompose(mesh.vertices, 1, 0, "sphere");
  const std::string proxy_path = (dir / "proxy.json").string();
  save_proxy_file(proxy, proxy_path);
  {
    std::ofstream script(dir / "identity.pxe");
    script << "# identity edit\n";
  }

  const PipelineResult result = run_pipeline(mesh_path, proxy_path,
                                             (dir / "identity.pxe").string(),
                                             (dir / "out").string(), PipelineConfig{});
  REQUIRE_THAT(result.grid_iou >= 0.98, "identity edit keeps IoU >= 0.98");
  REQUIRE_THAT(result.l_gd.has_value(), "identity edit has an off-region complement");
  REQUIRE_THAT(*result.l_gd <= 1e-9, "identity edit keeps l-GD at zero");
  std::filesystem::remove_all(dir);
}

// --- 8. end-to-end translation edit ------------------------------------------

void criterion_translation_pipeline() {
  const auto dir = testing::make_temp_dir("accept_translate");
  const Vec3 left_center{-0.25, 0, 0};
  const Vec3 right_center{3.0 / 64.0, 0, 0};
  const TriMesh mesh = testing::merge_meshes(testing::icosphere(left_center, 0.12, 5),
                                             testing::icosphere(right_center, 0.12, 5));
  const std::string mesh_path = (dir / "pair.obj").string();
  save_obj(mesh, mesh_path);

  const Proxy proxy = decompose(mesh.vertices, 2, 0, "pair");
  const std::string proxy_path = (dir / "proxy.json").string();
  save_proxy_file(proxy, proxy_path);

  // Translate the right-hand primitive by 0.2 along x.
  int moving_id = -1;
  for (const Primitive& p : proxy.primitives) {
    if (p.params.translation.x > -0.1) moving_id = p.id;
  }
  REQUIRE_THAT(moving_id >= 0, "found the primitive to translate");
  {
    std::ofstream script(dir / "translate.pxe");
    script << "translate #" << moving_id << " by 0.2 0 0\n";
  }

  const std::string out_dir = (dir / "out").string();
  const PipelineResult result = run_pipeline(
      mesh_path, proxy_path, (dir / "translate.pxe").string(), out_dir, PipelineConfig{});

  const OccupancyGrid grid_orig = load_grid(out_dir + "/grid_orig.pxvg");
  const OccupancyGrid denoised = load_grid(out_dir + "/denoised.pxvg");
  const OccupancyGrid mask_uc = load_grid(out_dir + "/mask_uc.pxvg");
  const OccupancyGrid mask_ed = load_grid(out_dir + "/mask_ed.pxvg");

  REQUIRE_THAT(grid_and(denoised, mask_uc) == grid_and(grid_orig, mask_uc),
               "output voxels in the unchanged mask match the original exactly");

  // Warp oracle, recomputed from the stage files.
  const Proxy orig_reload = load_proxy_file(proxy_path);
  const Proxy edit_reload = load_proxy_file(out_dir + "/edited.json");
  const PrimitiveDiff diff = diff_proxies(orig_reload, edit_reload);
  const OccupancyGrid warped_oracle = warp_grid(grid_orig, build_warp_field(diff));
  const double oracle_mass = static_cast<double>(grid_and(warped_oracle, mask_ed).count());
  const double output_mass = static_cast<double>(grid_and(denoised, mask_ed).count());
  REQUIRE_THAT(oracle_mass > 0.0, "the edited mask receives some warped mass");
  REQUIRE_THAT(std::abs(output_mass - oracle_mass) <= 0.10 * oracle_mass,
               "occupied mass in the edited mask within 10% of the warp oracle");

  REQUIRE_THAT(result.l_gd.has_value(), "translation edit has an off-region complement");
  REQUIRE_THAT(*result.l_gd < 1e-3, "l-GD outside the edited region below 1e-3");
  std::filesystem::remove_all(dir);
}

// --- 9. fitting recovery ------------------------------------------------------

void criterion_fit_recovery() {
  std::mt19937_64 rng = make_rng(1009);
  for (int round = 0; round < 5; ++round) {
    const SuperquadricParams truth = make_superquadric(
        {uniform(rng, 0.3, 1.0), uniform(rng, 0.25, 0.8), uniform(rng, 0.2, 0.6)},
        uniform(rng, 0.35, 1.6), uniform(rng, 0.35, 1.6),
        {uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2)},
        {uniform(rng, -1.5, 1.5), uniform(rng, -0.8, 0.8), uniform(rng, -1.5, 1.5)});
    const auto points = sample_surface(truth, 1600);
    const FitResult fit = fit_single(points, moments_init(points));
    const auto recovered = sample_surface(fit.params, 1600);
    const double max_scale = std::max({truth.scale.x, truth.scale.y, truth.scale.z});
    const double distance = chamfer(recovered, points);
    REQUIRE_THAT(distance < 0.02 * max_scale,
                 "draw " + std::to_string(round) + ": Chamfer recovery");
  }

  // Bit-determinism of the decomposition under a fixed seed.
  std::vector<Vec3> cloud;
  const SuperquadricParams a = make_superquadric({0.5, 0.4, 0.3}, 0.8, 1.1, {-0.8, 0, 0});
  const SuperquadricParams b = make_superquadric({0.4, 0.4, 0.5}, 1.2, 0.7, {0.8, 0.1, 0});
  for (const Vec3& p : sample_surface(a, 700)) cloud.push_back(p);
  for (const Vec3& p : sample_surface(b, 700)) cloud.push_back(p);
  const std::string once = save_proxy(decompose(cloud, 2, 42));
  const std::string twice = save_proxy(decompose(cloud, 2, 42));
  REQUIRE_THAT(once == twice, "decompose is bit-deterministic for a fixed seed");
}

// --- 10. edit-language conformance --------------------------------------------

void criterion_dsl_conformance() {
  struct ValidCase {
    const char* text;
    EditVerb verb;
    std::vector<int> ids;
    std::vector<double> args;
  };
  const ValidCase valid[] = {
      {"scale #3 by 1.0 1.0 1.5", EditVerb::Scale, {3}, {1.0, 1.0, 1.5}},
      {"SCALE #0 #1 by 2 2 2", EditVerb::Scale, {0, 1}, {2, 2, 2}},
      {"scale #12 by 0.5 0.5 0.5", EditVerb::Scale, {12}, {0.5, 0.5, 0.5}},
      {"translate #1 #4 by 0 0.1 0", EditVerb::Translate, {1, 4}, {0, 0.1, 0}},
      {"translate #9 by -0.25 0 1e-3", EditVerb::Translate, {9}, {-0.25, 0, 1e-3}},
      {"Translate #2 by 0 0 0", EditVerb::Translate, {2}, {0, 0, 0}},
      {"rotate #5 by 0 0 1.5707", EditVerb::Rotate, {5}, {0, 0, 1.5707}},
      {"ROTATE #5 #6 by -3 0.5 0", EditVerb::Rotate, {5, 6}, {-3, 0.5, 0}},
      {"shape #2 by 0.3 1.7", EditVerb::Shape, {2}, {0.3, 1.7}},
      {"shape #0 by 1 1", EditVerb::Shape, {0}, {1, 1}},
      {"delete #2", EditVerb::Delete, {2}, {}},
      {"delete #2 #5 #9", EditVerb::Delete, {2, 5, 9}, {}},
      {"DELETE #0", EditVerb::Delete, {0}, {}},
      {"add #7 scale 0.2 0.2 0.4 shape 1 0.5 at 0 0 0.3 rot 0 0 1.57",
       EditVerb::Add,
       {7},
       {0.2, 0.2, 0.4, 1, 0.5, 0, 0, 0.3, 0, 0, 1.57}},
      {"ADD #11 SCALE 1 1 1 SHAPE 0.1 1.9 AT -0.5 0 0 ROT 0 0 0",
       EditVerb::Add,
       {11},
       {1, 1, 1, 0.1, 1.9, -0.5, 0, 0, 0, 0, 0}},
      {"clone #2 as #9 offset 0 0 0.5", EditVerb::Clone, {2, 9}, {0, 0, 0.5}},
      {"CLONE #0 AS #4 OFFSET -0.1 0.2 0", EditVerb::Clone, {0, 4}, {-0.1, 0.2, 0}},
      {"  scale   #3   by  1  1  1.5  ", EditVerb::Scale, {3}, {1, 1, 1.5}},
      {"# full-line comment\nscale #3 by 1 1 1.5", EditVerb::Scale, {3}, {1, 1, 1.5}},
      {"\n\nscale #3 by 1 1 1.5\n\n", EditVerb::Scale, {3}, {1, 1, 1.5}},
  };
  int index = 0;
  for (const ValidCase& c : valid) {
    ++index;
    const EditScript script = parse_script(c.text);
    REQUIRE_THAT(script.commands.size() == 1,
                 "valid case " + std::to_string(index) + " parses one command");
    const EditCommand& cmd = script.commands[0];
    REQUIRE_THAT(cmd.verb == c.verb, "valid case " + std::to_string(index) + " verb");
    REQUIRE_THAT(cmd.ids == c.ids, "valid case " + std::to_string(index) + " ids");
    REQUIRE_THAT(cmd.args == c.args, "valid case " + std::to_string(index) + " args");

    // print/parse idempotence on every valid case.
    const EditScript reparsed = parse_script(print_script(script));
    REQUIRE_THAT(reparsed.commands.size() == 1 && reparsed.commands[0] == cmd,
                 "valid case " + std::to_string(index) + " print/parse idempotence");
  }

  struct InvalidCase {
    const char* text;
    int line;
    int col;
  };
  const InvalidCase invalid[] = {
      {"shrink #3", 1, 1},
      {"scale #3", 1, 9},                       // missing 'by'
      {"scale #3 by 1 1", 1, 16},               // missing a number
      {"scale #3 by 1 1 potato", 1, 17},        // non-numeric
      {"scale by 1 1 1", 1, 7},                 // missing selector
      {"scale #x by 1 1 1", 1, 7},              // malformed id
      {"translate #1 by 1 1 1 1", 1, 23},       // extra token
      {"rotate #1 to 1 1 1", 1, 11},            // wrong keyword
      {"shape #1 by 0.5", 1, 16},               // arity 2 expected
      {"grow #1 by 1 1 1\nscale #1 by 1 1 1", 1, 1},
      {"scale #1 by 1 1 1\nshrink #2", 2, 1},
      {"add #5 scale 1 1 1 shape 1 1 at 0 0 0 rot 0 0 0\nadd #5 scale 1 1 1 shape 1 1 at 0 0 0 rot 0 0 0",
       2, 5},
      {"clone #1 as 4 offset 0 0 0", 1, 13},    // new id must be #n
      {"delete", 1, 7},                          // empty selector
  };
  for (const InvalidCase& c : invalid) {
    ++index;
    bool threw = false;
    try {
      parse_script(c.text);
    } catch (const ScriptError& e) {
      threw = true;
      REQUIRE_THAT(e.line == c.line, "invalid case " + std::to_string(index) + " line (got " +
                                         std::to_string(e.line) + ")");
      REQUIRE_THAT(e.col == c.col, "invalid case " + std::to_string(index) + " col (got " +
                                       std::to_string(e.col) + ")");
    }
    REQUIRE_THAT(threw, "invalid case " + std::to_string(index) + " is rejected");
  }
  REQUIRE_THAT(index >= 30, "the golden corpus covers at least 30 cases");
}

// --- 11. appearance transfer ----------------------------------------------------

void criterion_appearance_transfer() {
  const int n = 16;
  Proxy orig;
  orig.primitives.push_back(testing::make_primitive(
      0, make_superquadric({0.15, 0.15, 0.15}, 1, 1, {-7.0 / 32.0, -7.0 / 32.0, 0})));
  orig.primitives.push_back(testing::make_primitive(
      1, make_superquadric({0.15, 0.15, 0.15}, 1, 1, {7.0 / 32.0, 7.0 / 32.0, 0})));
  Proxy edit = orig;
  edit.primitives[0].params.translation.x += 0.25;  // exactly 4 cells at N=16

  const OccupancyGrid grid_orig = voxelize_proxy(orig, n);
  const PrimitiveDiff diff = diff_proxies(orig, edit);
  const MaskSet masks = masks_from_diff(diff, grid_orig, orig, edit);
  const WarpField field = build_warp_field(diff);

  FeatureGrid feat = FeatureGrid::zeros(n);
  std::mt19937_64 rng = make_rng(1011);
  for (std::size_t i = 0; i < grid_orig.cells.size(); ++i) {
    if (grid_orig.cells[i]) {
      feat.values[i] = {uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)};
      feat.defined[i] = 1;
    }
  }

  const FeatureGrid out = transfer_features(feat, masks, field, 32);
  std::size_t checked_uc = 0, checked_ed = 0;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = grid_orig.index(i, j, k);
        if (masks.uc.cells[idx]) {
          REQUIRE_THAT(out.defined[idx], "uc cells receive a copy");
          REQUIRE_THAT(out.values[idx] == feat.values[idx], "uc copy is exact");
          ++checked_uc;
        }
        if (masks.ed.cells[idx]) {
          // Brute-force shift oracle: the source cell is four cells left.
          REQUIRE_THAT(i >= 4, "edited cells have an in-bounds source");
          const std::size_t src = grid_orig.index(i - 4, j, k);
          REQUIRE_THAT(feat.defined[src], "the shifted source is defined");
          REQUIRE_THAT(out.defined[idx], "ed cells receive a value");
          REQUIRE_THAT(out.values[idx] == feat.values[src], "ed copy is an exact shift");
          ++checked_ed;
        }
      }
    }
  }
  REQUIRE_THAT(checked_uc > 0, "the unchanged mask is non-trivial");
  REQUIRE_THAT(checked_ed > 0, "the edited mask is non-trivial");
}

struct Criterion {
  const char* name;
  double time_limit_seconds;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"implicit-equation consistency", 5.0, criterion_implicit_consistency},
      {"transform algebra", 2.0, criterion_transform_algebra},
      {"voxel volume oracle", 3.0, criterion_voxel_volume},
      {"mask algebra", 10.0, criterion_mask_algebra},
      {"inversion exactness", 5.0, criterion_inversion_exactness},
      {"injection dominance", 10.0, criterion_injection_dominance},
      {"end-to-end identity edit", 30.0, criterion_identity_pipeline},
      {"end-to-end translation edit", 60.0, criterion_translation_pipeline},
      {"fitting recovery", 60.0, criterion_fit_recovery},
      {"edit-language conformance", 1.0, criterion_dsl_conformance},
      {"appearance transfer", 5.0, criterion_appearance_transfer},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& criterion = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      criterion.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && elapsed > criterion.time_limit_seconds) {
      std::ostringstream message;
      message << "exceeded the " << criterion.time_limit_seconds << " s budget";
      error = message.str();
    }
    if (error.empty()) {
      std::printf("[PASS] %2zu. %s (%.2f s)\n", i + 1, criterion.name, elapsed);
    } else {
      std::printf("[FAIL] %2zu. %s (%.2f s): %s\n", i + 1, criterion.name, elapsed,
                  error.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d of %zu acceptance criteria failed\n", failures, criteria.size());
  }
  return failures;
}
