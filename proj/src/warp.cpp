#include "proxekit/warp.hpp"

#include <cmath>
#include <limits>

#include "proxekit/parallel.hpp"

namespace proxekit {

Mat4 relative_transform(const SuperquadricParams& orig, const SuperquadricParams& edit) {
  return pose_matrix(edit) * pose_matrix_inverse(orig);
}

WarpField build_warp_field(const PrimitiveDiff& diff, double slack) {
  if (slack < 0.0) throw std::invalid_argument("warp slack must be non-negative");
  WarpField field;
  field.slack = slack;
  field.entries.reserve(diff.edited.size());
  for (const PrimitiveDiff::EditedPair& pair : diff.edited) {
    WarpEntry entry;
    entry.id = pair.edit.id;
    entry.rel = relative_transform(pair.orig.params, pair.edit.params);
    entry.support = pair.orig.params;
    entry.target = pair.edit.params;
    field.entries.push_back(entry);
  }
  return field;
}

namespace {

// Index of the entry whose primitive contains p within slack, preferring the
// smallest implicit value; -1 when no entry claims p.
int claim_entry(const WarpField& field, const std::vector<Mat4>& world_to_local,
                bool use_target, const Vec3& p) {
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < field.entries.size(); ++e) {
    const SuperquadricParams& q =
        use_target ? field.entries[e].target : field.entries[e].support;
    const double f = implicit_value_local(q, transform_point(world_to_local[e], p));
    if (f <= 1.0 + field.slack && f < best_value) {
      best_value = f;
      best = static_cast<int>(e);
    }
  }
  return best;
}

std::vector<Mat4> local_transforms(const WarpField& field, bool use_target) {
  std::vector<Mat4> result;
  result.reserve(field.entries.size());
  for (const WarpEntry& entry : field.entries) {
    result.push_back(pose_matrix_inverse(use_target ? entry.target : entry.support));
  }
  return result;
}

}  // namespace

std::vector<Vec3> warp_points(const std::vector<Vec3>& points, const WarpField& field) {
  std::vector<Vec3> result = points;
  if (field.entries.empty()) return result;
  const std::vector<Mat4> world_to_local = local_transforms(field, /*use_target=*/false);
  parallel_for(points.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const int owner = claim_entry(field, world_to_local, /*use_target=*/false, points[i]);
      if (owner >= 0) result[i] = transform_point(field.entries[owner].rel, points[i]);
    }
  });
  return result;
}

OccupancyGrid warp_grid(const OccupancyGrid& grid_orig, const WarpField& field) {
  OccupancyGrid result = grid_orig;
  if (field.entries.empty()) return result;
  const int n = grid_orig.n;
  const std::vector<Mat4> world_to_local = local_transforms(field, /*use_target=*/true);
  std::vector<Mat4> rel_inverse;
  rel_inverse.reserve(field.entries.size());
  for (const WarpEntry& entry : field.entries) rel_inverse.push_back(affine_inverse(entry.rel));

  parallel_for(result.cells.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int i = static_cast<int>(idx % n);
      const int j = static_cast<int>((idx / n) % n);
      const int k = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
      const Vec3 center = grid_orig.cell_center(i, j, k);
      const int owner = claim_entry(field, world_to_local, /*use_target=*/true, center);
      if (owner < 0) continue;
      const Vec3 source = transform_point(rel_inverse[owner], center);
      const int si = static_cast<int>(std::floor((source.x + 0.5) * n));
      const int sj = static_cast<int>(std::floor((source.y + 0.5) * n));
      const int sk = static_cast<int>(std::floor((source.z + 0.5) * n));
      const bool in_bounds = si >= 0 && sj >= 0 && sk >= 0 && si < n && sj < n && sk < n;
      result.cells[idx] = in_bounds && grid_orig.at(si, sj, sk) ? 1 : 0;
    }
  });
  return result;
}

}  // namespace proxekit
