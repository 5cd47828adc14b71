#pragma once

#include <vector>

#include "proxekit/proxy.hpp"
#include "proxekit/voxel.hpp"

namespace proxekit {

inline constexpr double kDefaultWarpSlack = 0.1;

// Relative transform pose(edit) * pose(orig)^-1 mapping a primitive's
// original placement onto its edited placement.
Mat4 relative_transform(const SuperquadricParams& orig, const SuperquadricParams& edit);

// One entry per edited primitive pair. `support` is the primitive at its
// original pose (membership test for forward point warps), `target` the
// edited pose (membership test for grid gathers).
struct WarpEntry {
  int id = 0;
  Mat4 rel;
  SuperquadricParams support;
  SuperquadricParams target;
};

struct WarpField {
  std::vector<WarpEntry> entries;
  double slack = kDefaultWarpSlack;  // membership slack on the implicit value
};

WarpField build_warp_field(const PrimitiveDiff& diff, double slack = kDefaultWarpSlack);

// Points with implicit value <= 1 + slack for some entry's support move by
// that entry's transform (smallest implicit value wins ties); all other
// points pass through unchanged.
std::vector<Vec3> warp_points(const std::vector<Vec3>& points, const WarpField& field);

// Inverse-lookup (gather) warp: an output cell claimed by an entry (implicit
// value of the target pose <= 1 + slack, smallest value wins) samples the
// original grid at the nearest cell to rel^-1 * center; out-of-bounds
// lookups read as empty. Unclaimed cells copy the input.
OccupancyGrid warp_grid(const OccupancyGrid& grid_orig, const WarpField& field);

}  // namespace proxekit
