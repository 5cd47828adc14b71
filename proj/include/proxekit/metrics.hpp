#pragma once

#include <vector>

#include "proxekit/sq.hpp"
#include "proxekit/voxel.hpp"

namespace proxekit {

// Symmetric Chamfer distance: mean squared nearest-neighbor distance from a
// to b plus the same from b to a. Both clouds must be non-empty. The
// accelerated path and the brute-force path return identical values.
double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b);
double chamfer_brute(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

// Space claimed by an edit: the union of the listed primitive supports,
// widened by `slack` on the implicit value.
struct EditRegion {
  std::vector<SuperquadricParams> primitives;
  double slack = 0.1;
};

bool region_contains(const EditRegion& region, const Vec3& p);

// Chamfer distance restricted to points outside the region (implicit value
// > 1 + slack for every region primitive). An empty region reduces to plain
// chamfer; throws "empty complement" when either cloud is fully inside.
double l_gd(const std::vector<Vec3>& a, const std::vector<Vec3>& b, const EditRegion& region);

// Intersection over union of occupied cells; 1 when both grids are empty.
double grid_iou(const OccupancyGrid& a, const OccupancyGrid& b);

}  // namespace proxekit
