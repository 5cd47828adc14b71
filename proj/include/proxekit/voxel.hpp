#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "proxekit/mesh.hpp"
#include "proxekit/proxy.hpp"

namespace proxekit {

inline constexpr int kMinResolution = 8;
inline constexpr int kMaxResolution = 256;

// Dense boolean occupancy over the normalized object cube [-0.5, 0.5]^3,
// n cells per axis, x-fastest linear order. Cell (i, j, k) is centered at
// -0.5 + (i + 0.5) / n per axis.
struct OccupancyGrid {
  int n = 0;
  std::vector<std::uint8_t> cells;

  static OccupancyGrid empty(int n);

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n) * (static_cast<std::size_t>(j) +
                                          static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  }
  bool at(int i, int j, int k) const { return cells[index(i, j, k)] != 0; }
  void set(int i, int j, int k, bool value) { cells[index(i, j, k)] = value ? 1 : 0; }
  Vec3 cell_center(int i, int j, int k) const {
    return {-0.5 + (i + 0.5) / n, -0.5 + (j + 0.5) / n, -0.5 + (k + 0.5) / n};
  }
  std::size_t count() const;
};

bool operator==(const OccupancyGrid& a, const OccupancyGrid& b);
OccupancyGrid grid_and(const OccupancyGrid& a, const OccupancyGrid& b);
OccupancyGrid grid_or(const OccupancyGrid& a, const OccupancyGrid& b);
OccupancyGrid grid_subtract(const OccupancyGrid& a, const OccupancyGrid& b);

// Cell-center point-membership voxelization of the selected primitives
// (all primitives in the two-argument form). Unknown requested ids throw.
OccupancyGrid voxelize_proxy(const Proxy& proxy, int n);
OccupancyGrid voxelize_proxy(const Proxy& proxy, const std::vector<int>& ids, int n);

// Parity voxelization along +x rays for closed meshes; non-closed meshes
// fall back to surface rasterization plus a 6-connected outside flood fill.
// An empty mesh yields an all-false grid.
OccupancyGrid voxelize_mesh(const TriMesh& mesh, int n);

// `radius` rounds of 6-connected dilation.
OccupancyGrid dilate(const OccupancyGrid& grid, int radius);

// Spatial masks for the blending stages. `nw` holds the new regions (added
// or deleted primitives; `new` is a reserved word). The three grids are
// pairwise disjoint, with overlap priority nw > ed > uc.
struct MaskSet {
  OccupancyGrid uc;
  OccupancyGrid ed;
  OccupancyGrid nw;
};

// uc: original occupancy minus everything an edit touches (the edited
// primitives' regions at both poses and the new regions).
// ed: edited primitives voxelized at their post-edit pose.
// nw: added primitives at their pose in the edited proxy, plus deleted
// primitives at their original pose.
// An optional dilation radius widens ed/nw (and the excluded original
// footprint) before priorities are resolved.
MaskSet masks_from_diff(const PrimitiveDiff& diff, const OccupancyGrid& grid_orig,
                        const Proxy& orig, const Proxy& edit, int dilation_radius = 0);

// Marching cubes over the 0/1 cell-center field (one padding ring of empty
// cells, iso level 0.5, linear interpolation along lattice edges). Closed
// meshes for interior-connected grids; an empty grid yields an empty mesh.
TriMesh extract_mesh(const OccupancyGrid& grid);

// PXVG: text header "PXVG 1 <n>\n" followed by n^3 bytes of 0/1, x-fastest.
void save_grid(const OccupancyGrid& grid, const std::string& path);
OccupancyGrid load_grid(const std::string& path);

}  // namespace proxekit
