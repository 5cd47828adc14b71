#include "proxekit/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "proxekit/parallel.hpp"

namespace proxekit {

namespace {

void check_resolution(int n) {
  if (n < kMinResolution || n > kMaxResolution) {
    throw std::invalid_argument("resolution must be in [" + std::to_string(kMinResolution) +
                                ", " + std::to_string(kMaxResolution) + "]");
  }
}

void check_same_resolution(const OccupancyGrid& a, const OccupancyGrid& b) {
  if (a.n != b.n) throw std::invalid_argument("grids have different resolutions");
}

}  // namespace

OccupancyGrid OccupancyGrid::empty(int n) {
  check_resolution(n);
  OccupancyGrid grid;
  grid.n = n;
  grid.cells.assign(static_cast<std::size_t>(n) * n * n, 0);
  return grid;
}

std::size_t OccupancyGrid::count() const {
  return static_cast<std::size_t>(std::accumulate(cells.begin(), cells.end(), std::size_t{0}));
}

bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
  return a.n == b.n && a.cells == b.cells;
}

OccupancyGrid grid_and(const OccupancyGrid& a, const OccupancyGrid& b) {
  check_same_resolution(a, b);
  OccupancyGrid r = a;
  for (std::size_t i = 0; i < r.cells.size(); ++i) r.cells[i] = a.cells[i] & b.cells[i];
  return r;
}

OccupancyGrid grid_or(const OccupancyGrid& a, const OccupancyGrid& b) {
  check_same_resolution(a, b);
  OccupancyGrid r = a;
  for (std::size_t i = 0; i < r.cells.size(); ++i) r.cells[i] = a.cells[i] | b.cells[i];
  return r;
}

OccupancyGrid grid_subtract(const OccupancyGrid& a, const OccupancyGrid& b) {
  check_same_resolution(a, b);
  OccupancyGrid r = a;
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    r.cells[i] = static_cast<std::uint8_t>(a.cells[i] & ~b.cells[i] & 1);
  }
  return r;
}

OccupancyGrid voxelize_proxy(const Proxy& proxy, int n) {
  std::vector<int> ids;
  ids.reserve(proxy.primitives.size());
  for (const Primitive& p : proxy.primitives) ids.push_back(p.id);
  return voxelize_proxy(proxy, ids, n);
}

OccupancyGrid voxelize_proxy(const Proxy& proxy, const std::vector<int>& ids, int n) {
  validate_proxy(proxy);
  OccupancyGrid grid = OccupancyGrid::empty(n);
  std::vector<const Primitive*> selected;
  selected.reserve(ids.size());
  for (int id : ids) {
    const Primitive* p = find_primitive(proxy, id);
    if (!p) throw std::invalid_argument("unknown primitive id " + std::to_string(id));
    selected.push_back(p);
  }
  if (selected.empty()) return grid;

  std::vector<Mat4> world_to_local;
  world_to_local.reserve(selected.size());
  for (const Primitive* p : selected) world_to_local.push_back(pose_matrix_inverse(p->params));

  const std::size_t total = grid.cells.size();
  parallel_for(total, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int i = static_cast<int>(idx % n);
      const int j = static_cast<int>((idx / n) % n);
      const int k = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
      const Vec3 center = grid.cell_center(i, j, k);
      for (std::size_t s = 0; s < selected.size(); ++s) {
        const Vec3 local = transform_point(world_to_local[s], center);
        if (implicit_value_local(selected[s]->params, local) <= 1.0) {
          grid.cells[idx] = 1;
          break;
        }
      }
    }
  });
  return grid;
}

namespace {

// Tiny fixed offsets keep the parity rays away from shared triangle edges
// and vertices without moving the sample point measurably.
constexpr double kRayJitterY = 7.548776662e-8;
constexpr double kRayJitterZ = 5.698402910e-8;

OccupancyGrid voxelize_mesh_parity(const TriMesh& mesh, int n) {
  OccupancyGrid grid = OccupancyGrid::empty(n);
  // Bucket triangles into (j, k) rows by their yz bounding boxes.
  const auto row_of = [n](double v) {
    return static_cast<int>(std::floor((v + 0.5) * n - 0.5));
  };
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n) * n);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const int j0 = std::max(0, row_of(std::min({a.y, b.y, c.y})) - 1);
    const int j1 = std::min(n - 1, row_of(std::max({a.y, b.y, c.y})) + 1);
    const int k0 = std::max(0, row_of(std::min({a.z, b.z, c.z})) - 1);
    const int k1 = std::min(n - 1, row_of(std::max({a.z, b.z, c.z})) + 1);
    for (int k = k0; k <= k1; ++k) {
      for (int j = j0; j <= j1; ++j) {
        rows[static_cast<std::size_t>(k) * n + j].push_back(static_cast<int>(t));
      }
    }
  }

  parallel_for(rows.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> crossings;
    for (std::size_t row = begin; row < end; ++row) {
      const auto& bucket = rows[row];
      if (bucket.empty()) continue;
      const int j = static_cast<int>(row % n);
      const int k = static_cast<int>(row / n);
      const double ry = -0.5 + (j + 0.5) / static_cast<double>(n) + kRayJitterY;
      const double rz = -0.5 + (k + 0.5) / static_cast<double>(n) + kRayJitterZ;
      crossings.clear();
      for (int t : bucket) {
        const auto& tri = mesh.triangles[t];
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        // 2D point-in-triangle in the yz plane.
        const double e0 = (b.y - a.y) * (rz - a.z) - (b.z - a.z) * (ry - a.y);
        const double e1 = (c.y - b.y) * (rz - b.z) - (c.z - b.z) * (ry - b.y);
        const double e2 = (a.y - c.y) * (rz - c.z) - (a.z - c.z) * (ry - c.y);
        const bool hit = (e0 > 0 && e1 > 0 && e2 > 0) || (e0 < 0 && e1 < 0 && e2 < 0);
        if (!hit) continue;
        const Vec3 normal = cross(b - a, c - a);
        if (normal.x == 0.0) continue;  // parallel to the ray
        const double x = a.x - (normal.y * (ry - a.y) + normal.z * (rz - a.z)) / normal.x;
        crossings.push_back(x);
      }
      if (crossings.empty()) continue;
      std::sort(crossings.begin(), crossings.end());
      for (int i = 0; i < n; ++i) {
        const double cx = -0.5 + (i + 0.5) / static_cast<double>(n);
        const std::size_t below =
            std::lower_bound(crossings.begin(), crossings.end(), cx) - crossings.begin();
        if (below % 2 == 1) grid.cells[grid.index(i, j, k)] = 1;
      }
    }
  });
  return grid;
}

OccupancyGrid voxelize_mesh_flood(const TriMesh& mesh, int n) {
  OccupancyGrid surface = OccupancyGrid::empty(n);
  const auto clamp_cell = [n](int v) { return std::clamp(v, 0, n - 1); };
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const double longest = std::max({norm(b - a), norm(c - a), norm(c - b)});
    const int steps = std::clamp(static_cast<int>(std::ceil(longest * n * 2.0)) + 1, 1, 512);
    for (int u = 0; u <= steps; ++u) {
      for (int v = 0; v <= steps - u; ++v) {
        const double fu = static_cast<double>(u) / steps;
        const double fv = static_cast<double>(v) / steps;
        const Vec3 p = a + fu * (b - a) + fv * (c - a);
        const int i = clamp_cell(static_cast<int>(std::floor((p.x + 0.5) * n)));
        const int j = clamp_cell(static_cast<int>(std::floor((p.y + 0.5) * n)));
        const int k = clamp_cell(static_cast<int>(std::floor((p.z + 0.5) * n)));
        surface.cells[surface.index(i, j, k)] = 1;
      }
    }
  }

  // Everything 6-connected to the grid boundary through non-surface cells is
  // outside; the rest is occupied.
  std::vector<std::uint8_t> outside(surface.cells.size(), 0);
  std::deque<std::array<int, 3>> queue;
  const auto try_push = [&](int i, int j, int k) {
    if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) return;
    const std::size_t idx = surface.index(i, j, k);
    if (outside[idx] || surface.cells[idx]) return;
    outside[idx] = 1;
    queue.push_back({i, j, k});
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      try_push(0, a, b);
      try_push(n - 1, a, b);
      try_push(a, 0, b);
      try_push(a, n - 1, b);
      try_push(a, b, 0);
      try_push(a, b, n - 1);
    }
  }
  while (!queue.empty()) {
    const auto [i, j, k] = queue.front();
    queue.pop_front();
    try_push(i - 1, j, k);
    try_push(i + 1, j, k);
    try_push(i, j - 1, k);
    try_push(i, j + 1, k);
    try_push(i, j, k - 1);
    try_push(i, j, k + 1);
  }
  OccupancyGrid grid = OccupancyGrid::empty(n);
  for (std::size_t idx = 0; idx < grid.cells.size(); ++idx) {
    grid.cells[idx] = outside[idx] ? 0 : 1;
  }
  return grid;
}

}  // namespace

OccupancyGrid voxelize_mesh(const TriMesh& mesh, int n) {
  check_resolution(n);
  if (mesh.triangles.empty()) return OccupancyGrid::empty(n);
  if (is_closed(mesh)) return voxelize_mesh_parity(mesh, n);
  return voxelize_mesh_flood(mesh, n);
}

OccupancyGrid dilate(const OccupancyGrid& grid, int radius) {
  if (radius < 0) throw std::invalid_argument("dilation radius must be non-negative");
  OccupancyGrid current = grid;
  const int n = grid.n;
  for (int round = 0; round < radius; ++round) {
    OccupancyGrid next = current;
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          if (current.at(i, j, k)) continue;
          const bool touched = (i > 0 && current.at(i - 1, j, k)) ||
                               (i + 1 < n && current.at(i + 1, j, k)) ||
                               (j > 0 && current.at(i, j - 1, k)) ||
                               (j + 1 < n && current.at(i, j + 1, k)) ||
                               (k > 0 && current.at(i, j, k - 1)) ||
                               (k + 1 < n && current.at(i, j, k + 1));
          if (touched) next.set(i, j, k, true);
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

MaskSet masks_from_diff(const PrimitiveDiff& diff, const OccupancyGrid& grid_orig,
                        const Proxy& orig, const Proxy& edit, int dilation_radius) {
  const int n = grid_orig.n;
  check_resolution(n);
  OccupancyGrid ed = voxelize_proxy(edit, diff.edited_ids(), n);
  OccupancyGrid nw = grid_or(voxelize_proxy(edit, diff.added_ids(), n),
                             voxelize_proxy(orig, diff.deleted_ids(), n));
  OccupancyGrid old_footprint = voxelize_proxy(orig, diff.edited_ids(), n);
  if (dilation_radius > 0) {
    ed = dilate(ed, dilation_radius);
    nw = dilate(nw, dilation_radius);
    old_footprint = dilate(old_footprint, dilation_radius);
  }
  MaskSet masks;
  masks.uc = grid_subtract(grid_orig, grid_or(grid_or(ed, nw), old_footprint));
  masks.ed = grid_subtract(ed, nw);
  masks.nw = std::move(nw);
  return masks;
}

namespace {

// Kuhn subdivision of the lattice cube into six tetrahedra around the main
// diagonal; face diagonals agree between neighboring cubes, so the extracted
// surface is watertight for any cell configuration.
constexpr int kTets[6][4] = {{0, 1, 2, 6}, {0, 1, 5, 6}, {0, 3, 2, 6},
                             {0, 3, 7, 6}, {0, 4, 5, 6}, {0, 4, 7, 6}};
constexpr int kCubeOffsets[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

}  // namespace

TriMesh extract_mesh(const OccupancyGrid& grid) {
  TriMesh mesh;
  if (grid.count() == 0) return mesh;
  const int n = grid.n;
  const int p = n + 2;  // one padding ring of empty cells
  const auto node_index = [p](int i, int j, int k) {
    return (static_cast<std::int64_t>(k) * p + j) * p + i;
  };
  const auto node_value = [&](int i, int j, int k) -> bool {
    const int ci = i - 1, cj = j - 1, ck = k - 1;
    if (ci < 0 || cj < 0 || ck < 0 || ci >= n || cj >= n || ck >= n) return false;
    return grid.at(ci, cj, ck);
  };
  const auto node_pos = [&](int i, int j, int k) -> Vec3 {
    return {-0.5 + (i - 0.5) / n, -0.5 + (j - 0.5) / n, -0.5 + (k - 0.5) / n};
  };

  std::unordered_map<std::int64_t, int> edge_vertex;
  const std::int64_t node_count = static_cast<std::int64_t>(p) * p * p;
  const auto vertex_on_edge = [&](std::int64_t na, std::int64_t nb, const Vec3& pa,
                                  const Vec3& pb) {
    const std::int64_t key = std::min(na, nb) * node_count + std::max(na, nb);
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    const int id = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(0.5 * (pa + pb));  // iso 0.5 on a 0/1 field
    edge_vertex.emplace(key, id);
    return id;
  };

  std::array<bool, 8> value{};
  std::array<Vec3, 8> pos;
  std::array<std::int64_t, 8> node{};
  const auto emit = [&](int v0, int v1, int v2, const Vec3& inward) {
    const Vec3& a = mesh.vertices[v0];
    const Vec3& b = mesh.vertices[v1];
    const Vec3& c = mesh.vertices[v2];
    const Vec3 normal = cross(b - a, c - a);
    const Vec3 center = (1.0 / 3.0) * (a + b + c);
    if (dot(normal, center - inward) >= 0.0) {
      mesh.triangles.push_back({v0, v1, v2});
    } else {
      mesh.triangles.push_back({v0, v2, v1});
    }
  };

  for (int k = 0; k + 1 < p; ++k) {
    for (int j = 0; j + 1 < p; ++j) {
      for (int i = 0; i + 1 < p; ++i) {
        bool any = false, all = true;
        for (int c = 0; c < 8; ++c) {
          const int ci = i + kCubeOffsets[c][0];
          const int cj = j + kCubeOffsets[c][1];
          const int ck = k + kCubeOffsets[c][2];
          value[c] = node_value(ci, cj, ck);
          any = any || value[c];
          all = all && value[c];
          pos[c] = node_pos(ci, cj, ck);
          node[c] = node_index(ci, cj, ck);
        }
        if (!any || all) continue;
        for (const auto& tet : kTets) {
          int in_corners[4], out_corners[4];
          int num_in = 0, num_out = 0;
          for (int c = 0; c < 4; ++c) {
            if (value[tet[c]]) {
              in_corners[num_in++] = tet[c];
            } else {
              out_corners[num_out++] = tet[c];
            }
          }
          if (num_in == 0 || num_in == 4) continue;
          Vec3 inward{0, 0, 0};
          for (int c = 0; c < num_in; ++c) inward = inward + pos[in_corners[c]];
          inward = (1.0 / num_in) * inward;
          const auto mid = [&](int a, int b) {
            return vertex_on_edge(node[a], node[b], pos[a], pos[b]);
          };
          if (num_in == 1) {
            const int a = in_corners[0];
            emit(mid(a, out_corners[0]), mid(a, out_corners[1]), mid(a, out_corners[2]), inward);
          } else if (num_in == 3) {
            const int a = out_corners[0];
            emit(mid(a, in_corners[0]), mid(a, in_corners[1]), mid(a, in_corners[2]), inward);
          } else {
            const int a = in_corners[0], b = in_corners[1];
            const int c = out_corners[0], d = out_corners[1];
            const int vac = mid(a, c), vad = mid(a, d);
            const int vbc = mid(b, c), vbd = mid(b, d);
            emit(vac, vad, vbd, inward);
            emit(vac, vbd, vbc, inward);
          }
        }
      }
    }
  }
  return mesh;
}

void save_grid(const OccupancyGrid& grid, const std::string& path) {
  check_resolution(grid.n);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "PXVG 1 " << grid.n << "\n";
  out.write(reinterpret_cast<const char*>(grid.cells.data()),
            static_cast<std::streamsize>(grid.cells.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

OccupancyGrid load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open grid file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("missing PXVG header in " + path);
  std::istringstream fields(header);
  std::string magic;
  int version = 0, n = 0;
  if (!(fields >> magic >> version >> n) || magic != "PXVG" || version != 1) {
    throw std::runtime_error("not a PXVG 1 file: " + path);
  }
  check_resolution(n);
  OccupancyGrid grid = OccupancyGrid::empty(n);
  in.read(reinterpret_cast<char*>(grid.cells.data()),
          static_cast<std::streamsize>(grid.cells.size()));
  if (in.gcount() != static_cast<std::streamsize>(grid.cells.size())) {
    throw std::runtime_error("truncated PXVG payload in " + path);
  }
  for (std::uint8_t cell : grid.cells) {
    if (cell > 1) throw std::runtime_error("PXVG payload bytes must be 0 or 1: " + path);
  }
  return grid;
}

}  // namespace proxekit
