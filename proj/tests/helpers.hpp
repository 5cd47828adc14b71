#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>

#include "proxekit/mesh.hpp"
#include "proxekit/proxy.hpp"

namespace proxekit::testing {

inline TriMesh icosphere(const Vec3& center, double radius, int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh mesh;
  mesh.vertices = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                   {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                   {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  mesh.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                    {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                    {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                    {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    const auto mid = [&](int a, int b) {
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(mesh.triangles.size() * 4);
    for (const auto& tri : mesh.triangles) {
      const int ab = mid(tri[0], tri[1]);
      const int bc = mid(tri[1], tri[2]);
      const int ca = mid(tri[2], tri[0]);
      refined.push_back({tri[0], ab, ca});
      refined.push_back({tri[1], bc, ab});
      refined.push_back({tri[2], ca, bc});
      refined.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(refined);
  }
  for (Vec3& v : mesh.vertices) v = center + radius * normalized(v);
  return mesh;
}

inline TriMesh box_mesh(const Vec3& lo, const Vec3& hi) {
  TriMesh mesh;
  mesh.vertices = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z},
                   {lo.x, hi.y, lo.z}, {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z},
                   {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
  mesh.triangles = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
                    {2, 3, 7}, {2, 7, 6}, {1, 2, 6}, {1, 6, 5}, {3, 0, 4}, {3, 4, 7}};
  return mesh;
}

inline TriMesh merge_meshes(const TriMesh& a, const TriMesh& b) {
  TriMesh merged = a;
  const int offset = static_cast<int>(a.vertices.size());
  merged.vertices.insert(merged.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (const auto& tri : b.triangles) {
    merged.triangles.push_back({tri[0] + offset, tri[1] + offset, tri[2] + offset});
  }
  return merged;
}

inline std::filesystem::path make_temp_dir(const std::string& hint) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("proxekit_" + hint + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
}

// Well-conditioned random primitive for property tests.
inline SuperquadricParams random_params(std::mt19937_64& rng) {
  const Vec3 scale{uniform(rng, 0.2, 1.2), uniform(rng, 0.2, 1.2), uniform(rng, 0.2, 1.2)};
  const double shape1 = uniform(rng, 0.2, 1.8);
  const double shape2 = uniform(rng, 0.2, 1.8);
  const Vec3 translation{uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3),
                         uniform(rng, -0.3, 0.3)};
  const Vec3 rotation{uniform(rng, -3.1, 3.1), uniform(rng, -1.5, 1.5),
                      uniform(rng, -3.1, 3.1)};
  return make_superquadric(scale, shape1, shape2, translation, rotation);
}

inline Primitive make_primitive(int id, const SuperquadricParams& params) {
  Primitive p;
  p.id = id;
  p.color = color_palette()[static_cast<std::size_t>(id) % color_palette().size()];
  p.params = params;
  return p;
}

}  // namespace proxekit::testing
