#pragma once

#include <array>
#include <string>
#include <vector>

#include "proxekit/sq.hpp"

namespace proxekit {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  bool empty() const { return triangles.empty(); }
};

// True when every undirected edge is used by exactly two triangles.
bool is_closed(const TriMesh& mesh);

// Signed volume from the divergence theorem; orientation-dependent.
double mesh_volume(const TriMesh& mesh);

// OBJ with vertex positions and triangulated faces (polygons are fanned).
TriMesh load_obj(const std::string& path);
void save_obj(const TriMesh& mesh, const std::string& path);

// Point cloud input: OBJ vertices, or whitespace-separated XYZ text with one
// point per line ('#' lines are comments). Dispatch is by .obj extension.
std::vector<Vec3> load_points(const std::string& path);
void save_points_xyz(const std::vector<Vec3>& points, const std::string& path);

}  // namespace proxekit
