#include "proxekit/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace proxekit {

bool is_closed(const TriMesh& mesh) {
  if (mesh.triangles.empty()) return false;
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e];
      const int b = tri[(e + 1) % 3];
      edge_use[{std::min(a, b), std::max(a, b)}] += 1;
    }
  }
  for (const auto& [edge, uses] : edge_use) {
    if (uses != 2) return false;
  }
  return true;
}

double mesh_volume(const TriMesh& mesh) {
  double volume = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    volume += dot(a, cross(b, c));
  }
  return volume / 6.0;
}

namespace {

int parse_obj_index(const std::string& token, size_t vertex_count, const std::string& path) {
  // Face tokens may carry /vt/vn suffixes; only the position index is used.
  const size_t slash = token.find('/');
  const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
  long idx = 0;
  try {
    idx = std::stol(head);
  } catch (const std::exception&) {
    throw std::runtime_error("bad face index '" + token + "' in " + path);
  }
  if (idx < 0) idx = static_cast<long>(vertex_count) + idx + 1;  // relative indexing
  if (idx < 1 || idx > static_cast<long>(vertex_count)) {
    throw std::runtime_error("face index out of range in " + path);
  }
  return static_cast<int>(idx - 1);
}

}  // namespace

TriMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  TriMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string tag;
    if (!(row >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(row >> v.x >> v.y >> v.z)) throw std::runtime_error("bad vertex line in " + path);
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> face;
      std::string token;
      while (row >> token) face.push_back(parse_obj_index(token, mesh.vertices.size(), path));
      if (face.size() < 3) throw std::runtime_error("face with fewer than 3 vertices in " + path);
      for (size_t i = 2; i < face.size(); ++i) {
        mesh.triangles.push_back({face[0], face[i - 1], face[i]});
      }
    }
  }
  return mesh;
}

void save_obj(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char buf[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const auto& tri : mesh.triangles) {
    out << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Vec3> load_points(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".obj") {
    return load_obj(path).vertices;
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open points file: " + path);
  std::vector<Vec3> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream row(line);
    std::string first;
    if (!(row >> first) || first[0] == '#') continue;
    Vec3 p;
    try {
      p.x = std::stod(first);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected a number");
    }
    if (!(row >> p.y >> p.z)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected three coordinates");
    }
    points.push_back(p);
  }
  return points;
}

void save_points_xyz(const std::vector<Vec3>& points, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char buf[128];
  for (const Vec3& p : points) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", p.x, p.y, p.z);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace proxekit
