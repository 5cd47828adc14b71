#include "proxekit/proxy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace proxekit {

namespace {

using nlohmann::json;

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string fmt9(const Vec3& v) {
  return fmt9(v.x) + ", " + fmt9(v.y) + ", " + fmt9(v.z);
}

[[noreturn]] void fail(const std::string& message, const std::string& path) {
  throw ProxyFormatError(message, path);
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail("missing field " + path + "." + key, path + "." + key);
  return *it;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      fail("unknown field " + path + "." + it.key(), path + "." + it.key());
    }
  }
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) fail("expected a number at " + path, path);
  return v.get<double>();
}

Vec3 vec3_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) fail("expected an array of 3 numbers at " + path, path);
  return {number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]"),
          number_at(v[2], path + "[2]")};
}

}  // namespace

const std::array<Rgb, 16>& color_palette() {
  static const std::array<Rgb, 16> palette{{{230, 25, 75},
                                            {60, 180, 75},
                                            {255, 225, 25},
                                            {0, 130, 200},
                                            {245, 130, 48},
                                            {145, 30, 180},
                                            {70, 240, 240},
                                            {240, 50, 230},
                                            {210, 245, 60},
                                            {250, 190, 212},
                                            {0, 128, 128},
                                            {220, 190, 255},
                                            {170, 110, 40},
                                            {255, 250, 200},
                                            {128, 0, 0},
                                            {170, 255, 195}}};
  return palette;
}

void validate_proxy(const Proxy& proxy) {
  std::set<int> seen;
  for (const Primitive& p : proxy.primitives) {
    if (p.id < 0) throw std::invalid_argument("primitive id must be non-negative");
    if (!seen.insert(p.id).second) {
      throw std::invalid_argument("duplicate primitive id " + std::to_string(p.id));
    }
    for (int c : p.color) {
      if (c < 0 || c > 255) throw std::invalid_argument("color component out of [0, 255]");
    }
  }
}

const Primitive* find_primitive(const Proxy& proxy, int id) {
  for (const Primitive& p : proxy.primitives) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

ProxyFormatError::ProxyFormatError(const std::string& message, std::string field_path)
    : std::runtime_error(message), path(std::move(field_path)) {}

std::string save_proxy(const Proxy& proxy) {
  std::ostringstream out;
  out << "{\n  \"category\": " << json(proxy.category).dump() << ",\n  \"primitives\": [";
  for (size_t i = 0; i < proxy.primitives.size(); ++i) {
    const Primitive& p = proxy.primitives[i];
    out << (i ? ",\n    {" : "\n    {");
    out << " \"id\": " << p.id;
    out << ", \"color\": [" << p.color[0] << ", " << p.color[1] << ", " << p.color[2] << "]";
    out << ", \"scale\": [" << fmt9(p.params.scale) << "]";
    out << ", \"shape\": [" << fmt9(p.params.shape1) << ", " << fmt9(p.params.shape2) << "]";
    out << ", \"translation\": [" << fmt9(p.params.translation) << "]";
    out << ", \"rotation\": [" << fmt9(p.params.rotation) << "] }";
  }
  out << (proxy.primitives.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

Proxy load_proxy(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what(), "");
  }
  if (!root.is_object()) fail("top level must be an object", "");
  reject_unknown(root, {"category", "primitives"}, "");

  Proxy proxy;
  const json& category = require_field(root, "category", "");
  if (!category.is_string()) fail("expected a string at .category", ".category");
  proxy.category = category.get<std::string>();

  const json& prims = require_field(root, "primitives", "");
  if (!prims.is_array()) fail("expected an array at .primitives", ".primitives");

  std::set<int> seen;
  for (size_t i = 0; i < prims.size(); ++i) {
    const std::string path = "primitives[" + std::to_string(i) + "]";
    const json& entry = prims[i];
    if (!entry.is_object()) fail("expected an object at " + path, path);
    reject_unknown(entry, {"id", "color", "scale", "shape", "translation", "rotation"}, path);

    Primitive p;
    const json& id = require_field(entry, "id", path);
    if (!id.is_number_integer() || id.get<long long>() < 0) {
      fail("expected a non-negative integer at " + path + ".id", path + ".id");
    }
    p.id = id.get<int>();
    if (!seen.insert(p.id).second) {
      fail("duplicate primitive id " + std::to_string(p.id) + " at " + path + ".id",
           path + ".id");
    }

    const json& color = require_field(entry, "color", path);
    if (!color.is_array() || color.size() != 3) {
      fail("expected an array of 3 integers at " + path + ".color", path + ".color");
    }
    for (int c = 0; c < 3; ++c) {
      if (!color[c].is_number_integer()) {
        fail("expected an integer at " + path + ".color", path + ".color");
      }
      p.color[c] = color[c].get<int>();
      if (p.color[c] < 0 || p.color[c] > 255) {
        fail("color component out of [0, 255] at " + path + ".color", path + ".color");
      }
    }

    const Vec3 scale = vec3_at(require_field(entry, "scale", path), path + ".scale");
    if (!(scale.x > 0.0) || !(scale.y > 0.0) || !(scale.z > 0.0)) {
      fail("scale components must be positive at " + path + ".scale", path + ".scale");
    }
    const json& shape = require_field(entry, "shape", path);
    if (!shape.is_array() || shape.size() != 2) {
      fail("expected an array of 2 numbers at " + path + ".shape", path + ".shape");
    }
    const double shape1 = number_at(shape[0], path + ".shape[0]");
    const double shape2 = number_at(shape[1], path + ".shape[1]");
    const Vec3 translation =
        vec3_at(require_field(entry, "translation", path), path + ".translation");
    const Vec3 rotation = vec3_at(require_field(entry, "rotation", path), path + ".rotation");

    p.params = make_superquadric(scale, shape1, shape2, translation, rotation);
    proxy.primitives.push_back(p);
  }
  return proxy;
}

void save_proxy_file(const Proxy& proxy, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << save_proxy(proxy);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Proxy load_proxy_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open proxy file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_proxy(buf.str());
}

std::vector<int> PrimitiveDiff::edited_ids() const {
  std::vector<int> ids;
  ids.reserve(edited.size());
  for (const EditedPair& pair : edited) ids.push_back(pair.edit.id);
  return ids;
}

std::vector<int> PrimitiveDiff::added_ids() const {
  std::vector<int> ids;
  ids.reserve(added.size());
  for (const Primitive& p : added) ids.push_back(p.id);
  return ids;
}

std::vector<int> PrimitiveDiff::deleted_ids() const {
  std::vector<int> ids;
  ids.reserve(deleted.size());
  for (const Primitive& p : deleted) ids.push_back(p.id);
  return ids;
}

namespace {

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool close_angle(double a, double b, double tol) {
  return std::abs(wrap_angle(a - b)) <= tol;
}

bool params_equal(const SuperquadricParams& a, const SuperquadricParams& b, double tol) {
  return close_rel(a.scale.x, b.scale.x, tol) && close_rel(a.scale.y, b.scale.y, tol) &&
         close_rel(a.scale.z, b.scale.z, tol) && close_rel(a.shape1, b.shape1, tol) &&
         close_rel(a.shape2, b.shape2, tol) &&
         close_rel(a.translation.x, b.translation.x, tol) &&
         close_rel(a.translation.y, b.translation.y, tol) &&
         close_rel(a.translation.z, b.translation.z, tol) &&
         close_angle(a.rotation.x, b.rotation.x, tol) &&
         close_angle(a.rotation.y, b.rotation.y, tol) &&
         close_angle(a.rotation.z, b.rotation.z, tol);
}

}  // namespace

PrimitiveDiff diff_proxies(const Proxy& orig, const Proxy& edit, double tol) {
  validate_proxy(orig);
  validate_proxy(edit);
  std::map<int, const Primitive*> orig_by_id;
  for (const Primitive& p : orig.primitives) orig_by_id[p.id] = &p;

  PrimitiveDiff diff;
  std::set<int> matched;
  for (const Primitive& p : edit.primitives) {
    auto it = orig_by_id.find(p.id);
    if (it == orig_by_id.end()) {
      diff.added.push_back(p);
      continue;
    }
    matched.insert(p.id);
    if (params_equal(it->second->params, p.params, tol)) {
      diff.unchanged.push_back(p.id);
    } else {
      diff.edited.push_back({*it->second, p});
    }
  }
  for (const Primitive& p : orig.primitives) {
    if (!matched.count(p.id)) diff.deleted.push_back(p);
  }
  return diff;
}

}  // namespace proxekit
