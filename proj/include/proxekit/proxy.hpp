#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxekit/sq.hpp"

namespace proxekit {

using Rgb = std::array<int, 3>;

// A fixed palette of 16 visually distinct colors used when fitting or when
// the edit language introduces primitives.
const std::array<Rgb, 16>& color_palette();

struct Primitive {
  int id = 0;
  Rgb color{255, 255, 255};
  SuperquadricParams params;
};

struct Proxy {
  std::string category;
  std::vector<Primitive> primitives;
};

// Throws std::invalid_argument on duplicate or negative ids / bad colors.
void validate_proxy(const Proxy& proxy);
const Primitive* find_primitive(const Proxy& proxy, int id);

// Raised by load_proxy; `path` names the offending field, e.g.
// "primitives[0].scale".
struct ProxyFormatError : std::runtime_error {
  ProxyFormatError(const std::string& message, std::string field_path);
  std::string path;
};

// UTF-8 JSON with the exact field set
//   { "category": string, "primitives": [ { "id", "color", "scale",
//     "shape", "translation", "rotation" } ] }
// Unknown fields are rejected. Numbers are written with 9 significant
// digits.
std::string save_proxy(const Proxy& proxy);
Proxy load_proxy(const std::string& text);
void save_proxy_file(const Proxy& proxy, const std::string& path);
Proxy load_proxy_file(const std::string& path);

// Classification of an edited proxy against the original. The four groups
// partition the union of both proxies' ids; correspondence is by id.
struct PrimitiveDiff {
  struct EditedPair {
    Primitive orig;
    Primitive edit;
  };
  std::vector<int> unchanged;
  std::vector<EditedPair> edited;
  std::vector<Primitive> added;    // ids present only in the edited proxy
  std::vector<Primitive> deleted;  // ids present only in the original proxy

  std::vector<int> edited_ids() const;
  std::vector<int> added_ids() const;
  std::vector<int> deleted_ids() const;
};

inline constexpr double kDefaultDiffTolerance = 1e-6;

// A primitive counts as unchanged when all 11 parameters agree within tol:
// relative (with an absolute floor of tol below magnitude 1) for scale,
// shape, and translation; absolute on the wrapped angle difference for
// rotation. Colors are metadata and never affect classification.
PrimitiveDiff diff_proxies(const Proxy& orig, const Proxy& edit,
                           double tol = kDefaultDiffTolerance);

}  // namespace proxekit
