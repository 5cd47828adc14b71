#pragma once

#include <array>
#include <vector>

namespace proxekit {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec3 operator*(const Vec3& v, double s) { return s * v; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);

// Homogeneous 3D transform, 16 reals in row-major order. Every transform
// produced by this module keeps the last row at (0, 0, 0, 1).
struct Mat4 {
  std::array<double, 16> m{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};

  double& at(int row, int col) { return m[row * 4 + col]; }
  double at(int row, int col) const { return m[row * 4 + col]; }

  static Mat4 identity() { return Mat4{}; }
  static Mat4 translation(const Vec3& t);
  static Mat4 scaling(const Vec3& s);
};

Mat4 operator*(const Mat4& a, const Mat4& b);
Vec3 transform_point(const Mat4& m, const Vec3& p);

// Inverse for affine transforms with an invertible linear block.
Mat4 affine_inverse(const Mat4& m);
double max_abs_diff(const Mat4& a, const Mat4& b);

// Euler angles are intrinsic X-Y-Z, in radians.
Mat4 rotation_from_euler(const Vec3& angles);
Vec3 euler_from_rotation(const Mat4& r);

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

inline constexpr double kShapeExponentMin = 0.1;
inline constexpr double kShapeExponentMax = 1.9;

// One superquadric primitive: per-axis scale, two shape exponents, and a
// rigid pose. Construction clamps the exponents to
// [kShapeExponentMin, kShapeExponentMax] and wraps rotation angles to
// (-pi, pi]; all scale components must be strictly positive.
struct SuperquadricParams {
  Vec3 scale{1, 1, 1};
  double shape1 = 1.0;
  double shape2 = 1.0;
  Vec3 translation{0, 0, 0};
  Vec3 rotation{0, 0, 0};
};

// Throws std::invalid_argument when any scale component is <= 0.
SuperquadricParams make_superquadric(const Vec3& scale, double shape1, double shape2,
                                     const Vec3& translation = {}, const Vec3& rotation = {});
// Re-applies the construction invariants to an existing parameter set.
SuperquadricParams normalized_params(const SuperquadricParams& q);

// Local-to-world pose, composed as translation * rotation * scale. The local
// frame is the unit frame: (1, 0, 0) maps to the surface point on +x.
Mat4 pose_matrix(const SuperquadricParams& q);
Mat4 pose_matrix_inverse(const SuperquadricParams& q);

// Implicit shape function: < 1 inside, 1 on the surface, > 1 outside.
// implicit_value_local expects a point already mapped to the unit local
// frame. Zero bases on the coordinate axes are evaluated as 0^k = 0.
double implicit_value_local(const SuperquadricParams& q, const Vec3& local);
double implicit_value(const SuperquadricParams& q, const Vec3& world);
bool inside(const SuperquadricParams& q, const Vec3& world);

// n surface points (n >= 8) from the signed-power parametric form with
// eta in [-pi/2, pi/2] and omega in [-pi, pi), laid out on a
// latitude/longitude lattice so symmetric shapes cover every octant.
std::vector<Vec3> sample_surface(const SuperquadricParams& q, int n);

// Radial gap between p and the surface along the ray from the primitive
// center: |r0| * |1 - F^(-shape1/2)|. Zero on the surface and for the
// degenerate center point.
double radial_distance(const SuperquadricParams& q, const Vec3& world);

}  // namespace proxekit
