#include "proxekit/sq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace proxekit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// |base|^e with the 0^k := 0 guard for k > 0.
double guarded_pow(double base, double exponent) {
  if (base == 0.0) return 0.0;
  return std::pow(base, exponent);
}

}  // namespace

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
  const double len = norm(v);
  if (len == 0.0) return {0, 0, 0};
  return (1.0 / len) * v;
}

Mat4 Mat4::translation(const Vec3& t) {
  Mat4 r;
  r.at(0, 3) = t.x;
  r.at(1, 3) = t.y;
  r.at(2, 3) = t.z;
  return r;
}

Mat4 Mat4::scaling(const Vec3& s) {
  Mat4 r;
  r.at(0, 0) = s.x;
  r.at(1, 1) = s.y;
  r.at(2, 2) = s.z;
  return r;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  }
  return r;
}

Vec3 transform_point(const Mat4& m, const Vec3& p) {
  return {m.at(0, 0) * p.x + m.at(0, 1) * p.y + m.at(0, 2) * p.z + m.at(0, 3),
          m.at(1, 0) * p.x + m.at(1, 1) * p.y + m.at(1, 2) * p.z + m.at(1, 3),
          m.at(2, 0) * p.x + m.at(2, 1) * p.y + m.at(2, 2) * p.z + m.at(2, 3)};
}

Mat4 affine_inverse(const Mat4& m) {
  // Invert the 3x3 linear block by adjugate, then back out the translation.
  const double a = m.at(0, 0), b = m.at(0, 1), c = m.at(0, 2);
  const double d = m.at(1, 0), e = m.at(1, 1), f = m.at(1, 2);
  const double g = m.at(2, 0), h = m.at(2, 1), i = m.at(2, 2);
  const double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  if (det == 0.0) throw std::invalid_argument("affine_inverse: singular linear block");
  const double inv_det = 1.0 / det;
  Mat4 r;
  r.at(0, 0) = (e * i - f * h) * inv_det;
  r.at(0, 1) = (c * h - b * i) * inv_det;
  r.at(0, 2) = (b * f - c * e) * inv_det;
  r.at(1, 0) = (f * g - d * i) * inv_det;
  r.at(1, 1) = (a * i - c * g) * inv_det;
  r.at(1, 2) = (c * d - a * f) * inv_det;
  r.at(2, 0) = (d * h - e * g) * inv_det;
  r.at(2, 1) = (b * g - a * h) * inv_det;
  r.at(2, 2) = (a * e - b * d) * inv_det;
  const Vec3 t{m.at(0, 3), m.at(1, 3), m.at(2, 3)};
  r.at(0, 3) = -(r.at(0, 0) * t.x + r.at(0, 1) * t.y + r.at(0, 2) * t.z);
  r.at(1, 3) = -(r.at(1, 0) * t.x + r.at(1, 1) * t.y + r.at(1, 2) * t.z);
  r.at(2, 3) = -(r.at(2, 0) * t.x + r.at(2, 1) * t.y + r.at(2, 2) * t.z);
  return r;
}

double max_abs_diff(const Mat4& a, const Mat4& b) {
  double worst = 0.0;
  for (int i = 0; i < 16; ++i) worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
  return worst;
}

Mat4 rotation_from_euler(const Vec3& angles) {
  const double ca = std::cos(angles.x), sa = std::sin(angles.x);
  const double cb = std::cos(angles.y), sb = std::sin(angles.y);
  const double cc = std::cos(angles.z), sc = std::sin(angles.z);
  // Rx(a) * Ry(b) * Rz(c), expanded.
  Mat4 r;
  r.at(0, 0) = cb * cc;
  r.at(0, 1) = -cb * sc;
  r.at(0, 2) = sb;
  r.at(1, 0) = sa * sb * cc + ca * sc;
  r.at(1, 1) = -sa * sb * sc + ca * cc;
  r.at(1, 2) = -sa * cb;
  r.at(2, 0) = -ca * sb * cc + sa * sc;
  r.at(2, 1) = ca * sb * sc + sa * cc;
  r.at(2, 2) = ca * cb;
  return r;
}

Vec3 euler_from_rotation(const Mat4& r) {
  const double sb = std::clamp(r.at(0, 2), -1.0, 1.0);
  const double b = std::asin(sb);
  double a = 0.0, c = 0.0;
  if (std::abs(sb) < 1.0 - 1e-12) {
    a = std::atan2(-r.at(1, 2), r.at(2, 2));
    c = std::atan2(-r.at(0, 1), r.at(0, 0));
  } else {
    // Gimbal configuration: fold the z rotation into x.
    a = std::atan2(r.at(2, 1), r.at(1, 1));
  }
  return {wrap_angle(a), wrap_angle(b), wrap_angle(c)};
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

SuperquadricParams make_superquadric(const Vec3& scale, double shape1, double shape2,
                                     const Vec3& translation, const Vec3& rotation) {
  if (!(scale.x > 0.0) || !(scale.y > 0.0) || !(scale.z > 0.0)) {
    throw std::invalid_argument("superquadric scale components must be positive");
  }
  SuperquadricParams q;
  q.scale = scale;
  q.shape1 = std::clamp(shape1, kShapeExponentMin, kShapeExponentMax);
  q.shape2 = std::clamp(shape2, kShapeExponentMin, kShapeExponentMax);
  q.translation = translation;
  q.rotation = {wrap_angle(rotation.x), wrap_angle(rotation.y), wrap_angle(rotation.z)};
  return q;
}

SuperquadricParams normalized_params(const SuperquadricParams& q) {
  return make_superquadric(q.scale, q.shape1, q.shape2, q.translation, q.rotation);
}

Mat4 pose_matrix(const SuperquadricParams& q) {
  return Mat4::translation(q.translation) * rotation_from_euler(q.rotation) *
         Mat4::scaling(q.scale);
}

Mat4 pose_matrix_inverse(const SuperquadricParams& q) {
  return affine_inverse(pose_matrix(q));
}

double implicit_value_local(const SuperquadricParams& q, const Vec3& local) {
  const double xw = guarded_pow(std::abs(local.x), 2.0 / q.shape2);
  const double yw = guarded_pow(std::abs(local.y), 2.0 / q.shape2);
  const double xy = guarded_pow(xw + yw, q.shape2 / q.shape1);
  const double zw = guarded_pow(std::abs(local.z), 2.0 / q.shape1);
  return xy + zw;
}

double implicit_value(const SuperquadricParams& q, const Vec3& world) {
  return implicit_value_local(q, transform_point(pose_matrix_inverse(q), world));
}

bool inside(const SuperquadricParams& q, const Vec3& world) {
  return implicit_value(q, world) <= 1.0;
}

namespace {

// sign(u) * |u|^e with sgnpow(0, e) = 0.
double sgnpow(double u, double e) {
  if (u == 0.0) return 0.0;
  const double mag = std::pow(std::abs(u), e);
  return u < 0.0 ? -mag : mag;
}

}  // namespace

std::vector<Vec3> sample_surface(const SuperquadricParams& q, int n) {
  if (n < 8) throw std::invalid_argument("sample_surface requires n >= 8");
  const int rows = std::max(2, static_cast<int>(std::lround(std::sqrt(n / 2.0))));
  const int base = n / rows;
  const int remainder = n % rows;
  const Mat4 pose = pose_matrix(q);
  std::vector<Vec3> points;
  points.reserve(n);
  for (int i = 0; i < rows; ++i) {
    const int cols = base + (i < remainder ? 1 : 0);
    const double eta = -kPi / 2.0 + kPi * (i + 0.5) / rows;
    const double ce = std::cos(eta), se = std::sin(eta);
    for (int j = 0; j < cols; ++j) {
      const double omega = -kPi + 2.0 * kPi * (j + 0.5) / cols;
      const Vec3 local{sgnpow(ce, q.shape1) * sgnpow(std::cos(omega), q.shape2),
                       sgnpow(ce, q.shape1) * sgnpow(std::sin(omega), q.shape2),
                       sgnpow(se, q.shape1)};
      points.push_back(transform_point(pose, local));
    }
  }
  return points;
}

double radial_distance(const SuperquadricParams& q, const Vec3& world) {
  const double r0 = norm(world - q.translation);
  if (r0 == 0.0) return 0.0;
  const double f = implicit_value(q, world);
  if (f <= 0.0) return r0;  // degenerate ray through the center
  return r0 * std::abs(1.0 - std::pow(f, -q.shape1 / 2.0));
}

}  // namespace proxekit
