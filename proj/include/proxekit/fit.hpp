#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxekit/proxy.hpp"

namespace proxekit {

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // optional: empty, or one per point
};

// Moment-based initial guess: centroid translation, principal axes for the
// rotation (largest eigenvalue along local z), 1.5x the per-axis standard
// deviation for the scale, unit shape exponents. Null covariance directions
// are inflated to a standard deviation of 1e-3. Requires >= 10 points.
SuperquadricParams moments_init(const std::vector<Vec3>& points);

struct FitOptions {
  int max_iterations = 200;
  double cost_tolerance = 1e-8;   // relative residual decrease
  double step_tolerance = 1e-10;  // parameter step norm
};

struct FitResult {
  SuperquadricParams params;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Levenberg-Marquardt over all 11 parameters of the size-weighted objective
//   sum_i (sqrt(a1 a2 a3) * (F_i^shape1 - 1))^2
// with central-difference Jacobians (h = 1e-6 * max(1, |theta|)). Steps that
// do not decrease the cost are rejected, so the returned residual never
// exceeds the initial one; if no step is ever accepted before the damping
// overflows, the init is returned with converged = false. Requires >= 11
// points.
FitResult fit_single(const std::vector<Vec3>& points, const SuperquadricParams& init,
                     const FitOptions& options = {});

struct DecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Seeded decomposition into k primitives: k-means++ on positions, then
// alternating radial-distance assignment and per-primitive refits (at most
// 20 rounds, stopping when < 1% of points change cluster). Primitives left
// with fewer than 11 points are dropped; output ids run 0..k'-1 with palette
// colors. Deterministic for a fixed (points, k, seed). Requires at least
// 50 * k points; throws DecompositionError when no cluster survives.
Proxy decompose(const std::vector<Vec3>& points, int k, std::uint64_t seed,
                const std::string& category = "");

}  // namespace proxekit
