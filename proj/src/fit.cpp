#include "proxekit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "proxekit/parallel.hpp"

namespace proxekit {

namespace {

constexpr int kParamCount = 11;
constexpr double kScaleFloor = 1e-4;

using ParamVector = Eigen::Matrix<double, kParamCount, 1>;

ParamVector pack(const SuperquadricParams& q) {
  ParamVector theta;
  theta << q.scale.x, q.scale.y, q.scale.z, q.shape1, q.shape2, q.translation.x,
      q.translation.y, q.translation.z, q.rotation.x, q.rotation.y, q.rotation.z;
  return theta;
}

// Builds parameters without re-normalization; the optimizer explores slightly
// outside the clamped region while differentiating.
SuperquadricParams unpack(const ParamVector& theta) {
  SuperquadricParams q;
  q.scale = {theta[0], theta[1], theta[2]};
  q.shape1 = theta[3];
  q.shape2 = theta[4];
  q.translation = {theta[5], theta[6], theta[7]};
  q.rotation = {theta[8], theta[9], theta[10]};
  return q;
}

ParamVector project(ParamVector theta) {
  for (int i = 0; i < 3; ++i) theta[i] = std::max(theta[i], kScaleFloor);
  theta[3] = std::clamp(theta[3], kShapeExponentMin, kShapeExponentMax);
  theta[4] = std::clamp(theta[4], kShapeExponentMin, kShapeExponentMax);
  for (int i = 8; i < 11; ++i) theta[i] = wrap_angle(theta[i]);
  return theta;
}

double step_norm(const ParamVector& from, const ParamVector& to) {
  double acc = 0.0;
  for (int i = 0; i < kParamCount; ++i) {
    const double d = i >= 8 ? wrap_angle(to[i] - from[i]) : to[i] - from[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

void residuals(const std::vector<Vec3>& points, const ParamVector& theta,
               Eigen::VectorXd& out) {
  const SuperquadricParams q = unpack(theta);
  const Mat4 world_to_local = pose_matrix_inverse(q);
  const double size_weight = std::sqrt(q.scale.x * q.scale.y * q.scale.z);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double f = implicit_value_local(q, transform_point(world_to_local, points[i]));
    const double powered = f <= 0.0 ? 0.0 : std::pow(f, q.shape1);
    out[static_cast<Eigen::Index>(i)] = size_weight * (powered - 1.0);
  }
}

}  // namespace

SuperquadricParams moments_init(const std::vector<Vec3>& points) {
  if (points.size() < 10) throw std::invalid_argument("moments_init requires >= 10 points");
  Vec3 centroid{0, 0, 0};
  for (const Vec3& p : points) centroid = centroid + p;
  centroid = (1.0 / points.size()) * centroid;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Vec3& p : points) {
    const Vec3 d = p - centroid;
    Eigen::Vector3d v(d.x, d.y, d.z);
    cov += v * v.transpose();
  }
  cov /= static_cast<double>(points.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Eigen::Vector3d eigenvalues = solver.eigenvalues();  // ascending
  const Eigen::Matrix3d eigenvectors = solver.eigenvectors();

  // Local x along the smallest axis, z along the largest; y completes a
  // right-handed frame.
  const Eigen::Vector3d ex = eigenvectors.col(0);
  const Eigen::Vector3d ez = eigenvectors.col(2);
  const Eigen::Vector3d ey = ez.cross(ex);
  Mat4 rotation;
  for (int r = 0; r < 3; ++r) {
    rotation.at(r, 0) = ex[r];
    rotation.at(r, 1) = ey[r];
    rotation.at(r, 2) = ez[r];
  }

  Vec3 scale;
  const auto axis_scale = [&](int axis) {
    const double sigma = std::sqrt(std::max(eigenvalues[axis], 0.0));
    return 1.5 * std::max(sigma, 1e-3);
  };
  scale = {axis_scale(0), axis_scale(1), axis_scale(2)};
  return make_superquadric(scale, 1.0, 1.0, centroid, euler_from_rotation(rotation));
}

FitResult fit_single(const std::vector<Vec3>& points, const SuperquadricParams& init,
                     const FitOptions& options) {
  if (points.size() < static_cast<std::size_t>(kParamCount)) {
    throw std::invalid_argument("fit_single requires at least 11 points");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  const ParamVector theta_init = project(pack(normalized_params(init)));

  Eigen::VectorXd r(m), r_candidate(m), r_lo(m), r_hi(m);
  ParamVector theta = theta_init;
  residuals(points, theta, r);
  double cost = r.squaredNorm();
  const double initial_cost = cost;

  double lambda = 1e-3;
  bool any_accepted = false;
  int iteration = 0;
  Eigen::MatrixXd jacobian(m, kParamCount);

  while (iteration < options.max_iterations) {
    ++iteration;
    for (int j = 0; j < kParamCount; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(theta[j]));
      ParamVector lo = theta, hi = theta;
      lo[j] -= h;
      hi[j] += h;
      residuals(points, lo, r_lo);
      residuals(points, hi, r_hi);
      jacobian.col(j) = (r_hi - r_lo) / (2.0 * h);
    }
    const Eigen::Matrix<double, kParamCount, kParamCount> normal =
        jacobian.transpose() * jacobian;
    const ParamVector gradient = jacobian.transpose() * r;

    bool accepted = false;
    while (!accepted) {
      Eigen::Matrix<double, kParamCount, kParamCount> damped = normal;
      for (int j = 0; j < kParamCount; ++j) {
        damped(j, j) += lambda * std::max(normal(j, j), 1e-12);
      }
      const ParamVector delta = damped.ldlt().solve(-gradient);
      const ParamVector candidate = project(theta + delta);
      residuals(points, candidate, r_candidate);
      const double candidate_cost = r_candidate.squaredNorm();
      if (std::isfinite(candidate_cost) && candidate_cost < cost) {
        const double decrease = cost - candidate_cost;
        const double step = step_norm(theta, candidate);
        theta = candidate;
        r.swap(r_candidate);
        cost = candidate_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        any_accepted = true;
        if (decrease <= options.cost_tolerance * std::max(cost, 1e-300) ||
            step < options.step_tolerance) {
          return {normalized_params(unpack(theta)), cost, true, iteration};
        }
      } else {
        lambda *= 10.0;
        if (lambda > 1e12) {
          // Damping overflow: no further progress is possible from here.
          if (any_accepted) return {normalized_params(unpack(theta)), cost, true, iteration};
          return {normalized_params(unpack(theta_init)), initial_cost, false, iteration};
        }
      }
    }
  }
  return {normalized_params(unpack(theta)), cost, true, iteration};
}

namespace {

std::vector<int> seeded_kmeans(const std::vector<Vec3>& points, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t count = points.size();
  std::vector<Vec3> centers;
  centers.reserve(k);

  // k-means++ seeding with an explicit prefix-sum draw so the result depends
  // only on the generator stream.
  const auto uniform01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
  };
  centers.push_back(points[static_cast<std::size_t>(uniform01() * count) % count]);
  std::vector<double> best_sq(count, std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const Vec3 d = points[i] - centers.back();
      best_sq[i] = std::min(best_sq[i], dot(d, d));
      total += best_sq[i];
    }
    if (total <= 0.0) {
      centers.push_back(points[rng() % count]);
      continue;
    }
    double target = uniform01() * total;
    std::size_t chosen = count - 1;
    for (std::size_t i = 0; i < count; ++i) {
      target -= best_sq[i];
      if (target <= 0.0) {
        chosen = i;
        break;
      }
    }
    centers.push_back(points[chosen]);
  }

  std::vector<int> assignment(count, 0);
  for (int round = 0; round < 50; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < count; ++i) {
      int best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const Vec3 d = points[i] - centers[c];
        const double dist = dot(d, d);
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Vec3> sums(k, Vec3{0, 0, 0});
    std::vector<int> counts(k, 0);
    for (std::size_t i = 0; i < count; ++i) {
      sums[assignment[i]] = sums[assignment[i]] + points[i];
      counts[assignment[i]] += 1;
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centers[c] = (1.0 / counts[c]) * sums[c];
    }
  }
  return assignment;
}

}  // namespace

Proxy decompose(const std::vector<Vec3>& points, int k, std::uint64_t seed,
                const std::string& category) {
  if (k < 1) throw std::invalid_argument("primitive count must be >= 1");
  if (points.size() < static_cast<std::size_t>(50) * k) {
    throw std::invalid_argument("decomposition requires at least 50 points per primitive");
  }

  std::vector<int> assignment = seeded_kmeans(points, k, seed);
  std::vector<SuperquadricParams> params(k);
  std::vector<bool> active(k, false);
  std::vector<std::vector<Vec3>> clusters(k);
  for (std::size_t i = 0; i < points.size(); ++i) clusters[assignment[i]].push_back(points[i]);
  for (int c = 0; c < k; ++c) {
    if (clusters[c].size() >= 11) {
      params[c] = moments_init(clusters[c]);
      active[c] = true;
    }
  }

  FitOptions em_options;
  em_options.max_iterations = 60;
  const std::size_t change_threshold = std::max<std::size_t>(1, points.size() / 100);
  for (int round = 0; round < 20; ++round) {
    // (a) assign each point to the primitive with the smallest radial gap.
    std::vector<int> next(points.size());
    parallel_for(points.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
          if (!active[c]) continue;
          const double dist = radial_distance(params[c], points[i]);
          if (dist < best_dist) {
            best_dist = dist;
            best = c;
          }
        }
        next[i] = best;
      }
    });
    std::size_t changes = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (next[i] != assignment[i]) ++changes;
    }
    assignment.swap(next);
    for (auto& cluster : clusters) cluster.clear();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (assignment[i] >= 0) clusters[assignment[i]].push_back(points[i]);
    }
    // (b) refit each primitive on its assigned points.
    for (int c = 0; c < k; ++c) {
      if (!active[c] || clusters[c].size() < 11) continue;
      params[c] = fit_single(clusters[c], params[c], em_options).params;
    }
    if (changes < change_threshold) break;
  }

  Proxy proxy;
  proxy.category = category;
  int next_id = 0;
  for (int c = 0; c < k; ++c) {
    if (!active[c] || clusters[c].size() < 11) continue;
    Primitive p;
    p.id = next_id;
    p.color = color_palette()[static_cast<std::size_t>(next_id) % color_palette().size()];
    p.params = params[c];
    proxy.primitives.push_back(p);
    ++next_id;
  }
  if (proxy.primitives.empty()) throw DecompositionError("decomposition failed");
  return proxy;
}

}  // namespace proxekit
