#include "proxekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "proxekit/parallel.hpp"

namespace proxekit {

namespace {

double squared_distance(const Vec3& a, const Vec3& b) {
  const Vec3 d = a - b;
  return dot(d, d);
}

// Uniform bucket index over the targets; exact nearest-neighbor queries by
// expanding Chebyshev shells until no closer bucket can remain.
class BucketIndex {
 public:
  explicit BucketIndex(const std::vector<Vec3>& points) : points_(points) {
    lo_ = hi_ = points[0];
    for (const Vec3& p : points) {
      lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y), std::min(lo_.z, p.z)};
      hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y), std::max(hi_.z, p.z)};
    }
    per_axis_ = std::max(1, static_cast<int>(std::cbrt(static_cast<double>(points.size()))));
    const Vec3 extent = hi_ - lo_;
    cell_ = {std::max(extent.x / per_axis_, 1e-12), std::max(extent.y / per_axis_, 1e-12),
             std::max(extent.z / per_axis_, 1e-12)};
    buckets_.assign(static_cast<std::size_t>(per_axis_) * per_axis_ * per_axis_, {});
    for (std::size_t i = 0; i < points.size(); ++i) {
      buckets_[bucket_of(points[i])].push_back(static_cast<int>(i));
    }
    min_cell_ = std::min({cell_.x, cell_.y, cell_.z});
  }

  double nearest_squared(const Vec3& query) const {
    const int qi = axis_bucket(query.x, lo_.x, cell_.x);
    const int qj = axis_bucket(query.y, lo_.y, cell_.y);
    const int qk = axis_bucket(query.z, lo_.z, cell_.z);
    double best = std::numeric_limits<double>::infinity();
    for (int radius = 0; radius < 2 * per_axis_ + 2; ++radius) {
      if (radius > 0) {
        const double reachable = (radius - 1) * min_cell_;
        if (best <= reachable * reachable) break;
      }
      bool visited_any = false;
      for (int dk = -radius; dk <= radius; ++dk) {
        for (int dj = -radius; dj <= radius; ++dj) {
          for (int di = -radius; di <= radius; ++di) {
            if (std::max({std::abs(di), std::abs(dj), std::abs(dk)}) != radius) continue;
            const int i = qi + di, j = qj + dj, k = qk + dk;
            if (i < 0 || j < 0 || k < 0 || i >= per_axis_ || j >= per_axis_ ||
                k >= per_axis_) {
              continue;
            }
            visited_any = true;
            const auto& bucket =
                buckets_[(static_cast<std::size_t>(k) * per_axis_ + j) * per_axis_ + i];
            for (int idx : bucket) {
              best = std::min(best, squared_distance(query, points_[idx]));
            }
          }
        }
      }
      if (!visited_any && radius > per_axis_) break;
    }
    return best;
  }

 private:
  int axis_bucket(double v, double lo, double cell) const {
    const int raw = static_cast<int>(std::floor((v - lo) / cell));
    return std::clamp(raw, 0, per_axis_ - 1);
  }
  std::size_t bucket_of(const Vec3& p) const {
    return (static_cast<std::size_t>(axis_bucket(p.z, lo_.z, cell_.z)) * per_axis_ +
            axis_bucket(p.y, lo_.y, cell_.y)) *
               per_axis_ +
           axis_bucket(p.x, lo_.x, cell_.x);
  }

  const std::vector<Vec3>& points_;
  Vec3 lo_, hi_, cell_;
  double min_cell_ = 0.0;
  int per_axis_ = 1;
  std::vector<std::vector<int>> buckets_;
};

double mean_nearest_squared_brute(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  double total = 0.0;
  for (const Vec3& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& q : to) best = std::min(best, squared_distance(p, q));
    total += best;
  }
  return total / static_cast<double>(from.size());
}

double mean_nearest_squared(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  if (from.size() * to.size() < 64 * 64) return mean_nearest_squared_brute(from, to);
  const BucketIndex index(to);
  std::vector<double> nearest(from.size(), 0.0);
  parallel_for(from.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) nearest[i] = index.nearest_squared(from[i]);
  });
  double total = 0.0;
  for (double d : nearest) total += d;
  return total / static_cast<double>(from.size());
}

void check_non_empty(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("chamfer requires non-empty clouds");
}

}  // namespace

double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  check_non_empty(a, b);
  return mean_nearest_squared(a, b) + mean_nearest_squared(b, a);
}

double chamfer_brute(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  check_non_empty(a, b);
  return mean_nearest_squared_brute(a, b) + mean_nearest_squared_brute(b, a);
}

bool region_contains(const EditRegion& region, const Vec3& p) {
  for (const SuperquadricParams& q : region.primitives) {
    if (implicit_value(q, p) <= 1.0 + region.slack) return true;
  }
  return false;
}

double l_gd(const std::vector<Vec3>& a, const std::vector<Vec3>& b, const EditRegion& region) {
  check_non_empty(a, b);
  const auto outside = [&region](const std::vector<Vec3>& cloud) {
    std::vector<Vec3> kept;
    kept.reserve(cloud.size());
    for (const Vec3& p : cloud) {
      if (!region_contains(region, p)) kept.push_back(p);
    }
    return kept;
  };
  const std::vector<Vec3> a_out = outside(a);
  const std::vector<Vec3> b_out = outside(b);
  if (a_out.empty() || b_out.empty()) throw std::runtime_error("empty complement");
  return chamfer(a_out, b_out);
}

double grid_iou(const OccupancyGrid& a, const OccupancyGrid& b) {
  if (a.n != b.n) throw std::invalid_argument("grids have different resolutions");
  std::size_t both = 0, either = 0;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    both += a.cells[i] & b.cells[i];
    either += a.cells[i] | b.cells[i];
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace proxekit
