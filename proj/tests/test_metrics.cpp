#include "proxekit/metrics.hpp"

#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace proxekit;

TEST_CASE("metrics: chamfer basics") {
  const std::vector<Vec3> a{{0, 0, 0}};
  const std::vector<Vec3> b{{1, 0, 0}};
  CHECK(chamfer(a, a) == 0.0);
  CHECK(chamfer(a, b) == doctest::Approx(2.0));
  CHECK(chamfer(b, a) == chamfer(a, b));
  CHECK_THROWS_AS(chamfer({}, b), std::invalid_argument);
}

TEST_CASE("metrics: accelerator agrees with brute force") {
  std::mt19937_64 rng(301);
  std::vector<Vec3> a, b;
  for (int i = 0; i < 1000; ++i) {
    a.push_back({testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1),
                 testing::uniform(rng, -1, 1)});
    b.push_back({testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1),
                 testing::uniform(rng, -1, 1)});
  }
  const double fast = chamfer(a, b);
  const double brute = chamfer_brute(a, b);
  CHECK(std::abs(fast - brute) <= 1e-12);

  // Clustered targets stress the shell expansion.
  std::vector<Vec3> clustered;
  for (int i = 0; i < 500; ++i) {
    clustered.push_back({testing::uniform(rng, 0.49, 0.5), testing::uniform(rng, -0.5, -0.49),
                         testing::uniform(rng, 0.0, 0.01)});
  }
  clustered.push_back({-0.9, 0.9, 0.0});
  CHECK(std::abs(chamfer(a, clustered) - chamfer_brute(a, clustered)) <= 1e-12);
}

TEST_CASE("metrics: l_gd ignores in-region differences") {
  const SuperquadricParams bubble = make_superquadric({0.2, 0.2, 0.2}, 1, 1, {0.5, 0, 0});
  EditRegion region;
  region.primitives.push_back(bubble);
  region.slack = 0.1;

  std::mt19937_64 rng(307);
  std::vector<Vec3> a;
  for (int i = 0; i < 400; ++i) {
    a.push_back({testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1),
                 testing::uniform(rng, -1, 1)});
  }
  // Move only in-region points.
  std::vector<Vec3> b = a;
  for (Vec3& p : b) {
    if (region_contains(region, p)) p = p + Vec3{0.05, 0.05, 0};
  }
  CHECK(l_gd(a, a, region) == 0.0);
  if (chamfer(a, b) > 0.0) {
    CHECK(l_gd(a, b, region) == 0.0);
  }

  // An empty region reduces to plain chamfer.
  CHECK(l_gd(a, b, EditRegion{}) == chamfer(a, b));

  // Everything inside the region: no complement left.
  EditRegion everything;
  everything.primitives.push_back(make_superquadric({10, 10, 10}, 1, 1));
  CHECK_THROWS_WITH_AS(l_gd(a, b, everything), "empty complement", std::runtime_error);
}

TEST_CASE("metrics: grid_iou") {
  OccupancyGrid a = OccupancyGrid::empty(8);
  OccupancyGrid b = OccupancyGrid::empty(8);
  CHECK(grid_iou(a, b) == 1.0);  // both empty

  a.set(1, 1, 1, true);
  a.set(2, 1, 1, true);
  CHECK(grid_iou(a, a) == 1.0);
  CHECK(grid_iou(a, b) == 0.0);

  b.set(2, 1, 1, true);
  b.set(3, 1, 1, true);
  // One shared cell, three in the union.
  CHECK(grid_iou(a, b) == doctest::Approx(1.0 / 3.0));

  // Monotone under adding shared cells.
  OccupancyGrid c = b;
  c.set(1, 1, 1, true);
  CHECK(grid_iou(a, c) > grid_iou(a, b));

  OccupancyGrid other = OccupancyGrid::empty(16);
  CHECK_THROWS_AS(grid_iou(a, other), std::invalid_argument);
}
