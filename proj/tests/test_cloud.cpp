#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "core/cloud.h"
#include "core/spatial.h"
#include "doctest.h"
#include "test_util.h"

using namespace pvpc;
using pvpc::test::errorCodeOf;
using pvpc::test::makeCloud;

TEST_CASE("bounding box: single point is a degenerate box") {
  auto cloud = makeCloud({{5, 6, 7}});
  const BoundingBox box = computeBoundingBox(cloud);
  CHECK(box.min == Vec3i{5, 6, 7});
  CHECK(box.max == Vec3i{5, 6, 7});
}

TEST_CASE("bounding box: componentwise extremes") {
  auto cloud = makeCloud({{0, 0, 0}, {3, 1, 2}});
  const BoundingBox box = computeBoundingBox(cloud);
  CHECK(box.min == Vec3i{0, 0, 0});
  CHECK(box.max == Vec3i{3, 1, 2});
}

TEST_CASE("bounding box: matches a linear-scan oracle on 1000 random points") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int32_t> coord(0, 4095);
  std::vector<Vec3i> points;
  for (int i = 0; i < 1000; ++i) points.push_back({coord(rng), coord(rng), coord(rng)});

  // independent oracle: plain linear scan
  Vec3i lo{INT32_MAX, INT32_MAX, INT32_MAX}, hi{INT32_MIN, INT32_MIN, INT32_MIN};
  for (const auto& p : points) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }

  auto cloud = makeCloud(points, 1, 12);
  const BoundingBox box = computeBoundingBox(cloud);
  CHECK(box.min == lo);
  CHECK(box.max == hi);
  for (const auto& p : cloud.points) CHECK(box.contains(p));
}

TEST_CASE("bounding box: empty cloud") {
  PlenopticPointCloud cloud;
  CHECK(errorCodeOf([&] { computeBoundingBox(cloud); }) == ErrorCode::EmptyCloud);
}

namespace {

double angleToAxisDeg(const Vec3d& n, const Vec3d& axis) {
  double dot = std::abs(n[0] * axis[0] + n[1] * axis[1] + n[2] * axis[2]);
  return std::acos(std::min(1.0, dot)) * 180.0 / 3.14159265358979323846;
}

}  // namespace

TEST_CASE("normals: planar cloud gives +/-z within 1e-6 angular, consistently oriented") {
  std::vector<Vec3i> points;
  for (int x = 0; x < 10; ++x) {
    for (int y = 0; y < 10; ++y) points.push_back({x, y, 10});
  }
  auto cloud = makeCloud(points);
  const NormalSet normals = estimateNormals(cloud, 8);
  double firstZ = normals.normals[0][2];
  for (size_t i = 0; i < normals.size(); ++i) {
    CHECK(!normals.degenerate[i]);
    CHECK(angleToAxisDeg(normals.normals[i], {0, 0, 1}) < 1e-6 * 180 / 3.14159265);
    CHECK(normals.normals[i][2] * firstZ > 0);  // consistent sign on a plane
    const double norm = std::hypot(normals.normals[i][0], normals.normals[i][1], normals.normals[i][2]);
    CHECK(std::abs(norm - 1.0) < 1e-9);
  }
}

TEST_CASE("normals: sphere surface radial within 5 degrees for >= 95% of points") {
  // Fibonacci-lattice sphere rounded onto the integer grid; radius is large
  // against the rounding noise so the analytic radial direction is meaningful.
  std::vector<Vec3i> points;
  std::set<Vec3i> seen;
  const double r = 100.0;
  const int n = 3000, c = int(r) + 2;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rad = std::sqrt(1.0 - z * z);
    const double theta = 2.0 * 3.14159265358979323846 * i / phi;
    Vec3i p{int32_t(std::lround(c + r * rad * std::cos(theta))),
            int32_t(std::lround(c + r * rad * std::sin(theta))), int32_t(std::lround(c + r * z))};
    if (seen.insert(p).second) points.push_back(p);
  }
  auto cloud = makeCloud(points);
  const NormalSet normals = estimateNormals(cloud, 8);
  size_t good = 0;
  for (size_t i = 0; i < normals.size(); ++i) {
    const auto& p = cloud.points[i];
    Vec3d radial{double(p[0] - c), double(p[1] - c), double(p[2] - c)};
    const double len = std::hypot(radial[0], radial[1], radial[2]);
    for (auto& v : radial) v /= len;
    if (angleToAxisDeg(normals.normals[i], radial) <= 5.0) ++good;
  }
  CHECK(double(good) >= 0.95 * double(normals.size()));
}

TEST_CASE("normals: collinear neighborhood is flagged degenerate and defaulted") {
  auto cloud = makeCloud({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}});
  const NormalSet normals = estimateNormals(cloud, 3);
  for (size_t i = 0; i < normals.size(); ++i) {
    CHECK(normals.degenerate[i]);
    CHECK(normals.normals[i] == Vec3d{0.0, 0.0, 1.0});
  }
}

TEST_CASE("normals: fewer than k+1 points is an error") {
  auto cloud = makeCloud({{0, 0, 0}, {1, 0, 0}, {2, 1, 0}});
  CHECK(errorCodeOf([&] { estimateNormals(cloud, 3); }) == ErrorCode::InsufficientPoints);
  CHECK(errorCodeOf([&] { estimateNormals(cloud, 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("normals: permutation invariant per point") {
  std::mt19937 rng(7);
  auto cloud = pvpc::test::randomCloud(rng, 200, 1, 6);
  const NormalSet base = estimateNormals(cloud, 8);

  std::vector<size_t> perm(cloud.pointCount());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  PlenopticPointCloud shuffled = cloud;
  for (size_t i = 0; i < perm.size(); ++i) {
    shuffled.points[i] = cloud.points[perm[i]];
    shuffled.colors[i] = cloud.colors[perm[i]];
  }
  const NormalSet after = estimateNormals(shuffled, 8);
  for (size_t i = 0; i < perm.size(); ++i) {
    CHECK(after.normals[i] == base.normals[perm[i]]);
    CHECK(after.degenerate[i] == base.degenerate[perm[i]]);
  }
}

TEST_CASE("merge duplicates: colors averaged round-half-up, first occurrence order kept") {
  PlenopticPointCloud cloud;
  cloud.viewCount = 2;
  cloud.geomBitDepth = 8;
  cloud.attrBitDepth = 8;
  cloud.points = {{1, 1, 1}, {2, 2, 2}, {1, 1, 1}};
  cloud.colors = {{10, 0, 0}, {0, 0, 0},   // point 0, views 0/1
                  {5, 5, 5},  {9, 9, 9},   // point 1
                  {11, 0, 0}, {1, 1, 1}};  // duplicate of point 0
  const PlenopticPointCloud merged = mergeDuplicates(cloud);
  REQUIRE(merged.pointCount() == 2);
  CHECK(merged.points[0] == Vec3i{1, 1, 1});
  CHECK(merged.points[1] == Vec3i{2, 2, 2});
  CHECK(merged.color(0, 0) == Color{11, 0, 0});  // (10+11)/2 = 10.5 -> 11
  CHECK(merged.color(0, 1) == Color{1, 1, 1});   // (0+1)/2 = 0.5 -> 1
  CHECK(merged.color(1, 0) == Color{5, 5, 5});
}

TEST_CASE("point index: exact k nearest with (distance, index) tie-break") {
  std::mt19937 rng(3);
  auto cloud = pvpc::test::randomCloud(rng, 300, 1, 6);
  PointIndex index(cloud.points);
  std::uniform_int_distribution<int32_t> coord(0, 63);
  for (int trial = 0; trial < 50; ++trial) {
    Vec3i q{coord(rng), coord(rng), coord(rng)};
    const int k = 1 + trial % 12;
    auto got = index.kNearest(q, k);

    // brute-force oracle
    std::vector<std::pair<int64_t, uint32_t>> all;
    for (uint32_t i = 0; i < cloud.points.size(); ++i) {
      all.push_back({index.squaredDistance(cloud.points[i], q), i});
    }
    std::sort(all.begin(), all.end());
    REQUIRE(got.size() == size_t(k));
    for (int i = 0; i < k; ++i) CHECK(got[i] == all[i].second);
  }
}
