#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "common.h"

namespace pvpc {

using Vec3i = std::array<int32_t, 3>;
using Vec3d = std::array<double, 3>;
using Color = std::array<uint16_t, 3>;  // r, g, b

// Point cloud with integer geometry and one RGB triplet per view for every point.
// Immutable by convention once built; builders go through CloudBuilder.
struct PlenopticPointCloud {
  std::vector<Vec3i> points;
  uint32_t viewCount = 1;
  // colors[p * viewCount + v] is the color of point p seen from view v.
  std::vector<Color> colors;
  int geomBitDepth = 10;
  int attrBitDepth = 8;

  size_t pointCount() const { return points.size(); }
  bool empty() const { return points.empty(); }

  const Color& color(size_t pointIdx, uint32_t view) const { return colors[pointIdx * viewCount + view]; }
  Color& color(size_t pointIdx, uint32_t view) { return colors[pointIdx * viewCount + view]; }

  int maxCoord() const { return (1 << geomBitDepth) - 1; }
  int maxLevel() const { return (1 << attrBitDepth) - 1; }
};

struct BoundingBox {
  Vec3i min{0, 0, 0};
  Vec3i max{0, 0, 0};

  bool contains(const Vec3i& p) const {
    for (int a = 0; a < 3; ++a) {
      if (p[a] < min[a] || p[a] > max[a]) return false;
    }
    return true;
  }
  Vec3d center() const {
    return {(min[0] + max[0]) / 2.0, (min[1] + max[1]) / 2.0, (min[2] + max[2]) / 2.0};
  }
};

struct NormalSet {
  std::vector<Vec3d> normals;
  std::vector<uint8_t> degenerate;  // per-point flag, 1 = neighborhood was rank deficient

  size_t size() const { return normals.size(); }
};

BoundingBox computeBoundingBox(const PlenopticPointCloud& cloud);

// Per-point PCA plane-fit normals from the k nearest neighbors. The sign is
// oriented away from the bounding-box center; at a tie the canonical sign from
// the eigen solver is kept. Degenerate neighborhoods get +z and a flag.
NormalSet estimateNormals(const PlenopticPointCloud& cloud, int k);

// Merges duplicate coordinates, averaging per-view colors with round-half-up.
// Validates bit-depth ranges. First occurrence keeps its position in the order.
PlenopticPointCloud mergeDuplicates(PlenopticPointCloud cloud);

void validateCloud(const PlenopticPointCloud& cloud);

}  // namespace pvpc
