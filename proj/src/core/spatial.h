#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cloud.h"

namespace pvpc {

// Equidistant candidates are ranked by point index (the metrics convention)
// or by coordinates, which makes the result independent of point order.
enum class TieBreak { Index, Coordinate };

// Exact nearest-neighbor index over integer points, backed by a uniform voxel
// grid with expanding shell search. Results are deterministic under the
// chosen tie-break.
class PointIndex {
 public:
  explicit PointIndex(const std::vector<Vec3i>& points, int cellSizeHint = 0);

  // k nearest neighbors of an arbitrary query position. excludeIdx >= 0 skips
  // that point (used for self-exclusion). Returned indices are sorted by
  // ascending squared distance, ties per the tie-break mode.
  std::vector<uint32_t> kNearest(const Vec3i& query, int k, int64_t excludeIdx = -1,
                                 TieBreak tie = TieBreak::Index) const;

  uint32_t nearest(const Vec3i& query, int64_t excludeIdx = -1) const;

  int64_t squaredDistance(const Vec3i& a, const Vec3i& b) const {
    int64_t dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
  }

 private:
  uint64_t cellKey(int cx, int cy, int cz) const;

  const std::vector<Vec3i>& points_;
  int cellSize_ = 1;
  int cellLo_[3] = {0, 0, 0}, cellHi_[3] = {0, 0, 0};     // occupied cell range per axis
  std::vector<uint32_t> sorted_;                          // point indices grouped by cell
  std::unordered_map<uint64_t, std::pair<uint32_t, uint32_t>> cells_;  // key -> [begin, end) in sorted_
};

}  // namespace pvpc
