#include "spatial.h"

#include <algorithm>
#include <cmath>

namespace pvpc {

namespace {
constexpr int kCoordBias = 1 << 20;  // shifts negatives into range before packing
}

PointIndex::PointIndex(const std::vector<Vec3i>& points, int cellSizeHint) : points_(points) {
  if (cellSizeHint > 0) {
    cellSize_ = cellSizeHint;
  } else if (!points.empty()) {
    Vec3i lo = points[0], hi = points[0];
    for (const auto& p : points) {
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], p[a]);
        hi[a] = std::max(hi[a], p[a]);
      }
    }
    double volume = 1.0;
    for (int a = 0; a < 3; ++a) volume *= double(hi[a] - lo[a] + 1);
    double target = std::cbrt(volume / double(points.size()));
    cellSize_ = std::max(1, int(std::lround(target * 2)));
  }

  std::vector<std::pair<uint64_t, uint32_t>> keyed(points.size());
  for (uint32_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    auto cell = [&](int a) { return (p[a] + kCoordBias) / cellSize_; };
    for (int a = 0; a < 3; ++a) {
      if (i == 0) {
        cellLo_[a] = cellHi_[a] = cell(a);
      } else {
        cellLo_[a] = std::min(cellLo_[a], cell(a));
        cellHi_[a] = std::max(cellHi_[a], cell(a));
      }
    }
    keyed[i] = {cellKey(cell(0), cell(1), cell(2)), i};
  }
  std::sort(keyed.begin(), keyed.end());
  sorted_.resize(points.size());
  for (uint32_t i = 0; i < keyed.size(); ++i) sorted_[i] = keyed[i].second;
  uint32_t begin = 0;
  for (uint32_t i = 0; i < keyed.size(); ++i) {
    if (i + 1 == keyed.size() || keyed[i + 1].first != keyed[i].first) {
      cells_.emplace(keyed[i].first, std::make_pair(begin, i + 1));
      begin = i + 1;
    }
  }
}

uint64_t PointIndex::cellKey(int cx, int cy, int cz) const {
  return (uint64_t(uint32_t(cx)) << 42) | (uint64_t(uint32_t(cy) & 0x1FFFFF) << 21) |
         uint64_t(uint32_t(cz) & 0x1FFFFF);
}

std::vector<uint32_t> PointIndex::kNearest(const Vec3i& query, int k, int64_t excludeIdx, TieBreak tie) const {
  // Best-k kept as a sorted small vector keyed by (d2, tie key); k is small
  // in practice. The coordinate tie key makes results permutation-invariant.
  using Entry = std::pair<std::array<int64_t, 4>, uint32_t>;
  std::vector<Entry> best;
  best.reserve(k + 1);
  auto keyFor = [&](uint32_t idx, int64_t d2) -> std::array<int64_t, 4> {
    if (tie == TieBreak::Index) return {d2, int64_t(idx), 0, 0};
    const Vec3i& p = points_[idx];
    return {d2, p[0], p[1], p[2]};
  };
  auto consider = [&](uint32_t idx) {
    if (int64_t(idx) == excludeIdx) return;
    Entry cand{keyFor(idx, squaredDistance(points_[idx], query)), idx};
    if (int(best.size()) == k && cand.first >= best.back().first) return;
    auto pos = std::upper_bound(best.begin(), best.end(), cand,
                                [](const Entry& a, const Entry& b) { return a.first < b.first; });
    best.insert(pos, cand);
    if (int(best.size()) > k) best.pop_back();
  };

  int qc[3];
  for (int a = 0; a < 3; ++a) qc[a] = (query[a] + kCoordBias) / cellSize_;
  // Beyond this ring no occupied cell exists, so the scan is exhaustive even
  // when fewer than k candidates are available.
  int ringLimit = 0;
  for (int a = 0; a < 3; ++a) {
    ringLimit = std::max({ringLimit, std::abs(qc[a] - cellLo_[a]), std::abs(cellHi_[a] - qc[a])});
  }

  for (int ring = 0; ring <= ringLimit; ++ring) {
    for (int dx = -ring; dx <= ring; ++dx) {
      for (int dy = -ring; dy <= ring; ++dy) {
        for (int dz = -ring; dz <= ring; ++dz) {
          if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
          auto it = cells_.find(cellKey(qc[0] + dx, qc[1] + dy, qc[2] + dz));
          if (it == cells_.end()) continue;
          for (uint32_t s = it->second.first; s < it->second.second; ++s) consider(sorted_[s]);
        }
      }
    }
    // Points in cells beyond this ring are at least ring*cellSize_ away.
    const int64_t guarantee = int64_t(ring) * cellSize_;
    if (int(best.size()) == k && guarantee * guarantee > best.back().first[0]) break;
  }

  std::vector<uint32_t> out;
  out.reserve(best.size());
  for (const auto& [key, idx] : best) out.push_back(idx);
  return out;
}

uint32_t PointIndex::nearest(const Vec3i& query, int64_t excludeIdx) const {
  const auto found = kNearest(query, 1, excludeIdx);
  if (found.empty()) fail(ErrorCode::InvalidArgument, "nearest: index holds no candidate points");
  return found.front();
}

}  // namespace pvpc
