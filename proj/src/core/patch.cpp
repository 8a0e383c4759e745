#include "patch.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "spatial.h"

namespace pvpc {

Vec3d axisDirection(Axis axis) {
  switch (axis) {
    case Axis::PosX: return {1, 0, 0};
    case Axis::NegX: return {-1, 0, 0};
    case Axis::PosY: return {0, 1, 0};
    case Axis::NegY: return {0, -1, 0};
    case Axis::PosZ: return {0, 0, 1};
    case Axis::NegZ: return {0, 0, -1};
  }
  return {0, 0, 0};
}

namespace {

int projectionAxisIndex(Axis axis) { return int(axis) / 2; }
bool negativeAxis(Axis axis) { return int(axis) % 2 == 1; }

}  // namespace

ProjectedCoord projectPoint(const Vec3i& p, Axis axis) {
  const int d = projectionAxisIndex(axis);
  const int ua = d == 0 ? 1 : 0;
  const int va = d == 2 ? 1 : 2;
  int32_t depth = negativeAxis(axis) ? -p[d] : p[d];
  return {p[ua], p[va], depth};
}

Vec3i unprojectPoint(int32_t u, int32_t v, int32_t depth, Axis axis) {
  const int d = projectionAxisIndex(axis);
  const int ua = d == 0 ? 1 : 0;
  const int va = d == 2 ? 1 : 2;
  Vec3i p{};
  p[ua] = u;
  p[va] = v;
  p[d] = negativeAxis(axis) ? -depth : depth;
  return p;
}

namespace {

constexpr int kSmoothingNeighbors = 16;
constexpr double kSmoothingWeight = 0.5;

uint64_t voxelKey(const Vec3i& p) {
  return (uint64_t(uint32_t(p[0])) << 42) | (uint64_t(uint32_t(p[1])) << 21) | uint64_t(uint32_t(p[2]));
}

int bestAxisFor(const Vec3d& n, const double* smoothBonus) {
  int best = 0;
  double bestScore = -1e30;
  for (int k = 0; k < 6; ++k) {
    const Vec3d dir = axisDirection(Axis(k));
    double score = n[0] * dir[0] + n[1] * dir[1] + n[2] * dir[2];
    if (smoothBonus) score += smoothBonus[k];
    if (score > bestScore) {
      bestScore = score;
      best = k;
    }
  }
  return best;
}

}  // namespace

SegmentationResult segmentIntoPatches(const PlenopticPointCloud& cloud, const NormalSet& normals,
                                      const SegmentationParams& params) {
  if (cloud.empty()) fail(ErrorCode::EmptyCloud, "segmentIntoPatches: empty cloud");
  if (normals.size() != cloud.pointCount())
    fail(ErrorCode::InvalidArgument, "segmentIntoPatches: normals do not match cloud");
  const size_t n = cloud.pointCount();
  const double cosThresh = std::cos(params.normalAngleThresholdDeg * 3.14159265358979323846 / 180.0);

  std::vector<uint8_t> axis(n);
  for (size_t i = 0; i < n; ++i) axis[i] = uint8_t(bestAxisFor(normals.normals[i], nullptr));

  // Alternate between neighbor-vote smoothing and axis reassignment.
  if (params.refinementIterations > 0 && n > 1) {
    PointIndex index(cloud.points);
    const int k = int(std::min<size_t>(kSmoothingNeighbors, n - 1));
    std::vector<std::vector<uint32_t>> nbrs(n);
    for (size_t i = 0; i < n; ++i) nbrs[i] = index.kNearest(cloud.points[i], k, int64_t(i), TieBreak::Coordinate);

    for (int iter = 0; iter < params.refinementIterations; ++iter) {
      std::vector<uint8_t> next(n);
      for (size_t i = 0; i < n; ++i) {
        double bonus[6] = {};
        const Vec3d& ni = normals.normals[i];
        for (uint32_t j : nbrs[i]) {
          const Vec3d& nj = normals.normals[j];
          double dot = ni[0] * nj[0] + ni[1] * nj[1] + ni[2] * nj[2];
          if (dot >= cosThresh) bonus[axis[j]] += kSmoothingWeight / double(nbrs[i].size());
        }
        next[i] = uint8_t(bestAxisFor(ni, bonus));
      }
      axis.swap(next);
    }
  }

  // Connected components per axis class over 26-connectivity in voxel space.
  std::unordered_map<uint64_t, uint32_t> voxel;
  voxel.reserve(n);
  for (size_t i = 0; i < n; ++i) voxel.emplace(voxelKey(cloud.points[i]), uint32_t(i));

  SegmentationResult result;
  std::vector<uint8_t> visited(n, 0);
  std::vector<uint32_t> stack, component;
  for (size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    component.clear();
    stack.assign(1, uint32_t(seed));
    visited[seed] = 1;
    while (!stack.empty()) {
      uint32_t cur = stack.back();
      stack.pop_back();
      component.push_back(cur);
      const Vec3i& p = cloud.points[cur];
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dz = -1; dz <= 1; ++dz) {
            if (dx == 0 && dy == 0 && dz == 0) continue;
            Vec3i q{p[0] + dx, p[1] + dy, p[2] + dz};
            if (q[0] < 0 || q[1] < 0 || q[2] < 0) continue;
            auto it = voxel.find(voxelKey(q));
            if (it == voxel.end()) continue;
            uint32_t other = it->second;
            if (visited[other] || axis[other] != axis[seed]) continue;
            visited[other] = 1;
            stack.push_back(other);
          }
        }
      }
    }
    if (int(component.size()) < params.minPatchPoints) {
      result.unassigned.insert(result.unassigned.end(), component.begin(), component.end());
      continue;
    }
    Patch patch;
    std::sort(component.begin(), component.end());
    patch.pointIndices = component;

    Vec3d mean{0, 0, 0};
    for (uint32_t i : component) {
      for (int a = 0; a < 3; ++a) mean[a] += normals.normals[i][a];
    }
    double norm = std::sqrt(mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]);
    if (norm > 0) {
      for (int a = 0; a < 3; ++a) mean[a] /= norm;
    }
    patch.axis = Axis(bestAxisFor(mean, nullptr));
    result.patches.push_back(std::move(patch));
  }
  std::sort(result.unassigned.begin(), result.unassigned.end());
  return result;
}

std::vector<uint32_t> projectPatch(const PlenopticPointCloud& cloud, Patch& patch, int surfaceThickness) {
  if (patch.pointIndices.empty()) fail(ErrorCode::InvalidArgument, "projectPatch: empty patch");

  int32_t minU = INT32_MAX, minV = INT32_MAX, maxU = INT32_MIN, maxV = INT32_MIN, minDepth = INT32_MAX;
  std::vector<ProjectedCoord> coords(patch.pointIndices.size());
  for (size_t k = 0; k < patch.pointIndices.size(); ++k) {
    coords[k] = projectPoint(cloud.points[patch.pointIndices[k]], patch.axis);
    minU = std::min(minU, coords[k].u);
    maxU = std::max(maxU, coords[k].u);
    minV = std::min(minV, coords[k].v);
    maxV = std::max(maxV, coords[k].v);
    minDepth = std::min(minDepth, coords[k].depth);
  }
  patch.uvMinU = minU;
  patch.uvMinV = minV;
  patch.width = uint32_t(maxU - minU + 1);
  patch.height = uint32_t(maxV - minV + 1);
  patch.depthOffset = minDepth;

  // Collect the points of each pixel sorted by depth; depths are unique per
  // pixel because duplicate coordinates were merged at ingest.
  std::map<std::pair<int32_t, int32_t>, std::vector<std::pair<int32_t, uint32_t>>> pixels;
  for (size_t k = 0; k < patch.pointIndices.size(); ++k) {
    pixels[{coords[k].v - minV, coords[k].u - minU}].push_back({coords[k].depth, patch.pointIndices[k]});
  }

  const size_t cells = patch.cells();
  patch.nearLayer.assign(cells, kEmptyDepth);
  patch.farLayer.assign(cells, kEmptyDepth);
  patch.nearPoint.assign(cells, 0);
  patch.farPoint.assign(cells, 0);
  patch.attrNear.assign(cloud.viewCount, std::vector<Color>(cells, Color{0, 0, 0}));
  patch.attrFar.assign(cloud.viewCount, std::vector<Color>(cells, Color{0, 0, 0}));

  std::vector<uint32_t> missed;
  for (auto& [vu, list] : pixels) {
    std::sort(list.begin(), list.end());
    const size_t cell = size_t(vu.first) * patch.width + vu.second;
    const int32_t nearDepth = list.front().first;
    size_t farIdx = 0;
    for (size_t k = 1; k < list.size(); ++k) {
      if (list[k].first <= nearDepth + surfaceThickness) farIdx = k;
    }
    patch.nearLayer[cell] = nearDepth - patch.depthOffset;
    patch.farLayer[cell] = list[farIdx].first - patch.depthOffset;
    patch.nearPoint[cell] = list.front().second;
    patch.farPoint[cell] = list[farIdx].second;
    for (uint32_t view = 0; view < cloud.viewCount; ++view) {
      patch.attrNear[view][cell] = cloud.color(list.front().second, view);
      patch.attrFar[view][cell] = cloud.color(list[farIdx].second, view);
    }
    for (size_t k = 1; k < list.size(); ++k) {
      if (k != farIdx) missed.push_back(list[k].second);
    }
  }
  std::sort(missed.begin(), missed.end());
  return missed;
}

}  // namespace pvpc
