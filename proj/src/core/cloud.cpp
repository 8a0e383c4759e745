#include "cloud.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "spatial.h"

namespace pvpc {

BoundingBox computeBoundingBox(const PlenopticPointCloud& cloud) {
  if (cloud.empty()) fail(ErrorCode::EmptyCloud, "computeBoundingBox: empty cloud");
  BoundingBox box{cloud.points[0], cloud.points[0]};
  for (const auto& p : cloud.points) {
    for (int a = 0; a < 3; ++a) {
      box.min[a] = std::min(box.min[a], p[a]);
      box.max[a] = std::max(box.max[a], p[a]);
    }
  }
  return box;
}

namespace {

// Cyclic Jacobi rotations on a symmetric 3x3 matrix. Returns eigenvalues and
// matching unit eigenvectors (columns of v), deterministically.
void jacobiEigen3(double m[3][3], double eval[3], double evec[3][3]) {
  double a[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (off < 1e-30) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int i = 0; i < 3; ++i) {
          double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int j = 0; j < 3; ++j) {
          double apj = a[p][j], aqj = a[q][j];
          a[p][j] = c * apj - s * aqj;
          a[q][j] = s * apj + c * aqj;
        }
        for (int i = 0; i < 3; ++i) {
          double vip = v[i][p], viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    eval[i] = a[i][i];
    for (int j = 0; j < 3; ++j) evec[j][i] = v[j][i];
  }
}

Vec3d canonicalSign(Vec3d n) {
  int lead = 0;
  for (int a = 1; a < 3; ++a) {
    if (std::abs(n[a]) > std::abs(n[lead])) lead = a;
  }
  if (n[lead] < 0) {
    for (int a = 0; a < 3; ++a) n[a] = -n[a];
  }
  return n;
}

}  // namespace

NormalSet estimateNormals(const PlenopticPointCloud& cloud, int k) {
  if (k < 3) fail(ErrorCode::InvalidArgument, "estimateNormals: k must be >= 3");
  if (cloud.pointCount() < size_t(k) + 1) {
    fail(ErrorCode::InsufficientPoints, "estimateNormals: need at least k+1 points");
  }
  const BoundingBox box = computeBoundingBox(cloud);
  const Vec3d center = box.center();
  PointIndex index(cloud.points);

  NormalSet result;
  result.normals.resize(cloud.pointCount());
  result.degenerate.assign(cloud.pointCount(), 0);

  for (size_t i = 0; i < cloud.pointCount(); ++i) {
    const auto neighbors = index.kNearest(cloud.points[i], k, int64_t(i), TieBreak::Coordinate);

    Vec3d mean{0, 0, 0};
    for (uint32_t n : neighbors) {
      for (int a = 0; a < 3; ++a) mean[a] += cloud.points[n][a];
    }
    for (int a = 0; a < 3; ++a) mean[a] /= double(neighbors.size());

    double cov[3][3] = {};
    for (uint32_t n : neighbors) {
      double d[3];
      for (int a = 0; a < 3; ++a) d[a] = cloud.points[n][a] - mean[a];
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) cov[r][c] += d[r] * d[c];
    }
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cov[r][c] /= double(neighbors.size());

    double eval[3], evec[3][3];
    jacobiEigen3(cov, eval, evec);
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int x, int y) { return eval[x] < eval[y]; });
    const double lMin = eval[order[0]], lMid = eval[order[1]], lMax = eval[order[2]];
    (void)lMin;

    if (lMax <= 1e-18 || lMid <= 1e-9 * lMax) {
      result.normals[i] = {0.0, 0.0, 1.0};
      result.degenerate[i] = 1;
      continue;
    }

    Vec3d n{evec[0][order[0]], evec[1][order[0]], evec[2][order[0]]};
    double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (int a = 0; a < 3; ++a) n[a] /= norm;
    n = canonicalSign(n);

    double dot = 0;
    for (int a = 0; a < 3; ++a) dot += n[a] * (cloud.points[i][a] - center[a]);
    if (dot < 0) {
      for (int a = 0; a < 3; ++a) n[a] = -n[a];
    }
    result.normals[i] = n;
  }
  return result;
}

void validateCloud(const PlenopticPointCloud& cloud) {
  if (cloud.viewCount < 1) fail(ErrorCode::InvalidArgument, "cloud: viewCount must be >= 1");
  if (cloud.geomBitDepth < 1 || cloud.geomBitDepth > 16)
    fail(ErrorCode::InvalidArgument, "cloud: geometry bit depth out of range");
  if (cloud.attrBitDepth < 1 || cloud.attrBitDepth > 16)
    fail(ErrorCode::InvalidArgument, "cloud: attribute bit depth out of range");
  if (cloud.colors.size() != cloud.points.size() * cloud.viewCount)
    fail(ErrorCode::InvalidArgument, "cloud: color array size mismatch");
  const int32_t maxC = cloud.maxCoord();
  const int maxL = cloud.maxLevel();
  for (const auto& p : cloud.points) {
    for (int a = 0; a < 3; ++a) {
      if (p[a] < 0 || p[a] > maxC) fail(ErrorCode::InvalidArgument, "cloud: coordinate out of bit-depth range");
    }
  }
  for (const auto& c : cloud.colors) {
    for (int a = 0; a < 3; ++a) {
      if (c[a] > maxL) fail(ErrorCode::InvalidArgument, "cloud: color out of bit-depth range");
    }
  }
}

PlenopticPointCloud mergeDuplicates(PlenopticPointCloud cloud) {
  validateCloud(cloud);
  auto key = [](const Vec3i& p) {
    return (uint64_t(uint32_t(p[0])) << 42) | (uint64_t(uint32_t(p[1])) << 21) | uint64_t(uint32_t(p[2]));
  };

  std::unordered_map<uint64_t, uint32_t> slot;  // coordinate -> output index
  slot.reserve(cloud.pointCount());
  PlenopticPointCloud out;
  out.viewCount = cloud.viewCount;
  out.geomBitDepth = cloud.geomBitDepth;
  out.attrBitDepth = cloud.attrBitDepth;

  std::vector<std::vector<uint64_t>> sums;  // per output point: 3*viewCount component sums
  std::vector<uint32_t> counts;

  for (size_t i = 0; i < cloud.pointCount(); ++i) {
    uint64_t k = key(cloud.points[i]);
    auto [it, inserted] = slot.emplace(k, uint32_t(out.points.size()));
    if (inserted) {
      out.points.push_back(cloud.points[i]);
      sums.emplace_back(3 * cloud.viewCount, 0);
      counts.push_back(0);
    }
    uint32_t o = it->second;
    counts[o]++;
    for (uint32_t v = 0; v < cloud.viewCount; ++v) {
      const Color& c = cloud.color(i, v);
      for (int a = 0; a < 3; ++a) sums[o][v * 3 + a] += c[a];
    }
  }

  out.colors.resize(out.points.size() * out.viewCount);
  for (size_t o = 0; o < out.points.size(); ++o) {
    for (uint32_t v = 0; v < out.viewCount; ++v) {
      Color c;
      for (int a = 0; a < 3; ++a) c[a] = uint16_t(divRoundHalfUp(sums[o][v * 3 + a], counts[o]));
      out.color(o, v) = c;
    }
  }
  return out;
}

}  // namespace pvpc
