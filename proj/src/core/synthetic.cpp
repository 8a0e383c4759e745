#include "synthetic.h"

#include <algorithm>
#include <cmath>

namespace pvpc {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t hashCoords(uint64_t seed, int64_t a, int64_t b, int64_t c, uint64_t salt) {
  uint64_t h = seed ^ (salt * 0xA24BAED4963EE407ull);
  h = splitmix64(h ^ uint64_t(a));
  h = splitmix64(h ^ uint64_t(b));
  h = splitmix64(h ^ uint64_t(c));
  return h;
}

// Trilinear value noise on a lattice of the given cell size; returns 0..255.
int valueNoise(uint64_t seed, const Vec3i& p, int cell, uint64_t salt) {
  const int cx = p[0] / cell, cy = p[1] / cell, cz = p[2] / cell;
  const int fx = p[0] % cell, fy = p[1] % cell, fz = p[2] % cell;
  int64_t acc = 0;
  for (int dx = 0; dx <= 1; ++dx) {
    for (int dy = 0; dy <= 1; ++dy) {
      for (int dz = 0; dz <= 1; ++dz) {
        const int corner = int(hashCoords(seed, cx + dx, cy + dy, cz + dz, salt) & 0xFF);
        const int64_t wx = dx ? fx : cell - fx;
        const int64_t wy = dy ? fy : cell - fy;
        const int64_t wz = dz ? fz : cell - fz;
        acc += corner * wx * wy * wz;
      }
    }
  }
  return int(acc / (int64_t(cell) * cell * cell));
}

constexpr uint64_t kBaseSalt = 11;
constexpr uint64_t kOffsetSalt = 101;

Color viewColor(uint64_t seed, const Vec3i& p, uint32_t view, int scaleFx) {
  Color c;
  for (int comp = 0; comp < 3; ++comp) {
    const int base = 16 + valueNoise(seed, p, 16, kBaseSalt + comp) * 224 / 255;
    const int offset = valueNoise(seed, p, 8, kOffsetSalt + 3 * view + comp) - 128;
    const int delta = int((int64_t(offset) * scaleFx + 512) >> 10);
    c[comp] = uint16_t(std::clamp(base + delta, 0, 255));
  }
  return c;
}

int bitsFor(int32_t maxCoord) {
  int bits = 4;
  while ((1 << bits) <= maxCoord) ++bits;
  return bits;
}

PlenopticPointCloud assemble(std::vector<Vec3i> points, uint32_t viewCount, double viewCorrelation, uint64_t seed,
                             uint64_t pointCount) {
  if (viewCorrelation < 0 || viewCorrelation > 1)
    fail(ErrorCode::InvalidArgument, "generateSynthetic: viewCorrelation must be in [0, 1]");
  if (viewCount < 1) fail(ErrorCode::InvalidArgument, "generateSynthetic: viewCount must be >= 1");

  if (pointCount > 0 && points.size() > pointCount) {
    // Deterministic subsample: keep the pointCount smallest hash ranks.
    std::vector<std::pair<uint64_t, uint32_t>> ranked(points.size());
    for (uint32_t i = 0; i < points.size(); ++i) {
      ranked[i] = {hashCoords(seed, points[i][0], points[i][1], points[i][2], 7), i};
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<Vec3i> kept;
    kept.reserve(pointCount);
    for (uint64_t i = 0; i < pointCount; ++i) kept.push_back(points[ranked[i].second]);
    std::sort(kept.begin(), kept.end());
    points = std::move(kept);
  }

  const int scaleFx = int(std::lround((1.0 - viewCorrelation) * 1024.0));
  PlenopticPointCloud cloud;
  cloud.viewCount = viewCount;
  cloud.attrBitDepth = 8;
  int32_t maxCoord = 0;
  for (const auto& p : points) maxCoord = std::max({maxCoord, p[0], p[1], p[2]});
  cloud.geomBitDepth = bitsFor(maxCoord);
  cloud.points = std::move(points);
  cloud.colors.reserve(cloud.points.size() * viewCount);
  for (const auto& p : cloud.points) {
    for (uint32_t view = 0; view < viewCount; ++view) {
      cloud.colors.push_back(viewColor(seed, p, view, scaleFx));
    }
  }
  return cloud;
}

}  // namespace

SyntheticShape parseShape(const std::string& name) {
  if (name == "cube") return SyntheticShape::Cube;
  if (name == "sphere") return SyntheticShape::Sphere;
  if (name == "plane") return SyntheticShape::Plane;
  fail(ErrorCode::InvalidArgument, "unknown synthetic shape '" + name + "'");
}

PlenopticPointCloud generateCubeSurface(uint32_t side, uint32_t viewCount, double viewCorrelation, uint64_t seed,
                                        std::vector<int>* faceLabels) {
  if (side < 2) fail(ErrorCode::InvalidArgument, "generateCubeSurface: side must be >= 2");
  const int32_t lo = 1, hi = int32_t(side);
  std::vector<Vec3i> points;
  std::vector<int> labels;
  for (int32_t x = lo; x <= hi; ++x) {
    for (int32_t y = lo; y <= hi; ++y) {
      for (int32_t z = lo; z <= hi; ++z) {
        int face = -1;
        if (x == hi) face = 0;        // +x
        else if (x == lo) face = 1;   // -x
        else if (y == hi) face = 2;   // +y
        else if (y == lo) face = 3;   // -y
        else if (z == hi) face = 4;   // +z
        else if (z == lo) face = 5;   // -z
        if (face < 0) continue;
        points.push_back({x, y, z});
        labels.push_back(face);
      }
    }
  }
  if (faceLabels) *faceLabels = std::move(labels);
  return assemble(std::move(points), viewCount, viewCorrelation, seed, 0);
}

PlenopticPointCloud generateSynthetic(SyntheticShape shape, uint64_t pointCount, uint32_t viewCount,
                                      double viewCorrelation, uint64_t seed) {
  if (pointCount == 0) fail(ErrorCode::InvalidArgument, "generateSynthetic: pointCount must be > 0");
  std::vector<Vec3i> points;
  switch (shape) {
    case SyntheticShape::Plane: {
      const uint32_t sideW = uint32_t(std::ceil(std::sqrt(double(pointCount))));
      const int32_t z = 4;
      for (uint64_t i = 0; i < pointCount; ++i) {
        points.push_back({int32_t(i % sideW) + 1, int32_t(i / sideW) + 1, z});
      }
      break;
    }
    case SyntheticShape::Cube: {
      uint32_t side = uint32_t(std::lround(std::sqrt(double(pointCount) / 6.0)));
      side = std::max(side, 2u);
      while (6ull * side * side - 12ull * side + 8ull < pointCount) ++side;
      const int32_t lo = 1, hi = int32_t(side);
      for (int32_t x = lo; x <= hi; ++x) {
        for (int32_t y = lo; y <= hi; ++y) {
          for (int32_t z = lo; z <= hi; ++z) {
            if (x == lo || x == hi || y == lo || y == hi || z == lo || z == hi) points.push_back({x, y, z});
          }
        }
      }
      break;
    }
    case SyntheticShape::Sphere: {
      int64_t radius = std::max<int64_t>(2, std::llround(std::sqrt(double(pointCount) / 12.56)));
      // Shell population grows ~ 4*pi*r^2; widen until it can cover the request.
      while (4 * 355 * radius * radius / 113 < int64_t(pointCount) && radius < (1 << 18)) ++radius;
      const int32_t c = int32_t(radius) + 2;
      for (int32_t x = c - int32_t(radius) - 1; x <= c + int32_t(radius) + 1; ++x) {
        for (int32_t y = c - int32_t(radius) - 1; y <= c + int32_t(radius) + 1; ++y) {
          for (int32_t z = c - int32_t(radius) - 1; z <= c + int32_t(radius) + 1; ++z) {
            const int64_t dx = x - c, dy = y - c, dz = z - c;
            const int64_t d2 = dx * dx + dy * dy + dz * dz;
            if (d2 >= radius * radius - radius && d2 <= radius * radius + radius) points.push_back({x, y, z});
          }
        }
      }
      break;
    }
  }
  return assemble(std::move(points), viewCount, viewCorrelation, seed, pointCount);
}

}  // namespace pvpc
