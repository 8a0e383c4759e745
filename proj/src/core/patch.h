#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cloud.h"

namespace pvpc {

// Projection axes in fixed tie-break order.
enum class Axis : uint8_t { PosX = 0, NegX, PosY, NegY, PosZ, NegZ };

Vec3d axisDirection(Axis axis);

// Axis-aligned projection: depth runs along the projection axis (negated for
// the negative axes so that larger depth is farther along the axis direction's
// opposite side); (u, v) are the remaining two coordinate axes in ascending
// axis order. All three are invertible integer maps.
struct ProjectedCoord {
  int32_t u, v, depth;
};
ProjectedCoord projectPoint(const Vec3i& p, Axis axis);
Vec3i unprojectPoint(int32_t u, int32_t v, int32_t depth, Axis axis);

struct SegmentationParams {
  double normalAngleThresholdDeg = 60.0;
  int minPatchPoints = 16;
  int surfaceThickness = 4;
  int refinementIterations = 2;
};

constexpr int32_t kEmptyDepth = -1;

struct Patch {
  Axis axis = Axis::PosX;
  std::vector<uint32_t> pointIndices;  // ascending

  // Filled by projectPatch:
  int32_t uvMinU = 0, uvMinV = 0;  // footprint origin in projection coordinates
  uint32_t width = 0, height = 0;
  int32_t depthOffset = 0;  // minimum raw depth over the patch
  std::vector<int32_t> nearLayer, farLayer;        // width*height, kEmptyDepth = unoccupied
  std::vector<uint32_t> nearPoint, farPoint;       // source point index per occupied cell
  std::vector<std::vector<Color>> attrNear, attrFar;  // per view, width*height

  bool occupied(uint32_t u, uint32_t v) const { return nearLayer[size_t(v) * width + u] != kEmptyDepth; }
  size_t cells() const { return size_t(width) * height; }
};

struct SegmentationResult {
  std::vector<Patch> patches;        // axis + pointIndices only
  std::vector<uint32_t> unassigned;  // points in clusters smaller than minPatchPoints
};

SegmentationResult segmentIntoPatches(const PlenopticPointCloud& cloud, const NormalSet& normals,
                                      const SegmentationParams& params);

// Projects the patch's points along its axis into near/far depth layers and
// per-view color layers. Points hidden between or beyond the two layers are
// returned; they are not representable in the two-layer raster.
std::vector<uint32_t> projectPatch(const PlenopticPointCloud& cloud, Patch& patch, int surfaceThickness);

}  // namespace pvpc
