#pragma once

#include <cstdint>
#include <vector>

#include "image.h"
#include "patch.h"

namespace pvpc {

enum class Rotation : uint8_t { R0 = 0, R90, R180, R270 };

// Size of a w x h raster after rotation.
inline std::pair<uint32_t, uint32_t> rotatedSize(uint32_t w, uint32_t h, Rotation r) {
  return (r == Rotation::R90 || r == Rotation::R270) ? std::make_pair(h, w) : std::make_pair(w, h);
}

// Maps a cell of the unrotated w x h raster into the rotated raster (clockwise).
inline std::pair<uint32_t, uint32_t> rotateCell(uint32_t u, uint32_t v, uint32_t w, uint32_t h, Rotation r) {
  switch (r) {
    case Rotation::R0: return {u, v};
    case Rotation::R90: return {h - 1 - v, u};
    case Rotation::R180: return {w - 1 - u, h - 1 - v};
    case Rotation::R270: return {v, w - 1 - u};
  }
  return {u, v};
}

inline std::pair<uint32_t, uint32_t> unrotateCell(uint32_t x, uint32_t y, uint32_t w, uint32_t h, Rotation r) {
  switch (r) {
    case Rotation::R0: return {x, y};
    case Rotation::R90: return {y, h - 1 - x};
    case Rotation::R180: return {w - 1 - x, h - 1 - y};
    case Rotation::R270: return {w - 1 - y, x};
  }
  return {x, y};
}

struct Placement {
  uint32_t x = 0, y = 0;
  Rotation rotation = Rotation::R0;
};

struct AtlasLayout {
  uint32_t canvasWidth = 0, canvasHeight = 0;
  std::vector<Placement> placements;  // parallel to the input patch list
  BinaryMap occupancy;
};

// First-fit raster-scan packing with rotation. Patches are processed in
// decreasing footprint-area order (ties: decreasing width, then index); for
// each aligned raster position the rotations are tried in order 0/90/180/270
// and the first collision-free spot wins. Collision is tested on occupied
// cells only, so patches may interlock.
AtlasLayout packPatches(const std::vector<Patch>& patches, uint32_t canvasWidth, uint32_t alignment);

}  // namespace pvpc
