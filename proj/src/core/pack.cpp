#include "pack.h"

#include <algorithm>
#include <numeric>

namespace pvpc {

namespace {

struct RotatedCells {
  uint32_t width = 0, height = 0;
  std::vector<std::pair<uint32_t, uint32_t>> cells;  // (x, y) offsets, row-major order
};

RotatedCells rotatedOccupiedCells(const Patch& patch, Rotation r) {
  RotatedCells out;
  auto [rw, rh] = rotatedSize(patch.width, patch.height, r);
  out.width = rw;
  out.height = rh;
  out.cells.reserve(patch.cells());
  for (uint32_t v = 0; v < patch.height; ++v) {
    for (uint32_t u = 0; u < patch.width; ++u) {
      if (!patch.occupied(u, v)) continue;
      out.cells.push_back(rotateCell(u, v, patch.width, patch.height, r));
    }
  }
  std::sort(out.cells.begin(), out.cells.end(),
            [](const auto& a, const auto& b) { return a.second != b.second ? a.second < b.second : a.first < b.first; });
  return out;
}

}  // namespace

AtlasLayout packPatches(const std::vector<Patch>& patches, uint32_t canvasWidth, uint32_t alignment) {
  if (alignment == 0 || canvasWidth == 0 || canvasWidth % alignment != 0)
    fail(ErrorCode::InvalidArgument, "packPatches: alignment must divide a nonzero canvas width");

  std::vector<uint32_t> order(patches.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const uint64_t areaA = uint64_t(patches[a].width) * patches[a].height;
    const uint64_t areaB = uint64_t(patches[b].width) * patches[b].height;
    if (areaA != areaB) return areaA > areaB;
    if (patches[a].width != patches[b].width) return patches[a].width > patches[b].width;
    return a < b;
  });

  AtlasLayout layout;
  layout.canvasWidth = canvasWidth;
  layout.placements.resize(patches.size());
  std::vector<uint8_t> grid;  // canvasWidth * allocHeight
  uint32_t allocHeight = 0;
  uint32_t usedHeight = 0;

  auto ensureHeight = [&](uint32_t h) {
    if (h <= allocHeight) return;
    uint32_t target = ((h + alignment - 1) / alignment) * alignment;
    grid.resize(size_t(canvasWidth) * target, 0);
    allocHeight = target;
  };

  for (uint32_t idx : order) {
    const Patch& patch = patches[idx];
    if (std::min(patch.width, patch.height) > canvasWidth)
      fail(ErrorCode::PatchTooWide, "packPatches: patch exceeds canvas width in every rotation");

    RotatedCells rot[4];
    for (int r = 0; r < 4; ++r) rot[r] = rotatedOccupiedCells(patch, Rotation(r));

    bool placed = false;
    for (uint32_t y = 0; !placed; y += alignment) {
      ensureHeight(y + std::max(patch.width, patch.height));
      for (uint32_t x = 0; x < canvasWidth && !placed; x += alignment) {
        for (int r = 0; r < 4 && !placed; ++r) {
          const RotatedCells& rc = rot[r];
          if (x + rc.width > canvasWidth) continue;
          ensureHeight(y + rc.height);
          bool collision = false;
          for (const auto& [cx, cy] : rc.cells) {
            if (grid[size_t(y + cy) * canvasWidth + (x + cx)]) {
              collision = true;
              break;
            }
          }
          if (collision) continue;
          for (const auto& [cx, cy] : rc.cells) grid[size_t(y + cy) * canvasWidth + (x + cx)] = 1;
          layout.placements[idx] = {x, y, Rotation(r)};
          usedHeight = std::max(usedHeight, y + rc.height);
          placed = true;
        }
      }
    }
  }

  layout.canvasHeight = ((usedHeight + alignment - 1) / alignment) * alignment;
  layout.occupancy = BinaryMap(canvasWidth, layout.canvasHeight);
  for (uint32_t y = 0; y < layout.canvasHeight; ++y) {
    for (uint32_t x = 0; x < canvasWidth; ++x) {
      if (y < allocHeight && grid[size_t(y) * canvasWidth + x]) layout.occupancy.at(x, y) = 1;
    }
  }
  return layout;
}

}  // namespace pvpc
