#pragma once

#include <cstdint>
#include <vector>

#include "common.h"

namespace pvpc {

struct Plane {
  uint32_t width = 0, height = 0;
  std::vector<uint16_t> samples;

  Plane() = default;
  Plane(uint32_t w, uint32_t h, uint16_t fill = 0) : width(w), height(h), samples(size_t(w) * h, fill) {}

  uint16_t at(uint32_t x, uint32_t y) const { return samples[size_t(y) * width + x]; }
  uint16_t& at(uint32_t x, uint32_t y) { return samples[size_t(y) * width + x]; }
  bool sameSize(const Plane& other) const { return width == other.width && height == other.height; }
};

// One video frame: a single plane for geometry, three (Y/Cb/Cr or R/G/B) for attributes.
struct Frame {
  std::vector<Plane> planes;

  uint32_t width() const { return planes.empty() ? 0 : planes[0].width; }
  uint32_t height() const { return planes.empty() ? 0 : planes[0].height; }
};

struct BinaryMap {
  uint32_t width = 0, height = 0;
  std::vector<uint8_t> bits;

  BinaryMap() = default;
  BinaryMap(uint32_t w, uint32_t h, uint8_t fill = 0) : width(w), height(h), bits(size_t(w) * h, fill) {}

  uint8_t at(uint32_t x, uint32_t y) const { return bits[size_t(y) * width + x]; }
  uint8_t& at(uint32_t x, uint32_t y) { return bits[size_t(y) * width + x]; }
  size_t countSet() const {
    size_t n = 0;
    for (uint8_t b : bits) n += b != 0;
    return n;
  }
};

}  // namespace pvpc
