#pragma once

#include <cstdint>
#include <vector>

#include "../image.h"

namespace pvpc {

// Lossless occupancy coding: dimensions, the first cell's value, then
// alternating row-major run lengths as order-0 exp-Golomb codes.
std::vector<uint8_t> encodeOccupancy(const BinaryMap& map);
BinaryMap decodeOccupancy(const uint8_t* data, size_t size);
inline BinaryMap decodeOccupancy(const std::vector<uint8_t>& bytes) {
  return decodeOccupancy(bytes.data(), bytes.size());
}

}  // namespace pvpc
