#pragma once

#include <array>
#include <cstdint>

#include "cloud.h"

namespace pvpc {

enum class ColorSpace : uint8_t { Rgb = 0, YCbCr709 = 1 };

// Integer BT.709 full-range conversion (16-bit fixed-point coefficients,
// round-half-up). Offsets and clamps follow the attribute bit depth.
std::array<uint16_t, 3> rgbToYcbcr(const Color& rgb, int bitDepth);
Color ycbcrToRgb(const std::array<uint16_t, 3>& ycc, int bitDepth);

}  // namespace pvpc
