#include "color.h"

#include <algorithm>

namespace pvpc {

namespace {
// BT.709: Kr 0.2126, Kg 0.7152, Kb 0.0722, scaled by 2^16; the Y row sums to
// exactly 2^16 so neutral grays map to Y == value.
constexpr int64_t kYr = 13933, kYg = 46871, kYb = 4732;
constexpr int64_t kCbScale = 35318;   // 2^16 / 1.8556
constexpr int64_t kCrScale = 41615;   // 2^16 / 1.5748
constexpr int64_t kRFromCr = 103206;  // 1.5748 * 2^16
constexpr int64_t kBFromCb = 121609;  // 1.8556 * 2^16
constexpr int64_t kGFromCr = 30679;   // Kr * 1.5748 / Kg * 2^16
constexpr int64_t kGFromCb = 12276;   // Kb * 1.8556 / Kg * 2^16

inline int64_t fixedRound(int64_t v) { return (v + 32768) >> 16; }  // round-half-up at 2^16

inline uint16_t clampTo(int64_t v, int bitDepth) {
  const int64_t maxV = (int64_t(1) << bitDepth) - 1;
  return uint16_t(std::clamp<int64_t>(v, 0, maxV));
}
}  // namespace

std::array<uint16_t, 3> rgbToYcbcr(const Color& rgb, int bitDepth) {
  const int64_t offset = int64_t(1) << (bitDepth - 1);
  const int64_t r = rgb[0], g = rgb[1], b = rgb[2];
  const int64_t y = fixedRound(kYr * r + kYg * g + kYb * b);
  const int64_t cb = offset + fixedRound(kCbScale * (b - y));
  const int64_t cr = offset + fixedRound(kCrScale * (r - y));
  return {clampTo(y, bitDepth), clampTo(cb, bitDepth), clampTo(cr, bitDepth)};
}

Color ycbcrToRgb(const std::array<uint16_t, 3>& ycc, int bitDepth) {
  const int64_t offset = int64_t(1) << (bitDepth - 1);
  const int64_t y = ycc[0], cb = int64_t(ycc[1]) - offset, cr = int64_t(ycc[2]) - offset;
  const int64_t r = y + fixedRound(kRFromCr * cr);
  const int64_t g = y - fixedRound(kGFromCr * cr + kGFromCb * cb);
  const int64_t b = y + fixedRound(kBFromCb * cb);
  return {clampTo(r, bitDepth), clampTo(g, bitDepth), clampTo(b, bitDepth)};
}

}  // namespace pvpc
