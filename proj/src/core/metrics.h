#pragma once

#include <utility>
#include <vector>

#include "cloud.h"

namespace pvpc {

constexpr double kPsnrCap = 99.99;

struct Psnr3 {
  double y = 0, cb = 0, cr = 0;
};

// Symmetric point-to-point color PSNR of one view on BT.709 YCbCr values.
// Each direction maps every point to its exact nearest neighbor in the other
// cloud (ties to the lowest index); the reported value is the minimum of the
// two directional PSNRs, capped at 99.99 dB.
Psnr3 attributePsnr(const PlenopticPointCloud& reference, const PlenopticPointCloud& distorted, uint32_t viewIdx);

// D1 (point-to-point) and D2 (point-to-plane) geometry PSNR. peakOverride > 0
// replaces the default peak of 2^geomBitDepth - 1.
std::pair<double, double> geometryD1D2(const PlenopticPointCloud& reference, const PlenopticPointCloud& distorted,
                                       const NormalSet& referenceNormals, double peakOverride = 0);

struct RdPoint {
  double totalBits = 0, attrBits = 0, geomBits = 0;
  double psnrY = 0, psnrCb = 0, psnrCr = 0;
  double d1 = 0, d2 = 0;
};

enum class MetricSelector { Luma, Cb, Cr, D1, D2 };
enum class RateSelector { Total, Attr, Geom };

// Piecewise-cubic-Hermite fit of log10(rate) as a function of PSNR. Curves of
// two or three points fall back to the exact linear/quadratic polynomial and
// are flagged lowOrder.
struct RdFit {
  std::vector<double> x, y, d;  // knots, log10(rate), derivatives
  bool lowOrder = false;

  double eval(double xq) const;
  double integrate(double a, double b) const;  // closed-form segment integrals
};

RdFit fitLogRate(const std::vector<std::pair<double, double>>& bitsPsnr);

struct BdResult {
  double percent = 0;
  bool lowOrder = false;
};

// Bjontegaard delta rate between two (bits, psnr) curves over their common
// PSNR interval.
BdResult bdRate(const std::vector<std::pair<double, double>>& anchor,
                const std::vector<std::pair<double, double>>& test);

BdResult bdRate(const std::vector<RdPoint>& anchor, const std::vector<RdPoint>& test, MetricSelector metric,
                RateSelector rate = RateSelector::Total);

}  // namespace pvpc
