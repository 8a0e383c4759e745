#include "metrics.h"

#include <algorithm>
#include <cmath>

#include "color.h"
#include "spatial.h"

namespace pvpc {

namespace {

double toPsnr(double mse, double peak) {
  if (mse <= 0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

}  // namespace

Psnr3 attributePsnr(const PlenopticPointCloud& reference, const PlenopticPointCloud& distorted, uint32_t viewIdx) {
  if (reference.empty() || distorted.empty()) fail(ErrorCode::EmptyCloud, "attributePsnr: empty cloud");
  if (reference.viewCount != distorted.viewCount)
    fail(ErrorCode::InvalidArgument, "attributePsnr: view counts differ");
  if (viewIdx >= reference.viewCount) fail(ErrorCode::BadView, "attributePsnr: view index out of range");
  const double peak = double((1 << reference.attrBitDepth) - 1);

  auto directional = [&](const PlenopticPointCloud& from, const PlenopticPointCloud& to, double mse[3]) {
    PointIndex index(to.points);
    double sum[3] = {0, 0, 0};
    for (size_t i = 0; i < from.pointCount(); ++i) {
      const uint32_t nn = index.nearest(from.points[i]);
      const auto a = rgbToYcbcr(from.color(i, viewIdx), from.attrBitDepth);
      const auto b = rgbToYcbcr(to.color(nn, viewIdx), to.attrBitDepth);
      for (int c = 0; c < 3; ++c) {
        const double d = double(a[c]) - double(b[c]);
        sum[c] += d * d;
      }
    }
    for (int c = 0; c < 3; ++c) mse[c] = sum[c] / double(from.pointCount());
  };

  double mseFwd[3], mseBwd[3];
  directional(reference, distorted, mseFwd);
  directional(distorted, reference, mseBwd);
  Psnr3 out;
  out.y = std::min(toPsnr(mseFwd[0], peak), toPsnr(mseBwd[0], peak));
  out.cb = std::min(toPsnr(mseFwd[1], peak), toPsnr(mseBwd[1], peak));
  out.cr = std::min(toPsnr(mseFwd[2], peak), toPsnr(mseBwd[2], peak));
  return out;
}

std::pair<double, double> geometryD1D2(const PlenopticPointCloud& reference, const PlenopticPointCloud& distorted,
                                       const NormalSet& referenceNormals, double peakOverride) {
  if (reference.empty() || distorted.empty()) fail(ErrorCode::EmptyCloud, "geometryD1D2: empty cloud");
  if (referenceNormals.size() != reference.pointCount())
    fail(ErrorCode::NormalsRequired, "geometryD1D2: reference normals missing");
  const double peak = peakOverride > 0 ? peakOverride : double((1 << reference.geomBitDepth) - 1);

  PointIndex refIndex(reference.points);
  PointIndex distIndex(distorted.points);

  double d1Fwd = 0, d2Fwd = 0;  // reference -> distorted, plane normal at the reference point
  for (size_t i = 0; i < reference.pointCount(); ++i) {
    const uint32_t nn = distIndex.nearest(reference.points[i]);
    double diff[3];
    for (int a = 0; a < 3; ++a) diff[a] = double(reference.points[i][a]) - double(distorted.points[nn][a]);
    d1Fwd += diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2];
    const Vec3d& n = referenceNormals.normals[i];
    const double proj = diff[0] * n[0] + diff[1] * n[1] + diff[2] * n[2];
    d2Fwd += proj * proj;
  }
  d1Fwd /= double(reference.pointCount());
  d2Fwd /= double(reference.pointCount());

  double d1Bwd = 0, d2Bwd = 0;  // distorted -> reference, plane normal at the matched reference point
  for (size_t i = 0; i < distorted.pointCount(); ++i) {
    const uint32_t nn = refIndex.nearest(distorted.points[i]);
    double diff[3];
    for (int a = 0; a < 3; ++a) diff[a] = double(distorted.points[i][a]) - double(reference.points[nn][a]);
    d1Bwd += diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2];
    const Vec3d& n = referenceNormals.normals[nn];
    const double proj = diff[0] * n[0] + diff[1] * n[1] + diff[2] * n[2];
    d2Bwd += proj * proj;
  }
  d1Bwd /= double(distorted.pointCount());
  d2Bwd /= double(distorted.pointCount());

  return {std::min(toPsnr(d1Fwd, peak), toPsnr(d1Bwd, peak)),
          std::min(toPsnr(d2Fwd, peak), toPsnr(d2Bwd, peak))};
}

namespace {

// Monotone (Fritsch-Carlson) pchip slopes with three-point endpoint rules.
std::vector<double> pchipSlopes(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), d(n);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] == 0.0 || delta[i] == 0.0 || (delta[i - 1] > 0) != (delta[i] > 0)) {
      d[i] = 0.0;
    } else {
      const double w1 = 2 * h[i] + h[i - 1];
      const double w2 = h[i] + 2 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if ((d > 0) != (d0 > 0) || d0 == 0.0) {
      d = 0.0;
    } else if ((d0 > 0) != (d1 > 0) && std::abs(d) > 3 * std::abs(d0)) {
      d = 3 * d0;
    }
    return d;
  };
  d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

// Hermite segment as a cubic in t = (x - x0)/h.
struct SegmentPoly {
  double a, b, c, d;  // a + b t + c t^2 + d t^3
};

SegmentPoly segmentPoly(double y0, double y1, double d0, double d1, double h) {
  const double delta = y1 - y0;
  return {y0, h * d0, 3 * delta - 2 * h * d0 - h * d1, -2 * delta + h * d0 + h * d1};
}

}  // namespace

double RdFit::eval(double xq) const {
  size_t seg = 0;
  while (seg + 2 < x.size() && xq >= x[seg + 1]) ++seg;
  const double h = x[seg + 1] - x[seg];
  const double t = (xq - x[seg]) / h;
  const SegmentPoly p = segmentPoly(y[seg], y[seg + 1], d[seg], d[seg + 1], h);
  return p.a + t * (p.b + t * (p.c + t * p.d));
}

double RdFit::integrate(double a, double b) const {
  double total = 0;
  for (size_t seg = 0; seg + 1 < x.size(); ++seg) {
    const double lo = std::max(a, x[seg]);
    const double hi = std::min(b, x[seg + 1]);
    if (hi <= lo) continue;
    const double h = x[seg + 1] - x[seg];
    const SegmentPoly p = segmentPoly(y[seg], y[seg + 1], d[seg], d[seg + 1], h);
    auto anti = [&](double xv) {
      const double t = (xv - x[seg]) / h;
      return h * t * (p.a + t * (p.b / 2 + t * (p.c / 3 + t * p.d / 4)));
    };
    total += anti(hi) - anti(lo);
  }
  return total;
}

RdFit fitLogRate(const std::vector<std::pair<double, double>>& bitsPsnr) {
  if (bitsPsnr.size() < 2) fail(ErrorCode::InvalidArgument, "rd curve needs at least 2 points");
  RdFit fit;
  for (size_t i = 0; i < bitsPsnr.size(); ++i) {
    const auto& [bits, psnr] = bitsPsnr[i];
    if (bits <= 0) fail(ErrorCode::InvalidArgument, "rd curve: rate must be positive");
    if (i > 0 && psnr <= fit.x.back())
      fail(ErrorCode::InvalidArgument, "rd curve: psnr must be strictly increasing");
    fit.x.push_back(psnr);
    fit.y.push_back(std::log10(bits));
  }

  const size_t n = fit.x.size();
  if (n >= 4) {
    fit.d = pchipSlopes(fit.x, fit.y);
    return fit;
  }
  fit.lowOrder = true;
  if (n == 2) {
    const double slope = (fit.y[1] - fit.y[0]) / (fit.x[1] - fit.x[0]);
    fit.d = {slope, slope};
    return fit;
  }
  // Three points: derivatives of the exact interpolating quadratic; the
  // Hermite segments then reproduce that quadratic.
  const double x0 = fit.x[0], x1 = fit.x[1], x2 = fit.x[2];
  const double y0 = fit.y[0], y1 = fit.y[1], y2 = fit.y[2];
  auto deriv = [&](double xv) {
    return y0 * (2 * xv - x1 - x2) / ((x0 - x1) * (x0 - x2)) + y1 * (2 * xv - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
           y2 * (2 * xv - x0 - x1) / ((x2 - x0) * (x2 - x1));
  };
  fit.d = {deriv(x0), deriv(x1), deriv(x2)};
  return fit;
}

BdResult bdRate(const std::vector<std::pair<double, double>>& anchor,
                const std::vector<std::pair<double, double>>& test) {
  RdFit anchorFit = fitLogRate(anchor);
  RdFit testFit = fitLogRate(test);
  const double lo = std::max(anchorFit.x.front(), testFit.x.front());
  const double hi = std::min(anchorFit.x.back(), testFit.x.back());
  if (hi <= lo) fail(ErrorCode::NoOverlap, "bdRate: no common PSNR interval");
  const double interval = hi - lo;
  const double avgDiff = (testFit.integrate(lo, hi) - anchorFit.integrate(lo, hi)) / interval;
  BdResult result;
  result.percent = (std::pow(10.0, avgDiff) - 1.0) * 100.0;
  result.lowOrder = anchorFit.lowOrder || testFit.lowOrder;
  return result;
}

BdResult bdRate(const std::vector<RdPoint>& anchor, const std::vector<RdPoint>& test, MetricSelector metric,
                RateSelector rate) {
  auto convert = [&](const std::vector<RdPoint>& curve) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : curve) {
      double bits = rate == RateSelector::Total ? p.totalBits : rate == RateSelector::Attr ? p.attrBits : p.geomBits;
      double psnr = 0;
      switch (metric) {
        case MetricSelector::Luma: psnr = p.psnrY; break;
        case MetricSelector::Cb: psnr = p.psnrCb; break;
        case MetricSelector::Cr: psnr = p.psnrCr; break;
        case MetricSelector::D1: psnr = p.d1; break;
        case MetricSelector::D2: psnr = p.d2; break;
      }
      out.push_back({bits, psnr});
    }
    // RD points arrive in increasing-rate order; BD integration needs
    // increasing PSNR, which for a well-formed sweep is the same order.
    return out;
  };
  return bdRate(convert(anchor), convert(test));
}

}  // namespace pvpc
