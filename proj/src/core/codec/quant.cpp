#include "quant.h"

namespace pvpc {

namespace {
// round(2^20 * 2^(r/6)) for r = 0..5
const int64_t kStepFx[6] = {1048576, 1176987, 1321123, 1482910, 1664511, 1868350};
}  // namespace

int64_t quantDenominator(int qp) {
  if (qp < 0 || qp > 51) fail(ErrorCode::QpOutOfRange, "qp must be in [0, 51]");
  int e = qp - 4;
  int q = e >= 0 ? e / 6 : -((-e + 5) / 6);  // floor division
  int r = e - 6 * q;
  // step * 2^24 = kStepFx[r] * 2^(q+4); q >= -1 for qp >= 0, so the shift is >= 3.
  return kStepFx[r] << (q + 4);
}

int64_t quantizeCoef(int64_t coefFx, int qp, bool intraUnit) {
  const int64_t denom = quantDenominator(qp);
  const int64_t mag = coefFx < 0 ? -coefFx : coefFx;
  // floor(mag/denom + f) with f = 1/3 or 1/6, evaluated exactly in integers.
  const int64_t numerOffset = intraUnit ? 2 * denom : denom;
  const int64_t level = (6 * mag + numerOffset) / (6 * denom);
  return coefFx < 0 ? -level : level;
}

int64_t dequantizeCoef(int64_t level, int qp) { return level * quantDenominator(qp); }

}  // namespace pvpc
