#pragma once

#include <cstdint>

#include "../common.h"

namespace pvpc {

// Quantizer step size is 2^((qp-4)/6), held exactly for qp = 4 + 6k and as a
// 20-bit fixed-point approximation in between (see BITSTREAM.md). The coded
// coefficient scale is 2^24, so the denominator below is step * 2^24.
int64_t quantDenominator(int qp);

// level = sign(c) * floor(|c|/step + offset), offset 1/3 for I units, 1/6 else.
int64_t quantizeCoef(int64_t coefFx, int qp, bool intraUnit);

// Reconstructed coefficient at 2^24 scale: level * step.
int64_t dequantizeCoef(int64_t level, int qp);

}  // namespace pvpc
