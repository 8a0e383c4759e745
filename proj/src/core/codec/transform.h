#pragma once

#include <array>
#include <cstdint>

namespace pvpc {

// 8x8 residual block in raster order.
using Block = std::array<int32_t, 64>;
// Transform coefficients in 2^24 fixed point (kernel scale 4096 applied twice).
using CoefBlock = std::array<int64_t, 64>;

// Orthonormal 8x8 DCT-II basis, rows scaled by 4096 and rounded. The integer
// coding path uses this kernel exclusively so bitstreams are platform-exact.
extern const int32_t kDctKernel[8][8];

// Forward: exact integer evaluation, output scale 2^24.
void forwardDct(const Block& block, CoefBlock& coefs);
// Inverse: one intermediate round-half-up shift by 12, final shift by 36.
void inverseDct(const CoefBlock& coefs, Block& block);

// Real-valued reference transform (orthonormal DCT-II), used by verification
// paths; not part of the coded pipeline.
void forwardDctReal(const double in[64], double out[64]);
void inverseDctReal(const double in[64], double out[64]);

// Zigzag scan: zigzagScan[k] is the raster index of the k-th scanned coefficient.
extern const uint8_t kZigzagScan[64];

}  // namespace pvpc
