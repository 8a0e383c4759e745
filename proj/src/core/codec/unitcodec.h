#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "../image.h"
#include "../structure.h"

namespace pvpc {

struct CodecConfig {
  int searchRange = 24;
  int lambdaScale256 = 218;  // mode-decision lambda scale, 0.85 in 8-bit fixed point
  int bitDepth = 8;
  bool lossless = false;     // transform/quant bypass, residuals coded exactly
};

// Integer mode-decision lambda: round(1024 * lambdaScale * 2^((qp-12)/3)).
int64_t rdLambda1024(int qp, int lambdaScale256);

enum class BlockMode : uint8_t { Skip = 0, IntraDC, IntraH, IntraV, Inter0, Inter1, Bi };

struct BlockDecision {
  BlockMode mode = BlockMode::IntraDC;
  std::array<std::array<int16_t, 2>, 2> mv{{{0, 0}, {0, 0}}};  // per reference: dx, dy
};

struct EncodedUnit {
  std::vector<uint8_t> payload;
  Frame reconstruction;                            // cropped to source dimensions
  std::vector<std::vector<BlockDecision>> modes;   // per plane, block raster order
};

// Encodes one frame against already-reconstructed references. I units take no
// references, P one, B two; the reconstruction is bit-identical to what
// decodeUnit produces from the payload.
EncodedUnit encodeUnit(const Frame& source, SliceType type, int qp, const std::vector<const Frame*>& refs,
                       const CodecConfig& config);

Frame decodeUnit(const uint8_t* data, size_t size, SliceType type, int qp, uint32_t width, uint32_t height,
                 uint32_t planeCount, const std::vector<const Frame*>& refs, const CodecConfig& config);

}  // namespace pvpc
