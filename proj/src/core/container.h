#pragma once

#include <cstdint>
#include <vector>

#include "codec/unitcodec.h"
#include "image.h"
#include "pack.h"
#include "structure.h"

namespace pvpc {

constexpr uint8_t kBitstreamVersion = 1;

struct PatchMetadata {
  uint8_t axis = 0;
  uint8_t rotation = 0;
  int32_t uvMinU = 0, uvMinV = 0;
  int32_t depthOffset = 0;
  uint32_t width = 0, height = 0;
  uint32_t canvasX = 0, canvasY = 0;
};

struct UnitHeader {
  uint8_t kind = 0;  // 0 = geometry, 1 = attribute
  uint16_t view = 0;
  uint8_t frame = 0;
  SliceType sliceType = SliceType::I;
  int level = kAnchorLevel;
  uint8_t qp = 0;
  std::vector<UnitRef> refs;
};

struct BitstreamHeader {
  uint8_t colorSpace = 1;
  uint8_t geomBitDepth = 10, attrBitDepth = 8;
  uint16_t viewCount = 1;
  uint32_t canvasWidth = 0, canvasHeight = 0;
  uint8_t qpI = 32, qpGeom = 28;
  uint8_t groupPadding = 1, multiview = 1, lossless = 0;
  uint8_t padBlockSize = 4, surfaceThickness = 4, alignment = 16;
  uint8_t searchRange = 24;
  uint16_t lambdaScale256 = 218;
  std::vector<PatchMetadata> patches;
  std::vector<UnitHeader> units;  // decoding order
};

struct BitstreamContent {
  BitstreamHeader header;
  std::vector<std::vector<uint8_t>> patchOccupancy;  // RLE payload per patch
  std::vector<std::vector<uint8_t>> unitPayloads;    // parallel to header.units
};

std::vector<uint8_t> writeBitstream(const BitstreamContent& content);
BitstreamContent readBitstream(const uint8_t* data, size_t size);

}  // namespace pvpc
