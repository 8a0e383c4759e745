#pragma once

#include <string>
#include <vector>

#include "cloud.h"
#include "container.h"
#include "patch.h"

namespace pvpc {

struct EncoderParams {
  int qpI = 32;
  int qpGeom = -1;  // -1 derives max(0, qpI - 4)
  bool multiview = true;  // false: attribute units coded independent all-intra at qpI
  bool groupPadding = true;
  bool lossless = false;
  uint32_t canvasWidth = 1280;
  uint32_t alignment = 16;
  int padBlockSize = 4;
  int normalK = 16;
  SegmentationParams segmentation;
  int searchRange = 24;
  int lambdaScale256 = 218;
};

struct UnitStat {
  uint8_t kind = 0;
  uint16_t view = 0;
  uint8_t frame = 0;
  SliceType sliceType = SliceType::I;
  int qp = 0;
  uint64_t bits = 0;
};

struct EncodeStats {
  uint64_t pointCount = 0;
  uint32_t viewCount = 0;
  uint32_t patchCount = 0;
  uint64_t unassignedPoints = 0;
  uint64_t missedPoints = 0;
  uint32_t canvasWidth = 0, canvasHeight = 0;
  uint64_t headerBits = 0, occupancyBits = 0, geomBits = 0, attrBits = 0, totalBits = 0;
  double segmentMs = 0, packMs = 0, padMs = 0, encodeMs = 0;
  std::vector<UnitStat> units;
};

struct EncodeResult {
  std::vector<uint8_t> bitstream;
  EncodeStats stats;
  std::vector<uint32_t> unassignedPoints;  // input indices left out by segmentation
  std::vector<uint32_t> missedPoints;      // input indices dropped by two-layer projection
};

EncodeResult encodeCloud(const PlenopticPointCloud& cloud, const EncoderParams& params);

// Line-oriented key=value report for scripting.
std::string formatStatsReport(const EncodeStats& stats, const std::string& inputName);

}  // namespace pvpc
