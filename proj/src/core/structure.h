#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "common.h"

namespace pvpc {

enum class SliceType : uint8_t { I = 0, P, B };

constexpr int kAnchorLevel = -1;
constexpr int kMaxQpI = 51 - 7;  // highest level-3 frame-1 QP must stay within [0, 51]

struct UnitRef {
  uint16_t view = 0;
  uint8_t frame = 0;
  bool operator==(const UnitRef&) const = default;
};

struct CodingUnitSpec {
  uint16_t view = 0;
  uint8_t frame = 0;
  SliceType sliceType = SliceType::I;
  int level = kAnchorLevel;  // -1 = anchor, else 0..3
  std::vector<UnitRef> refs;
  int qp = 0;
};

struct CodingStructure {
  std::vector<CodingUnitSpec> units;  // decoding order
};

// Table-driven QP schedule: the anchor keeps qpI, view hierarchy level L adds
// L+1, and the second (far) frame adds 3 on top of its view's first frame.
int assignQp(int level, int frameIdx, int qpI);

// Dyadic GOP-8 hierarchy over the view axis. View 0 is the lone I anchor;
// every 8th view is a level-0 GOP boundary; interior views bisect recursively
// into levels 1..3 with both enclosing views as references. A trailing
// partial GOP puts its highest view at level 0 and bisects the rest. Frame 1
// of every view is a P unit referencing only frame 0 of the same view.
CodingStructure buildCodingStructure(uint32_t viewCount, int qpI);

// One unit per line: "view frame type level refs qp".
std::string dumpCodingStructure(const CodingStructure& structure);

const char* sliceTypeName(SliceType type);

}  // namespace pvpc
