#include "structure.h"

#include <algorithm>
#include <sstream>

namespace pvpc {

int assignQp(int level, int frameIdx, int qpI) {
  if (level < kAnchorLevel || level > 3 || (frameIdx != 0 && frameIdx != 1))
    fail(ErrorCode::InvalidArgument, "assignQp: invalid level or frame index");
  int qp = level == kAnchorLevel ? qpI : qpI + level + 1;
  if (frameIdx == 1) qp += 3;
  return qp;
}

const char* sliceTypeName(SliceType type) {
  switch (type) {
    case SliceType::I: return "I";
    case SliceType::P: return "P";
    case SliceType::B: return "B";
  }
  return "?";
}

namespace {

struct PendingUnit {
  uint16_t view;
  int level;
  std::vector<UnitRef> refs;
};

// Recursive dyadic bisection of the open interval (lo, hi); midpoints get the
// given level and reference both interval ends.
void bisect(uint16_t lo, uint16_t hi, int level, std::vector<PendingUnit>& out) {
  if (hi <= lo + 1) return;
  const uint16_t mid = uint16_t((lo + hi) / 2);
  out.push_back({mid, level, {{lo, 0}, {hi, 0}}});
  bisect(lo, mid, level + 1, out);
  bisect(mid, hi, level + 1, out);
}

}  // namespace

CodingStructure buildCodingStructure(uint32_t viewCount, int qpI) {
  if (viewCount < 1) fail(ErrorCode::InvalidArgument, "buildCodingStructure: viewCount must be >= 1");
  if (qpI < 0 || qpI > kMaxQpI)
    fail(ErrorCode::QpOutOfRange, "buildCodingStructure: qpI must be in [0, " + std::to_string(kMaxQpI) + "]");

  CodingStructure structure;
  auto emitView = [&](uint16_t view, int level, SliceType type, std::vector<UnitRef> refs) {
    CodingUnitSpec f0;
    f0.view = view;
    f0.frame = 0;
    f0.sliceType = type;
    f0.level = level;
    f0.refs = std::move(refs);
    f0.qp = assignQp(level, 0, qpI);
    structure.units.push_back(std::move(f0));

    CodingUnitSpec f1;
    f1.view = view;
    f1.frame = 1;
    f1.sliceType = SliceType::P;
    f1.level = level;
    f1.refs = {{view, 0}};
    f1.qp = assignQp(level, 1, qpI);
    structure.units.push_back(std::move(f1));
  };

  auto emitGop = [&](uint16_t base, uint16_t top, const std::vector<uint16_t>& priorLevel0) {
    std::vector<UnitRef> refs{{base, 0}};
    // A level-0 view predicts from its GOP base and, when one exists, from the
    // latest level-0 view preceding that base; the first GOPs fall back to a
    // single-reference P unit.
    for (auto it = priorLevel0.rbegin(); it != priorLevel0.rend(); ++it) {
      if (*it < base) {
        refs.push_back({*it, 0});
        break;
      }
    }
    emitView(top, 0, refs.size() == 2 ? SliceType::B : SliceType::P, refs);

    std::vector<PendingUnit> interior;
    bisect(base, top, 1, interior);
    std::stable_sort(interior.begin(), interior.end(), [](const PendingUnit& a, const PendingUnit& b) {
      if (a.level != b.level) return a.level < b.level;
      return a.view < b.view;
    });
    for (auto& u : interior) emitView(u.view, u.level, SliceType::B, std::move(u.refs));
  };

  emitView(0, kAnchorLevel, SliceType::I, {});

  std::vector<uint16_t> level0Views;  // emitted level-0 views, ascending
  uint32_t base = 0;
  while (base + 8 < viewCount) {
    const uint16_t top = uint16_t(base + 8);
    emitGop(uint16_t(base), top, level0Views);
    level0Views.push_back(top);
    base = top;
  }
  if (base + 1 < viewCount) {
    emitGop(uint16_t(base), uint16_t(viewCount - 1), level0Views);
  }
  return structure;
}

std::string dumpCodingStructure(const CodingStructure& structure) {
  std::ostringstream out;
  for (const auto& unit : structure.units) {
    out << unit.view << ' ' << int(unit.frame) << ' ' << sliceTypeName(unit.sliceType) << ' ';
    if (unit.level == kAnchorLevel) {
      out << 'A';
    } else {
      out << unit.level;
    }
    out << ' ';
    if (unit.refs.empty()) {
      out << '-';
    } else {
      for (size_t i = 0; i < unit.refs.size(); ++i) {
        if (i) out << ',';
        out << '(' << unit.refs[i].view << ',' << int(unit.refs[i].frame) << ')';
      }
    }
    out << ' ' << unit.qp << '\n';
  }
  return out.str();
}

}  // namespace pvpc
