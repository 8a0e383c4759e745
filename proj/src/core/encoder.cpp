#include "encoder.h"

#include <chrono>
#include <map>
#include <sstream>

#include "codec/occupancy.h"
#include "color.h"
#include "pad.h"

namespace pvpc {

namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

BinaryMap patchLocalOccupancy(const Patch& patch) {
  BinaryMap map(patch.width, patch.height);
  for (uint32_t v = 0; v < patch.height; ++v) {
    for (uint32_t u = 0; u < patch.width; ++u) {
      if (patch.occupied(u, v)) map.at(u, v) = 1;
    }
  }
  return map;
}

CodingStructure independentIntraStructure(uint32_t viewCount, int qpI) {
  CodingStructure s;
  for (uint32_t view = 0; view < viewCount; ++view) {
    for (uint8_t frame = 0; frame < 2; ++frame) {
      CodingUnitSpec unit;
      unit.view = uint16_t(view);
      unit.frame = frame;
      unit.sliceType = SliceType::I;
      unit.level = kAnchorLevel;
      unit.qp = qpI;
      s.units.push_back(std::move(unit));
    }
  }
  return s;
}

}  // namespace

EncodeResult encodeCloud(const PlenopticPointCloud& cloud, const EncoderParams& params) {
  validateCloud(cloud);
  if (cloud.empty()) fail(ErrorCode::EmptyCloud, "encodeCloud: empty cloud");
  if (params.qpI < 0 || params.qpI > kMaxQpI)
    fail(ErrorCode::QpOutOfRange, "encodeCloud: qpI must be in [0, " + std::to_string(kMaxQpI) + "]");
  const int qpGeom = params.qpGeom >= 0 ? params.qpGeom : std::max(0, params.qpI - 4);
  if (qpGeom > 48) fail(ErrorCode::QpOutOfRange, "encodeCloud: qpGeom must be in [0, 48]");
  const uint32_t viewCount = cloud.viewCount;

  EncodeResult result;
  EncodeStats& stats = result.stats;
  stats.pointCount = cloud.pointCount();
  stats.viewCount = viewCount;

  // --- segmentation + projection ---
  auto t0 = Clock::now();
  const int k = std::min<int>(params.normalK, int(cloud.pointCount()) - 1);
  const NormalSet normals = estimateNormals(cloud, std::max(3, k));
  SegmentationResult seg = segmentIntoPatches(cloud, normals, params.segmentation);
  result.unassignedPoints = seg.unassigned;
  for (auto& patch : seg.patches) {
    auto missed = projectPatch(cloud, patch, params.segmentation.surfaceThickness);
    result.missedPoints.insert(result.missedPoints.end(), missed.begin(), missed.end());
  }
  stats.unassignedPoints = result.unassignedPoints.size();
  stats.missedPoints = result.missedPoints.size();
  stats.patchCount = uint32_t(seg.patches.size());
  stats.segmentMs = msSince(t0);

  // --- packing ---
  t0 = Clock::now();
  AtlasLayout layout = packPatches(seg.patches, params.canvasWidth, params.alignment);
  stats.canvasWidth = layout.canvasWidth;
  stats.canvasHeight = layout.canvasHeight;
  stats.packMs = msSince(t0);

  // --- rasterization + padding ---
  t0 = Clock::now();
  const ColorSpace colorSpace = params.lossless ? ColorSpace::Rgb : ColorSpace::YCbCr709;
  const uint32_t cw = layout.canvasWidth, ch = layout.canvasHeight;
  Frame geomNear, geomFar;
  geomNear.planes.assign(1, Plane(cw, ch));
  geomFar.planes.assign(1, Plane(cw, ch));
  std::vector<Frame> attr(size_t(2) * viewCount);
  for (auto& f : attr) f.planes.assign(3, Plane(cw, ch));

  for (size_t pi = 0; pi < seg.patches.size(); ++pi) {
    const Patch& patch = seg.patches[pi];
    const Placement& place = layout.placements[pi];
    for (uint32_t v = 0; v < patch.height; ++v) {
      for (uint32_t u = 0; u < patch.width; ++u) {
        if (!patch.occupied(u, v)) continue;
        const size_t cell = size_t(v) * patch.width + u;
        auto [rx, ry] = rotateCell(u, v, patch.width, patch.height, place.rotation);
        const uint32_t x = place.x + rx, y = place.y + ry;
        geomNear.planes[0].at(x, y) = uint16_t(patch.nearLayer[cell]);
        geomFar.planes[0].at(x, y) = uint16_t(patch.farLayer[cell]);
        for (uint32_t view = 0; view < viewCount; ++view) {
          const Color& cn = patch.attrNear[view][cell];
          const Color& cf = patch.attrFar[view][cell];
          std::array<uint16_t, 3> nearPx, farPx;
          if (colorSpace == ColorSpace::YCbCr709) {
            nearPx = rgbToYcbcr(cn, cloud.attrBitDepth);
            farPx = rgbToYcbcr(cf, cloud.attrBitDepth);
          } else {
            nearPx = {cn[0], cn[1], cn[2]};
            farPx = {cf[0], cf[1], cf[2]};
          }
          for (int comp = 0; comp < 3; ++comp) {
            attr[view].planes[comp].at(x, y) = nearPx[comp];
            attr[size_t(viewCount) + view].planes[comp].at(x, y) = farPx[comp];
          }
        }
      }
    }
  }

  dilatePad(geomNear.planes[0], layout.occupancy, cloud.geomBitDepth);
  dilatePad(geomFar.planes[0], layout.occupancy, cloud.geomBitDepth);
  for (auto& f : attr) {
    for (auto& plane : f.planes) dilatePad(plane, layout.occupancy, cloud.attrBitDepth);
  }
  if (params.groupPadding) {
    const BinaryMap eligible = findGroupPaddable(layout.occupancy, params.padBlockSize);
    for (int comp = 0; comp < 3; ++comp) {
      std::vector<Plane*> planes;
      planes.reserve(attr.size());
      for (auto& f : attr) planes.push_back(&f.planes[comp]);
      groupPad(planes, eligible);
    }
  }
  stats.padMs = msSince(t0);

  // --- unit coding ---
  t0 = Clock::now();
  const CodingStructure structure = params.multiview ? buildCodingStructure(viewCount, params.qpI)
                                                     : independentIntraStructure(viewCount, params.qpI);
  CodecConfig geomConfig{params.searchRange, params.lambdaScale256, cloud.geomBitDepth, params.lossless};
  CodecConfig attrConfig{params.searchRange, params.lambdaScale256, cloud.attrBitDepth, params.lossless};

  BitstreamContent content;
  BitstreamHeader& header = content.header;
  header.colorSpace = uint8_t(colorSpace);
  header.geomBitDepth = uint8_t(cloud.geomBitDepth);
  header.attrBitDepth = uint8_t(cloud.attrBitDepth);
  header.viewCount = uint16_t(viewCount);
  header.canvasWidth = cw;
  header.canvasHeight = ch;
  header.qpI = uint8_t(params.qpI);
  header.qpGeom = uint8_t(qpGeom);
  header.groupPadding = params.groupPadding ? 1 : 0;
  header.multiview = params.multiview ? 1 : 0;
  header.lossless = params.lossless ? 1 : 0;
  header.padBlockSize = uint8_t(params.padBlockSize);
  header.surfaceThickness = uint8_t(params.segmentation.surfaceThickness);
  header.alignment = uint8_t(params.alignment);
  header.searchRange = uint8_t(params.searchRange);
  header.lambdaScale256 = uint16_t(params.lambdaScale256);

  for (size_t pi = 0; pi < seg.patches.size(); ++pi) {
    const Patch& patch = seg.patches[pi];
    const Placement& place = layout.placements[pi];
    PatchMetadata meta;
    meta.axis = uint8_t(patch.axis);
    meta.rotation = uint8_t(place.rotation);
    meta.uvMinU = patch.uvMinU;
    meta.uvMinV = patch.uvMinV;
    meta.depthOffset = patch.depthOffset;
    meta.width = patch.width;
    meta.height = patch.height;
    meta.canvasX = place.x;
    meta.canvasY = place.y;
    header.patches.push_back(meta);
    content.patchOccupancy.push_back(encodeOccupancy(patchLocalOccupancy(patch)));
    stats.occupancyBits += content.patchOccupancy.back().size() * 8;
  }

  // Geometry: near frame intra, far frame predicted from it.
  std::map<std::pair<uint16_t, uint8_t>, Frame> attrRecon;
  Frame geomNearRecon;

  auto pushUnit = [&](const UnitHeader& uh, std::vector<uint8_t> payload) {
    header.units.push_back(uh);
    content.unitPayloads.push_back(std::move(payload));
    UnitStat stat;
    stat.kind = uh.kind;
    stat.view = uh.view;
    stat.frame = uh.frame;
    stat.sliceType = uh.sliceType;
    stat.qp = uh.qp;
    stat.bits = content.unitPayloads.back().size() * 8;
    stats.units.push_back(stat);
    (uh.kind == 0 ? stats.geomBits : stats.attrBits) += stat.bits;
  };

  if (!seg.patches.empty()) {
    UnitHeader uh;
    uh.kind = 0;
    uh.view = 0;
    uh.frame = 0;
    uh.sliceType = SliceType::I;
    uh.level = kAnchorLevel;
    uh.qp = uint8_t(qpGeom);
    EncodedUnit coded = encodeUnit(geomNear, SliceType::I, qpGeom, {}, geomConfig);
    geomNearRecon = std::move(coded.reconstruction);
    pushUnit(uh, std::move(coded.payload));

    UnitHeader uh1 = uh;
    uh1.frame = 1;
    uh1.sliceType = SliceType::P;
    uh1.qp = uint8_t(std::min(51, qpGeom + 3));
    uh1.refs = {{0, 0}};
    EncodedUnit coded1 = encodeUnit(geomFar, SliceType::P, uh1.qp, {&geomNearRecon}, geomConfig);
    pushUnit(uh1, std::move(coded1.payload));
  }

  for (const auto& unit : structure.units) {
    if (seg.patches.empty()) break;
    UnitHeader uh;
    uh.kind = 1;
    uh.view = unit.view;
    uh.frame = unit.frame;
    uh.sliceType = unit.sliceType;
    uh.level = unit.level;
    uh.qp = uint8_t(unit.qp);
    uh.refs = unit.refs;
    std::vector<const Frame*> refs;
    for (const auto& ref : unit.refs) {
      auto it = attrRecon.find({ref.view, ref.frame});
      if (it == attrRecon.end()) fail(ErrorCode::SchedulingViolation, "encodeCloud: reference not yet coded");
      refs.push_back(&it->second);
    }
    const Frame& source = attr[size_t(unit.frame) * viewCount + unit.view];
    EncodedUnit coded = encodeUnit(source, unit.sliceType, unit.qp, refs, attrConfig);
    attrRecon[{unit.view, unit.frame}] = std::move(coded.reconstruction);
    pushUnit(uh, std::move(coded.payload));
  }

  result.bitstream = writeBitstream(content);
  stats.totalBits = result.bitstream.size() * 8;
  stats.headerBits = stats.totalBits - stats.occupancyBits - stats.geomBits - stats.attrBits;
  stats.encodeMs = msSince(t0);
  return result;
}

std::string formatStatsReport(const EncodeStats& stats, const std::string& inputName) {
  std::ostringstream out;
  out << "input=" << inputName << '\n';
  out << "pointCount=" << stats.pointCount << '\n';
  out << "viewCount=" << stats.viewCount << '\n';
  out << "patchCount=" << stats.patchCount << '\n';
  out << "unassignedPoints=" << stats.unassignedPoints << '\n';
  out << "missedPoints=" << stats.missedPoints << '\n';
  out << "canvasWidth=" << stats.canvasWidth << '\n';
  out << "canvasHeight=" << stats.canvasHeight << '\n';
  out << "headerBits=" << stats.headerBits << '\n';
  out << "occupancyBits=" << stats.occupancyBits << '\n';
  out << "geomBits=" << stats.geomBits << '\n';
  out << "attrBits=" << stats.attrBits << '\n';
  out << "totalBits=" << stats.totalBits << '\n';
  out << "timing.segmentMs=" << stats.segmentMs << '\n';
  out << "timing.packMs=" << stats.packMs << '\n';
  out << "timing.padMs=" << stats.padMs << '\n';
  out << "timing.encodeMs=" << stats.encodeMs << '\n';
  for (size_t i = 0; i < stats.units.size(); ++i) {
    const UnitStat& u = stats.units[i];
    out << "unit." << i << ".kind=" << (u.kind == 0 ? "geom" : "attr") << '\n';
    out << "unit." << i << ".view=" << u.view << '\n';
    out << "unit." << i << ".frame=" << int(u.frame) << '\n';
    out << "unit." << i << ".type=" << sliceTypeName(u.sliceType) << '\n';
    out << "unit." << i << ".qp=" << u.qp << '\n';
    out << "unit." << i << ".bits=" << u.bits << '\n';
  }
  return out.str();
}

}  // namespace pvpc
