#include "decoder.h"

#include <algorithm>
#include <map>

#include "codec/occupancy.h"
#include "color.h"

namespace pvpc {

DecodedAtlas decodeBitstream(const uint8_t* data, size_t size) {
  BitstreamContent content = readBitstream(data, size);
  const BitstreamHeader& h = content.header;

  DecodedAtlas atlas;
  atlas.colorSpace = h.colorSpace;
  atlas.geomBitDepth = h.geomBitDepth;
  atlas.attrBitDepth = h.attrBitDepth;
  atlas.viewCount = h.viewCount;
  atlas.canvasWidth = h.canvasWidth;
  atlas.canvasHeight = h.canvasHeight;
  atlas.patches = h.patches;

  atlas.occupancy = BinaryMap(h.canvasWidth, h.canvasHeight);
  atlas.patchOccupancy.reserve(h.patches.size());
  for (size_t pi = 0; pi < h.patches.size(); ++pi) {
    const PatchMetadata& meta = h.patches[pi];
    BinaryMap local = decodeOccupancy(content.patchOccupancy[pi]);
    if (local.width != meta.width || local.height != meta.height)
      fail(ErrorCode::BitstreamError, "bitstream: patch occupancy dimensions mismatch");
    for (uint32_t v = 0; v < local.height; ++v) {
      for (uint32_t u = 0; u < local.width; ++u) {
        if (!local.at(u, v)) continue;
        auto [rx, ry] = rotateCell(u, v, meta.width, meta.height, Rotation(meta.rotation));
        const uint32_t x = meta.canvasX + rx, y = meta.canvasY + ry;
        if (x >= h.canvasWidth || y >= h.canvasHeight)
          fail(ErrorCode::BitstreamError, "bitstream: patch cell outside canvas");
        if (atlas.occupancy.at(x, y)) fail(ErrorCode::BitstreamError, "bitstream: overlapping patch cells");
        atlas.occupancy.at(x, y) = 1;
      }
    }
    atlas.patchOccupancy.push_back(std::move(local));
  }

  CodecConfig geomConfig{h.searchRange, h.lambdaScale256, h.geomBitDepth, h.lossless != 0};
  CodecConfig attrConfig{h.searchRange, h.lambdaScale256, h.attrBitDepth, h.lossless != 0};

  atlas.attrFrames.assign(size_t(2) * h.viewCount, Frame{});
  std::map<std::pair<uint16_t, uint8_t>, const Frame*> attrRecon;
  bool haveGeomNear = false, haveGeomFar = false;

  for (size_t ui = 0; ui < h.units.size(); ++ui) {
    const UnitHeader& unit = h.units[ui];
    const auto& payload = content.unitPayloads[ui];
    if (unit.kind == 0) {
      std::vector<const Frame*> refs;
      if (unit.frame == 1) {
        if (!haveGeomNear) fail(ErrorCode::BitstreamError, "bitstream: geometry far frame precedes near frame");
        refs.push_back(&atlas.geomNear);
      }
      Frame decoded = decodeUnit(payload.data(), payload.size(), unit.sliceType, unit.qp, h.canvasWidth,
                                 h.canvasHeight, 1, refs, geomConfig);
      if (unit.frame == 0) {
        atlas.geomNear = std::move(decoded);
        haveGeomNear = true;
      } else {
        atlas.geomFar = std::move(decoded);
        haveGeomFar = true;
      }
    } else {
      if (unit.view >= h.viewCount || unit.frame > 1)
        fail(ErrorCode::BitstreamError, "bitstream: attribute unit out of range");
      std::vector<const Frame*> refs;
      for (const auto& ref : unit.refs) {
        auto it = attrRecon.find({ref.view, ref.frame});
        if (it == attrRecon.end())
          fail(ErrorCode::BitstreamError, "bitstream: unit references an undecoded frame");
        refs.push_back(it->second);
      }
      Frame decoded = decodeUnit(payload.data(), payload.size(), unit.sliceType, unit.qp, h.canvasWidth,
                                 h.canvasHeight, 3, refs, attrConfig);
      Frame& slot = atlas.attrFrames[size_t(unit.frame) * h.viewCount + unit.view];
      slot = std::move(decoded);
      attrRecon[{unit.view, unit.frame}] = &slot;
    }
  }
  if (!h.patches.empty()) {
    if (!haveGeomNear || !haveGeomFar) fail(ErrorCode::BitstreamError, "bitstream: missing geometry units");
    for (uint32_t i = 0; i < 2 * h.viewCount; ++i) {
      if (atlas.attrFrames[i].planes.empty())
        fail(ErrorCode::BitstreamError, "bitstream: missing attribute unit");
    }
  }
  return atlas;
}

PlenopticPointCloud reconstructCloud(const DecodedAtlas& atlas) {
  if (atlas.patches.size() != atlas.patchOccupancy.size())
    fail(ErrorCode::InconsistentAtlas, "atlas: patch occupancy list mismatch");
  const uint32_t cw = atlas.canvasWidth, ch = atlas.canvasHeight;

  // Every occupied canvas pixel must be covered by exactly one patch cell.
  BinaryMap covered(cw, ch);
  for (size_t pi = 0; pi < atlas.patches.size(); ++pi) {
    const PatchMetadata& meta = atlas.patches[pi];
    const BinaryMap& local = atlas.patchOccupancy[pi];
    if (local.width != meta.width || local.height != meta.height)
      fail(ErrorCode::InconsistentAtlas, "atlas: patch occupancy dimensions mismatch");
    for (uint32_t v = 0; v < local.height; ++v) {
      for (uint32_t u = 0; u < local.width; ++u) {
        if (!local.at(u, v)) continue;
        auto [rx, ry] = rotateCell(u, v, meta.width, meta.height, Rotation(meta.rotation));
        const uint32_t x = meta.canvasX + rx, y = meta.canvasY + ry;
        if (x >= cw || y >= ch) fail(ErrorCode::InconsistentAtlas, "atlas: patch cell outside canvas");
        covered.at(x, y) = 1;
      }
    }
  }
  for (uint32_t y = 0; y < ch; ++y) {
    for (uint32_t x = 0; x < cw; ++x) {
      if (atlas.occupancy.at(x, y) && !covered.at(x, y))
        fail(ErrorCode::InconsistentAtlas, "atlas: occupied pixel outside all patch footprints");
    }
  }

  PlenopticPointCloud cloud;
  cloud.viewCount = atlas.viewCount;
  cloud.geomBitDepth = atlas.geomBitDepth;
  cloud.attrBitDepth = atlas.attrBitDepth;
  const int32_t maxCoord = cloud.maxCoord();

  auto samplePoint = [&](const PatchMetadata& meta, uint32_t u, uint32_t v, uint32_t x, uint32_t y, bool far) {
    const int32_t depth = int32_t(far ? atlas.geomFar.planes[0].at(x, y) : atlas.geomNear.planes[0].at(x, y));
    Vec3i p = unprojectPoint(meta.uvMinU + int32_t(u), meta.uvMinV + int32_t(v), meta.depthOffset + depth,
                             Axis(meta.axis));
    for (int a = 0; a < 3; ++a) p[a] = std::clamp(p[a], 0, maxCoord);
    cloud.points.push_back(p);
    const size_t base = far ? size_t(atlas.viewCount) : 0;
    for (uint32_t view = 0; view < atlas.viewCount; ++view) {
      const Frame& f = atlas.attrFrames[base + view];
      std::array<uint16_t, 3> px{f.planes[0].at(x, y), f.planes[1].at(x, y), f.planes[2].at(x, y)};
      cloud.colors.push_back(atlas.colorSpace == uint8_t(ColorSpace::YCbCr709)
                                 ? ycbcrToRgb(px, atlas.attrBitDepth)
                                 : Color{px[0], px[1], px[2]});
    }
  };

  for (size_t pi = 0; pi < atlas.patches.size(); ++pi) {
    const PatchMetadata& meta = atlas.patches[pi];
    const BinaryMap& local = atlas.patchOccupancy[pi];
    for (uint32_t v = 0; v < local.height; ++v) {
      for (uint32_t u = 0; u < local.width; ++u) {
        if (!local.at(u, v)) continue;
        auto [rx, ry] = rotateCell(u, v, meta.width, meta.height, Rotation(meta.rotation));
        const uint32_t x = meta.canvasX + rx, y = meta.canvasY + ry;
        samplePoint(meta, u, v, x, y, false);
        if (atlas.geomFar.planes[0].at(x, y) != atlas.geomNear.planes[0].at(x, y)) {
          samplePoint(meta, u, v, x, y, true);
        }
      }
    }
  }
  return mergeDuplicates(std::move(cloud));
}

}  // namespace pvpc
