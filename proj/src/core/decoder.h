#pragma once

#include <vector>

#include "cloud.h"
#include "container.h"
#include "image.h"

namespace pvpc {

struct DecodedAtlas {
  uint8_t colorSpace = 1;
  int geomBitDepth = 10, attrBitDepth = 8;
  uint32_t viewCount = 1;
  uint32_t canvasWidth = 0, canvasHeight = 0;
  std::vector<PatchMetadata> patches;
  std::vector<BinaryMap> patchOccupancy;  // per patch, unrotated local raster
  BinaryMap occupancy;                    // canvas occupancy, union of the patches
  Frame geomNear, geomFar;                // one plane each
  std::vector<Frame> attrFrames;          // index frame*viewCount + view, three planes
};

DecodedAtlas decodeBitstream(const uint8_t* data, size_t size);
inline DecodedAtlas decodeBitstream(const std::vector<uint8_t>& bytes) {
  return decodeBitstream(bytes.data(), bytes.size());
}

// Inverts the projection: every occupied pixel yields a point from the near
// geometry frame plus, when the far sample differs, a second point from the
// far frame; colors come from the matching attribute frames of every view.
// Duplicate positions are merged with color averaging.
PlenopticPointCloud reconstructCloud(const DecodedAtlas& atlas);

}  // namespace pvpc
