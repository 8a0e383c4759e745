#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cloud.h"

namespace pvpc {

enum class SyntheticShape { Cube, Sphere, Plane };

SyntheticShape parseShape(const std::string& name);

// Deterministic synthetic plenoptic clouds: lattice points on the requested
// surface with a smooth value-noise base texture plus per-view offset fields
// scaled by (1 - viewCorrelation). Correlation 1 gives bit-identical views,
// 0 gives fully independent offsets. Integer arithmetic only, so results are
// identical across platforms for a fixed seed.
PlenopticPointCloud generateSynthetic(SyntheticShape shape, uint64_t pointCount, uint32_t viewCount,
                                      double viewCorrelation, uint64_t seed);

// Full cube shell with per-point face labels (0..5, matching the Axis order
// +x,-x,+y,-y,+z,-z of the dominant face); edge and corner points get the
// label of the first face that contains them.
PlenopticPointCloud generateCubeSurface(uint32_t side, uint32_t viewCount, double viewCorrelation, uint64_t seed,
                                        std::vector<int>* faceLabels);

}  // namespace pvpc
