#pragma once

#include <vector>

#include "image.h"

namespace pvpc {

// Fills unoccupied pixels by iterative dilation from the occupied region:
// each round, every still-empty pixel with at least one valued 4-neighbor
// takes the round-half-up average of the neighbors valued in earlier rounds.
// Regions with no occupied pixel anywhere are set to mid-level.
void dilatePad(Plane& plane, const BinaryMap& occupancy, int bitDepth);

// A pixel is eligible for group padding when the blockSize x blockSize window
// centered on it (center cell at offset ceil(b/2)-1, cells outside the canvas
// counting as unoccupied) contains no occupied pixel.
BinaryMap findGroupPaddable(const BinaryMap& occupancy, int blockSize);

// Sets every eligible pixel, in all frames of one component stack, to the
// round-half-up average of its current values across the stack.
void groupPad(std::vector<Plane*>& planes, const BinaryMap& eligible);

}  // namespace pvpc
