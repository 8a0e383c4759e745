#include "pad.h"

#include <algorithm>

namespace pvpc {

void dilatePad(Plane& plane, const BinaryMap& occupancy, int bitDepth) {
  if (plane.width != occupancy.width || plane.height != occupancy.height)
    fail(ErrorCode::InvalidArgument, "dilatePad: dimension mismatch");
  const uint32_t w = plane.width, h = plane.height;
  if (w == 0 || h == 0) return;

  // round in which each pixel became valued; 0 = occupied, UINT32_MAX = empty
  std::vector<uint32_t> valuedRound(size_t(w) * h, UINT32_MAX);
  std::vector<size_t> frontier, next;
  for (size_t i = 0; i < occupancy.bits.size(); ++i) {
    if (occupancy.bits[i]) {
      valuedRound[i] = 0;
      frontier.push_back(i);
    }
  }

  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};
  uint32_t round = 1;
  std::vector<size_t> candidates;
  while (!frontier.empty()) {
    candidates.clear();
    for (size_t idx : frontier) {
      const uint32_t x = uint32_t(idx % w), y = uint32_t(idx / w);
      for (int d = 0; d < 4; ++d) {
        const int nx = int(x) + dx[d], ny = int(y) + dy[d];
        if (nx < 0 || ny < 0 || nx >= int(w) || ny >= int(h)) continue;
        const size_t nidx = size_t(ny) * w + nx;
        if (valuedRound[nidx] != UINT32_MAX) continue;
        valuedRound[nidx] = round;  // provisional mark; value assigned below
        candidates.push_back(nidx);
      }
    }
    // Values for this round are averages over neighbors valued in earlier rounds.
    std::vector<uint16_t> newValues(candidates.size());
    for (size_t k = 0; k < candidates.size(); ++k) {
      const size_t idx = candidates[k];
      const uint32_t x = uint32_t(idx % w), y = uint32_t(idx / w);
      int64_t sum = 0;
      int count = 0;
      for (int d = 0; d < 4; ++d) {
        const int nx = int(x) + dx[d], ny = int(y) + dy[d];
        if (nx < 0 || ny < 0 || nx >= int(w) || ny >= int(h)) continue;
        const size_t nidx = size_t(ny) * w + nx;
        if (valuedRound[nidx] < round) {
          sum += plane.samples[nidx];
          ++count;
        }
      }
      newValues[k] = uint16_t(divRoundHalfUp(sum, count));
    }
    for (size_t k = 0; k < candidates.size(); ++k) plane.samples[candidates[k]] = newValues[k];
    frontier.swap(candidates);
    ++round;
  }

  const uint16_t mid = uint16_t(1u << (bitDepth - 1));
  for (size_t i = 0; i < valuedRound.size(); ++i) {
    if (valuedRound[i] == UINT32_MAX) plane.samples[i] = mid;
  }
}

BinaryMap findGroupPaddable(const BinaryMap& occupancy, int blockSize) {
  if (blockSize < 1) fail(ErrorCode::InvalidArgument, "findGroupPaddable: blockSize must be >= 1");
  const uint32_t w = occupancy.width, h = occupancy.height;
  BinaryMap eligible(w, h);
  if (w == 0 || h == 0) return eligible;

  // Integral image of the occupancy for O(1) window sums.
  std::vector<uint32_t> integral(size_t(w + 1) * (h + 1), 0);
  for (uint32_t y = 0; y < h; ++y) {
    for (uint32_t x = 0; x < w; ++x) {
      integral[size_t(y + 1) * (w + 1) + (x + 1)] = occupancy.at(x, y) + integral[size_t(y) * (w + 1) + (x + 1)] +
                                                    integral[size_t(y + 1) * (w + 1) + x] -
                                                    integral[size_t(y) * (w + 1) + x];
    }
  }
  auto rectSum = [&](int x0, int y0, int x1, int y1) {  // inclusive, clipped
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, int(w) - 1);
    y1 = std::min(y1, int(h) - 1);
    if (x0 > x1 || y0 > y1) return 0u;
    return integral[size_t(y1 + 1) * (w + 1) + (x1 + 1)] - integral[size_t(y0) * (w + 1) + (x1 + 1)] -
           integral[size_t(y1 + 1) * (w + 1) + x0] + integral[size_t(y0) * (w + 1) + x0];
  };

  const int offset = (blockSize + 1) / 2 - 1;  // center cell of the window
  for (uint32_t y = 0; y < h; ++y) {
    for (uint32_t x = 0; x < w; ++x) {
      const int x0 = int(x) - offset, y0 = int(y) - offset;
      eligible.at(x, y) = rectSum(x0, y0, x0 + blockSize - 1, y0 + blockSize - 1) == 0 ? 1 : 0;
    }
  }
  return eligible;
}

void groupPad(std::vector<Plane*>& planes, const BinaryMap& eligible) {
  if (planes.empty()) return;
  for (const Plane* p : planes) {
    if (p->width != eligible.width || p->height != eligible.height)
      fail(ErrorCode::InvalidArgument, "groupPad: dimension mismatch");
  }
  const size_t cells = eligible.bits.size();
  const int64_t n = int64_t(planes.size());
  for (size_t i = 0; i < cells; ++i) {
    if (!eligible.bits[i]) continue;
    int64_t sum = 0;
    for (const Plane* p : planes) sum += p->samples[i];
    const uint16_t v = uint16_t(divRoundHalfUp(sum, n));
    for (Plane* p : planes) p->samples[i] = v;
  }
}

}  // namespace pvpc
