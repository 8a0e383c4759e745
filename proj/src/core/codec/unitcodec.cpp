#include "unitcodec.h"

#include <algorithm>
#include <cstring>

#include "bitio.h"
#include "quant.h"
#include "transform.h"

namespace pvpc {

int64_t rdLambda1024(int qp, int lambdaScale256) {
  static const int64_t kCbrtFx[3] = {1048576, 1321123, 1664511};  // 2^20 * 2^(m/3)
  const int e = qp - 12;
  const int q = e >= 0 ? e / 3 : -((-e + 2) / 3);
  const int m = e - 3 * q;
  const int64_t num = int64_t(lambdaScale256) * kCbrtFx[m];  // scale 2^28
  const int shift = 18 - q;
  if (shift <= 0) return num << (-shift);
  return (num + (int64_t(1) << (shift - 1))) >> shift;
}

namespace {

constexpr int kBlock = 8;

inline uint16_t fetchClamped(const Plane& p, int x, int y) {
  x = std::clamp(x, 0, int(p.width) - 1);
  y = std::clamp(y, 0, int(p.height) - 1);
  return p.samples[size_t(y) * p.width + x];
}

Plane padToBlocks(const Plane& src) {
  const uint32_t w = (src.width + kBlock - 1) / kBlock * kBlock;
  const uint32_t h = (src.height + kBlock - 1) / kBlock * kBlock;
  Plane out(w, h);
  for (uint32_t y = 0; y < h; ++y) {
    for (uint32_t x = 0; x < w; ++x) {
      out.at(x, y) = fetchClamped(src, int(x), int(y));
    }
  }
  return out;
}

struct ModeTable {
  const BlockMode* modes;
  int count;
};

ModeTable modeTable(SliceType type) {
  static const BlockMode iModes[] = {BlockMode::IntraDC, BlockMode::IntraH, BlockMode::IntraV};
  static const BlockMode pModes[] = {BlockMode::Skip, BlockMode::IntraDC, BlockMode::IntraH, BlockMode::IntraV,
                                     BlockMode::Inter0};
  static const BlockMode bModes[] = {BlockMode::Skip,   BlockMode::IntraDC, BlockMode::IntraH, BlockMode::IntraV,
                                     BlockMode::Inter0, BlockMode::Inter1,  BlockMode::Bi};
  switch (type) {
    case SliceType::I: return {iModes, 3};
    case SliceType::P: return {pModes, 5};
    case SliceType::B: return {bModes, 7};
  }
  return {iModes, 3};
}

int modeSyntaxIndex(SliceType type, BlockMode mode) {
  const ModeTable table = modeTable(type);
  for (int i = 0; i < table.count; ++i) {
    if (table.modes[i] == mode) return i;
  }
  return -1;
}

void predictIntra(const Plane& work, int x0, int y0, BlockMode mode, int mid, int32_t pred[64]) {
  const bool haveLeft = x0 > 0;
  const bool haveTop = y0 > 0;
  if (mode == BlockMode::IntraDC) {
    int64_t sum = 0;
    int count = 0;
    if (haveLeft) {
      for (int r = 0; r < kBlock; ++r) sum += work.at(x0 - 1, y0 + r), ++count;
    }
    if (haveTop) {
      for (int c = 0; c < kBlock; ++c) sum += work.at(x0 + c, y0 - 1), ++count;
    }
    const int32_t dc = count ? int32_t(divRoundHalfUp(sum, count)) : mid;
    for (int i = 0; i < 64; ++i) pred[i] = dc;
  } else if (mode == BlockMode::IntraH) {
    for (int r = 0; r < kBlock; ++r) {
      const int32_t v = haveLeft ? work.at(x0 - 1, y0 + r) : mid;
      for (int c = 0; c < kBlock; ++c) pred[r * kBlock + c] = v;
    }
  } else {  // IntraV
    for (int c = 0; c < kBlock; ++c) {
      const int32_t v = haveTop ? work.at(x0 + c, y0 - 1) : mid;
      for (int r = 0; r < kBlock; ++r) pred[r * kBlock + c] = v;
    }
  }
}

void predictInter(const Plane& ref, int x0, int y0, int dx, int dy, int32_t pred[64]) {
  for (int r = 0; r < kBlock; ++r) {
    for (int c = 0; c < kBlock; ++c) {
      pred[r * kBlock + c] = fetchClamped(ref, x0 + c + dx, y0 + r + dy);
    }
  }
}

struct MotionResult {
  int16_t dx = 0, dy = 0;
  int64_t sse = 0;
};

// Full integer-pel search, SSE metric. The zero vector is probed first so the
// abort threshold starts tight; remaining candidates go in raster order and
// win only on strictly smaller error.
MotionResult motionSearch(const int32_t orig[64], const Plane& ref, int x0, int y0, int range) {
  auto sseFor = [&](int dx, int dy, int64_t bound) {
    int64_t sse = 0;
    for (int r = 0; r < kBlock; ++r) {
      for (int c = 0; c < kBlock; ++c) {
        const int64_t d = orig[r * kBlock + c] - fetchClamped(ref, x0 + c + dx, y0 + r + dy);
        sse += d * d;
      }
      if (sse >= bound) return bound;
    }
    return sse;
  };

  MotionResult best;
  best.sse = sseFor(0, 0, INT64_MAX);
  for (int dy = -range; dy <= range; ++dy) {
    for (int dx = -range; dx <= range; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int64_t sse = sseFor(dx, dy, best.sse);
      if (sse < best.sse) {
        best = {int16_t(dx), int16_t(dy), sse};
      }
    }
  }
  return best;
}

// Residual levels are kept in raster order; the zigzag scan is applied by the
// syntax writer/reader.
struct ResidualCode {
  std::array<int64_t, 64> levels{};
  bool anyNonzero = false;
};

ResidualCode codeResidual(const int32_t orig[64], const int32_t pred[64], int qp, bool intraUnit, bool lossless,
                          int32_t reconRes[64]) {
  ResidualCode out;
  Block res;
  for (int i = 0; i < 64; ++i) res[i] = orig[i] - pred[i];
  if (lossless) {
    for (int i = 0; i < 64; ++i) {
      out.levels[i] = res[i];
      reconRes[i] = res[i];
      out.anyNonzero |= res[i] != 0;
    }
    return out;
  }
  CoefBlock coefs;
  forwardDct(res, coefs);
  CoefBlock dequant;
  for (int i = 0; i < 64; ++i) {
    out.levels[i] = quantizeCoef(coefs[i], qp, intraUnit);
    out.anyNonzero |= out.levels[i] != 0;
    dequant[i] = dequantizeCoef(out.levels[i], qp);
  }
  Block rec;
  if (out.anyNonzero) {
    inverseDct(dequant, rec);
  } else {
    rec.fill(0);
  }
  for (int i = 0; i < 64; ++i) reconRes[i] = rec[i];
  return out;
}

template <typename Writer>
void writeResidual(Writer& w, const std::array<int64_t, 64>& levels) {
  int nonzero = 0;
  for (int k = 0; k < 64; ++k) nonzero += levels[kZigzagScan[k]] != 0;
  w.writeUe(uint64_t(nonzero));
  int prev = -1;
  for (int k = 0; k < 64; ++k) {
    const int64_t level = levels[kZigzagScan[k]];
    if (level == 0) continue;
    w.writeUe(uint64_t(k - prev - 1));
    w.writeSe(level);
    prev = k;
  }
}

void readResidual(BitReader& r, std::array<int64_t, 64>& levels) {
  levels.fill(0);
  const uint64_t nonzero = r.readUe();
  if (nonzero > 64) fail(ErrorCode::BitstreamError, "residual: nonzero count exceeds block size");
  int pos = -1;
  for (uint64_t i = 0; i < nonzero; ++i) {
    const uint64_t run = r.readUe();
    pos += int(run) + 1;
    if (pos >= 64) fail(ErrorCode::BitstreamError, "residual: scan position overflow");
    const int64_t level = r.readSe();
    if (level == 0) fail(ErrorCode::BitstreamError, "residual: zero level coded as nonzero");
    if (level > (int64_t(1) << 26) || level < -(int64_t(1) << 26))
      fail(ErrorCode::BitstreamError, "residual: level magnitude out of range");
    levels[kZigzagScan[pos]] = level;
  }
}

template <typename Writer>
void writeBlockSyntax(Writer& w, SliceType type, const BlockDecision& dec, const std::array<int64_t, 64>& levels) {
  w.writeUe(uint64_t(modeSyntaxIndex(type, dec.mode)));
  if (dec.mode == BlockMode::Inter0 || dec.mode == BlockMode::Inter1) {
    const int refIdx = dec.mode == BlockMode::Inter1 ? 1 : 0;
    w.writeSe(dec.mv[refIdx][0]);
    w.writeSe(dec.mv[refIdx][1]);
  } else if (dec.mode == BlockMode::Bi) {
    for (int r = 0; r < 2; ++r) {
      w.writeSe(dec.mv[r][0]);
      w.writeSe(dec.mv[r][1]);
    }
  }
  if (dec.mode != BlockMode::Skip) writeResidual(w, levels);
}

struct Candidate {
  BlockDecision decision;
  std::array<int64_t, 64> levels{};
  int32_t recon[64] = {};
  int64_t distortion = 0;
};

void finishCandidate(Candidate& cand, const int32_t orig[64], const int32_t pred[64], int qp, bool intraUnit,
                     bool lossless, int maxVal, bool skip) {
  int32_t reconRes[64] = {};
  if (!skip) {
    cand.levels = codeResidual(orig, pred, qp, intraUnit, lossless, reconRes).levels;
  }
  cand.distortion = 0;
  for (int i = 0; i < 64; ++i) {
    const int32_t v = std::clamp(pred[i] + reconRes[i], 0, maxVal);
    cand.recon[i] = v;
    const int64_t d = orig[i] - v;
    cand.distortion += d * d;
  }
}

struct PlaneRefs {
  const Plane* ref0 = nullptr;
  const Plane* ref1 = nullptr;
};

void encodePlane(BitWriter& writer, const Plane& source, SliceType type, int qp, const PlaneRefs& refs,
                 const CodecConfig& config, std::vector<BlockDecision>& modesOut, Plane& reconOut) {
  const Plane padded = padToBlocks(source);
  Plane work(padded.width, padded.height);
  const int maxVal = (1 << config.bitDepth) - 1;
  const int mid = 1 << (config.bitDepth - 1);
  const bool intraUnit = type == SliceType::I;
  const int64_t lambda = rdLambda1024(qp, config.lambdaScale256);
  const ModeTable table = modeTable(type);

  for (uint32_t y0 = 0; y0 < padded.height; y0 += kBlock) {
    for (uint32_t x0 = 0; x0 < padded.width; x0 += kBlock) {
      int32_t orig[64];
      for (int r = 0; r < kBlock; ++r)
        for (int c = 0; c < kBlock; ++c) orig[r * kBlock + c] = padded.at(x0 + c, y0 + r);

      MotionResult mv0, mv1;
      bool searched0 = false, searched1 = false;

      Candidate best;
      int64_t bestCost = INT64_MAX;
      for (int m = 0; m < table.count; ++m) {
        const BlockMode mode = table.modes[m];
        Candidate cand;
        cand.decision.mode = mode;
        int32_t pred[64];
        bool skip = false;
        switch (mode) {
          case BlockMode::Skip:
            predictInter(*refs.ref0, int(x0), int(y0), 0, 0, pred);
            skip = true;
            break;
          case BlockMode::IntraDC:
          case BlockMode::IntraH:
          case BlockMode::IntraV:
            predictIntra(work, int(x0), int(y0), mode, mid, pred);
            break;
          case BlockMode::Inter0:
            if (!searched0) {
              mv0 = motionSearch(orig, *refs.ref0, int(x0), int(y0), config.searchRange);
              searched0 = true;
            }
            cand.decision.mv[0] = {mv0.dx, mv0.dy};
            predictInter(*refs.ref0, int(x0), int(y0), mv0.dx, mv0.dy, pred);
            break;
          case BlockMode::Inter1:
            if (!searched1) {
              mv1 = motionSearch(orig, *refs.ref1, int(x0), int(y0), config.searchRange);
              searched1 = true;
            }
            cand.decision.mv[1] = {mv1.dx, mv1.dy};
            predictInter(*refs.ref1, int(x0), int(y0), mv1.dx, mv1.dy, pred);
            break;
          case BlockMode::Bi: {
            if (!searched0) {
              mv0 = motionSearch(orig, *refs.ref0, int(x0), int(y0), config.searchRange);
              searched0 = true;
            }
            if (!searched1) {
              mv1 = motionSearch(orig, *refs.ref1, int(x0), int(y0), config.searchRange);
              searched1 = true;
            }
            cand.decision.mv[0] = {mv0.dx, mv0.dy};
            cand.decision.mv[1] = {mv1.dx, mv1.dy};
            int32_t p0[64], p1[64];
            predictInter(*refs.ref0, int(x0), int(y0), mv0.dx, mv0.dy, p0);
            predictInter(*refs.ref1, int(x0), int(y0), mv1.dx, mv1.dy, p1);
            for (int i = 0; i < 64; ++i) pred[i] = (p0[i] + p1[i] + 1) >> 1;
            break;
          }
        }
        finishCandidate(cand, orig, pred, qp, intraUnit, config.lossless, maxVal, skip);
        // Lossless coding never trades distortion for rate: a skip that does
        // not reproduce the block exactly is not a legal candidate.
        if (config.lossless && cand.distortion != 0) continue;
        BitCounter counter;
        writeBlockSyntax(counter, type, cand.decision, cand.levels);
        const int64_t cost = cand.distortion * 1024 + lambda * int64_t(counter.bitCount());
        if (cost < bestCost) {
          bestCost = cost;
          best = cand;
        }
      }

      writeBlockSyntax(writer, type, best.decision, best.levels);
      for (int r = 0; r < kBlock; ++r)
        for (int c = 0; c < kBlock; ++c) work.at(x0 + c, y0 + r) = uint16_t(best.recon[r * kBlock + c]);
      modesOut.push_back(best.decision);
    }
  }

  reconOut = Plane(source.width, source.height);
  for (uint32_t y = 0; y < source.height; ++y)
    for (uint32_t x = 0; x < source.width; ++x) reconOut.at(x, y) = work.at(x, y);
}

void decodePlane(BitReader& reader, SliceType type, int qp, uint32_t width, uint32_t height, const PlaneRefs& refs,
                 const CodecConfig& config, Plane& reconOut) {
  const uint32_t pw = (width + kBlock - 1) / kBlock * kBlock;
  const uint32_t ph = (height + kBlock - 1) / kBlock * kBlock;
  Plane work(pw, ph);
  const int maxVal = (1 << config.bitDepth) - 1;
  const int mid = 1 << (config.bitDepth - 1);
  const ModeTable table = modeTable(type);

  for (uint32_t y0 = 0; y0 < ph; y0 += kBlock) {
    for (uint32_t x0 = 0; x0 < pw; x0 += kBlock) {
      const uint64_t modeIdx = reader.readUe();
      if (modeIdx >= uint64_t(table.count)) fail(ErrorCode::BitstreamError, "block: invalid mode index");
      const BlockMode mode = table.modes[modeIdx];

      BlockDecision dec;
      dec.mode = mode;
      auto readMv = [&](int refIdx) {
        const int64_t dx = reader.readSe();
        const int64_t dy = reader.readSe();
        if (std::abs(dx) > config.searchRange || std::abs(dy) > config.searchRange)
          fail(ErrorCode::BitstreamError, "block: motion vector out of range");
        dec.mv[refIdx] = {int16_t(dx), int16_t(dy)};
      };
      if (mode == BlockMode::Inter0) readMv(0);
      if (mode == BlockMode::Inter1) readMv(1);
      if (mode == BlockMode::Bi) {
        readMv(0);
        readMv(1);
      }

      int32_t pred[64];
      switch (mode) {
        case BlockMode::Skip:
          predictInter(*refs.ref0, int(x0), int(y0), 0, 0, pred);
          break;
        case BlockMode::IntraDC:
        case BlockMode::IntraH:
        case BlockMode::IntraV:
          predictIntra(work, int(x0), int(y0), mode, mid, pred);
          break;
        case BlockMode::Inter0:
          predictInter(*refs.ref0, int(x0), int(y0), dec.mv[0][0], dec.mv[0][1], pred);
          break;
        case BlockMode::Inter1:
          predictInter(*refs.ref1, int(x0), int(y0), dec.mv[1][0], dec.mv[1][1], pred);
          break;
        case BlockMode::Bi: {
          int32_t p0[64], p1[64];
          predictInter(*refs.ref0, int(x0), int(y0), dec.mv[0][0], dec.mv[0][1], p0);
          predictInter(*refs.ref1, int(x0), int(y0), dec.mv[1][0], dec.mv[1][1], p1);
          for (int i = 0; i < 64; ++i) pred[i] = (p0[i] + p1[i] + 1) >> 1;
          break;
        }
      }

      int32_t reconRes[64] = {};
      if (mode != BlockMode::Skip) {
        std::array<int64_t, 64> levels;
        readResidual(reader, levels);
        if (config.lossless) {
          for (int i = 0; i < 64; ++i) reconRes[i] = int32_t(levels[i]);
        } else {
          bool any = false;
          CoefBlock dequant;
          for (int i = 0; i < 64; ++i) {
            dequant[i] = dequantizeCoef(levels[i], qp);
            any |= levels[i] != 0;
          }
          if (any) {
            Block rec;
            inverseDct(dequant, rec);
            for (int i = 0; i < 64; ++i) reconRes[i] = rec[i];
          }
        }
      }
      for (int r = 0; r < kBlock; ++r) {
        for (int c = 0; c < kBlock; ++c) {
          work.at(x0 + c, y0 + r) = uint16_t(std::clamp(pred[r * kBlock + c] + reconRes[r * kBlock + c], 0, maxVal));
        }
      }
    }
  }

  reconOut = Plane(width, height);
  for (uint32_t y = 0; y < height; ++y)
    for (uint32_t x = 0; x < width; ++x) reconOut.at(x, y) = work.at(x, y);
}

void validateRefs(SliceType type, const std::vector<const Frame*>& refs, uint32_t planeCount, uint32_t width,
                  uint32_t height) {
  const size_t need = type == SliceType::I ? 0 : type == SliceType::P ? 1 : 2;
  if (refs.size() < need) fail(ErrorCode::SchedulingViolation, "unit: reference reconstruction not available");
  for (size_t i = 0; i < need; ++i) {
    if (refs[i] == nullptr) fail(ErrorCode::SchedulingViolation, "unit: reference reconstruction not available");
    if (refs[i]->planes.size() != planeCount || refs[i]->width() != width || refs[i]->height() != height)
      fail(ErrorCode::InvalidArgument, "unit: reference dimensions mismatch");
  }
}

}  // namespace

EncodedUnit encodeUnit(const Frame& source, SliceType type, int qp, const std::vector<const Frame*>& refs,
                       const CodecConfig& config) {
  if (source.planes.empty()) fail(ErrorCode::InvalidArgument, "encodeUnit: empty frame");
  if (qp < 0 || qp > 51) fail(ErrorCode::QpOutOfRange, "encodeUnit: qp out of range");
  validateRefs(type, refs, uint32_t(source.planes.size()), source.width(), source.height());

  EncodedUnit out;
  out.modes.resize(source.planes.size());
  BitWriter writer;
  for (size_t p = 0; p < source.planes.size(); ++p) {
    PlaneRefs planeRefs;
    if (type != SliceType::I) planeRefs.ref0 = &refs[0]->planes[p];
    if (type == SliceType::B) planeRefs.ref1 = &refs[1]->planes[p];
    Plane recon;
    encodePlane(writer, source.planes[p], type, qp, planeRefs, config, out.modes[p], recon);
    out.reconstruction.planes.push_back(std::move(recon));
  }
  writer.byteAlign();
  out.payload = writer.take();
  return out;
}

Frame decodeUnit(const uint8_t* data, size_t size, SliceType type, int qp, uint32_t width, uint32_t height,
                 uint32_t planeCount, const std::vector<const Frame*>& refs, const CodecConfig& config) {
  if (planeCount == 0 || width == 0 || height == 0)
    fail(ErrorCode::InvalidArgument, "decodeUnit: empty frame geometry");
  if (qp < 0 || qp > 51) fail(ErrorCode::QpOutOfRange, "decodeUnit: qp out of range");
  validateRefs(type, refs, planeCount, width, height);

  Frame out;
  BitReader reader(data, size);
  for (uint32_t p = 0; p < planeCount; ++p) {
    PlaneRefs planeRefs;
    if (type != SliceType::I) planeRefs.ref0 = &refs[0]->planes[p];
    if (type == SliceType::B) planeRefs.ref1 = &refs[1]->planes[p];
    Plane recon;
    decodePlane(reader, type, qp, width, height, planeRefs, config, recon);
    out.planes.push_back(std::move(recon));
  }
  return out;
}

}  // namespace pvpc
