// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each check pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "core/codec/unitcodec.h"
#include "core/color.h"
#include "core/decoder.h"
#include "core/encoder.h"
#include "core/metrics.h"
#include "core/pad.h"
#include "core/structure.h"
#include "core/synthetic.h"

using namespace pvpc;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.empty() ? "" : " - ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void runCriterion(int criterion, const std::string& name, const std::function<bool(std::string&)>& fn) {
  std::string detail;
  bool pass = false;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(criterion, name, pass, detail);
}

// ---------------------------------------------------------------- criterion 1
bool pipelineIdentity(std::string& detail) {
  struct Case {
    SyntheticShape shape;
    uint64_t points;
    uint32_t views;
  };
  const std::vector<Case> cases{{SyntheticShape::Cube, 30000, 2},
                                {SyntheticShape::Sphere, 20000, 5},
                                {SyntheticShape::Plane, 10000, 13}};
  char buffer[256];
  for (const auto& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    const PlenopticPointCloud cloud = generateSynthetic(c.shape, c.points, c.views, 0.9, 77);
    EncoderParams params;
    params.lossless = true;
    params.canvasWidth = 256;
    const EncodeResult enc = encodeCloud(cloud, params);
    const PlenopticPointCloud decoded = reconstructCloud(decodeBitstream(enc.bitstream));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::set<size_t> dropped;
    for (uint32_t idx : enc.unassignedPoints) dropped.insert(idx);
    for (uint32_t idx : enc.missedPoints) dropped.insert(idx);
    if (dropped.size() != enc.stats.missedPoints + enc.stats.unassignedPoints) {
      detail = "dropped-point bookkeeping disagrees with the stats";
      return false;
    }

    std::map<Vec3i, std::vector<Color>> got;
    for (size_t i = 0; i < decoded.pointCount(); ++i) {
      std::vector<Color> views;
      for (uint32_t v = 0; v < decoded.viewCount; ++v) views.push_back(decoded.color(i, v));
      got[decoded.points[i]] = std::move(views);
    }
    size_t kept = 0, positionErrors = 0, colorErrors = 0;
    for (size_t i = 0; i < cloud.pointCount(); ++i) {
      if (dropped.count(i)) continue;
      ++kept;
      auto it = got.find(cloud.points[i]);
      if (it == got.end()) {
        ++positionErrors;
        continue;
      }
      for (uint32_t v = 0; v < cloud.viewCount; ++v) {
        if (it->second[v] != cloud.color(i, v)) ++colorErrors;
      }
    }
    const bool ok = positionErrors == 0 && colorErrors == 0 && got.size() == kept && seconds < 60.0;
    std::snprintf(buffer, sizeof(buffer), "shape %d: %zu kept, %zu posErr, %zu colorErr, %.1fs", int(c.shape), kept,
                  positionErrors, colorErrors, seconds);
    if (!ok) {
      detail = buffer;
      return false;
    }
  }
  detail = "3 clouds (N=2,5,13) reconstructed exactly, each < 60 s";
  return true;
}

// ---------------------------------------------------------------- criterion 2
bool codecDeterminism(std::string& detail) {
  std::mt19937 rng(123);
  CodecConfig config;
  config.searchRange = 6;
  std::uniform_int_distribution<int> dim(2, 5), value(0, 255), qpDist(0, 44), typeDist(0, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const uint32_t w = uint32_t(8 * dim(rng)), h = uint32_t(8 * dim(rng));
    auto makeFrame = [&](int planes) {
      Frame f;
      for (int p = 0; p < planes; ++p) {
        Plane plane(w, h);
        for (auto& s : plane.samples) s = uint16_t(value(rng));
        f.planes.push_back(std::move(plane));
      }
      return f;
    };
    const int planes = trial % 4 == 0 ? 3 : 1;
    const Frame src = makeFrame(planes);
    const Frame ref0 = makeFrame(planes);
    const Frame ref1 = makeFrame(planes);
    const SliceType type = SliceType(typeDist(rng));
    std::vector<const Frame*> refs;
    if (type != SliceType::I) refs.push_back(&ref0);
    if (type == SliceType::B) refs.push_back(&ref1);
    const int qp = qpDist(rng);
    config.lossless = trial % 5 == 0;

    const EncodedUnit a = encodeUnit(src, type, qp, refs, config);
    const EncodedUnit b = encodeUnit(src, type, qp, refs, config);
    if (a.payload != b.payload) {
      detail = "two encodes of trial " + std::to_string(trial) + " differ";
      return false;
    }
    const Frame decoded =
        decodeUnit(a.payload.data(), a.payload.size(), type, qp, w, h, uint32_t(planes), refs, config);
    for (int p = 0; p < planes; ++p) {
      if (decoded.planes[p].samples != a.reconstruction.planes[p].samples) {
        detail = "decoder drift on trial " + std::to_string(trial);
        return false;
      }
    }
  }
  detail = "1000 unit round trips bit-exact, re-encodes byte-identical";
  return true;
}

// ---------------------------------------------------------------- criterion 3
bool qpSchedule(std::string& detail) {
  int cases = 0;
  for (int qpI : {22, 27, 32, 37, 42}) {
    for (int level = 0; level <= 3; ++level) {
      if (assignQp(level, 0, qpI) != qpI + level + 1) {
        detail = "level " + std::to_string(level) + " frame 0 mismatch";
        return false;
      }
      if (assignQp(level, 1, qpI) != qpI + level + 4) {
        detail = "level " + std::to_string(level) + " frame 1 mismatch";
        return false;
      }
      cases += 2;
    }
    if (assignQp(kAnchorLevel, 0, qpI) != qpI) {
      detail = "anchor keeps qpI";
      return false;
    }
  }
  detail = std::to_string(cases) + " table cases exact, zero tolerance";
  return cases == 40;
}

// ---------------------------------------------------------------- criterion 4
bool structureValidity(std::string& detail) {
  for (uint32_t views = 1; views <= 32; ++views) {
    const CodingStructure s = buildCodingStructure(views, 32);
    std::set<std::pair<int, int>> decoded;
    for (const auto& u : s.units) {
      for (const auto& r : u.refs) {
        if (!decoded.count({r.view, r.frame})) {
          detail = "viewCount " + std::to_string(views) + ": reference decoded late";
          return false;
        }
      }
      decoded.insert({u.view, u.frame});
      if (u.level > 3) {
        detail = "level bound exceeded";
        return false;
      }
      if (u.frame == 1 && !(u.refs.size() == 1 && u.refs[0].view == u.view && u.refs[0].frame == 0)) {
        detail = "far frame must reference only its own near frame";
        return false;
      }
    }
    if (decoded.size() != 2 * views) {
      detail = "unit count mismatch";
      return false;
    }
  }

  // viewCount 9: documented dyadic layout
  const CodingStructure s9 = buildCodingStructure(9, 32);
  std::map<int, int> level;
  for (const auto& u : s9.units) {
    if (u.frame == 0) level[u.view] = u.level;
  }
  const std::map<int, int> expected{{0, kAnchorLevel}, {8, 0}, {4, 1}, {2, 2}, {6, 2},
                                    {1, 3},            {3, 3}, {5, 3}, {7, 3}};
  if (level != expected) {
    detail = "viewCount 9 layout differs from the documented hierarchy";
    return false;
  }
  detail = "viewCounts 1..32 valid; 9-view layout matches";
  return true;
}

// ---------------------------------------------------------------- criterion 5
bool groupPaddingCorrectness(std::string& detail) {
  std::mt19937 rng(321);
  std::uniform_int_distribution<int> value(0, 255), bit(0, 3), nDist(2, 13), dims(8, 24);
  for (int trial = 0; trial < 100; ++trial) {
    const uint32_t n = uint32_t(nDist(rng));
    const uint32_t w = uint32_t(dims(rng)), h = uint32_t(dims(rng));
    BinaryMap occupancy(w, h);
    for (auto& b : occupancy.bits) b = bit(rng) == 0;
    const BinaryMap eligible = findGroupPaddable(occupancy, 4);
    // eligibility never marks a pixel whose window holds an occupied pixel
    for (uint32_t y = 0; y < h; ++y) {
      for (uint32_t x = 0; x < w; ++x) {
        if (!eligible.at(x, y)) continue;
        for (int wy = int(y) - 1; wy <= int(y) + 2; ++wy) {
          for (int wx = int(x) - 1; wx <= int(x) + 2; ++wx) {
            if (wx < 0 || wy < 0 || wx >= int(w) || wy >= int(h)) continue;
            if (occupancy.at(uint32_t(wx), uint32_t(wy))) {
              detail = "eligible pixel has an occupied window cell";
              return false;
            }
          }
        }
      }
    }

    std::vector<Plane> frames(2 * n, Plane(w, h));
    for (auto& f : frames) {
      for (auto& s : f.samples) s = uint16_t(value(rng));
    }
    const std::vector<Plane> original = frames;
    std::vector<Plane*> ptrs;
    for (auto& f : frames) ptrs.push_back(&f);
    groupPad(ptrs, eligible);
    const std::vector<Plane> once = frames;
    groupPad(ptrs, eligible);

    for (size_t i = 0; i < eligible.bits.size(); ++i) {
      if (eligible.bits[i]) {
        int64_t sum = 0;
        for (const auto& f : original) sum += f.samples[i];
        const uint16_t mean = uint16_t((sum + n) / (2 * n));  // round-half-up over 2N values
        uint16_t lo = 65535, hi = 0;
        for (const auto& f : frames) {
          lo = std::min(lo, f.samples[i]);
          hi = std::max(hi, f.samples[i]);
          if (f.samples[i] != mean) {
            detail = "padded value differs from the independent mean oracle";
            return false;
          }
        }
        if (hi - lo != 0) {
          detail = "eligible pixel differs across frames";
          return false;
        }
      } else if (occupancy.bits[i]) {
        for (size_t f = 0; f < frames.size(); ++f) {
          if (frames[f].samples[i] != original[f].samples[i]) {
            detail = "occupied pixel modified";
            return false;
          }
        }
      }
    }
    for (size_t f = 0; f < frames.size(); ++f) {
      if (frames[f].samples != once[f].samples) {
        detail = "group padding is not idempotent";
        return false;
      }
    }
  }
  detail = "100 random stacks: mean oracle, zero spread, untouched occupied pixels, idempotent";
  return true;
}

// ------------------------------------------------------- criteria 6, 7 and 10
struct AblationRun {
  uint64_t attrBits = 0;
  std::vector<uint8_t> occupancySection;
  EncodeResult result;
};

AblationRun runAblation(const PlenopticPointCloud& cloud, int qpI, bool multiview, bool groupPadding) {
  EncoderParams params;
  params.qpI = qpI;
  params.multiview = multiview;
  params.groupPadding = groupPadding;
  params.canvasWidth = 256;
  AblationRun run;
  run.result = encodeCloud(cloud, params);
  run.attrBits = run.result.stats.attrBits;
  return run;
}

// Group padding must strictly reduce attribute bits at every tested anchor
// QP. The floor is deliberately conservative: the saving shrinks as coarser
// quantization zeroes the inter-view residue on its own, and 2% keeps the
// check robust at the high end of the QP range on desk-scale content.
constexpr double kMinPaddingSaving = 0.02;

// Multiview prediction must beat independent all-intra coding by a wide
// margin whenever the views are highly correlated; 20% is a conservative
// floor for rho = 0.9 content (measured savings sit far above it).
constexpr double kMinMultiviewSaving = 0.20;

PlenopticPointCloud g_ablationCloud;

bool paddingAblation(std::string& detail) {
  char buffer[384];
  std::string parts;
  for (int qpI : {27, 32, 37}) {
    const AblationRun with = runAblation(g_ablationCloud, qpI, true, true);
    const AblationRun without = runAblation(g_ablationCloud, qpI, true, false);
    const double saving = 1.0 - double(with.attrBits) / double(without.attrBits);
    std::snprintf(buffer, sizeof(buffer), " qp%d: %.1f%%", qpI, saving * 100.0);
    parts += buffer;
    if (!(with.attrBits < without.attrBits) || saving < kMinPaddingSaving) {
      detail = "attribute-bit saving below the 2% floor at qp " + std::to_string(qpI) + ":" + parts;
      return false;
    }
  }
  detail = "group padding saves >= 2% attribute bits at every qp:" + parts;
  return true;
}

bool multiviewAblation(std::string& detail) {
  char buffer[384];
  std::string parts;
  for (int qpI : {27, 32, 37}) {
    const AblationRun mv = runAblation(g_ablationCloud, qpI, true, true);
    const AblationRun indep = runAblation(g_ablationCloud, qpI, false, true);
    const double saving = 1.0 - double(mv.attrBits) / double(indep.attrBits);
    std::snprintf(buffer, sizeof(buffer), " qp%d: %.1f%%", qpI, saving * 100.0);
    parts += buffer;
    if (saving < kMinMultiviewSaving) {
      detail = "multiview saving below the 20% floor at qp " + std::to_string(qpI) + ":" + parts;
      return false;
    }
  }
  detail = "multiview saves >= 20% attribute bits at every qp:" + parts;
  return true;
}

// The four ablation configurations must agree on occupancy and patch metadata.
bool ablationConsistency(std::string& detail) {
  const PlenopticPointCloud cloud = generateSynthetic(SyntheticShape::Cube, 8000, 3, 0.9, 55);
  std::vector<std::pair<bool, bool>> configs{{true, true}, {true, false}, {false, true}, {false, false}};
  std::vector<BitstreamContent> contents;
  for (auto [mv, pad] : configs) {
    EncoderParams params;
    params.qpI = 32;
    params.multiview = mv;
    params.groupPadding = pad;
    params.canvasWidth = 256;
    const EncodeResult enc = encodeCloud(cloud, params);
    contents.push_back(readBitstream(enc.bitstream.data(), enc.bitstream.size()));
  }
  for (size_t i = 1; i < contents.size(); ++i) {
    if (contents[i].patchOccupancy != contents[0].patchOccupancy) {
      detail = "occupancy differs between ablation runs";
      return false;
    }
    if (contents[i].header.patches.size() != contents[0].header.patches.size()) {
      detail = "patch metadata differs between ablation runs";
      return false;
    }
    for (size_t p = 0; p < contents[0].header.patches.size(); ++p) {
      const auto& a = contents[0].header.patches[p];
      const auto& b = contents[i].header.patches[p];
      if (a.axis != b.axis || a.rotation != b.rotation || a.uvMinU != b.uvMinU || a.uvMinV != b.uvMinV ||
          a.depthOffset != b.depthOffset || a.width != b.width || a.height != b.height || a.canvasX != b.canvasX ||
          a.canvasY != b.canvasY) {
        detail = "patch metadata differs between ablation runs";
        return false;
      }
    }
    // geometry payloads are identical too: same frames, same qp, no mode coupling
    for (size_t u = 0; u < contents[0].header.units.size(); ++u) {
      if (contents[0].header.units[u].kind != 0) continue;
      if (contents[i].unitPayloads[u] != contents[0].unitPayloads[u]) {
        detail = "geometry payload differs between ablation runs";
        return false;
      }
    }
  }
  detail = "occupancy, patch metadata and geometry payloads identical across the 4 runs";
  return true;
}

// ---------------------------------------------------------------- criterion 8
bool bdRateOracle(std::string& detail) {
  const std::vector<std::pair<double, double>> identity{{1000, 30}, {2000, 33}, {4000, 36}, {8000, 39}};
  if (std::abs(bdRate(identity, identity).percent) > 1e-12) {
    detail = "identity curves gave a nonzero delta";
    return false;
  }
  std::vector<std::pair<double, double>> doubled = identity;
  for (auto& [bits, psnr] : doubled) bits *= 2;
  if (std::abs(bdRate(identity, doubled).percent - 100.0) > 1e-6) {
    detail = "doubled-rate curves missed +100%";
    return false;
  }

  std::mt19937 rng(654);
  std::uniform_real_distribution<double> startBits(500, 2000), rateStep(1.6, 2.6), psnrStep(1.5, 4.5),
      startPsnr(28, 34);
  double maxErr = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto makeCurve = [&]() {
      std::vector<std::pair<double, double>> curve;
      double bits = startBits(rng), psnr = startPsnr(rng);
      for (int i = 0; i < 4; ++i) {
        curve.push_back({bits, psnr});
        bits *= rateStep(rng);
        psnr += psnrStep(rng);
      }
      return curve;
    };
    const auto anchor = makeCurve();
    const auto test = makeCurve();
    const RdFit fa = fitLogRate(anchor), ft = fitLogRate(test);
    const double lo = std::max(fa.x.front(), ft.x.front());
    const double hi = std::min(fa.x.back(), ft.x.back());
    if (hi <= lo) continue;
    const int samples = 10000;
    double accA = 0, accT = 0;
    for (int i = 0; i < samples; ++i) {
      const double x0 = lo + (hi - lo) * i / samples;
      const double x1 = lo + (hi - lo) * (i + 1) / samples;
      accA += (fa.eval(x0) + fa.eval(x1)) / 2 * (x1 - x0);
      accT += (ft.eval(x0) + ft.eval(x1)) / 2 * (x1 - x0);
    }
    const double oracle = (std::pow(10.0, (accT - accA) / (hi - lo)) - 1.0) * 100.0;
    const double fast = bdRate(anchor, test).percent;
    maxErr = std::max(maxErr, std::abs(fast - oracle));
    if (std::abs(fast - oracle) > 0.1) {
      detail = "trial " + std::to_string(trial) + " off by " + std::to_string(std::abs(fast - oracle));
      return false;
    }
  }
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "50 curve pairs within 0.1%% (max %.2e), identity 0, doubled +100%%", maxErr);
  detail = buffer;
  return true;
}

// ---------------------------------------------------------------- criterion 9
bool metricsOracles(std::string& detail) {
  std::mt19937 rng(987);
  auto randomCloud = [&](size_t count, uint32_t views) {
    PlenopticPointCloud cloud;
    cloud.viewCount = views;
    cloud.geomBitDepth = 7;
    cloud.attrBitDepth = 8;
    std::uniform_int_distribution<int32_t> coord(0, 127);
    std::uniform_int_distribution<int> level(0, 255);
    std::set<Vec3i> seen;
    while (cloud.points.size() < count) {
      Vec3i p{coord(rng), coord(rng), coord(rng)};
      if (!seen.insert(p).second) continue;
      cloud.points.push_back(p);
      for (uint32_t v = 0; v < views; ++v) {
        cloud.colors.push_back({uint16_t(level(rng)), uint16_t(level(rng)), uint16_t(level(rng))});
      }
    }
    return cloud;
  };

  const PlenopticPointCloud ref = randomCloud(2000, 2);
  PlenopticPointCloud dist = ref;
  std::uniform_int_distribution<int> jitter(-2, 2), cjitter(-8, 8);
  for (auto& p : dist.points) {
    for (int a = 0; a < 3; ++a) p[a] = std::clamp(p[a] + jitter(rng), 0, 127);
  }
  for (auto& c : dist.colors) {
    for (int a = 0; a < 3; ++a) c[a] = uint16_t(std::clamp(int(c[a]) + cjitter(rng), 0, 255));
  }
  dist = mergeDuplicates(dist);

  // identical clouds cap at 99.99
  const Psnr3 capped = attributePsnr(ref, ref, 0);
  const NormalSet normals = estimateNormals(ref, 12);
  const auto cappedGeom = geometryD1D2(ref, ref, normals);
  if (capped.y != 99.99 || capped.cb != 99.99 || capped.cr != 99.99 || cappedGeom.first != 99.99 ||
      cappedGeom.second != 99.99) {
    detail = "identical clouds did not hit the cap";
    return false;
  }

  // brute-force O(n^2) oracles with the same tie-break, exact match required
  auto nearestBrute = [](const PlenopticPointCloud& cloud, const Vec3i& q) {
    int64_t bestD = INT64_MAX;
    size_t best = 0;
    for (size_t i = 0; i < cloud.pointCount(); ++i) {
      int64_t d = 0;
      for (int a = 0; a < 3; ++a) {
        const int64_t diff = cloud.points[i][a] - q[a];
        d += diff * diff;
      }
      if (d < bestD) {
        bestD = d;
        best = i;
      }
    }
    return best;
  };
  auto psnrOf = [](double mse, double peak) {
    return mse <= 0 ? 99.99 : std::min(99.99, 10 * std::log10(peak * peak / mse));
  };

  for (uint32_t view = 0; view < 2; ++view) {
    double f[3] = {0, 0, 0}, b[3] = {0, 0, 0};
    for (size_t i = 0; i < ref.pointCount(); ++i) {
      const size_t nn = nearestBrute(dist, ref.points[i]);
      const auto a = rgbToYcbcr(ref.color(i, view), 8);
      const auto bb = rgbToYcbcr(dist.color(nn, view), 8);
      for (int c = 0; c < 3; ++c) f[c] += (double(a[c]) - bb[c]) * (double(a[c]) - bb[c]);
    }
    for (size_t i = 0; i < dist.pointCount(); ++i) {
      const size_t nn = nearestBrute(ref, dist.points[i]);
      const auto a = rgbToYcbcr(dist.color(i, view), 8);
      const auto bb = rgbToYcbcr(ref.color(nn, view), 8);
      for (int c = 0; c < 3; ++c) b[c] += (double(a[c]) - bb[c]) * (double(a[c]) - bb[c]);
    }
    Psnr3 oracle;
    oracle.y = std::min(psnrOf(f[0] / ref.pointCount(), 255), psnrOf(b[0] / dist.pointCount(), 255));
    oracle.cb = std::min(psnrOf(f[1] / ref.pointCount(), 255), psnrOf(b[1] / dist.pointCount(), 255));
    oracle.cr = std::min(psnrOf(f[2] / ref.pointCount(), 255), psnrOf(b[2] / dist.pointCount(), 255));
    const Psnr3 fast = attributePsnr(ref, dist, view);
    if (fast.y != oracle.y || fast.cb != oracle.cb || fast.cr != oracle.cr) {
      detail = "attribute PSNR differs from the brute-force oracle";
      return false;
    }
  }

  double d1f = 0, d2f = 0, d1b = 0, d2b = 0;
  for (size_t i = 0; i < ref.pointCount(); ++i) {
    const size_t nn = nearestBrute(dist, ref.points[i]);
    double diff[3];
    for (int a = 0; a < 3; ++a) diff[a] = double(ref.points[i][a]) - dist.points[nn][a];
    d1f += diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2];
    const double proj =
        diff[0] * normals.normals[i][0] + diff[1] * normals.normals[i][1] + diff[2] * normals.normals[i][2];
    d2f += proj * proj;
  }
  for (size_t i = 0; i < dist.pointCount(); ++i) {
    const size_t nn = nearestBrute(ref, dist.points[i]);
    double diff[3];
    for (int a = 0; a < 3; ++a) diff[a] = double(dist.points[i][a]) - ref.points[nn][a];
    d1b += diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2];
    const double proj =
        diff[0] * normals.normals[nn][0] + diff[1] * normals.normals[nn][1] + diff[2] * normals.normals[nn][2];
    d2b += proj * proj;
  }
  const double peak = 127.0;
  const double oracleD1 = std::min(psnrOf(d1f / ref.pointCount(), peak), psnrOf(d1b / dist.pointCount(), peak));
  const double oracleD2 = std::min(psnrOf(d2f / ref.pointCount(), peak), psnrOf(d2b / dist.pointCount(), peak));
  const auto fastGeom = geometryD1D2(ref, dist, normals);
  if (fastGeom.first != oracleD1 || fastGeom.second != oracleD2) {
    detail = "geometry D1/D2 differ from the brute-force oracle";
    return false;
  }
  detail = "2000-point clouds: exact oracle agreement, caps at 99.99";
  return true;
}

// --------------------------------------------------------------- criterion 10
bool rdMonotonicity(std::string& detail) {
  const PlenopticPointCloud cloud = generateSynthetic(SyntheticShape::Cube, 12000, 2, 0.9, 31);
  const NormalSet normals = estimateNormals(cloud, 16);
  std::vector<uint64_t> bits;
  std::vector<double> psnr;
  for (int qpI : {22, 27, 32, 37, 42}) {
    EncoderParams params;
    params.qpI = qpI;
    params.canvasWidth = 256;
    const EncodeResult enc = encodeCloud(cloud, params);
    const PlenopticPointCloud decoded = reconstructCloud(decodeBitstream(enc.bitstream));
    double y = 0;
    for (uint32_t v = 0; v < cloud.viewCount; ++v) y += attributePsnr(cloud, decoded, v).y;
    bits.push_back(enc.stats.totalBits);
    psnr.push_back(y / cloud.viewCount);
  }
  char buffer[256];
  std::string parts;
  for (size_t i = 0; i < bits.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), " (%llu, %.2f)", (unsigned long long)bits[i], psnr[i]);
    parts += buffer;
  }
  for (size_t i = 1; i < bits.size(); ++i) {
    if (double(bits[i]) > double(bits[i - 1]) * 1.02) {  // 2% tolerance
      detail = "totalBits not weakly decreasing:" + parts;
      return false;
    }
    if (psnr[i] > psnr[i - 1] + 0.1) {  // 0.1 dB tolerance
      detail = "luma PSNR not weakly decreasing:" + parts;
      return false;
    }
  }
  detail = "5-point sweep monotone:" + parts;
  return true;
}

}  // namespace

int main() {
  g_ablationCloud = generateSynthetic(SyntheticShape::Cube, 15000, 13, 0.9, 41);

  runCriterion(1, "pipeline identity under the lossless configuration", pipelineIdentity);
  runCriterion(2, "codec determinism and drift-freedom (1000 round trips)", codecDeterminism);
  runCriterion(3, "qp schedule conformance (5 anchors x 4 levels x 2 frames)", qpSchedule);
  runCriterion(4, "coding structure validity for 1..32 views", structureValidity);
  runCriterion(5, "group padding correctness on 100 random stacks", groupPaddingCorrectness);
  runCriterion(6, "group padding saves attribute bits (directional)", paddingAblation);
  runCriterion(7, "multiview saves attribute bits vs independent-intra (directional)", multiviewAblation);
  runCriterion(8, "bd-rate against dense numerical integration", bdRateOracle);
  runCriterion(9, "metric oracles (point-to-point, point-to-plane, color)", metricsOracles);
  runCriterion(10, "rate and quality monotone over the qp sweep", rdMonotonicity);
  runCriterion(11, "ablations agree on occupancy and patch metadata", ablationConsistency);

  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
