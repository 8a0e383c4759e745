#include <algorithm>
#include <cmath>
#include <random>

#include "core/codec/bitio.h"
#include "core/codec/occupancy.h"
#include "core/codec/quant.h"
#include "core/codec/transform.h"
#include "core/codec/unitcodec.h"
#include "doctest.h"
#include "test_util.h"

using namespace pvpc;
using pvpc::test::errorCodeOf;

TEST_CASE("bitio: exp-Golomb codes roundtrip") {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int64_t> values(-100000, 100000);
  std::vector<int64_t> signedVals;
  std::vector<uint64_t> unsignedVals;
  BitWriter writer;
  for (int i = 0; i < 2000; ++i) {
    const int64_t sv = values(rng);
    const uint64_t uv = uint64_t(std::abs(values(rng)));
    writer.writeSe(sv);
    writer.writeUe(uv);
    signedVals.push_back(sv);
    unsignedVals.push_back(uv);
  }
  writer.byteAlign();
  const auto bytes = writer.bytes();
  BitReader reader(bytes.data(), bytes.size());
  for (int i = 0; i < 2000; ++i) {
    CHECK(reader.readSe() == signedVals[i]);
    CHECK(reader.readUe() == unsignedVals[i]);
  }
}

TEST_CASE("bitio: counter agrees with the writer") {
  BitWriter writer;
  BitCounter counter;
  for (uint64_t v : {0ull, 1ull, 2ull, 7ull, 255ull, 100000ull}) {
    writer.writeUe(v);
    counter.writeUe(v);
  }
  writer.writeSe(-12345);
  counter.writeSe(-12345);
  CHECK(writer.bitCount() == counter.bitCount());
}

TEST_CASE("bitio: reading past the end raises a bitstream error") {
  const uint8_t byte = 0xFF;
  BitReader reader(&byte, 1);
  reader.readBits(8);
  CHECK(errorCodeOf([&] { reader.readBit(); }) == ErrorCode::BitstreamError);
}

TEST_CASE("reference transform: constant block concentrates into DC = 8c") {
  double in[64], out[64];
  for (double& v : in) v = 13.0;
  forwardDctReal(in, out);
  CHECK(out[0] == doctest::Approx(8.0 * 13.0).epsilon(1e-12));
  for (int i = 1; i < 64; ++i) CHECK(std::abs(out[i]) < 1e-9);
}

TEST_CASE("reference transform: zero block stays zero") {
  double in[64] = {}, out[64];
  forwardDctReal(in, out);
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("reference transform: Parseval energy preservation on random blocks") {
  std::mt19937 rng(6);
  std::uniform_int_distribution<int> value(-255, 255);
  for (int trial = 0; trial < 20; ++trial) {
    double in[64], out[64];
    double energyIn = 0, energyOut = 0;
    for (double& v : in) {
      v = value(rng);
      energyIn += v * v;
    }
    forwardDctReal(in, out);
    for (double v : out) energyOut += v * v;
    CHECK(std::abs(energyIn - energyOut) <= 1e-6 * std::max(1.0, energyIn));
  }
}

TEST_CASE("reference transform: inverse(forward) reproduces the block within 1e-9") {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> value(-255, 255);
  double in[64], mid[64], out[64];
  for (double& v : in) v = value(rng);
  forwardDctReal(in, mid);
  inverseDctReal(mid, out);
  for (int i = 0; i < 64; ++i) CHECK(std::abs(out[i] - in[i]) < 1e-9);
}

TEST_CASE("integer transform: tracks the reference transform and inverts cleanly") {
  std::mt19937 rng(14);
  std::uniform_int_distribution<int32_t> value(-255, 255);
  for (int trial = 0; trial < 50; ++trial) {
    Block block;
    double real[64], realOut[64];
    for (int i = 0; i < 64; ++i) {
      block[i] = value(rng);
      real[i] = block[i];
    }
    CoefBlock coefs;
    forwardDct(block, coefs);
    forwardDctReal(real, realOut);
    for (int i = 0; i < 64; ++i) {
      // the 12-bit kernel quantization bounds the deviation well under one step
      CHECK(std::abs(double(coefs[i]) / 16777216.0 - realOut[i]) < 0.5);
    }
    Block back;
    inverseDct(coefs, back);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(back[i] - block[i]) <= 1);
  }
}

TEST_CASE("quantizer: step sizes are exact powers of two at qp 4 and 10") {
  CHECK(quantDenominator(4) == (int64_t(1) << 24));       // step 1
  CHECK(quantDenominator(10) == (int64_t(2) << 24));      // step 2
  CHECK(quantDenominator(22) == (int64_t(8) << 24));      // step 8
  CHECK(quantDenominator(16) == (int64_t(4) << 24));      // step 4
}

TEST_CASE("quantizer: c=100 at qp 22 gives level 12 and dequant 96 in an I unit") {
  const int64_t coef = int64_t(100) << 24;
  const int64_t level = quantizeCoef(coef, 22, true);
  CHECK(level == 12);  // floor(100/8 + 1/3)
  CHECK(dequantizeCoef(level, 22) == int64_t(96) << 24);
  // inter deadzone: floor(100/8 + 1/6) = floor(12.67) = 12
  CHECK(quantizeCoef(coef, 22, false) == 12);
  // sign symmetry
  CHECK(quantizeCoef(-coef, 22, true) == -12);
}

TEST_CASE("quantizer: deadzone offsets differ between I and inter units") {
  // |c| = 7.75 steps: floor(7.75 + 1/3) = 8, floor(7.75 + 1/6) = 7
  const int64_t coef = (int64_t(62) << 24);  // 62/8 = 7.75 at qp 22
  CHECK(quantizeCoef(coef, 22, true) == 8);
  CHECK(quantizeCoef(coef, 22, false) == 7);
}

TEST_CASE("occupancy codec: all-zero map stays tiny and roundtrips") {
  BinaryMap map(64, 64);
  const auto bytes = encodeOccupancy(map);
  CHECK(bytes.size() <= 64 * 64 / 64 + 16);
  const BinaryMap back = decodeOccupancy(bytes);
  CHECK(back.width == 64);
  CHECK(back.height == 64);
  CHECK(back.bits == map.bits);
}

TEST_CASE("occupancy codec: checkerboard roundtrips") {
  BinaryMap map(32, 16);
  for (uint32_t y = 0; y < 16; ++y) {
    for (uint32_t x = 0; x < 32; ++x) map.at(x, y) = (x + y) & 1;
  }
  const BinaryMap back = decodeOccupancy(encodeOccupancy(map));
  CHECK(back.bits == map.bits);
}

TEST_CASE("occupancy codec: 1000 random maps roundtrip exactly") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<uint32_t> dim(1, 40);
  std::uniform_int_distribution<int> density(0, 100);
  for (int trial = 0; trial < 1000; ++trial) {
    BinaryMap map(dim(rng), dim(rng));
    const int p = density(rng);
    std::uniform_int_distribution<int> bit(0, 99);
    for (auto& b : map.bits) b = bit(rng) < p;
    const BinaryMap back = decodeOccupancy(encodeOccupancy(map));
    REQUIRE(back.width == map.width);
    REQUIRE(back.height == map.height);
    REQUIRE(back.bits == map.bits);
  }
}

TEST_CASE("occupancy codec: truncation raises a bitstream error") {
  BinaryMap map(16, 16, 1);
  auto bytes = encodeOccupancy(map);
  bytes.resize(bytes.size() - 1);
  if (bytes.size() <= 8) bytes.resize(8);  // keep the dimensions readable
  CHECK(errorCodeOf([&] { decodeOccupancy(bytes); }) == ErrorCode::BitstreamError);
}

namespace {

Frame randomFrame(std::mt19937& rng, uint32_t w, uint32_t h, int planes, int bitDepth) {
  std::uniform_int_distribution<int> value(0, (1 << bitDepth) - 1);
  Frame f;
  for (int p = 0; p < planes; ++p) {
    Plane plane(w, h);
    for (auto& s : plane.samples) s = uint16_t(value(rng));
    f.planes.push_back(std::move(plane));
  }
  return f;
}

Frame smoothFrame(uint32_t w, uint32_t h, int planes) {
  Frame f;
  for (int p = 0; p < planes; ++p) {
    Plane plane(w, h);
    for (uint32_t y = 0; y < h; ++y) {
      for (uint32_t x = 0; x < w; ++x) plane.at(x, y) = uint16_t((2 * x + 3 * y + 40 * p) % 256);
    }
    f.planes.push_back(std::move(plane));
  }
  return f;
}

bool framesEqual(const Frame& a, const Frame& b) {
  if (a.planes.size() != b.planes.size()) return false;
  for (size_t p = 0; p < a.planes.size(); ++p) {
    if (a.planes[p].samples != b.planes[p].samples) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("unit codec: a frame identical to its reference collapses to skips") {
  const Frame ref = smoothFrame(64, 64, 1);
  CodecConfig config;
  const EncodedUnit coded = encodeUnit(ref, SliceType::P, 32, {&ref}, config);
  for (const auto& dec : coded.modes[0]) {
    CHECK(dec.mode == BlockMode::Skip);
  }
  const double bpp = double(coded.payload.size()) * 8.0 / (64.0 * 64.0);
  CHECK(bpp < 0.05);
  CHECK(framesEqual(coded.reconstruction, ref));
}

TEST_CASE("unit codec: qp 0 on a smooth gradient reconstructs above 55 dB") {
  const Frame src = smoothFrame(64, 64, 1);
  CodecConfig config;
  const EncodedUnit coded = encodeUnit(src, SliceType::I, 0, {}, config);
  double sse = 0;
  for (size_t i = 0; i < src.planes[0].samples.size(); ++i) {
    const double d = double(src.planes[0].samples[i]) - double(coded.reconstruction.planes[0].samples[i]);
    sse += d * d;
  }
  const double mse = sse / double(src.planes[0].samples.size());
  const double psnr = 10.0 * std::log10(255.0 * 255.0 / std::max(mse, 1e-12));
  CHECK(psnr > 55.0);
}

TEST_CASE("unit codec: decoder reproduces the encoder reconstruction bit-exactly") {
  std::mt19937 rng(20);
  CodecConfig config;
  config.searchRange = 8;
  for (int trial = 0; trial < 30; ++trial) {
    const uint32_t w = 24 + (trial % 3) * 20, h = 24 + (trial % 5) * 8;
    const Frame ref0 = randomFrame(rng, w, h, 1, 8);
    const Frame ref1 = randomFrame(rng, w, h, 1, 8);
    const Frame src = randomFrame(rng, w, h, 1, 8);
    const SliceType type = trial % 3 == 0 ? SliceType::I : trial % 3 == 1 ? SliceType::P : SliceType::B;
    std::vector<const Frame*> refs;
    if (type != SliceType::I) refs.push_back(&ref0);
    if (type == SliceType::B) refs.push_back(&ref1);
    const int qp = (trial * 7) % 45;
    const EncodedUnit coded = encodeUnit(src, type, qp, refs, config);
    const Frame decoded = decodeUnit(coded.payload.data(), coded.payload.size(), type, qp, w, h, 1, refs, config);
    REQUIRE(framesEqual(decoded, coded.reconstruction));
  }
}

TEST_CASE("unit codec: lossless mode reproduces the source exactly") {
  std::mt19937 rng(21);
  CodecConfig config;
  config.lossless = true;
  config.searchRange = 8;
  const Frame ref = randomFrame(rng, 32, 32, 3, 8);
  const Frame src = randomFrame(rng, 32, 32, 3, 8);
  const EncodedUnit coded = encodeUnit(src, SliceType::P, 32, {&ref}, config);
  CHECK(framesEqual(coded.reconstruction, src));
  const Frame decoded = decodeUnit(coded.payload.data(), coded.payload.size(), SliceType::P, 32, 32, 32, 3, {&ref},
                                   config);
  CHECK(framesEqual(decoded, src));
}

TEST_CASE("unit codec: byte-identical bitstreams across two runs") {
  std::mt19937 rng(22);
  const Frame src = randomFrame(rng, 48, 48, 3, 8);
  const Frame ref = randomFrame(rng, 48, 48, 3, 8);
  CodecConfig config;
  const EncodedUnit a = encodeUnit(src, SliceType::P, 30, {&ref}, config);
  const EncodedUnit b = encodeUnit(src, SliceType::P, 30, {&ref}, config);
  CHECK(a.payload == b.payload);
}

TEST_CASE("unit codec: truncated payload raises a bitstream error") {
  std::mt19937 rng(25);
  const Frame src = randomFrame(rng, 32, 32, 1, 8);
  CodecConfig config;
  const EncodedUnit coded = encodeUnit(src, SliceType::I, 22, {}, config);
  REQUIRE(coded.payload.size() > 4);
  CHECK(errorCodeOf([&] {
          decodeUnit(coded.payload.data(), coded.payload.size() / 2, SliceType::I, 22, 32, 32, 1, {}, config);
        }) == ErrorCode::BitstreamError);
}

TEST_CASE("unit codec: missing references are a scheduling violation") {
  std::mt19937 rng(26);
  const Frame src = randomFrame(rng, 16, 16, 1, 8);
  CodecConfig config;
  CHECK(errorCodeOf([&] { encodeUnit(src, SliceType::P, 22, {}, config); }) == ErrorCode::SchedulingViolation);
  const EncodedUnit coded = encodeUnit(src, SliceType::I, 22, {}, config);
  CHECK(errorCodeOf([&] {
          decodeUnit(coded.payload.data(), coded.payload.size(), SliceType::B, 22, 16, 16, 1, {}, config);
        }) == ErrorCode::SchedulingViolation);
}

TEST_CASE("unit codec: empty geometry is rejected") {
  CodecConfig config;
  CHECK(errorCodeOf([&] { decodeUnit(nullptr, 0, SliceType::I, 22, 0, 0, 1, {}, config); }) ==
        ErrorCode::InvalidArgument);
  Frame empty;
  CHECK(errorCodeOf([&] { encodeUnit(empty, SliceType::I, 22, {}, config); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("unit codec: weak rate monotonicity over a +6 qp step") {
  const Frame src = smoothFrame(96, 96, 1);
  Frame noisy = src;
  std::mt19937 rng(27);
  std::uniform_int_distribution<int> jitter(-12, 12);
  for (auto& s : noisy.planes[0].samples) {
    s = uint16_t(std::clamp(int(s) + jitter(rng), 0, 255));
  }
  CodecConfig config;
  for (int qp : {10, 16, 22, 28, 34}) {
    const auto lo = encodeUnit(noisy, SliceType::I, qp, {}, config);
    const auto hi = encodeUnit(noisy, SliceType::I, qp + 6, {}, config);
    CHECK(double(hi.payload.size()) <= double(lo.payload.size()) * 1.02);
  }
}

TEST_CASE("unit codec: intra-DC with no neighbors predicts mid-level") {
  Frame src;
  src.planes.assign(1, Plane(8, 8, 128));
  CodecConfig config;
  const EncodedUnit coded = encodeUnit(src, SliceType::I, 4, {}, config);
  CHECK(coded.modes[0][0].mode == BlockMode::IntraDC);
  CHECK(framesEqual(coded.reconstruction, src));  // flat 128 predicts exactly
  // all-zero residual: the payload is a lone DC mode + empty residual
  CHECK(coded.payload.size() <= 2);
}

TEST_CASE("unit codec: random 64x64 frame roundtrips exactly at qp 22") {
  std::mt19937 rng(64);
  const Frame src = randomFrame(rng, 64, 64, 1, 8);
  CodecConfig config;
  const EncodedUnit coded = encodeUnit(src, SliceType::I, 22, {}, config);
  const Frame decoded = decodeUnit(coded.payload.data(), coded.payload.size(), SliceType::I, 22, 64, 64, 1, {},
                                   config);
  CHECK(framesEqual(decoded, coded.reconstruction));
}
