#include "container.h"

#include <cstring>

namespace pvpc {

namespace {

const char kMagic[4] = {'P', 'V', 'P', 'C'};

class ByteWriter {
 public:
  void u8(uint8_t v) { bytes_.push_back(v); }
  void u16(uint16_t v) {
    u8(uint8_t(v));
    u8(uint8_t(v >> 8));
  }
  void u32(uint32_t v) {
    u16(uint16_t(v));
    u16(uint16_t(v >> 16));
  }
  void i32(int32_t v) { u32(uint32_t(v)); }
  void blob(const std::vector<uint8_t>& data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }
  std::vector<uint8_t> take() { return std::move(bytes_); }
  size_t size() const { return bytes_.size(); }

 private:
  std::vector<uint8_t> bytes_;
};

class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint16_t u16() {
    uint16_t lo = u8();
    return uint16_t(lo | (uint16_t(u8()) << 8));
  }
  uint32_t u32() {
    uint32_t lo = u16();
    return lo | (uint32_t(u16()) << 16);
  }
  int32_t i32() { return int32_t(u32()); }
  std::vector<uint8_t> blob(size_t n) {
    need(n);
    std::vector<uint8_t> out(data_ + pos_, data_ + pos_ + n);
    pos_ += n;
    return out;
  }
  size_t offset() const { return pos_; }
  size_t remaining() const { return size_ - pos_; }

 private:
  void need(size_t n) {
    if (size_ - pos_ < n)
      fail(ErrorCode::BitstreamError, "bitstream truncated at byte " + std::to_string(pos_));
  }
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> writeBitstream(const BitstreamContent& content) {
  const BitstreamHeader& h = content.header;
  if (content.patchOccupancy.size() != h.patches.size() || content.unitPayloads.size() != h.units.size())
    fail(ErrorCode::InvalidArgument, "writeBitstream: section counts mismatch");

  ByteWriter w;
  for (char c : kMagic) w.u8(uint8_t(c));
  w.u8(kBitstreamVersion);
  w.u8(h.colorSpace);
  w.u8(h.geomBitDepth);
  w.u8(h.attrBitDepth);
  w.u16(h.viewCount);
  w.u32(h.canvasWidth);
  w.u32(h.canvasHeight);
  w.u8(h.qpI);
  w.u8(h.qpGeom);
  w.u8(h.groupPadding);
  w.u8(h.multiview);
  w.u8(h.lossless);
  w.u8(h.padBlockSize);
  w.u8(h.surfaceThickness);
  w.u8(h.alignment);
  w.u8(h.searchRange);
  w.u16(h.lambdaScale256);

  w.u32(uint32_t(h.patches.size()));
  for (const auto& p : h.patches) {
    w.u8(p.axis);
    w.u8(p.rotation);
    w.i32(p.uvMinU);
    w.i32(p.uvMinV);
    w.i32(p.depthOffset);
    w.u32(p.width);
    w.u32(p.height);
    w.u32(p.canvasX);
    w.u32(p.canvasY);
  }

  w.u32(uint32_t(h.units.size()));
  for (const auto& u : h.units) {
    w.u8(u.kind);
    w.u16(u.view);
    w.u8(u.frame);
    w.u8(uint8_t(u.sliceType));
    w.u8(uint8_t(int8_t(u.level)));
    w.u8(u.qp);
    w.u8(uint8_t(u.refs.size()));
    for (const auto& r : u.refs) {
      w.u16(r.view);
      w.u8(r.frame);
    }
  }

  for (const auto& occ : content.patchOccupancy) {
    w.u32(uint32_t(occ.size()));
    w.blob(occ);
  }
  for (const auto& payload : content.unitPayloads) {
    w.u32(uint32_t(payload.size()));
    w.blob(payload);
  }
  return w.take();
}

BitstreamContent readBitstream(const uint8_t* data, size_t size) {
  ByteReader r(data, size);
  for (char c : kMagic) {
    if (r.u8() != uint8_t(c)) fail(ErrorCode::BitstreamError, "bitstream: bad magic");
  }
  const uint8_t version = r.u8();
  if (version != kBitstreamVersion)
    fail(ErrorCode::BitstreamError, "bitstream: unsupported version " + std::to_string(version));

  BitstreamContent content;
  BitstreamHeader& h = content.header;
  h.colorSpace = r.u8();
  h.geomBitDepth = r.u8();
  h.attrBitDepth = r.u8();
  h.viewCount = r.u16();
  h.canvasWidth = r.u32();
  h.canvasHeight = r.u32();
  h.qpI = r.u8();
  h.qpGeom = r.u8();
  h.groupPadding = r.u8();
  h.multiview = r.u8();
  h.lossless = r.u8();
  h.padBlockSize = r.u8();
  h.surfaceThickness = r.u8();
  h.alignment = r.u8();
  h.searchRange = r.u8();
  h.lambdaScale256 = r.u16();
  if (h.viewCount < 1) fail(ErrorCode::BitstreamError, "bitstream: viewCount must be >= 1");
  if (h.geomBitDepth < 1 || h.geomBitDepth > 16 || h.attrBitDepth < 1 || h.attrBitDepth > 16)
    fail(ErrorCode::BitstreamError, "bitstream: bit depth out of range");
  if (h.canvasWidth > (1u << 16) || h.canvasHeight > (1u << 16) ||
      uint64_t(h.canvasWidth) * h.canvasHeight > (uint64_t(1) << 26))
    fail(ErrorCode::BitstreamError, "bitstream: implausible canvas dimensions");

  const uint32_t patchCount = r.u32();
  if (uint64_t(patchCount) * 30 > r.remaining())
    fail(ErrorCode::BitstreamError, "bitstream: implausible patch count");
  h.patches.resize(patchCount);
  for (auto& p : h.patches) {
    p.axis = r.u8();
    if (p.axis > 5) fail(ErrorCode::BitstreamError, "bitstream: invalid patch axis");
    p.rotation = r.u8();
    if (p.rotation > 3) fail(ErrorCode::BitstreamError, "bitstream: invalid patch rotation");
    p.uvMinU = r.i32();
    p.uvMinV = r.i32();
    p.depthOffset = r.i32();
    p.width = r.u32();
    p.height = r.u32();
    p.canvasX = r.u32();
    p.canvasY = r.u32();
    if (p.width == 0 || p.height == 0) fail(ErrorCode::BitstreamError, "bitstream: empty patch");
  }

  const uint32_t unitCount = r.u32();
  if (uint64_t(unitCount) * 8 > r.remaining())
    fail(ErrorCode::BitstreamError, "bitstream: implausible unit count");
  h.units.resize(unitCount);
  for (auto& u : h.units) {
    u.kind = r.u8();
    if (u.kind > 1) fail(ErrorCode::BitstreamError, "bitstream: invalid unit kind");
    u.view = r.u16();
    u.frame = r.u8();
    const uint8_t type = r.u8();
    if (type > 2) fail(ErrorCode::BitstreamError, "bitstream: invalid slice type");
    u.sliceType = SliceType(type);
    u.level = int8_t(r.u8());
    u.qp = r.u8();
    if (u.qp > 51) fail(ErrorCode::BitstreamError, "bitstream: unit qp out of range");
    const uint8_t refCount = r.u8();
    if (refCount > 2) fail(ErrorCode::BitstreamError, "bitstream: invalid reference count");
    u.refs.resize(refCount);
    for (auto& ref : u.refs) {
      ref.view = r.u16();
      ref.frame = r.u8();
    }
  }

  content.patchOccupancy.resize(patchCount);
  for (auto& occ : content.patchOccupancy) {
    const uint32_t len = r.u32();
    occ = r.blob(len);
  }
  content.unitPayloads.resize(unitCount);
  for (auto& payload : content.unitPayloads) {
    const uint32_t len = r.u32();
    payload = r.blob(len);
  }
  return content;
}

}  // namespace pvpc
