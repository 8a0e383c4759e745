#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "../common.h"

namespace pvpc {

// MSB-first bit writer.
class BitWriter {
 public:
  void writeBit(int bit) {
    if (used_ == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= uint8_t(0x80u >> used_);
    used_ = (used_ + 1) & 7;
    ++bits_;
  }
  void writeBits(uint64_t value, int count) {
    for (int i = count - 1; i >= 0; --i) writeBit(int((value >> i) & 1));
  }
  // Order-0 exponential-Golomb, unsigned.
  void writeUe(uint64_t value) {
    uint64_t v = value + 1;
    int bits = 0;
    for (uint64_t t = v; t > 1; t >>= 1) ++bits;
    for (int i = 0; i < bits; ++i) writeBit(0);
    writeBits(v, bits + 1);
  }
  // Signed exp-Golomb: positive v -> 2v-1, non-positive v -> -2v.
  void writeSe(int64_t value) { writeUe(value > 0 ? uint64_t(2 * value - 1) : uint64_t(-2 * value)); }
  void byteAlign() { used_ = 0; }
  uint64_t bitCount() const { return bits_; }
  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
  int used_ = 0;
  uint64_t bits_ = 0;
};

// Counts bits without materializing them; used for exact rate estimates.
class BitCounter {
 public:
  void writeBit(int) { ++bits_; }
  void writeBits(uint64_t, int count) { bits_ += count; }
  void writeUe(uint64_t value) {
    uint64_t v = value + 1;
    int bits = 0;
    for (uint64_t t = v; t > 1; t >>= 1) ++bits;
    bits_ += 2 * bits + 1;
  }
  void writeSe(int64_t value) { writeUe(value > 0 ? uint64_t(2 * value - 1) : uint64_t(-2 * value)); }
  void byteAlign() {}
  uint64_t bitCount() const { return bits_; }

 private:
  uint64_t bits_ = 0;
};

class BitReader {
 public:
  BitReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

  int readBit() {
    if (pos_ >= size_ * 8) {
      fail(ErrorCode::BitstreamError, "bitstream truncated at byte " + std::to_string(pos_ / 8));
    }
    int bit = (data_[pos_ / 8] >> (7 - (pos_ & 7))) & 1;
    ++pos_;
    return bit;
  }
  uint64_t readBits(int count) {
    uint64_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | uint64_t(readBit());
    return v;
  }
  uint64_t readUe() {
    int zeros = 0;
    while (readBit() == 0) {
      if (++zeros > 62) fail(ErrorCode::BitstreamError, "bitstream: oversized exp-Golomb code");
    }
    uint64_t v = 1;
    for (int i = 0; i < zeros; ++i) v = (v << 1) | uint64_t(readBit());
    return v - 1;
  }
  int64_t readSe() {
    uint64_t u = readUe();
    return (u & 1) ? int64_t((u + 1) / 2) : -int64_t(u / 2);
  }
  void byteAlign() { pos_ = (pos_ + 7) & ~uint64_t(7); }
  uint64_t bitPosition() const { return pos_; }
  size_t byteOffset() const { return size_t(pos_ / 8); }

 private:
  const uint8_t* data_;
  size_t size_;
  uint64_t pos_ = 0;
};

}  // namespace pvpc
