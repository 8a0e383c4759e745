#include "occupancy.h"

#include "bitio.h"

namespace pvpc {

std::vector<uint8_t> encodeOccupancy(const BinaryMap& map) {
  BitWriter writer;
  writer.writeBits(map.width, 32);
  writer.writeBits(map.height, 32);
  const size_t cells = map.bits.size();
  if (cells > 0) {
    uint8_t current = map.bits[0] ? 1 : 0;
    writer.writeBit(current);
    uint64_t run = 0;
    for (size_t i = 0; i < cells; ++i) {
      const uint8_t bit = map.bits[i] ? 1 : 0;
      if (bit == current) {
        ++run;
      } else {
        writer.writeUe(run - 1);
        current = bit;
        run = 1;
      }
    }
    writer.writeUe(run - 1);
  }
  writer.byteAlign();
  return writer.take();
}

BinaryMap decodeOccupancy(const uint8_t* data, size_t size) {
  BitReader reader(data, size);
  const uint32_t w = uint32_t(reader.readBits(32));
  const uint32_t h = uint32_t(reader.readBits(32));
  if (uint64_t(w) * h > (uint64_t(1) << 26))
    fail(ErrorCode::BitstreamError, "occupancy: implausible dimensions");
  BinaryMap map(w, h);
  const size_t cells = map.bits.size();
  if (cells == 0) return map;
  uint8_t current = uint8_t(reader.readBit());
  size_t pos = 0;
  while (pos < cells) {
    const uint64_t run = reader.readUe() + 1;
    if (run > cells - pos) fail(ErrorCode::BitstreamError, "occupancy: run exceeds cell count");
    for (uint64_t i = 0; i < run; ++i) map.bits[pos++] = current;
    current ^= 1;
  }
  return map;
}

}  // namespace pvpc
