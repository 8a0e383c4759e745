#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cloud.h"

namespace pvpc {

enum class PlyFormat { Ascii, BinaryLittleEndian };

struct PlyProperty {
  std::string name;
  std::string type;
};

struct PlyHeaderInfo {
  PlyFormat format = PlyFormat::Ascii;
  uint64_t vertexCount = 0;
  uint32_t viewCount = 1;
  std::vector<PlyProperty> propertyOrder;  // vertex element properties, declaration order
};

// Parses the header only (through "end_header"); the stream is left at the
// first data byte. Validates coordinate and color-triplet completeness.
PlyHeaderInfo parsePlyHeader(std::istream& in);

// Reads a plenoptic PLY: x,y,z plus either bare red/green/blue (one view) or
// red_k/green_k/blue_k triplets for views k = 0..N-1. Duplicate coordinates
// are merged with round-half-up color averaging.
PlenopticPointCloud readPlenopticPly(std::istream& in);
PlenopticPointCloud readPlenopticPlyFile(const std::string& path);

void writePlenopticPly(const PlenopticPointCloud& cloud, PlyFormat format, std::ostream& out);
void writePlenopticPlyFile(const PlenopticPointCloud& cloud, PlyFormat format, const std::string& path);

}  // namespace pvpc
