#include "ply_io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace pvpc {

static_assert(std::endian::native == std::endian::little, "binary PLY path assumes a little-endian host");

namespace {

int scalarSize(const std::string& type) {
  if (type == "char" || type == "int8" || type == "uchar" || type == "uint8") return 1;
  if (type == "short" || type == "int16" || type == "ushort" || type == "uint16") return 2;
  if (type == "int" || type == "int32" || type == "uint" || type == "uint32" || type == "float" ||
      type == "float32")
    return 4;
  if (type == "double" || type == "float64") return 8;
  return 0;
}

bool isFloatType(const std::string& type) {
  return type == "float" || type == "float32" || type == "double" || type == "float64";
}

// Returns view index for a color property name, or -1 if not a color property.
// component out-param: 0=red 1=green 2=blue. Bare names map to view 0.
int colorView(const std::string& name, int& component) {
  static const std::array<std::string, 3> bases = {"red", "green", "blue"};
  for (int c = 0; c < 3; ++c) {
    const std::string& base = bases[c];
    if (name == base) {
      component = c;
      return 0;
    }
    if (name.size() > base.size() + 1 && name.compare(0, base.size(), base) == 0 &&
        name[base.size()] == '_') {
      const std::string suffix = name.substr(base.size() + 1);
      if (suffix.empty() || !std::all_of(suffix.begin(), suffix.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        return -1;
      component = c;
      return std::stoi(suffix);
    }
  }
  return -1;
}

struct VertexLayout {
  int coordProp[3] = {-1, -1, -1};                 // property index of x, y, z
  std::vector<std::array<int, 3>> colorProps;      // per view: property index of r, g, b
  std::vector<int> propSize;
  std::vector<bool> propFloat;
  bool bareColorNames = false;
};

VertexLayout analyzeVertexProperties(const std::vector<PlyProperty>& props) {
  VertexLayout layout;
  std::map<int, std::array<int, 3>> viewProps;
  bool sawBare = false, sawSuffixed = false;

  for (size_t i = 0; i < props.size(); ++i) {
    const auto& p = props[i];
    layout.propSize.push_back(scalarSize(p.type));
    layout.propFloat.push_back(isFloatType(p.type));
    if (layout.propSize.back() == 0)
      fail(ErrorCode::MalformedHeader, "ply: unsupported property type '" + p.type + "'");

    if (p.name == "x" || p.name == "y" || p.name == "z") {
      int axis = p.name[0] - 'x';
      if (layout.coordProp[axis] >= 0) fail(ErrorCode::MalformedHeader, "ply: duplicate coordinate property");
      layout.coordProp[axis] = int(i);
      continue;
    }
    int component = 0;
    int view = colorView(p.name, component);
    if (view < 0) continue;  // unrelated scalar property, skipped at read time
    (p.name == "red" || p.name == "green" || p.name == "blue") ? sawBare = true : sawSuffixed = true;
    if (p.type != "uchar" && p.type != "uint8" && p.type != "ushort" && p.type != "uint16")
      fail(ErrorCode::MalformedHeader, "ply: color property '" + p.name + "' must be uchar or ushort");
    auto& slots = viewProps.try_emplace(view, std::array<int, 3>{-1, -1, -1}).first->second;
    if (slots[component] >= 0) fail(ErrorCode::MalformedHeader, "ply: duplicate color property '" + p.name + "'");
    slots[component] = int(i);
  }

  if (sawBare && sawSuffixed)
    fail(ErrorCode::MalformedHeader, "ply: mixed bare and suffixed color property names");
  layout.bareColorNames = sawBare;

  for (int a = 0; a < 3; ++a) {
    if (layout.coordProp[a] < 0) {
      fail(ErrorCode::MalformedHeader, std::string("ply: missing coordinate property '") + char('x' + a) + "'");
    }
  }
  if (viewProps.empty()) fail(ErrorCode::MalformedHeader, "ply: no color properties found");
  const int viewCount = viewProps.rbegin()->first + 1;
  layout.colorProps.resize(viewCount);
  for (int v = 0; v < viewCount; ++v) {
    auto it = viewProps.find(v);
    if (it == viewProps.end())
      fail(ErrorCode::MalformedHeader, "ply: color triplet missing for view " + std::to_string(v));
    for (int c = 0; c < 3; ++c) {
      if (it->second[c] < 0)
        fail(ErrorCode::MalformedHeader, "ply: incomplete color triplet for view " + std::to_string(v));
    }
    layout.colorProps[v] = it->second;
  }
  return layout;
}

struct HeaderParse {
  PlyHeaderInfo info;
  VertexLayout layout;
  // Elements declared before the vertex element: (instance count, per-property sizes).
  std::vector<std::pair<uint64_t, std::vector<int>>> leadingElements;
  int geomBitDepth = 0;  // from "comment geom_bit_depth N", 0 = infer from data
  int attrBitDepth = 0;
};

HeaderParse parseHeaderInternal(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::MalformedHeader, "ply: empty stream");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ply") fail(ErrorCode::MalformedHeader, "ply: missing magic line");

  HeaderParse parse;
  bool haveFormat = false, inVertex = false, vertexSeen = false, ended = false;
  std::vector<int>* currentSkipSizes = nullptr;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "comment") {
      std::string key;
      int value = 0;
      if (ls >> key >> value) {
        if (key == "geom_bit_depth") parse.geomBitDepth = value;
        if (key == "attr_bit_depth") parse.attrBitDepth = value;
      }
      continue;
    }
    if (tok.empty() || tok == "obj_info") continue;
    if (tok == "format") {
      std::string fmt, ver;
      ls >> fmt >> ver;
      if (fmt == "ascii") {
        parse.info.format = PlyFormat::Ascii;
      } else if (fmt == "binary_little_endian") {
        parse.info.format = PlyFormat::BinaryLittleEndian;
      } else {
        fail(ErrorCode::MalformedHeader, "ply: unsupported format '" + fmt + "'");
      }
      haveFormat = true;
    } else if (tok == "element") {
      std::string name;
      uint64_t count = 0;
      ls >> name >> count;
      if (name == "vertex") {
        if (vertexSeen) fail(ErrorCode::MalformedHeader, "ply: duplicate vertex element");
        parse.info.vertexCount = count;
        inVertex = true;
        vertexSeen = true;
        currentSkipSizes = nullptr;
      } else {
        inVertex = false;
        if (!vertexSeen) {
          parse.leadingElements.emplace_back(count, std::vector<int>{});
          currentSkipSizes = &parse.leadingElements.back().second;
        } else {
          currentSkipSizes = nullptr;  // trailing elements are ignored entirely
        }
      }
    } else if (tok == "property") {
      std::string type;
      ls >> type;
      if (type == "list") {
        if (inVertex) fail(ErrorCode::MalformedHeader, "ply: list properties are not supported on vertices");
        if (currentSkipSizes) currentSkipSizes->push_back(-1);
        continue;
      }
      std::string name;
      ls >> name;
      if (inVertex) {
        parse.info.propertyOrder.push_back({name, type});
      } else if (currentSkipSizes) {
        int size = scalarSize(type);
        if (size == 0) fail(ErrorCode::MalformedHeader, "ply: unsupported property type '" + type + "'");
        currentSkipSizes->push_back(size);
      }
    } else if (tok == "end_header") {
      ended = true;
      break;
    } else {
      fail(ErrorCode::MalformedHeader, "ply: unrecognized header line '" + line + "'");
    }
  }
  if (!ended) fail(ErrorCode::MalformedHeader, "ply: missing end_header");
  if (!haveFormat) fail(ErrorCode::MalformedHeader, "ply: missing format line");
  if (!vertexSeen) fail(ErrorCode::MalformedHeader, "ply: missing vertex element");

  parse.layout = analyzeVertexProperties(parse.info.propertyOrder);
  parse.info.viewCount = uint32_t(parse.layout.colorProps.size());
  return parse;
}

double readBinaryScalar(std::istream& in, const std::string& type) {
  auto read = [&](auto value) -> double {
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(value)))
      fail(ErrorCode::MalformedHeader, "ply: truncated binary vertex data");
    return double(value);
  };
  if (type == "char" || type == "int8") return read(int8_t{});
  if (type == "uchar" || type == "uint8") return read(uint8_t{});
  if (type == "short" || type == "int16") return read(int16_t{});
  if (type == "ushort" || type == "uint16") return read(uint16_t{});
  if (type == "int" || type == "int32") return read(int32_t{});
  if (type == "uint" || type == "uint32") return read(uint32_t{});
  if (type == "float" || type == "float32") return read(float{});
  return read(double{});
}

double readAsciiScalar(std::istream& in) {
  double v;
  if (!(in >> v)) fail(ErrorCode::MalformedHeader, "ply: truncated ascii vertex data");
  return v;
}

int32_t toIntegerCoord(double v, bool fromFloat) {
  double r = std::nearbyint(v);
  if (fromFloat && std::abs(v - r) > 1e-9)
    fail(ErrorCode::NonIntegerGeometry, "ply: non-integral float coordinate " + std::to_string(v));
  if (r < 0 || r > double(INT32_MAX)) fail(ErrorCode::NonIntegerGeometry, "ply: coordinate out of range");
  return int32_t(r);
}

int bitDepthFor(int64_t maxValue, int floor) {
  int bits = floor;
  while ((int64_t(1) << bits) <= maxValue) ++bits;
  return bits;
}

}  // namespace

PlyHeaderInfo parsePlyHeader(std::istream& in) { return parseHeaderInternal(in).info; }

PlenopticPointCloud readPlenopticPly(std::istream& in) {
  HeaderParse parse = parseHeaderInternal(in);
  const auto& layout = parse.layout;
  const uint32_t viewCount = parse.info.viewCount;
  const size_t propCount = parse.info.propertyOrder.size();

  // Skip any elements declared ahead of the vertex element.
  for (const auto& [count, sizes] : parse.leadingElements) {
    if (parse.info.format == PlyFormat::Ascii) {
      for (uint64_t i = 0; i < count; ++i) {
        for (size_t p = 0; p < sizes.size(); ++p) {
          if (sizes[p] < 0) {
            double n = readAsciiScalar(in);
            for (int64_t j = 0; j < int64_t(n); ++j) readAsciiScalar(in);
          } else {
            readAsciiScalar(in);
          }
        }
      }
    } else {
      for (int size : sizes) {
        if (size < 0) fail(ErrorCode::MalformedHeader, "ply: cannot skip binary list element before vertices");
      }
      int64_t bytes = 0;
      for (int size : sizes) bytes += size;
      in.ignore(std::streamsize(bytes * count));
    }
  }

  PlenopticPointCloud cloud;
  cloud.viewCount = viewCount;
  cloud.points.reserve(parse.info.vertexCount);
  cloud.colors.reserve(parse.info.vertexCount * viewCount);

  std::vector<double> row(propCount);
  int64_t maxColor = 0;
  for (uint64_t i = 0; i < parse.info.vertexCount; ++i) {
    for (size_t p = 0; p < propCount; ++p) {
      row[p] = parse.info.format == PlyFormat::Ascii
                   ? readAsciiScalar(in)
                   : readBinaryScalar(in, parse.info.propertyOrder[p].type);
    }
    Vec3i pt;
    for (int a = 0; a < 3; ++a) {
      int prop = layout.coordProp[a];
      pt[a] = toIntegerCoord(row[prop], layout.propFloat[prop]);
    }
    cloud.points.push_back(pt);
    for (uint32_t v = 0; v < viewCount; ++v) {
      Color c;
      for (int comp = 0; comp < 3; ++comp) {
        double value = row[layout.colorProps[v][comp]];
        c[comp] = uint16_t(value);
        maxColor = std::max(maxColor, int64_t(value));
      }
      cloud.colors.push_back(c);
    }
  }

  if (parse.geomBitDepth >= 1 && parse.geomBitDepth <= 16) {
    cloud.geomBitDepth = parse.geomBitDepth;
  } else {
    int64_t maxCoord = 0;
    for (const auto& p : cloud.points) maxCoord = std::max({maxCoord, int64_t(p[0]), int64_t(p[1]), int64_t(p[2])});
    cloud.geomBitDepth = bitDepthFor(maxCoord, 4);
  }
  if (parse.attrBitDepth >= 1 && parse.attrBitDepth <= 16) {
    cloud.attrBitDepth = parse.attrBitDepth;
  } else {
    cloud.attrBitDepth = maxColor > 255 ? 16 : 8;
  }
  return mergeDuplicates(std::move(cloud));
}

PlenopticPointCloud readPlenopticPlyFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  return readPlenopticPly(in);
}

void writePlenopticPly(const PlenopticPointCloud& cloud, PlyFormat format, std::ostream& out) {
  validateCloud(cloud);
  const bool wideColor = cloud.attrBitDepth > 8;
  const char* colorType = wideColor ? "ushort" : "uchar";

  out << "ply\n";
  out << "format " << (format == PlyFormat::Ascii ? "ascii" : "binary_little_endian") << " 1.0\n";
  out << "comment geom_bit_depth " << cloud.geomBitDepth << "\n";
  out << "comment attr_bit_depth " << cloud.attrBitDepth << "\n";
  out << "element vertex " << cloud.pointCount() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  if (cloud.viewCount == 1) {
    out << "property " << colorType << " red\n";
    out << "property " << colorType << " green\n";
    out << "property " << colorType << " blue\n";
  } else {
    for (uint32_t v = 0; v < cloud.viewCount; ++v) {
      out << "property " << colorType << " red_" << v << "\n";
      out << "property " << colorType << " green_" << v << "\n";
      out << "property " << colorType << " blue_" << v << "\n";
    }
  }
  out << "end_header\n";

  if (format == PlyFormat::Ascii) {
    for (size_t i = 0; i < cloud.pointCount(); ++i) {
      const auto& p = cloud.points[i];
      out << p[0] << ' ' << p[1] << ' ' << p[2];
      for (uint32_t v = 0; v < cloud.viewCount; ++v) {
        const Color& c = cloud.color(i, v);
        out << ' ' << c[0] << ' ' << c[1] << ' ' << c[2];
      }
      out << '\n';
    }
  } else {
    for (size_t i = 0; i < cloud.pointCount(); ++i) {
      float xyz[3] = {float(cloud.points[i][0]), float(cloud.points[i][1]), float(cloud.points[i][2])};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
      for (uint32_t v = 0; v < cloud.viewCount; ++v) {
        const Color& c = cloud.color(i, v);
        for (int comp = 0; comp < 3; ++comp) {
          if (wideColor) {
            uint16_t value = c[comp];
            out.write(reinterpret_cast<const char*>(&value), 2);
          } else {
            uint8_t value = uint8_t(c[comp]);
            out.write(reinterpret_cast<const char*>(&value), 1);
          }
        }
      }
    }
  }
  if (!out) fail(ErrorCode::IoError, "ply: write failure");
}

void writePlenopticPlyFile(const PlenopticPointCloud& cloud, PlyFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  writePlenopticPly(cloud, format, out);
}

}  // namespace pvpc
