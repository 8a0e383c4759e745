#include "pvpc/pvpc.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <tuple>

#include "core/cloud.h"
#include "core/decoder.h"
#include "core/encoder.h"
#include "core/metrics.h"
#include "core/ply_io.h"
#include "core/structure.h"
#include "core/synthetic.h"

using namespace pvpc;

struct pvpc_cloud {
  PlenopticPointCloud cloud;
};

namespace {

thread_local std::string g_lastError;

pvpc_status statusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyCloud: return PVPC_ERR_EMPTY_CLOUD;
    case ErrorCode::InsufficientPoints: return PVPC_ERR_INSUFFICIENT_POINTS;
    case ErrorCode::MalformedHeader: return PVPC_ERR_MALFORMED_HEADER;
    case ErrorCode::NonIntegerGeometry: return PVPC_ERR_NON_INTEGER_GEOMETRY;
    case ErrorCode::PatchTooWide: return PVPC_ERR_PATCH_TOO_WIDE;
    case ErrorCode::QpOutOfRange: return PVPC_ERR_QP_OUT_OF_RANGE;
    case ErrorCode::SchedulingViolation: return PVPC_ERR_SCHEDULING_VIOLATION;
    case ErrorCode::BitstreamError: return PVPC_ERR_BITSTREAM;
    case ErrorCode::InconsistentAtlas: return PVPC_ERR_INCONSISTENT_ATLAS;
    case ErrorCode::BadView: return PVPC_ERR_BAD_VIEW;
    case ErrorCode::NormalsRequired: return PVPC_ERR_NORMALS_REQUIRED;
    case ErrorCode::NoOverlap: return PVPC_ERR_NO_OVERLAP;
    case ErrorCode::InvalidArgument: return PVPC_ERR_INVALID_ARGUMENT;
    case ErrorCode::IoError: return PVPC_ERR_IO;
  }
  return PVPC_ERR_INTERNAL;
}

template <typename Fn>
pvpc_status guard(Fn&& fn) {
  try {
    fn();
    return PVPC_OK;
  } catch (const Error& e) {
    g_lastError = e.what();
    return statusFor(e.code());
  } catch (const std::exception& e) {
    g_lastError = e.what();
    return PVPC_ERR_INTERNAL;
  }
}

char* dupString(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

EncoderParams toEncoderParams(const pvpc_encoder_params* p) {
  EncoderParams out;
  if (!p) return out;
  out.qpI = p->qp;
  out.qpGeom = p->qp_geom;
  out.multiview = p->multiview != 0;
  out.groupPadding = p->group_padding != 0;
  out.lossless = p->lossless != 0;
  out.canvasWidth = p->canvas_width;
  out.alignment = p->alignment;
  out.padBlockSize = p->pad_block_size;
  out.normalK = p->normal_k;
  out.segmentation.surfaceThickness = p->surface_thickness;
  out.segmentation.minPatchPoints = p->min_patch_points;
  out.segmentation.refinementIterations = p->refinement_iterations;
  out.segmentation.normalAngleThresholdDeg = p->normal_angle_threshold_deg;
  out.searchRange = p->search_range;
  out.lambdaScale256 = int(std::lround(p->lambda_scale * 256.0));
  return out;
}

std::vector<uint8_t> readFileBytes(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, std::string("cannot open '") + path + "' for reading");
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

extern "C" {

void pvpc_encoder_params_init(pvpc_encoder_params* params) {
  if (!params) return;
  EncoderParams d;
  params->qp = d.qpI;
  params->qp_geom = d.qpGeom;
  params->multiview = d.multiview ? 1 : 0;
  params->group_padding = d.groupPadding ? 1 : 0;
  params->lossless = d.lossless ? 1 : 0;
  params->canvas_width = d.canvasWidth;
  params->alignment = d.alignment;
  params->pad_block_size = d.padBlockSize;
  params->surface_thickness = d.segmentation.surfaceThickness;
  params->min_patch_points = d.segmentation.minPatchPoints;
  params->refinement_iterations = d.segmentation.refinementIterations;
  params->normal_angle_threshold_deg = d.segmentation.normalAngleThresholdDeg;
  params->normal_k = d.normalK;
  params->search_range = d.searchRange;
  params->lambda_scale = d.lambdaScale256 / 256.0;
}

pvpc_status pvpc_cloud_load_ply(const char* path, pvpc_cloud** out) {
  return guard([&] {
    if (!path || !out) fail(ErrorCode::InvalidArgument, "null argument");
    auto* handle = new pvpc_cloud{readPlenopticPlyFile(path)};
    *out = handle;
  });
}

pvpc_status pvpc_cloud_save_ply(const pvpc_cloud* cloud, const char* path, int binary) {
  return guard([&] {
    if (!cloud || !path) fail(ErrorCode::InvalidArgument, "null argument");
    writePlenopticPlyFile(cloud->cloud, binary ? PlyFormat::BinaryLittleEndian : PlyFormat::Ascii, path);
  });
}

pvpc_status pvpc_cloud_synthesize(const char* shape, uint64_t point_count, uint32_t view_count,
                                  double view_correlation, uint64_t seed, pvpc_cloud** out) {
  return guard([&] {
    if (!shape || !out) fail(ErrorCode::InvalidArgument, "null argument");
    *out = new pvpc_cloud{generateSynthetic(parseShape(shape), point_count, view_count, view_correlation, seed)};
  });
}

void pvpc_cloud_free(pvpc_cloud* cloud) { delete cloud; }

uint64_t pvpc_cloud_point_count(const pvpc_cloud* cloud) { return cloud ? cloud->cloud.pointCount() : 0; }
uint32_t pvpc_cloud_view_count(const pvpc_cloud* cloud) { return cloud ? cloud->cloud.viewCount : 0; }
int pvpc_cloud_geom_bit_depth(const pvpc_cloud* cloud) { return cloud ? cloud->cloud.geomBitDepth : 0; }
int pvpc_cloud_attr_bit_depth(const pvpc_cloud* cloud) { return cloud ? cloud->cloud.attrBitDepth : 0; }

pvpc_status pvpc_cloud_point(const pvpc_cloud* cloud, uint64_t index, int32_t xyz[3]) {
  return guard([&] {
    if (!cloud || !xyz) fail(ErrorCode::InvalidArgument, "null argument");
    if (index >= cloud->cloud.pointCount()) fail(ErrorCode::InvalidArgument, "point index out of range");
    for (int a = 0; a < 3; ++a) xyz[a] = cloud->cloud.points[size_t(index)][a];
  });
}

pvpc_status pvpc_cloud_color(const pvpc_cloud* cloud, uint64_t index, uint32_t view, uint16_t rgb[3]) {
  return guard([&] {
    if (!cloud || !rgb) fail(ErrorCode::InvalidArgument, "null argument");
    if (index >= cloud->cloud.pointCount()) fail(ErrorCode::InvalidArgument, "point index out of range");
    if (view >= cloud->cloud.viewCount) fail(ErrorCode::BadView, "view index out of range");
    const Color& c = cloud->cloud.color(size_t(index), view);
    for (int a = 0; a < 3; ++a) rgb[a] = c[a];
  });
}

pvpc_status pvpc_encode_file(const pvpc_cloud* cloud, const char* bitstream_path, const pvpc_encoder_params* params,
                             pvpc_encode_stats* stats_out, char** report_out) {
  return guard([&] {
    if (!cloud || !bitstream_path) fail(ErrorCode::InvalidArgument, "null argument");
    EncodeResult result = encodeCloud(cloud->cloud, toEncoderParams(params));
    std::ofstream out(bitstream_path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, std::string("cannot open '") + bitstream_path + "' for writing");
    out.write(reinterpret_cast<const char*>(result.bitstream.data()), std::streamsize(result.bitstream.size()));
    if (!out) fail(ErrorCode::IoError, "bitstream write failure");
    if (stats_out) {
      const EncodeStats& s = result.stats;
      *stats_out = {s.pointCount, s.viewCount,    s.patchCount, s.unassignedPoints, s.missedPoints,
                    s.canvasWidth, s.canvasHeight, s.headerBits, s.occupancyBits,    s.geomBits,
                    s.attrBits,    s.totalBits};
    }
    if (report_out) *report_out = dupString(formatStatsReport(result.stats, bitstream_path));
  });
}

pvpc_status pvpc_decode_file(const char* bitstream_path, pvpc_cloud** out) {
  return guard([&] {
    if (!bitstream_path || !out) fail(ErrorCode::InvalidArgument, "null argument");
    const auto bytes = readFileBytes(bitstream_path);
    *out = new pvpc_cloud{reconstructCloud(decodeBitstream(bytes.data(), bytes.size()))};
  });
}

pvpc_status pvpc_bitstream_probe(const char* bitstream_path, pvpc_bitstream_info* out) {
  return guard([&] {
    if (!bitstream_path || !out) fail(ErrorCode::InvalidArgument, "null argument");
    const auto bytes = readFileBytes(bitstream_path);
    const BitstreamHeader h = readBitstream(bytes.data(), bytes.size()).header;
    *out = {h.viewCount,  h.qpI,          h.qpGeom,       h.multiview != 0,       h.groupPadding != 0,
            h.lossless != 0, h.canvasWidth, h.canvasHeight, uint32_t(h.patches.size())};
  });
}

pvpc_status pvpc_evaluate_file(const pvpc_cloud* reference, const char* bitstream_path, pvpc_rd_point* out) {
  return guard([&] {
    if (!reference || !bitstream_path || !out) fail(ErrorCode::InvalidArgument, "null argument");
    const auto bytes = readFileBytes(bitstream_path);
    BitstreamContent content = readBitstream(bytes.data(), bytes.size());
    PlenopticPointCloud decoded = reconstructCloud(decodeBitstream(bytes.data(), bytes.size()));

    RdPoint rd;
    rd.totalBits = double(bytes.size()) * 8.0;
    for (size_t i = 0; i < content.header.units.size(); ++i) {
      const double bits = double(content.unitPayloads[i].size()) * 8.0;
      (content.header.units[i].kind == 0 ? rd.geomBits : rd.attrBits) += bits;
    }

    const PlenopticPointCloud& ref = reference->cloud;
    double y = 0, cb = 0, cr = 0;
    for (uint32_t v = 0; v < ref.viewCount; ++v) {
      const Psnr3 p = attributePsnr(ref, decoded, v);
      y += p.y;
      cb += p.cb;
      cr += p.cr;
    }
    rd.psnrY = y / ref.viewCount;
    rd.psnrCb = cb / ref.viewCount;
    rd.psnrCr = cr / ref.viewCount;

    const int k = std::max(3, std::min(16, int(ref.pointCount()) - 1));
    const NormalSet normals = estimateNormals(ref, k);
    const auto [d1, d2] = geometryD1D2(ref, decoded, normals);
    rd.d1 = d1;
    rd.d2 = d2;
    *out = {rd.totalBits, rd.attrBits, rd.geomBits, rd.psnrY, rd.psnrCb, rd.psnrCr, rd.d1, rd.d2};
  });
}

pvpc_status pvpc_attribute_psnr(const pvpc_cloud* reference, const pvpc_cloud* distorted, uint32_t view,
                                double psnr_ycbcr[3]) {
  return guard([&] {
    if (!reference || !distorted || !psnr_ycbcr) fail(ErrorCode::InvalidArgument, "null argument");
    const Psnr3 p = attributePsnr(reference->cloud, distorted->cloud, view);
    psnr_ycbcr[0] = p.y;
    psnr_ycbcr[1] = p.cb;
    psnr_ycbcr[2] = p.cr;
  });
}

pvpc_status pvpc_geometry_psnr(const pvpc_cloud* reference, const pvpc_cloud* distorted, double* d1, double* d2) {
  return guard([&] {
    if (!reference || !distorted || !d1 || !d2) fail(ErrorCode::InvalidArgument, "null argument");
    const PlenopticPointCloud& ref = reference->cloud;
    const int k = std::max(3, std::min(16, int(ref.pointCount()) - 1));
    const NormalSet normals = estimateNormals(ref, k);
    std::tie(*d1, *d2) = geometryD1D2(ref, distorted->cloud, normals);
  });
}

pvpc_status pvpc_bd_rate(const double* anchor_bits, const double* anchor_psnr, size_t anchor_count,
                         const double* test_bits, const double* test_psnr, size_t test_count, double* percent_out,
                         int* low_order_out) {
  return guard([&] {
    if (!anchor_bits || !anchor_psnr || !test_bits || !test_psnr || !percent_out)
      fail(ErrorCode::InvalidArgument, "null argument");
    std::vector<std::pair<double, double>> anchor, test;
    for (size_t i = 0; i < anchor_count; ++i) anchor.push_back({anchor_bits[i], anchor_psnr[i]});
    for (size_t i = 0; i < test_count; ++i) test.push_back({test_bits[i], test_psnr[i]});
    const BdResult r = bdRate(anchor, test);
    *percent_out = r.percent;
    if (low_order_out) *low_order_out = r.lowOrder ? 1 : 0;
  });
}

pvpc_status pvpc_coding_structure_dump(uint32_t view_count, int qp, char** text_out) {
  return guard([&] {
    if (!text_out) fail(ErrorCode::InvalidArgument, "null argument");
    *text_out = dupString(dumpCodingStructure(buildCodingStructure(view_count, qp)));
  });
}

void pvpc_string_free(char* text) { delete[] text; }

const char* pvpc_last_error_message(void) { return g_lastError.c_str(); }

const char* pvpc_status_name(pvpc_status status) {
  switch (status) {
    case PVPC_OK: return "OK";
    case PVPC_ERR_EMPTY_CLOUD: return "EmptyCloud";
    case PVPC_ERR_INSUFFICIENT_POINTS: return "InsufficientPoints";
    case PVPC_ERR_MALFORMED_HEADER: return "MalformedHeader";
    case PVPC_ERR_NON_INTEGER_GEOMETRY: return "NonIntegerGeometry";
    case PVPC_ERR_PATCH_TOO_WIDE: return "PatchTooWide";
    case PVPC_ERR_QP_OUT_OF_RANGE: return "QpOutOfRange";
    case PVPC_ERR_SCHEDULING_VIOLATION: return "SchedulingViolation";
    case PVPC_ERR_BITSTREAM: return "BitstreamError";
    case PVPC_ERR_INCONSISTENT_ATLAS: return "InconsistentAtlas";
    case PVPC_ERR_BAD_VIEW: return "BadView";
    case PVPC_ERR_NORMALS_REQUIRED: return "NormalsRequired";
    case PVPC_ERR_NO_OVERLAP: return "NoOverlap";
    case PVPC_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case PVPC_ERR_IO: return "IoError";
    case PVPC_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

}  // extern "C"
