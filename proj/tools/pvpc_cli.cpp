#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pvpc/pvpc.h"

namespace {

[[noreturn]] void die(pvpc_status status, const std::string& what) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", what.c_str(), pvpc_last_error_message(), pvpc_status_name(status));
  std::exit(int(status));
}

void check(pvpc_status status, const std::string& what) {
  if (status != PVPC_OK) die(status, what);
}

struct CloudHandle {
  pvpc_cloud* ptr = nullptr;
  ~CloudHandle() { pvpc_cloud_free(ptr); }
};

std::vector<int> parseSweep(const std::string& text) {
  std::vector<int> qps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) qps.push_back(std::stoi(item));
  }
  for (size_t i = 1; i < qps.size(); ++i) {
    if (qps[i] <= qps[i - 1]) {
      std::fprintf(stderr, "error: --sweep values must be strictly increasing\n");
      std::exit(2);
    }
  }
  return qps;
}

constexpr const char* kCsvHeader = "input,qp,mode,groupPadding,totalBits,attrBits,geomBits,psnrY,psnrCb,psnrCr,d1,d2";

void appendCsvRow(const std::string& path, const std::string& input, const pvpc_bitstream_info& info,
                  const pvpc_rd_point& rd) {
  bool needHeader = true;
  {
    std::ifstream probe(path);
    needHeader = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
  }
  std::ofstream out(path, std::ios::app);
  if (!out) {
    std::fprintf(stderr, "error: cannot open '%s' for writing\n", path.c_str());
    std::exit(1);
  }
  if (needHeader) out << kCsvHeader << '\n';
  char row[512];
  std::snprintf(row, sizeof(row), "%s,%d,%s,%s,%.0f,%.0f,%.0f,%.4f,%.4f,%.4f,%.4f,%.4f", input.c_str(), info.qp,
                info.multiview ? "multiview" : "independent-intra", info.group_padding ? "on" : "off", rd.total_bits,
                rd.attr_bits, rd.geom_bits, rd.psnr_y, rd.psnr_cb, rd.psnr_cr, rd.d1, rd.d2);
  out << row << '\n';
}

struct EncodeOptions {
  std::string input, output, report;
  pvpc_encoder_params params{};
  std::string mode = "multiview";
  std::string groupPadding = "on";

  void apply() {
    if (mode != "multiview" && mode != "independent-intra") {
      std::fprintf(stderr, "error: --mode must be multiview or independent-intra\n");
      std::exit(2);
    }
    if (groupPadding != "on" && groupPadding != "off") {
      std::fprintf(stderr, "error: --group-padding must be on or off\n");
      std::exit(2);
    }
    params.multiview = mode == "multiview" ? 1 : 0;
    params.group_padding = groupPadding == "on" ? 1 : 0;
  }
};

void addEncodeFlags(CLI::App* cmd, EncodeOptions& opts) {
  cmd->add_option("--qp", opts.params.qp, "I-anchor QP (0..44)");
  cmd->add_option("--mode", opts.mode, "multiview or independent-intra");
  cmd->add_option("--group-padding", opts.groupPadding, "on or off");
  cmd->add_flag("--lossless", opts.params.lossless, "transform/quant bypass, exact reconstruction");
  cmd->add_option("--canvas-width", opts.params.canvas_width, "packing canvas width in pixels");
  cmd->add_option("--alignment", opts.params.alignment, "packing grid alignment in pixels");
  cmd->add_option("--search-range", opts.params.search_range, "motion search range in pixels");
  cmd->add_option("--qp-geom", opts.params.qp_geom, "geometry QP (-1 derives qp-4)");
  cmd->add_option("--surface-thickness", opts.params.surface_thickness, "projection surface thickness");
  cmd->add_option("--min-patch-points", opts.params.min_patch_points, "minimum cluster size kept as a patch");
}

void runEncode(const EncodeOptions& optsIn) {
  EncodeOptions opts = optsIn;
  opts.apply();
  CloudHandle cloud;
  check(pvpc_cloud_load_ply(opts.input.c_str(), &cloud.ptr), "load '" + opts.input + "'");
  char* report = nullptr;
  pvpc_encode_stats stats{};
  check(pvpc_encode_file(cloud.ptr, opts.output.c_str(), &opts.params, &stats, opts.report.empty() ? nullptr : &report),
        "encode '" + opts.input + "'");
  if (report) {
    std::ofstream out(opts.report);
    out << report;
    pvpc_string_free(report);
  }
  std::printf("encoded %" PRIu64 " points, %u views -> %" PRIu64 " bits (%u patches, %" PRIu64 " missed)\n",
              stats.point_count, stats.view_count, stats.total_bits, stats.patch_count, stats.missed_points);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pvpc - video-based plenoptic point cloud codec"};
  app.require_subcommand(1);

  // synth
  std::string synthShape = "cube", synthOutput;
  uint64_t synthPoints = 10000, synthSeed = 1;
  uint32_t synthViews = 2;
  double synthRho = 0.9;
  auto* synth = app.add_subcommand("synth", "generate a synthetic plenoptic cloud");
  synth->add_option("--shape", synthShape, "cube, sphere, or plane");
  synth->add_option("--points", synthPoints, "target point count");
  synth->add_option("--views", synthViews, "view count");
  synth->add_option("--rho", synthRho, "inter-view correlation in [0,1]");
  synth->add_option("--seed", synthSeed, "texture seed");
  synth->add_option("--output", synthOutput, "output PLY path")->required();

  // encode
  EncodeOptions enc;
  pvpc_encoder_params_init(&enc.params);
  auto* encode = app.add_subcommand("encode", "encode a plenoptic PLY into a PVPC bitstream");
  encode->add_option("--input", enc.input, "input PLY")->required();
  encode->add_option("--output", enc.output, "output bitstream")->required();
  encode->add_option("--report", enc.report, "write key=value stats report");
  addEncodeFlags(encode, enc);

  // decode
  std::string decInput, decOutput;
  bool decAscii = false;
  auto* decode = app.add_subcommand("decode", "decode a PVPC bitstream to a PLY");
  decode->add_option("--input", decInput, "input bitstream")->required();
  decode->add_option("--output", decOutput, "output PLY")->required();
  decode->add_flag("--ascii", decAscii, "write ASCII PLY instead of binary");

  // eval
  std::string evalInput, evalBitstream, evalOutput;
  auto* eval = app.add_subcommand("eval", "decode and score a bitstream against its reference");
  eval->add_option("--input", evalInput, "reference PLY")->required();
  eval->add_option("--bitstream", evalBitstream, "bitstream to evaluate")->required();
  eval->add_option("--output", evalOutput, "CSV file to append the RD row to")->required();

  // sweep
  EncodeOptions sweepOpts;
  pvpc_encoder_params_init(&sweepOpts.params);
  std::string sweepList = "22,27,32,37,42", sweepWorkdir = ".";
  auto* sweep = app.add_subcommand("sweep", "encode and evaluate an RD sweep over qp values");
  sweep->add_option("--input", sweepOpts.input, "input PLY")->required();
  sweep->add_option("--output", sweepOpts.output, "CSV file to append RD rows to")->required();
  sweep->add_option("--sweep", sweepList, "comma-separated, strictly increasing qp list");
  sweep->add_option("--workdir", sweepWorkdir, "directory for the sweep bitstreams");
  addEncodeFlags(sweep, sweepOpts);

  // structure
  uint32_t structViews = 13;
  int structQp = 32;
  std::string structOutput;
  auto* structure = app.add_subcommand("structure", "print the multiview coding structure table");
  structure->add_option("--views", structViews, "view count");
  structure->add_option("--qp", structQp, "I-anchor QP");
  structure->add_option("--output", structOutput, "write the table to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    CloudHandle cloud;
    check(pvpc_cloud_synthesize(synthShape.c_str(), synthPoints, synthViews, synthRho, synthSeed, &cloud.ptr),
          "synthesize");
    check(pvpc_cloud_save_ply(cloud.ptr, synthOutput.c_str(), 1), "save '" + synthOutput + "'");
    std::printf("wrote %" PRIu64 " points, %u views to %s\n", pvpc_cloud_point_count(cloud.ptr),
                pvpc_cloud_view_count(cloud.ptr), synthOutput.c_str());
  } else if (encode->parsed()) {
    runEncode(enc);
  } else if (decode->parsed()) {
    CloudHandle cloud;
    check(pvpc_decode_file(decInput.c_str(), &cloud.ptr), "decode '" + decInput + "'");
    check(pvpc_cloud_save_ply(cloud.ptr, decOutput.c_str(), decAscii ? 0 : 1), "save '" + decOutput + "'");
    std::printf("decoded %" PRIu64 " points, %u views to %s\n", pvpc_cloud_point_count(cloud.ptr),
                pvpc_cloud_view_count(cloud.ptr), decOutput.c_str());
  } else if (eval->parsed()) {
    CloudHandle ref;
    check(pvpc_cloud_load_ply(evalInput.c_str(), &ref.ptr), "load '" + evalInput + "'");
    pvpc_bitstream_info info{};
    check(pvpc_bitstream_probe(evalBitstream.c_str(), &info), "probe '" + evalBitstream + "'");
    pvpc_rd_point rd{};
    check(pvpc_evaluate_file(ref.ptr, evalBitstream.c_str(), &rd), "evaluate '" + evalBitstream + "'");
    appendCsvRow(evalOutput, evalInput, info, rd);
    std::printf("qp=%d totalBits=%.0f psnrY=%.4f d1=%.4f\n", info.qp, rd.total_bits, rd.psnr_y, rd.d1);
  } else if (sweep->parsed()) {
    sweepOpts.apply();
    const std::vector<int> qps = parseSweep(sweepList);
    if (qps.empty()) {
      std::fprintf(stderr, "error: --sweep list is empty\n");
      return 2;
    }
    CloudHandle ref;
    check(pvpc_cloud_load_ply(sweepOpts.input.c_str(), &ref.ptr), "load '" + sweepOpts.input + "'");
    for (int qp : qps) {
      pvpc_encoder_params params = sweepOpts.params;
      params.qp = qp;
      std::string bitstream = sweepWorkdir + "/sweep_qp" + std::to_string(qp) + ".pvpc";
      check(pvpc_encode_file(ref.ptr, bitstream.c_str(), &params, nullptr, nullptr), "encode qp " + std::to_string(qp));
      pvpc_bitstream_info info{};
      check(pvpc_bitstream_probe(bitstream.c_str(), &info), "probe '" + bitstream + "'");
      pvpc_rd_point rd{};
      check(pvpc_evaluate_file(ref.ptr, bitstream.c_str(), &rd), "evaluate qp " + std::to_string(qp));
      appendCsvRow(sweepOpts.output, sweepOpts.input, info, rd);
      std::printf("qp=%d totalBits=%.0f psnrY=%.4f\n", qp, rd.total_bits, rd.psnr_y);
    }
  } else if (structure->parsed()) {
    char* text = nullptr;
    check(pvpc_coding_structure_dump(structViews, structQp, &text), "structure");
    if (structOutput.empty()) {
      std::fputs(text, stdout);
    } else {
      std::ofstream out(structOutput);
      out << text;
    }
    pvpc_string_free(text);
  }
  return 0;
}
