/* Public C API for the pvpc plenoptic point cloud codec.
 *
 * All functions return pvpc_status; PVPC_OK means success. On failure a
 * thread-local message is available through pvpc_last_error_message().
 * Objects returned through out-parameters are owned by the caller and must be
 * released with the matching *_free function.
 */
#ifndef PVPC_PVPC_H
#define PVPC_PVPC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PVPC_API __declspec(dllexport)
#else
#define PVPC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pvpc_status {
  PVPC_OK = 0,
  PVPC_ERR_EMPTY_CLOUD,
  PVPC_ERR_INSUFFICIENT_POINTS,
  PVPC_ERR_MALFORMED_HEADER,
  PVPC_ERR_NON_INTEGER_GEOMETRY,
  PVPC_ERR_PATCH_TOO_WIDE,
  PVPC_ERR_QP_OUT_OF_RANGE,
  PVPC_ERR_SCHEDULING_VIOLATION,
  PVPC_ERR_BITSTREAM,
  PVPC_ERR_INCONSISTENT_ATLAS,
  PVPC_ERR_BAD_VIEW,
  PVPC_ERR_NORMALS_REQUIRED,
  PVPC_ERR_NO_OVERLAP,
  PVPC_ERR_INVALID_ARGUMENT,
  PVPC_ERR_IO,
  PVPC_ERR_INTERNAL
} pvpc_status;

typedef struct pvpc_cloud pvpc_cloud; /* opaque */

typedef struct pvpc_encoder_params {
  int qp;              /* I-anchor QP, 0..44 */
  int qp_geom;         /* geometry QP, -1 derives qp-4 */
  int multiview;       /* 1: hierarchical multiview, 0: independent all-intra */
  int group_padding;   /* 1: cross-view block group padding */
  int lossless;        /* 1: transform/quant bypass, exact reconstruction */
  uint32_t canvas_width;
  uint32_t alignment;
  int pad_block_size;
  int surface_thickness;
  int min_patch_points;
  int refinement_iterations;
  double normal_angle_threshold_deg;
  int normal_k;
  int search_range;
  double lambda_scale;
} pvpc_encoder_params;

PVPC_API void pvpc_encoder_params_init(pvpc_encoder_params* params);

typedef struct pvpc_encode_stats {
  uint64_t point_count;
  uint32_t view_count;
  uint32_t patch_count;
  uint64_t unassigned_points;
  uint64_t missed_points;
  uint32_t canvas_width, canvas_height;
  uint64_t header_bits, occupancy_bits, geom_bits, attr_bits, total_bits;
} pvpc_encode_stats;

typedef struct pvpc_rd_point {
  double total_bits, attr_bits, geom_bits;
  double psnr_y, psnr_cb, psnr_cr;
  double d1, d2;
} pvpc_rd_point;

/* --- clouds --- */
PVPC_API pvpc_status pvpc_cloud_load_ply(const char* path, pvpc_cloud** out);
PVPC_API pvpc_status pvpc_cloud_save_ply(const pvpc_cloud* cloud, const char* path, int binary);
PVPC_API pvpc_status pvpc_cloud_synthesize(const char* shape, uint64_t point_count, uint32_t view_count,
                                           double view_correlation, uint64_t seed, pvpc_cloud** out);
PVPC_API void pvpc_cloud_free(pvpc_cloud* cloud);
PVPC_API uint64_t pvpc_cloud_point_count(const pvpc_cloud* cloud);
PVPC_API uint32_t pvpc_cloud_view_count(const pvpc_cloud* cloud);
PVPC_API int pvpc_cloud_geom_bit_depth(const pvpc_cloud* cloud);
PVPC_API int pvpc_cloud_attr_bit_depth(const pvpc_cloud* cloud);
PVPC_API pvpc_status pvpc_cloud_point(const pvpc_cloud* cloud, uint64_t index, int32_t xyz[3]);
PVPC_API pvpc_status pvpc_cloud_color(const pvpc_cloud* cloud, uint64_t index, uint32_t view, uint16_t rgb[3]);

/* --- codec --- */
PVPC_API pvpc_status pvpc_encode_file(const pvpc_cloud* cloud, const char* bitstream_path,
                                      const pvpc_encoder_params* params, pvpc_encode_stats* stats_out,
                                      char** report_out /* pvpc_string_free */);
PVPC_API pvpc_status pvpc_decode_file(const char* bitstream_path, pvpc_cloud** out);

typedef struct pvpc_bitstream_info {
  uint32_t view_count;
  int qp, qp_geom;
  int multiview, group_padding, lossless;
  uint32_t canvas_width, canvas_height;
  uint32_t patch_count;
} pvpc_bitstream_info;

PVPC_API pvpc_status pvpc_bitstream_probe(const char* bitstream_path, pvpc_bitstream_info* out);

/* --- evaluation --- */
PVPC_API pvpc_status pvpc_evaluate_file(const pvpc_cloud* reference, const char* bitstream_path,
                                        pvpc_rd_point* out);
PVPC_API pvpc_status pvpc_attribute_psnr(const pvpc_cloud* reference, const pvpc_cloud* distorted, uint32_t view,
                                         double psnr_ycbcr[3]);
PVPC_API pvpc_status pvpc_geometry_psnr(const pvpc_cloud* reference, const pvpc_cloud* distorted, double* d1,
                                        double* d2);
PVPC_API pvpc_status pvpc_bd_rate(const double* anchor_bits, const double* anchor_psnr, size_t anchor_count,
                                  const double* test_bits, const double* test_psnr, size_t test_count,
                                  double* percent_out, int* low_order_out);

/* --- multiview structure --- */
PVPC_API pvpc_status pvpc_coding_structure_dump(uint32_t view_count, int qp, char** text_out);

/* --- misc --- */
PVPC_API void pvpc_string_free(char* text);
PVPC_API const char* pvpc_last_error_message(void);
PVPC_API const char* pvpc_status_name(pvpc_status status);

#ifdef __cplusplus
}
#endif

#endif /* PVPC_PVPC_H */
