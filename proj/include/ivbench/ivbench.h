/* Copyright 2026 The ivbench Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef IVBENCH_IVBENCH_H
#define IVBENCH_IVBENCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IVB_API __declspec(dllexport)
#else
#define IVB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ivb_status {
    IVB_OK = 0,
    IVB_ERR_CONFIG = 1,    /* invalid configuration or argument value */
    IVB_ERR_PARSE = 2,     /* malformed bitstream, payload, JSON or CSV */
    IVB_ERR_ASSERTION = 3, /* a gated verdict did not hold */
    IVB_ERR_IO = 4,        /* filesystem failure */
    IVB_ERR_ARGUMENT = 5,  /* NULL handle or pointer */
    IVB_ERR_INTERNAL = 6
} ivb_status;

/* Message for the last failing call on this thread; "" when none. */
IVB_API const char* ivb_last_error(void);
IVB_API const char* ivb_status_name(ivb_status status);
IVB_API const char* ivb_version(void);

/* Owned, NUL-terminated text. */
typedef struct ivb_text ivb_text;
IVB_API const char* ivb_text_data(const ivb_text* text);
IVB_API size_t ivb_text_size(const ivb_text* text);
IVB_API void ivb_text_free(ivb_text* text);

/* Owned byte buffer (bitstreams). */
typedef struct ivb_buffer ivb_buffer;
IVB_API const uint8_t* ivb_buffer_data(const ivb_buffer* buffer);
IVB_API size_t ivb_buffer_size(const ivb_buffer* buffer);
IVB_API ivb_status ivb_buffer_read_file(const char* path, ivb_buffer** out);
IVB_API ivb_status ivb_buffer_write_file(const ivb_buffer* buffer, const char* path);
IVB_API void ivb_buffer_free(ivb_buffer* buffer);

/* Synthetic multiview dataset: scene, rig, captured views and clean truth. */
typedef struct ivb_dataset ivb_dataset;

/* Accepts a scene spec object or an experiment config with a "scene" key. */
IVB_API ivb_status ivb_dataset_generate(const char* config_json, ivb_dataset** out);
IVB_API ivb_status ivb_dataset_load(const char* dir, ivb_dataset** out);
IVB_API ivb_status ivb_dataset_save(const ivb_dataset* dataset, const char* dir);
IVB_API int ivb_dataset_camera_count(const ivb_dataset* dataset);
IVB_API void ivb_dataset_free(ivb_dataset* dataset);

/* split -> pack -> encode -> mux. */
IVB_API ivb_status ivb_encode(const ivb_dataset* dataset, int atlas_count, int rate_point, ivb_buffer** out);

/* demux -> decode -> unpack. */
typedef struct ivb_decoded ivb_decoded;
IVB_API ivb_status ivb_decode(const uint8_t* data, size_t size, ivb_decoded** out);
IVB_API int ivb_decoded_rate_point(const ivb_decoded* decoded);
IVB_API int ivb_decoded_view_count(const ivb_decoded* decoded);
IVB_API int ivb_decoded_camera_count(const ivb_decoded* decoded);
/* Writes manifest.json, atlas_#.ppm and view_####.ppm. */
IVB_API ivb_status ivb_decoded_save(const ivb_decoded* decoded, const char* dir);
IVB_API void ivb_decoded_free(ivb_decoded* decoded);

/* Decodes `data` and writes view_####.ppm for every camera in the manifest.
 * pipeline is "dsde" or "dsgs"; config_json may be NULL (defaults).
 * For dsgs, scene.gsc1 and trace.csv are written too. */
IVB_API ivb_status ivb_synthesize(const uint8_t* data, size_t size, const char* pipeline, const char* config_json,
                                  const char* out_dir);

/* Scores every view_####.ppm in rendered_dir against truth_####.ppm (or
 * view_####.ppm) in truth_dir. Writes view_id,psnr_db,ssim rows to csv_path
 * when it is not NULL. Any output pointer may be NULL. */
IVB_API ivb_status ivb_evaluate_dirs(const char* rendered_dir, const char* truth_dir, const char* csv_path,
                                     double* mean_psnr, double* mean_ssim, double* delta_psnr, double* delta_ssim);

/* Full sweep; files go to the config's output_dir. Returns the sweep CSV.
 * Rows that failed are listed in failures.txt and reported as IVB_OK. */
IVB_API ivb_status ivb_sweep(const char* config_json, ivb_text** csv_out);

/* Sweep CSV texts. Pipelines may be NULL: a file with one pipeline uses it,
 * otherwise the anchor defaults to dsde and the test to dsgs. */
IVB_API ivb_status ivb_compare_csv(const char* anchor_csv, const char* test_csv, const char* anchor_pipeline,
                                   const char* test_pipeline, ivb_text** report_out);

/* Returns IVB_ERR_ASSERTION (with the report still set) when the config has
 * assert_verdict and the verdict does not hold. */
IVB_API ivb_status ivb_regularizer(const char* config_json, ivb_text** report_out);

IVB_API ivb_status ivb_probe_scaling(const char* config_json, int repeats, ivb_text** report_out,
                                     double* dsde_exponent, double* dsgs_exponent);

#ifdef __cplusplus
}
#endif

#endif /* IVBENCH_IVBENCH_H */
