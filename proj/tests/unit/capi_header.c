/* Copyright 2026 The ivbench Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/* Compiles the public header as C and exercises it from C. */

#include <string.h>

#include "ivbench/ivbench.h"

int capi_c_roundtrip(const char* scene_json) {
    ivb_dataset* ds = NULL;
    ivb_buffer* bits = NULL;
    ivb_decoded* dec = NULL;
    int views = -1;
    if (ivb_dataset_generate(scene_json, &ds) != IVB_OK) return -1;
    if (ivb_encode(ds, 1, 0, &bits) == IVB_OK &&
        ivb_decode(ivb_buffer_data(bits), ivb_buffer_size(bits), &dec) == IVB_OK) {
        views = ivb_decoded_view_count(dec);
    }
    ivb_decoded_free(dec);
    ivb_buffer_free(bits);
    ivb_dataset_free(ds);
    return views;
}

int capi_c_status_names_distinct(void) {
    return strcmp(ivb_status_name(IVB_ERR_PARSE), ivb_status_name(IVB_ERR_CONFIG)) != 0;
}
