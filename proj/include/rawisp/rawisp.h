/**
 * Copyright 2026 The rawisp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
/*
 * C interface to the rawisp engine. Every object is an opaque handle owned by
 * the caller and released with the matching *_destroy function. Functions
 * return a rawisp_status; on failure rawisp_last_error() describes the
 * problem for the calling thread until its next API call.
 */
#ifndef RAWISP_RAWISP_H_
#define RAWISP_RAWISP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(rawisp_EXPORTS)
#    define RAWISP_API __declspec(dllexport)
#  else
#    define RAWISP_API __declspec(dllimport)
#  endif
#else
#  define RAWISP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rawisp_status {
  RAWISP_OK = 0,
  RAWISP_ERR_INVALID_ARGUMENT = 1,
  RAWISP_ERR_INVALID_SHAPE = 2,
  RAWISP_ERR_BOUNDS = 3,
  RAWISP_ERR_SHAPE = 4,
  RAWISP_ERR_CONFIG = 5,
  RAWISP_ERR_BINDING = 6,
  RAWISP_ERR_ALIGNMENT = 7,
  RAWISP_ERR_FORMAT = 8,
  RAWISP_ERR_TRUNCATION = 9,
  RAWISP_ERR_CORRUPTION = 10,
  RAWISP_ERR_METADATA = 11,
  RAWISP_ERR_IO = 12,
  RAWISP_ERR_VALIDATION = 13,
  RAWISP_ERR_TOLERANCE = 14,
  RAWISP_ERR_INTERNAL = 99
} rawisp_status;

typedef enum rawisp_path {
  RAWISP_PATH_OPTIMIZED = 0,
  RAWISP_PATH_REFERENCE = 1
} rawisp_path;

typedef struct rawisp_model rawisp_model;
typedef struct rawisp_weights rawisp_weights;
typedef struct rawisp_frame rawisp_frame;
typedef struct rawisp_image rawisp_image;

typedef struct rawisp_bench_result {
  char variant[16];
  int64_t width;
  int64_t height;
  int32_t runs;
  double median_ms;
  double min_ms;
  int64_t params;
  int64_t macs;
  int64_t peak_bytes;
} rawisp_bench_result;

RAWISP_API const char* rawisp_version(void);
RAWISP_API const char* rawisp_status_name(rawisp_status status);
/* Message of the last failed call on this thread; "" if none. */
RAWISP_API const char* rawisp_last_error(void);
/* Releases strings returned through char** out-parameters. */
RAWISP_API void rawisp_string_free(char* s);

/* Models. variant: "base", "nonorm", "slim", "slim+". base_width 0 = default. */
RAWISP_API rawisp_status rawisp_model_create(const char* variant, int base_width,
                                             rawisp_model** out);
RAWISP_API void rawisp_model_destroy(rawisp_model* model);
RAWISP_API rawisp_status rawisp_model_alignment(const rawisp_model* model, int* out);
RAWISP_API rawisp_status rawisp_model_param_count(const rawisp_model* model, int64_t* out);
RAWISP_API rawisp_status rawisp_model_mac_count(const rawisp_model* model, int64_t width,
                                                int64_t height, int64_t* out);
RAWISP_API rawisp_status rawisp_model_peak_memory(const rawisp_model* model, int64_t width,
                                                  int64_t height, int64_t* activation_bytes,
                                                  int64_t* weight_bytes);
/* Comma-separated offending op kinds ("" when compliant) and their count. */
RAWISP_API rawisp_status rawisp_model_lint(const rawisp_model* model, char** violations,
                                           size_t* count);
RAWISP_API rawisp_status rawisp_model_summary(const rawisp_model* model, int64_t width,
                                              int64_t height, char** out);

/* Weights (.p2w). */
RAWISP_API rawisp_status rawisp_weights_random(const rawisp_model* model, uint64_t seed,
                                               rawisp_weights** out);
RAWISP_API rawisp_status rawisp_weights_load(const char* path, rawisp_weights** out);
RAWISP_API rawisp_status rawisp_weights_save(const rawisp_weights* weights, const char* path,
                                             size_t* bytes_written);
/* Report is "" iff the weights bind to the model. */
RAWISP_API rawisp_status rawisp_weights_bind_check(const rawisp_model* model,
                                                   const rawisp_weights* weights, char** report);
RAWISP_API void rawisp_weights_destroy(rawisp_weights* weights);

/* RAW frames: 16-bit P5 mosaic plus a key = value metadata sidecar. */
RAWISP_API rawisp_status rawisp_frame_load(const char* mosaic_path, const char* metadata_path,
                                           rawisp_frame** out);
/* Smooth synthetic scene with sensor-like noise, quantized to [black, white]. */
RAWISP_API rawisp_status rawisp_frame_synthesize(int64_t width, int64_t height, const char* cfa,
                                                 uint32_t black_level, uint32_t white_level,
                                                 uint64_t seed, rawisp_frame** out);
RAWISP_API rawisp_status rawisp_frame_save(const rawisp_frame* frame, const char* mosaic_path,
                                           const char* metadata_path);
RAWISP_API rawisp_status rawisp_frame_size(const rawisp_frame* frame, int64_t* width,
                                           int64_t* height);
RAWISP_API void rawisp_frame_destroy(rawisp_frame* frame);

/* Normalize -> network -> render. threads < 1 means one worker. */
RAWISP_API rawisp_status rawisp_process(const rawisp_model* model, const rawisp_weights* weights,
                                        const rawisp_frame* frame, rawisp_path path, int threads,
                                        rawisp_image** out);

/* 8-bit RGB images (P6). */
RAWISP_API rawisp_status rawisp_image_read(const char* path, rawisp_image** out);
RAWISP_API rawisp_status rawisp_image_write(const rawisp_image* image, const char* path);
RAWISP_API rawisp_status rawisp_image_size(const rawisp_image* image, int64_t* width,
                                           int64_t* height);
RAWISP_API void rawisp_image_destroy(rawisp_image* image);

RAWISP_API rawisp_status rawisp_evaluate(const rawisp_image* output, const rawisp_image* reference,
                                         double* psnr_db, double* ssim);

/* module: "kernels", "graph" or "all". fault_op (nullable) perturbs one
 * kernel's optimized output, or the whole network with "network". Returns
 * RAWISP_ERR_TOLERANCE on any breach; *report is set either way. */
RAWISP_API rawisp_status rawisp_verify(const char* module, uint64_t seed, const char* fault_op,
                                       char** report);

RAWISP_API rawisp_status rawisp_bench(const char* variant, int64_t width, int64_t height,
                                      int32_t runs, int threads, uint64_t seed,
                                      rawisp_bench_result* out);

#ifdef __cplusplus
}
#endif

#endif /* RAWISP_RAWISP_H_ */
