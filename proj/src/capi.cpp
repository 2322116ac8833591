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
#include "rawisp/rawisp.h"

#include <cstdlib>
#include <memory>
#include <cstring>
#include <new>
#include <string>

#include "rawisp/bench.hpp"
#include "rawisp/error.hpp"
#include "rawisp/executor.hpp"
#include "rawisp/graph.hpp"
#include "rawisp/metrics.hpp"
#include "rawisp/raw.hpp"
#include "rawisp/verify.hpp"
#include "rawisp/weights.hpp"

struct rawisp_model {
  rawisp::ModelConfig config;
  rawisp::Graph graph;
};

struct rawisp_weights {
  rawisp::WeightStore store;
};

struct rawisp_frame {
  rawisp::RawFrame frame;
};

struct rawisp_image {
  rawisp::RenderedImage image;
};

namespace {

thread_local std::string g_last_error;

rawisp_status fail(rawisp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
rawisp_status guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return RAWISP_OK;
  } catch (const rawisp::Error& e) {
    return fail(static_cast<rawisp_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RAWISP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RAWISP_ERR_INTERNAL, e.what());
  }
}

void require(bool cond, const char* what) {
  if (!cond) rawisp::throw_error(rawisp::ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

static_assert(static_cast<int>(rawisp::ErrorCode::kInvalidArgument) == RAWISP_ERR_INVALID_ARGUMENT);
static_assert(static_cast<int>(rawisp::ErrorCode::kBinding) == RAWISP_ERR_BINDING);
static_assert(static_cast<int>(rawisp::ErrorCode::kAlignment) == RAWISP_ERR_ALIGNMENT);
static_assert(static_cast<int>(rawisp::ErrorCode::kTolerance) == RAWISP_ERR_TOLERANCE);

extern "C" {

const char* rawisp_version(void) { return "1.0.0"; }

const char* rawisp_status_name(rawisp_status status) {
  if (status == RAWISP_OK) return "ok";
  if (status == RAWISP_ERR_INTERNAL) return "internal";
  if (status >= RAWISP_ERR_INVALID_ARGUMENT && status <= RAWISP_ERR_TOLERANCE) {
    return rawisp::error_code_name(static_cast<rawisp::ErrorCode>(status));
  }
  return "unknown";
}

const char* rawisp_last_error(void) { return g_last_error.c_str(); }

void rawisp_string_free(char* s) { std::free(s); }

rawisp_status rawisp_model_create(const char* variant, int base_width, rawisp_model** out) {
  return guard([&] {
    require(variant && out, "rawisp_model_create: null argument");
    rawisp::ModelConfig config = rawisp::ModelConfig::for_variant(rawisp::parse_variant(variant));
    if (base_width > 0) config.base_width = base_width;
    auto model = std::make_unique<rawisp_model>();
    model->config = config;
    model->graph = rawisp::build_model(config);
    *out = model.release();
  });
}

void rawisp_model_destroy(rawisp_model* model) { delete model; }

rawisp_status rawisp_model_alignment(const rawisp_model* model, int* out) {
  return guard([&] {
    require(model && out, "rawisp_model_alignment: null argument");
    *out = model->graph.alignment();
  });
}

rawisp_status rawisp_model_param_count(const rawisp_model* model, int64_t* out) {
  return guard([&] {
    require(model && out, "rawisp_model_param_count: null argument");
    *out = rawisp::count_params(model->graph);
  });
}

rawisp_status rawisp_model_mac_count(const rawisp_model* model, int64_t width, int64_t height,
                                     int64_t* out) {
  return guard([&] {
    require(model && out, "rawisp_model_mac_count: null argument");
    *out = rawisp::count_macs(model->graph, height, width);
  });
}

rawisp_status rawisp_model_peak_memory(const rawisp_model* model, int64_t width, int64_t height,
                                       int64_t* activation_bytes, int64_t* weight_bytes) {
  return guard([&] {
    require(model && activation_bytes && weight_bytes, "rawisp_model_peak_memory: null argument");
    const rawisp::MemoryEstimate m = rawisp::estimate_peak_memory(model->graph, height, width);
    *activation_bytes = m.peak_activation_bytes;
    *weight_bytes = m.weight_bytes;
  });
}

rawisp_status rawisp_model_lint(const rawisp_model* model, char** violations, size_t* count) {
  return guard([&] {
    require(model && violations && count, "rawisp_model_lint: null argument");
    const auto v = rawisp::lint_opset(model->graph);
    std::string joined;
    for (size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + v[i];
    *violations = dup_string(joined);
    *count = v.size();
  });
}

rawisp_status rawisp_model_summary(const rawisp_model* model, int64_t width, int64_t height,
                                   char** out) {
  return guard([&] {
    require(model && out, "rawisp_model_summary: null argument");
    *out = dup_string(rawisp::format_summary(model->graph, height, width));
  });
}

rawisp_status rawisp_weights_random(const rawisp_model* model, uint64_t seed,
                                    rawisp_weights** out) {
  return guard([&] {
    require(model && out, "rawisp_weights_random: null argument");
    *out = new rawisp_weights{rawisp::random_init(model->graph, seed)};
  });
}

rawisp_status rawisp_weights_load(const char* path, rawisp_weights** out) {
  return guard([&] {
    require(path && out, "rawisp_weights_load: null argument");
    *out = new rawisp_weights{rawisp::WeightStore::load(path)};
  });
}

rawisp_status rawisp_weights_save(const rawisp_weights* weights, const char* path,
                                  size_t* bytes_written) {
  return guard([&] {
    require(weights && path, "rawisp_weights_save: null argument");
    const size_t n = weights->store.save(path);
    if (bytes_written) *bytes_written = n;
  });
}

rawisp_status rawisp_weights_bind_check(const rawisp_model* model, const rawisp_weights* weights,
                                        char** report) {
  return guard([&] {
    require(model && weights && report, "rawisp_weights_bind_check: null argument");
    *report = dup_string(rawisp::bind_check(model->graph, weights->store).str());
  });
}

void rawisp_weights_destroy(rawisp_weights* weights) { delete weights; }

rawisp_status rawisp_frame_load(const char* mosaic_path, const char* metadata_path,
                                rawisp_frame** out) {
  return guard([&] {
    require(mosaic_path && metadata_path && out, "rawisp_frame_load: null argument");
    *out = new rawisp_frame{rawisp::load_raw(mosaic_path, metadata_path)};
  });
}

rawisp_status rawisp_frame_synthesize(int64_t width, int64_t height, const char* cfa,
                                      uint32_t black_level, uint32_t white_level, uint64_t seed,
                                      rawisp_frame** out) {
  return guard([&] {
    require(cfa && out, "rawisp_frame_synthesize: null argument");
    *out = new rawisp_frame{rawisp::synthesize_raw(width, height, rawisp::parse_cfa(cfa),
                                                   black_level, white_level, seed)};
  });
}

rawisp_status rawisp_frame_save(const rawisp_frame* frame, const char* mosaic_path,
                                const char* metadata_path) {
  return guard([&] {
    require(frame && mosaic_path && metadata_path, "rawisp_frame_save: null argument");
    rawisp::save_raw(frame->frame, mosaic_path, metadata_path);
  });
}

rawisp_status rawisp_frame_size(const rawisp_frame* frame, int64_t* width, int64_t* height) {
  return guard([&] {
    require(frame && width && height, "rawisp_frame_size: null argument");
    *width = frame->frame.width;
    *height = frame->frame.height;
  });
}

void rawisp_frame_destroy(rawisp_frame* frame) { delete frame; }

rawisp_status rawisp_process(const rawisp_model* model, const rawisp_weights* weights,
                             const rawisp_frame* frame, rawisp_path path, int threads,
                             rawisp_image** out) {
  return guard([&] {
    require(model && weights && frame && out, "rawisp_process: null argument");
    const rawisp::ExecPolicy policy{
        path == RAWISP_PATH_REFERENCE ? rawisp::KernelPath::kReference
                                      : rawisp::KernelPath::kOptimized,
        threads};
    const rawisp::Tensor input = rawisp::normalize(frame->frame);
    const rawisp::Tensor result =
        rawisp::run_inference(model->graph, weights->store, input, policy);
    *out = new rawisp_image{rawisp::render_output(result)};
  });
}

rawisp_status rawisp_image_read(const char* path, rawisp_image** out) {
  return guard([&] {
    require(path && out, "rawisp_image_read: null argument");
    *out = new rawisp_image{rawisp::read_image(path)};
  });
}

rawisp_status rawisp_image_write(const rawisp_image* image, const char* path) {
  return guard([&] {
    require(image && path, "rawisp_image_write: null argument");
    rawisp::write_image(image->image, path);
  });
}

rawisp_status rawisp_image_size(const rawisp_image* image, int64_t* width, int64_t* height) {
  return guard([&] {
    require(image && width && height, "rawisp_image_size: null argument");
    *width = image->image.width();
    *height = image->image.height();
  });
}

void rawisp_image_destroy(rawisp_image* image) { delete image; }

rawisp_status rawisp_evaluate(const rawisp_image* output, const rawisp_image* reference,
                              double* psnr_db, double* ssim) {
  return guard([&] {
    require(output && reference && psnr_db && ssim, "rawisp_evaluate: null argument");
    const rawisp::MetricReport r = rawisp::evaluate(rawisp::image_to_tensor(output->image),
                                                    rawisp::image_to_tensor(reference->image));
    *psnr_db = r.psnr_db;
    *ssim = r.ssim;
  });
}

rawisp_status rawisp_verify(const char* module, uint64_t seed, const char* fault_op,
                            char** report) {
  std::string breach;
  const rawisp_status status = guard([&] {
    require(module && report, "rawisp_verify: null argument");
    const std::string m = module;
    require(m == "kernels" || m == "graph" || m == "all",
            "rawisp_verify: module must be kernels, graph or all");
    const std::string fault = fault_op ? fault_op : "";
    rawisp::VerifyReport r;
    if (m == "kernels" || m == "all") r = rawisp::verify_kernels(seed, 200, fault);
    if (m == "graph" || m == "all") {
      const rawisp::VerifyReport g = rawisp::verify_graph(seed, 20, fault);
      r.ops.insert(r.ops.end(), g.ops.begin(), g.ops.end());
    }
    *report = dup_string(r.str());
    for (const auto& op : r.ops) {
      if (op.ok) continue;
      if (!breach.empty()) breach += "; ";
      breach += op.op + " (max_abs " + std::to_string(op.max_abs) + ", seed " +
                std::to_string(op.worst_case_seed) + ")";
    }
  });
  if (status != RAWISP_OK) return status;
  if (!breach.empty()) return fail(RAWISP_ERR_TOLERANCE, "tolerance breached: " + breach);
  return RAWISP_OK;
}

rawisp_status rawisp_bench(const char* variant, int64_t width, int64_t height, int32_t runs,
                           int threads, uint64_t seed, rawisp_bench_result* out) {
  return guard([&] {
    require(variant && out, "rawisp_bench: null argument");
    const rawisp::BenchResult r =
        rawisp::run_bench(rawisp::parse_variant(variant), width, height, runs, threads, seed);
    *out = rawisp_bench_result{};
    std::strncpy(out->variant, r.variant.c_str(), sizeof(out->variant) - 1);
    out->width = r.width;
    out->height = r.height;
    out->runs = r.runs;
    out->median_ms = r.median_ms;
    out->min_ms = r.min_ms;
    out->params = r.params;
    out->macs = r.macs;
    out->peak_bytes = r.peak_bytes;
  });
}

}  // extern "C"
