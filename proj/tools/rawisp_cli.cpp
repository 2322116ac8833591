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
// rawisp command line tool. Talks to the engine only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "rawisp/rawisp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitInput = 2;
constexpr int kExitBinding = 3;
constexpr int kExitAlignment = 4;

struct ModelDeleter {
  void operator()(rawisp_model* m) const { rawisp_model_destroy(m); }
};
struct WeightsDeleter {
  void operator()(rawisp_weights* w) const { rawisp_weights_destroy(w); }
};
struct FrameDeleter {
  void operator()(rawisp_frame* f) const { rawisp_frame_destroy(f); }
};
struct ImageDeleter {
  void operator()(rawisp_image* i) const { rawisp_image_destroy(i); }
};
struct StringDeleter {
  void operator()(char* s) const { rawisp_string_free(s); }
};
using ModelPtr = std::unique_ptr<rawisp_model, ModelDeleter>;
using WeightsPtr = std::unique_ptr<rawisp_weights, WeightsDeleter>;
using FramePtr = std::unique_ptr<rawisp_frame, FrameDeleter>;
using ImagePtr = std::unique_ptr<rawisp_image, ImageDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Carries a failed API status up to main() so it can pick the exit code.
struct Failure {
  rawisp_status status;
  std::string message;
};

int exit_code_for(rawisp_status status) {
  switch (status) {
    case RAWISP_OK:
      return kExitOk;
    case RAWISP_ERR_TOLERANCE:
      return kExitTolerance;
    case RAWISP_ERR_BINDING:
      return kExitBinding;
    case RAWISP_ERR_ALIGNMENT:
      return kExitAlignment;
    default:
      return kExitInput;
  }
}

void check(rawisp_status status) {
  if (status != RAWISP_OK) throw Failure{status, rawisp_last_error()};
}

int default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

struct Resolution {
  int64_t width = 0;
  int64_t height = 0;
};

Resolution parse_resolution(const std::string& text) {
  auto x = text.find_first_of("xX");
  Resolution r;
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    size_t used = 0;
    r.width = std::stoll(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    std::string h = text.substr(x + 1);
    r.height = std::stoll(h, &used);
    if (used != h.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw Failure{RAWISP_ERR_INVALID_ARGUMENT, "resolution must look like WxH, got '" + text + "'"};
  }
  if (r.width <= 0 || r.height <= 0) {
    throw Failure{RAWISP_ERR_INVALID_ARGUMENT, "resolution must be positive, got '" + text + "'"};
  }
  return r;
}

ModelPtr make_model(const std::string& variant, int base_width) {
  rawisp_model* m = nullptr;
  check(rawisp_model_create(variant.c_str(), base_width, &m));
  return ModelPtr(m);
}

struct ProcessArgs {
  std::string input, meta, weights, variant = "base", output, path = "optimized";
  int threads = default_threads();
  int base_width = 0;
};

int cmd_process(const ProcessArgs& a) {
  auto model = make_model(a.variant, a.base_width);
  rawisp_weights* w = nullptr;
  check(rawisp_weights_load(a.weights.c_str(), &w));
  WeightsPtr weights(w);
  rawisp_frame* f = nullptr;
  const std::string meta = a.meta.empty() ? a.input + ".meta" : a.meta;
  check(rawisp_frame_load(a.input.c_str(), meta.c_str(), &f));
  FramePtr frame(f);
  rawisp_path path;
  if (a.path == "optimized") {
    path = RAWISP_PATH_OPTIMIZED;
  } else if (a.path == "reference") {
    path = RAWISP_PATH_REFERENCE;
  } else {
    throw Failure{RAWISP_ERR_INVALID_ARGUMENT, "unknown path '" + a.path + "'"};
  }
  rawisp_image* img = nullptr;
  check(rawisp_process(model.get(), weights.get(), frame.get(), path, a.threads, &img));
  ImagePtr image(img);
  check(rawisp_image_write(image.get(), a.output.c_str()));
  int64_t width = 0, height = 0;
  check(rawisp_image_size(image.get(), &width, &height));
  std::printf("wrote %s (%lldx%lld)\n", a.output.c_str(), static_cast<long long>(width),
              static_cast<long long>(height));
  return kExitOk;
}

struct BenchArgs {
  std::string variant = "base", resolution = "1920x1088";
  int runs = 5;
  bool json = false;
  int threads = default_threads();
  uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& a) {
  Resolution r = parse_resolution(a.resolution);
  rawisp_bench_result res{};
  check(rawisp_bench(a.variant.c_str(), r.width, r.height, a.runs, a.threads, a.seed, &res));
  if (a.json) {
    nlohmann::ordered_json j;
    j["variant"] = res.variant;
    j["width"] = res.width;
    j["height"] = res.height;
    j["runs"] = res.runs;
    j["median_ms"] = res.median_ms;
    j["min_ms"] = res.min_ms;
    j["params"] = res.params;
    j["macs"] = res.macs;
    j["peak_bytes"] = res.peak_bytes;
    std::cout << j.dump() << "\n";
  } else {
    std::printf("variant    %s\nresolution %lldx%lld\nruns       %d\nmedian     %.3f ms\n"
                "min        %.3f ms\nparams     %lld\nmacs       %lld\npeak       %lld bytes\n",
                res.variant, static_cast<long long>(res.width), static_cast<long long>(res.height),
                res.runs, res.median_ms, res.min_ms, static_cast<long long>(res.params),
                static_cast<long long>(res.macs), static_cast<long long>(res.peak_bytes));
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string module = "all", fault;
  uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& a) {
  char* report = nullptr;
  rawisp_status st = rawisp_verify(a.module.c_str(), a.seed,
                                   a.fault.empty() ? nullptr : a.fault.c_str(), &report);
  StringPtr owned(report);
  if (report != nullptr) std::fputs(report, stdout);
  std::fflush(stdout);
  if (st == RAWISP_ERR_TOLERANCE) {
    std::fprintf(stderr, "error: %s\n", rawisp_last_error());
    return kExitTolerance;
  }
  check(st);
  std::printf("verify %s: all within tolerance (seed %llu)\n", a.module.c_str(),
              static_cast<unsigned long long>(a.seed));
  return kExitOk;
}

struct InspectArgs {
  std::string variant = "base", resolution = "1920x1088";
  int base_width = 0;
};

int cmd_inspect(const InspectArgs& a) {
  Resolution r = parse_resolution(a.resolution);
  auto model = make_model(a.variant, a.base_width);
  char* summary = nullptr;
  check(rawisp_model_summary(model.get(), r.width, r.height, &summary));
  StringPtr owned(summary);
  std::fputs(summary, stdout);
  return kExitOk;
}

struct EvaluateArgs {
  std::string output, reference;
};

int cmd_evaluate(const EvaluateArgs& a) {
  rawisp_image* o = nullptr;
  check(rawisp_image_read(a.output.c_str(), &o));
  ImagePtr out(o);
  rawisp_image* r = nullptr;
  check(rawisp_image_read(a.reference.c_str(), &r));
  ImagePtr ref(r);
  double psnr = 0.0, ssim = 0.0;
  check(rawisp_evaluate(out.get(), ref.get(), &psnr, &ssim));
  std::printf("PSNR %.4f dB\nSSIM %.6f\n", psnr, ssim);
  return kExitOk;
}

struct InitWeightsArgs {
  std::string variant = "base", output;
  uint64_t seed = 1;
  int base_width = 0;
};

int cmd_init_weights(const InitWeightsArgs& a) {
  auto model = make_model(a.variant, a.base_width);
  rawisp_weights* w = nullptr;
  check(rawisp_weights_random(model.get(), a.seed, &w));
  WeightsPtr weights(w);
  size_t bytes = 0;
  check(rawisp_weights_save(weights.get(), a.output.c_str(), &bytes));
  std::printf("wrote %s (%zu bytes)\n", a.output.c_str(), bytes);
  return kExitOk;
}

struct SynthArgs {
  int64_t width = 512, height = 512;
  std::string cfa = "RGGB", output, meta;
  uint32_t black = 64, white = 1023;
  uint64_t seed = 1;
};

int cmd_synth_raw(const SynthArgs& a) {
  rawisp_frame* f = nullptr;
  check(rawisp_frame_synthesize(a.width, a.height, a.cfa.c_str(), a.black, a.white, a.seed, &f));
  FramePtr frame(f);
  std::string meta = a.meta.empty() ? a.output + ".meta" : a.meta;
  check(rawisp_frame_save(frame.get(), a.output.c_str(), meta.c_str()));
  std::printf("wrote %s and %s\n", a.output.c_str(), meta.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rawisp: RAW-to-RGB photo processing engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rawisp_version()));

  ProcessArgs pa;
  auto* process = app.add_subcommand("process", "Render a RAW frame to RGB");
  process->add_option("--input", pa.input, "16-bit P5 Bayer mosaic")->required();
  process->add_option("--meta", pa.meta, "Sensor metadata sidecar (default: <input>.meta)");
  process->add_option("--weights", pa.weights, ".p2w weight file")->required();
  process->add_option("--variant", pa.variant, "base | nonorm | slim | slim+")->capture_default_str();
  process->add_option("--output", pa.output, "Output image (.ppm)")->required();
  process->add_option("--path", pa.path, "optimized | reference")->capture_default_str();
  process->add_option("--threads", pa.threads, "Worker threads")->capture_default_str();
  process->add_option("--base-width", pa.base_width, "Override base channel width");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Measure inference latency");
  bench->add_option("--variant", ba.variant)->capture_default_str();
  bench->add_option("--resolution", ba.resolution, "WxH")->capture_default_str();
  bench->add_option("--runs", ba.runs, "Timed runs (>= 3)")->capture_default_str();
  bench->add_flag("--json", ba.json, "Emit a JSON record");
  bench->add_option("--threads", ba.threads)->capture_default_str();
  bench->add_option("--seed", ba.seed)->capture_default_str();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check optimized kernels against the reference path");
  verify->add_option("--module", va.module, "kernels | graph | all")->capture_default_str();
  verify->add_option("--seed", va.seed)->capture_default_str();
  verify->add_option("--inject-fault", va.fault,
                     "Perturb one op's optimized output (test fixture); 'network' for the graph");

  InspectArgs ia;
  auto* inspect = app.add_subcommand("inspect", "Print the node table, totals and op-set lint");
  inspect->add_option("--variant", ia.variant)->capture_default_str();
  inspect->add_option("--resolution", ia.resolution, "WxH")->capture_default_str();
  inspect->add_option("--base-width", ia.base_width);

  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "PSNR and SSIM between two images");
  evaluate->add_option("--output-image", ea.output)->required();
  evaluate->add_option("--reference-image", ea.reference)->required();

  InitWeightsArgs wa;
  auto* init = app.add_subcommand("init-weights", "Write randomly initialized weights");
  init->add_option("--variant", wa.variant)->capture_default_str();
  init->add_option("--seed", wa.seed)->capture_default_str();
  init->add_option("--output", wa.output)->required();
  init->add_option("--base-width", wa.base_width);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth-raw", "Write a synthetic RAW frame and sidecar");
  synth->add_option("--width", sa.width)->capture_default_str();
  synth->add_option("--height", sa.height)->capture_default_str();
  synth->add_option("--cfa", sa.cfa, "RGGB | GRBG | GBRG | BGGR")->capture_default_str();
  synth->add_option("--black", sa.black)->capture_default_str();
  synth->add_option("--white", sa.white)->capture_default_str();
  synth->add_option("--seed", sa.seed)->capture_default_str();
  synth->add_option("--output", sa.output)->required();
  synth->add_option("--meta", sa.meta, "Sidecar path (default: <output>.meta)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*process) return cmd_process(pa);
    if (*bench) return cmd_bench(ba);
    if (*verify) return cmd_verify(va);
    if (*inspect) return cmd_inspect(ia);
    if (*evaluate) return cmd_evaluate(ea);
    if (*init) return cmd_init_weights(wa);
    if (*synth) return cmd_synth_raw(sa);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error [%s]: %s\n", rawisp_status_name(f.status), f.message.c_str());
    return exit_code_for(f.status);
  }
  return kExitInput;
}
