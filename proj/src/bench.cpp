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
#include "rawisp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <vector>

#include "rawisp/error.hpp"
#include "rawisp/executor.hpp"
#include "rawisp/weights.hpp"

namespace rawisp {

BenchResult run_bench(Variant variant, int64_t width, int64_t height, int runs, int threads,
                      uint64_t seed) {
  if (runs < 3) {
    throw_error(ErrorCode::kInvalidArgument, "bench needs at least 3 runs, got " + std::to_string(runs));
  }
  const Graph g = build_model(ModelConfig::for_variant(variant));
  g.check_input_dims(height, width);

  BenchResult r;
  r.variant = std::string(variant_name(variant));
  r.width = width;
  r.height = height;
  r.runs = runs;
  const GraphReport report = analyze(g, height, width);
  r.params = report.parameter_count;
  r.macs = report.mac_count;
  r.peak_bytes = report.peak_activation_bytes;

  const WeightStore weights = random_init(g, seed);
  std::mt19937_64 rng(seed ^ 0x5EEDull);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  Tensor frame(Shape{1, height, width, 1});
  for (float& v : frame.data()) v = unit(rng);

  const ExecPolicy policy{KernelPath::kOptimized, threads};
  std::vector<double> times;
  for (int i = 0; i < runs; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const Tensor out = run_inference(g, weights, frame, policy);
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  std::sort(times.begin(), times.end());
  r.min_ms = times.front();
  const size_t mid = times.size() / 2;
  r.median_ms = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
  return r;
}

}  // namespace rawisp
