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
#ifndef RAWISP_BENCH_HPP_
#define RAWISP_BENCH_HPP_

#include <cstdint>
#include <string>

#include "rawisp/graph.hpp"

namespace rawisp {

struct BenchResult {
  std::string variant;
  int64_t width = 0;
  int64_t height = 0;
  int runs = 0;
  double median_ms = 0.0;
  double min_ms = 0.0;
  int64_t params = 0;
  int64_t macs = 0;
  int64_t peak_bytes = 0;
};

/// Times `runs` (>= 3) optimized inferences on random-init weights and a fixed
/// random frame. Throws kInvalidArgument for runs < 3, kAlignment for a
/// misaligned resolution.
BenchResult run_bench(Variant variant, int64_t width, int64_t height, int runs, int threads,
                      uint64_t seed = 1);

}  // namespace rawisp

#endif  // RAWISP_BENCH_HPP_
