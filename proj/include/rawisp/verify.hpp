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
#ifndef RAWISP_VERIFY_HPP_
#define RAWISP_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rawisp {

/// Kernel agreement rule: |optimized - reference| <= kAbsTol + kRelTol * |reference|.
inline constexpr double kKernelAbsTol = 1e-6;
inline constexpr double kKernelRelTol = 1e-5;
/// Whole-network agreement: max |optimized - reference| < kNetworkTol.
inline constexpr double kNetworkTol = 1e-4;

struct OpDeviation {
  std::string op;
  int cases = 0;
  double max_abs = 0.0;
  /// Largest |d| / (abs_tol + rel_tol * |ref|) seen; <= 1 passes. For the
  /// network checks this is max_abs / kNetworkTol.
  double worst_ratio = 0.0;
  uint64_t worst_case_seed = 0;
  bool ok = true;
};

struct VerifyReport {
  std::vector<OpDeviation> ops;

  bool ok() const;
  std::string str() const;
};

/// Runs every kernel on `cases_per_op` randomized (shape, parameter) cases on
/// both paths. `fault_op` names a kernel whose optimized output gets perturbed,
/// to exercise the failure path.
VerifyReport verify_kernels(uint64_t seed, int cases_per_op = 200, std::string_view fault_op = {});

/// Optimized vs reference executor for every variant on random 64x64 inputs
/// with fresh random weights per seed. `fault_op` = "network" perturbs the
/// optimized output.
VerifyReport verify_graph(uint64_t seed, int seeds = 20, std::string_view fault_op = {},
                          int64_t size = 64);

}  // namespace rawisp

#endif  // RAWISP_VERIFY_HPP_
