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
#ifndef RAWISP_EXECUTOR_HPP_
#define RAWISP_EXECUTOR_HPP_

#include <vector>

#include "rawisp/graph.hpp"
#include "rawisp/kernels.hpp"
#include "rawisp/weights.hpp"

namespace rawisp {

/// Runs `g` on a (batch, H, W, 1) Bayer tensor in node order. Intermediate
/// buffers are released after their last consumer.
///
/// Throws kBinding (naming the first unbound slot) when `weights` does not
/// bind, kAlignment when H or W is not a multiple of g.alignment(), kShape for
/// a non single-channel input.
///
/// If `observed` is non-null it receives the runtime shape of every node.
Tensor run_inference(const Graph& g, const WeightStore& weights, const Tensor& input,
                     const ExecPolicy& policy = {}, std::vector<Shape>* observed = nullptr);

}  // namespace rawisp

#endif  // RAWISP_EXECUTOR_HPP_
