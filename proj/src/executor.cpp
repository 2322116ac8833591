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
#include "rawisp/executor.hpp"

#include <optional>

#include "rawisp/error.hpp"

namespace rawisp {
namespace {

std::span<const float> param(const WeightStore& w, const Node& n, size_t slot) {
  return w.find(n.params.at(slot).name)->data;
}

Tensor param_tensor(const WeightStore& w, const Node& n, size_t slot) {
  const WeightEntry* e = w.find(n.params.at(slot).name);
  Shape s{e->dims.at(0), e->dims.at(1), e->dims.at(2), e->dims.size() > 3 ? e->dims[3] : 1};
  return Tensor(s, e->data);
}

}  // namespace

Tensor run_inference(const Graph& g, const WeightStore& weights, const Tensor& input,
                     const ExecPolicy& policy, std::vector<Shape>* observed) {
  const BindReport report = bind_check(g, weights);
  if (!report.missing.empty() || !report.mismatched.empty()) {
    throw_error(ErrorCode::kBinding, "weights do not bind to the " + g.label() +
                                         " graph: " + report.first_problem());
  }
  if (input.channels() != 1) {
    throw_error(ErrorCode::kShape, "expected a single-channel Bayer input, got " +
                                       input.shape().str());
  }
  g.check_input_dims(input.height(), input.width());

  const auto& nodes = g.nodes();
  std::vector<int> remaining(nodes.size(), 0);
  for (const Node& n : nodes)
    for (int in : n.inputs) ++remaining[static_cast<size_t>(in)];

  std::vector<std::optional<Tensor>> values(nodes.size());
  if (observed) observed->assign(nodes.size(), Shape{});
  for (const Node& n : nodes) {
    const auto arg = [&](size_t i) -> const Tensor& {
      return *values[static_cast<size_t>(n.inputs.at(i))];
    };
    Tensor out;
    switch (n.kind) {
      case NodeKind::kInput:
        out = input;
        break;
      case NodeKind::kConv2d:
        out = kernels::conv2d(arg(0), param_tensor(weights, n, 0), param(weights, n, 1), n.conv,
                              policy);
        break;
      case NodeKind::kDepthwiseConv2d:
        out = kernels::depthwise_conv2d(arg(0), param_tensor(weights, n, 0), param(weights, n, 1),
                                        n.conv.stride, policy);
        break;
      case NodeKind::kPRelu:
        out = kernels::prelu(arg(0), param(weights, n, 0), policy);
        break;
      case NodeKind::kTanh:
        out = kernels::activation(ActivationKind::kTanh, arg(0), policy);
        break;
      case NodeKind::kSigmoid:
        out = kernels::activation(ActivationKind::kSigmoid, arg(0), policy);
        break;
      case NodeKind::kInstanceNorm:
        out = kernels::instance_norm(
            arg(0), NormParams{n.epsilon, param(weights, n, 0), param(weights, n, 1)}, policy);
        break;
      case NodeKind::kGlobalAvgPool:
        out = kernels::global_avg_pool(arg(0), policy);
        break;
      case NodeKind::kMaxPool:
        out = kernels::max_pool_2x2(arg(0), policy);
        break;
      case NodeKind::kResizeBilinear:
        out = kernels::bilinear_upsample_x2(arg(0), policy);
        break;
      case NodeKind::kSpaceToDepth:
        out = kernels::space_to_depth(arg(0), n.block, policy);
        break;
      case NodeKind::kDepthToSpace:
        out = kernels::depth_to_space(arg(0), n.block, policy);
        break;
      case NodeKind::kConcat: {
        std::vector<const Tensor*> parts;
        for (size_t i = 0; i < n.inputs.size(); ++i) parts.push_back(&arg(i));
        out = kernels::concat_channels(parts, policy);
        break;
      }
      case NodeKind::kAdd:
        out = kernels::elementwise(ElementwiseKind::kAdd, arg(0), arg(1), policy);
        break;
      case NodeKind::kMul:
        out = kernels::elementwise(ElementwiseKind::kMul, arg(0), arg(1), policy);
        break;
      case NodeKind::kCustom:
        throw_error(ErrorCode::kConfig, "node '" + n.name + "' has op '" + n.custom_op +
                                            "' which the executor does not implement");
    }
    if (observed) (*observed)[static_cast<size_t>(n.id)] = out.shape();
    values[static_cast<size_t>(n.id)] = std::move(out);
    for (int in : n.inputs) {
      if (--remaining[static_cast<size_t>(in)] == 0 && in != g.output_id()) {
        values[static_cast<size_t>(in)].reset();
      }
    }
  }
  return std::move(*values[static_cast<size_t>(g.output_id())]);
}

}  // namespace rawisp
