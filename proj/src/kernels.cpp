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
#include <algorithm>
#include <numeric>
#include <sstream>

#include "rawisp/error.hpp"
#include "rawisp/kernels.hpp"

namespace rawisp {

int64_t conv_output_extent(int64_t in, int kernel, int stride, Padding padding) {
  if (padding == Padding::kSameZero) return (in + stride - 1) / stride;
  if (in < kernel) return 0;
  return (in - kernel) / stride + 1;
}

int64_t conv_pad_before(int64_t in, int kernel, int stride, Padding padding) {
  if (padding == Padding::kValid) return 0;
  const int64_t out = conv_output_extent(in, kernel, stride, padding);
  const int64_t total = std::max<int64_t>((out - 1) * stride + kernel - in, 0);
  return total / 2;
}

namespace kernels {
namespace {

bool supported_kernel_size(int k) { return k == 1 || k == 3 || k == 5; }

int effective_threads(const ExecPolicy& policy) { return std::max(policy.threads, 1); }

}  // namespace

Shape check_conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
                   const ConvParams& p) {
  const Shape& in = input.shape();
  const Shape& ws = weights.shape();
  check_shape(in);
  check_shape(ws);
  if (!supported_kernel_size(p.kernel_height) || !supported_kernel_size(p.kernel_width)) {
    throw_error(ErrorCode::kConfig, "conv2d: kernel size " + std::to_string(p.kernel_height) + "x" +
                                        std::to_string(p.kernel_width) +
                                        " not in {1,3,5}");
  }
  if (ws.height != p.kernel_height || ws.width != p.kernel_width) {
    throw_error(ErrorCode::kConfig, "conv2d: weight shape " + ws.str() +
                                        " disagrees with kernel size");
  }
  if (p.stride < 1) throw_error(ErrorCode::kConfig, "conv2d: stride must be >= 1");
  if (p.groups < 1) throw_error(ErrorCode::kConfig, "conv2d: groups must be >= 1");
  if (p.channel_offset < 0 || p.channel_count < 0 || p.channel_offset >= in.channels) {
    throw_error(ErrorCode::kConfig, "conv2d: input channel window out of range");
  }
  const int64_t window =
      p.channel_count == 0 ? in.channels - p.channel_offset : p.channel_count;
  if (p.channel_offset + window > in.channels) {
    throw_error(ErrorCode::kConfig, "conv2d: input channel window out of range");
  }
  if (window != p.groups * ws.channels) {
    std::ostringstream os;
    os << "conv2d: " << window << " input channels != groups (" << p.groups
       << ") * weight in-channels (" << ws.channels << ")";
    throw_error(ErrorCode::kConfig, os.str());
  }
  if (ws.batch % p.groups != 0) {
    throw_error(ErrorCode::kConfig, "conv2d: output channels " + std::to_string(ws.batch) +
                                        " not divisible by groups " + std::to_string(p.groups));
  }
  if (!bias.empty() && static_cast<int64_t>(bias.size()) != ws.batch) {
    throw_error(ErrorCode::kConfig, "conv2d: bias length " + std::to_string(bias.size()) +
                                        " != output channels " + std::to_string(ws.batch));
  }
  const int64_t oh = conv_output_extent(in.height, p.kernel_height, p.stride, p.padding);
  const int64_t ow = conv_output_extent(in.width, p.kernel_width, p.stride, p.padding);
  if (oh < 1 || ow < 1) {
    throw_error(ErrorCode::kShape, "conv2d: input " + in.str() + " smaller than valid kernel");
  }
  return Shape{in.batch, oh, ow, ws.batch};
}

Shape check_depthwise_conv2d(const Tensor& input, const Tensor& weights,
                             std::span<const float> bias, int stride) {
  const Shape& in = input.shape();
  const Shape& ws = weights.shape();
  check_shape(in);
  check_shape(ws);
  if (ws.batch != in.channels || ws.channels != 1) {
    throw_error(ErrorCode::kConfig, "depthwise_conv2d: weight shape " + ws.str() +
                                        " does not provide one filter per input channel (" +
                                        std::to_string(in.channels) + ")");
  }
  if (!supported_kernel_size(static_cast<int>(ws.height)) ||
      !supported_kernel_size(static_cast<int>(ws.width))) {
    throw_error(ErrorCode::kConfig, "depthwise_conv2d: kernel size not in {1,3,5}");
  }
  if (stride < 1) throw_error(ErrorCode::kConfig, "depthwise_conv2d: stride must be >= 1");
  if (!bias.empty() && static_cast<int64_t>(bias.size()) != in.channels) {
    throw_error(ErrorCode::kConfig, "depthwise_conv2d: bias length mismatch");
  }
  return Shape{in.batch, conv_output_extent(in.height, 0, stride, Padding::kSameZero),
               conv_output_extent(in.width, 0, stride, Padding::kSameZero), in.channels};
}

Shape check_space_to_depth(const Shape& in, int block) {
  check_shape(in);
  if (block < 1) throw_error(ErrorCode::kShape, "space_to_depth: block must be >= 1");
  if (in.height % block != 0 || in.width % block != 0) {
    throw_error(ErrorCode::kShape, "space_to_depth: spatial dims of " + in.str() +
                                       " not divisible by " + std::to_string(block));
  }
  return Shape{in.batch, in.height / block, in.width / block, in.channels * block * block};
}

Shape check_depth_to_space(const Shape& in, int block) {
  check_shape(in);
  if (block < 1) throw_error(ErrorCode::kShape, "depth_to_space: block must be >= 1");
  if (in.channels % (block * block) != 0) {
    throw_error(ErrorCode::kShape, "depth_to_space: channels of " + in.str() +
                                       " not divisible by " + std::to_string(block * block));
  }
  return Shape{in.batch, in.height * block, in.width * block, in.channels / (block * block)};
}

Shape check_max_pool_2x2(const Shape& in) {
  check_shape(in);
  if (in.height % 2 != 0 || in.width % 2 != 0) {
    throw_error(ErrorCode::kShape, "max_pool_2x2: odd spatial dims in " + in.str());
  }
  return Shape{in.batch, in.height / 2, in.width / 2, in.channels};
}

Shape check_concat_channels(std::span<const Shape> inputs) {
  if (inputs.empty()) throw_error(ErrorCode::kShape, "concat_channels: no inputs");
  Shape out = inputs.front();
  check_shape(out);
  for (size_t i = 1; i < inputs.size(); ++i) {
    const Shape& s = inputs[i];
    check_shape(s);
    if (s.batch != out.batch || s.height != out.height || s.width != out.width) {
      throw_error(ErrorCode::kShape, "concat_channels: " + s.str() + " does not match " +
                                         inputs.front().str() + " spatially");
    }
    out.channels += s.channels;
  }
  return out;
}

Shape check_elementwise(const Shape& a, const Shape& b) {
  check_shape(a);
  check_shape(b);
  const auto ok = [](int64_t x, int64_t y) { return y == x || y == 1; };
  if (!ok(a.batch, b.batch) || !ok(a.height, b.height) || !ok(a.width, b.width) ||
      !ok(a.channels, b.channels)) {
    throw_error(ErrorCode::kShape,
                "elementwise: " + b.str() + " does not broadcast onto " + a.str());
  }
  return a;
}

Tensor conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
              const ConvParams& params, const ExecPolicy& policy) {
  check_conv2d(input, weights, bias, params);
  if (policy.path == KernelPath::kReference) {
    return reference::conv2d(input, weights, bias, params);
  }
  return optimized::conv2d(input, weights, bias, params, effective_threads(policy));
}

Tensor depthwise_conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
                        int stride, const ExecPolicy& policy) {
  check_depthwise_conv2d(input, weights, bias, stride);
  if (policy.path == KernelPath::kReference) {
    return reference::depthwise_conv2d(input, weights, bias, stride);
  }
  return optimized::depthwise_conv2d(input, weights, bias, stride, effective_threads(policy));
}

Tensor prelu(const Tensor& input, std::span<const float> slopes, const ExecPolicy& policy) {
  check_shape(input.shape());
  if (static_cast<int64_t>(slopes.size()) != input.channels()) {
    throw_error(ErrorCode::kConfig, "prelu: " + std::to_string(slopes.size()) +
                                        " slopes for " + std::to_string(input.channels()) +
                                        " channels");
  }
  if (policy.path == KernelPath::kReference) return reference::prelu(input, slopes);
  return optimized::prelu(input, slopes, effective_threads(policy));
}

Tensor activation(ActivationKind kind, const Tensor& input, const ExecPolicy& policy) {
  check_shape(input.shape());
  if (policy.path == KernelPath::kReference) return reference::activation(kind, input);
  return optimized::activation(kind, input, effective_threads(policy));
}

Tensor instance_norm(const Tensor& input, const NormParams& params, const ExecPolicy& policy) {
  check_shape(input.shape());
  if (!(params.epsilon > 0.0f)) throw_error(ErrorCode::kConfig, "instance_norm: epsilon must be > 0");
  if (static_cast<int64_t>(params.gamma.size()) != input.channels() ||
      static_cast<int64_t>(params.beta.size()) != input.channels()) {
    throw_error(ErrorCode::kConfig, "instance_norm: gamma/beta length != channel count");
  }
  if (policy.path == KernelPath::kReference) return reference::instance_norm(input, params);
  return optimized::instance_norm(input, params, effective_threads(policy));
}

Tensor bilinear_upsample_x2(const Tensor& input, const ExecPolicy& policy) {
  check_shape(input.shape());
  if (policy.path == KernelPath::kReference) return reference::bilinear_upsample_x2(input);
  return optimized::bilinear_upsample_x2(input, effective_threads(policy));
}

Tensor space_to_depth(const Tensor& input, int block, const ExecPolicy& policy) {
  check_space_to_depth(input.shape(), block);
  if (policy.path == KernelPath::kReference) return reference::space_to_depth(input, block);
  return optimized::space_to_depth(input, block, effective_threads(policy));
}

Tensor depth_to_space(const Tensor& input, int block, const ExecPolicy& policy) {
  check_depth_to_space(input.shape(), block);
  if (policy.path == KernelPath::kReference) return reference::depth_to_space(input, block);
  return optimized::depth_to_space(input, block, effective_threads(policy));
}

Tensor max_pool_2x2(const Tensor& input, const ExecPolicy& policy) {
  check_max_pool_2x2(input.shape());
  if (policy.path == KernelPath::kReference) return reference::max_pool_2x2(input);
  return optimized::max_pool_2x2(input, effective_threads(policy));
}

Tensor global_avg_pool(const Tensor& input, const ExecPolicy& policy) {
  check_shape(input.shape());
  if (policy.path == KernelPath::kReference) return reference::global_avg_pool(input);
  return optimized::global_avg_pool(input, effective_threads(policy));
}

Tensor concat_channels(std::span<const Tensor* const> inputs, const ExecPolicy& policy) {
  std::vector<Shape> shapes;
  shapes.reserve(inputs.size());
  for (const Tensor* t : inputs) shapes.push_back(t->shape());
  check_concat_channels(shapes);
  if (policy.path == KernelPath::kReference) return reference::concat_channels(inputs);
  return optimized::concat_channels(inputs, effective_threads(policy));
}

Tensor concat_channels(const Tensor& a, const Tensor& b, const ExecPolicy& policy) {
  const Tensor* both[] = {&a, &b};
  return concat_channels(std::span<const Tensor* const>(both), policy);
}

Tensor elementwise(ElementwiseKind kind, const Tensor& a, const Tensor& b,
                   const ExecPolicy& policy) {
  check_elementwise(a.shape(), b.shape());
  if (policy.path == KernelPath::kReference) return reference::elementwise(kind, a, b);
  return optimized::elementwise(kind, a, b, effective_threads(policy));
}

}  // namespace kernels
}  // namespace rawisp
