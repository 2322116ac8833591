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
#ifndef RAWISP_KERNELS_HPP_
#define RAWISP_KERNELS_HPP_

#include <span>
#include <string>
#include <vector>

#include "rawisp/tensor.hpp"

namespace rawisp {

enum class Padding { kSameZero, kValid };

/// Convolution geometry. Kernel sizes are restricted to {1, 3, 5}.
///
/// `channel_offset` / `channel_count` select a contiguous window of the input
/// channels that the convolution reads; a count of 0 means "all channels from
/// the offset on". This is how the branches of a grouped residual block read
/// their slice of the block input without a separate slice op.
struct ConvParams {
  int kernel_height = 3;
  int kernel_width = 3;
  int stride = 1;
  int groups = 1;
  Padding padding = Padding::kSameZero;
  int channel_offset = 0;
  int channel_count = 0;
};

struct NormParams {
  float epsilon = 1e-5f;
  std::span<const float> gamma;
  std::span<const float> beta;
};

enum class ActivationKind { kTanh, kSigmoid };
enum class ElementwiseKind { kAdd, kMul };

enum class KernelPath { kOptimized, kReference };

struct ExecPolicy {
  KernelPath path = KernelPath::kOptimized;
  /// Worker count for the optimized path. Values < 1 mean 1.
  int threads = 1;
};

/// Largest float strictly below 1; tanh and sigmoid outputs are clamped to the
/// open intervals (-1, 1) and (0, 1) using it.
inline constexpr float kOpenUnitUpper = 0.99999994f;

/// Output extent of a convolution along one axis.
int64_t conv_output_extent(int64_t in, int kernel, int stride, Padding padding);
/// Zeros added before the first input sample along one axis (TF "SAME" split:
/// the smaller half goes first).
int64_t conv_pad_before(int64_t in, int kernel, int stride, Padding padding);

namespace kernels {

// Dispatching entry points: validate arguments, then run the path chosen by
// `policy`. Weights use the layouts
//   conv2d            [out_c, kh, kw, in_c / groups]  (Tensor shape out_c,kh,kw,icg)
//   depthwise_conv2d  [c, kh, kw]                     (Tensor shape c,kh,kw,1)

Tensor conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
              const ConvParams& params, const ExecPolicy& policy = {});
Tensor depthwise_conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
                        int stride, const ExecPolicy& policy = {});
Tensor prelu(const Tensor& input, std::span<const float> slopes, const ExecPolicy& policy = {});
Tensor activation(ActivationKind kind, const Tensor& input, const ExecPolicy& policy = {});
Tensor instance_norm(const Tensor& input, const NormParams& params, const ExecPolicy& policy = {});
Tensor bilinear_upsample_x2(const Tensor& input, const ExecPolicy& policy = {});
Tensor space_to_depth(const Tensor& input, int block = 2, const ExecPolicy& policy = {});
Tensor depth_to_space(const Tensor& input, int block = 2, const ExecPolicy& policy = {});
Tensor max_pool_2x2(const Tensor& input, const ExecPolicy& policy = {});
Tensor global_avg_pool(const Tensor& input, const ExecPolicy& policy = {});
Tensor concat_channels(std::span<const Tensor* const> inputs, const ExecPolicy& policy = {});
Tensor concat_channels(const Tensor& a, const Tensor& b, const ExecPolicy& policy = {});
/// `b` must match `a` or be 1 along each axis where it differs.
Tensor elementwise(ElementwiseKind kind, const Tensor& a, const Tensor& b,
                   const ExecPolicy& policy = {});

// Both implementations are public: the naive loops are the oracle the
// optimized kernels are verified against, and the executor can run either.
// Arguments are assumed validated.
namespace reference {
Tensor conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
              const ConvParams& params);
Tensor depthwise_conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
                        int stride);
Tensor prelu(const Tensor& input, std::span<const float> slopes);
Tensor activation(ActivationKind kind, const Tensor& input);
Tensor instance_norm(const Tensor& input, const NormParams& params);
Tensor bilinear_upsample_x2(const Tensor& input);
Tensor space_to_depth(const Tensor& input, int block);
Tensor depth_to_space(const Tensor& input, int block);
Tensor max_pool_2x2(const Tensor& input);
Tensor global_avg_pool(const Tensor& input);
Tensor concat_channels(std::span<const Tensor* const> inputs);
Tensor elementwise(ElementwiseKind kind, const Tensor& a, const Tensor& b);
}  // namespace reference

namespace optimized {
Tensor conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
              const ConvParams& params, int threads);
Tensor depthwise_conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
                        int stride, int threads);
Tensor prelu(const Tensor& input, std::span<const float> slopes, int threads);
Tensor activation(ActivationKind kind, const Tensor& input, int threads);
Tensor instance_norm(const Tensor& input, const NormParams& params, int threads);
Tensor bilinear_upsample_x2(const Tensor& input, int threads);
Tensor space_to_depth(const Tensor& input, int block, int threads);
Tensor depth_to_space(const Tensor& input, int block, int threads);
Tensor max_pool_2x2(const Tensor& input, int threads);
Tensor global_avg_pool(const Tensor& input, int threads);
Tensor concat_channels(std::span<const Tensor* const> inputs, int threads);
Tensor elementwise(ElementwiseKind kind, const Tensor& a, const Tensor& b, int threads);
}  // namespace optimized

// Argument checks shared by both paths; each returns the output shape.
Shape check_conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
                   const ConvParams& params);
Shape check_depthwise_conv2d(const Tensor& input, const Tensor& weights,
                             std::span<const float> bias, int stride);
Shape check_space_to_depth(const Shape& input, int block);
Shape check_depth_to_space(const Shape& input, int block);
Shape check_max_pool_2x2(const Shape& input);
Shape check_concat_channels(std::span<const Shape> inputs);
Shape check_elementwise(const Shape& a, const Shape& b);

}  // namespace kernels
}  // namespace rawisp

#endif  // RAWISP_KERNELS_HPP_
