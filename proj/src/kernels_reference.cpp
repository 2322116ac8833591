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
// Naive reference kernels. These are the oracles for the optimized path, so
// they favour the most direct reading of each operator over speed: plain index
// loops, bounds-checked reads and double accumulation.

#include <algorithm>
#include <cmath>
#include <limits>

#include "rawisp/kernels.hpp"

namespace rawisp::kernels::reference {

Tensor conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
              const ConvParams& p) {
  const Shape& in = input.shape();
  const int64_t out_c = weights.shape().batch;
  const int64_t icg = weights.shape().channels;
  const int64_t ocg = out_c / p.groups;
  const int64_t oh = conv_output_extent(in.height, p.kernel_height, p.stride, p.padding);
  const int64_t ow = conv_output_extent(in.width, p.kernel_width, p.stride, p.padding);
  const int64_t pad_t = conv_pad_before(in.height, p.kernel_height, p.stride, p.padding);
  const int64_t pad_l = conv_pad_before(in.width, p.kernel_width, p.stride, p.padding);

  Tensor out(Shape{in.batch, oh, ow, out_c});
  for (int64_t b = 0; b < in.batch; ++b) {
    for (int64_t y = 0; y < oh; ++y) {
      for (int64_t x = 0; x < ow; ++x) {
        for (int64_t oc = 0; oc < out_c; ++oc) {
          const int64_t g = oc / ocg;
          double acc = bias.empty() ? 0.0 : bias[static_cast<size_t>(oc)];
          for (int64_t ky = 0; ky < p.kernel_height; ++ky) {
            for (int64_t kx = 0; kx < p.kernel_width; ++kx) {
              const int64_t iy = y * p.stride + ky - pad_t;
              const int64_t ix = x * p.stride + kx - pad_l;
              if (iy < 0 || iy >= in.height || ix < 0 || ix >= in.width) continue;
              for (int64_t ic = 0; ic < icg; ++ic) {
                const int64_t src_c = p.channel_offset + g * icg + ic;
                acc += static_cast<double>(input.at(b, iy, ix, src_c)) *
                       weights.at(oc, ky, kx, ic);
              }
            }
          }
          out(b, y, x, oc) = static_cast<float>(acc);
        }
      }
    }
  }
  return out;
}

Tensor depthwise_conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
                        int stride) {
  const Shape& in = input.shape();
  const int kh = static_cast<int>(weights.shape().height);
  const int kw = static_cast<int>(weights.shape().width);
  const int64_t oh = conv_output_extent(in.height, kh, stride, Padding::kSameZero);
  const int64_t ow = conv_output_extent(in.width, kw, stride, Padding::kSameZero);
  const int64_t pad_t = conv_pad_before(in.height, kh, stride, Padding::kSameZero);
  const int64_t pad_l = conv_pad_before(in.width, kw, stride, Padding::kSameZero);

  Tensor out(Shape{in.batch, oh, ow, in.channels});
  for (int64_t b = 0; b < in.batch; ++b) {
    for (int64_t c = 0; c < in.channels; ++c) {
      for (int64_t y = 0; y < oh; ++y) {
        for (int64_t x = 0; x < ow; ++x) {
          double acc = bias.empty() ? 0.0 : bias[static_cast<size_t>(c)];
          for (int64_t ky = 0; ky < kh; ++ky) {
            for (int64_t kx = 0; kx < kw; ++kx) {
              const int64_t iy = y * stride + ky - pad_t;
              const int64_t ix = x * stride + kx - pad_l;
              if (iy < 0 || iy >= in.height || ix < 0 || ix >= in.width) continue;
              acc += static_cast<double>(input.at(b, iy, ix, c)) * weights.at(c, ky, kx, 0);
            }
          }
          out(b, y, x, c) = static_cast<float>(acc);
        }
      }
    }
  }
  return out;
}

Tensor prelu(const Tensor& input, std::span<const float> slopes) {
  const Shape& s = input.shape();
  Tensor out(s);
  for (int64_t b = 0; b < s.batch; ++b)
    for (int64_t y = 0; y < s.height; ++y)
      for (int64_t x = 0; x < s.width; ++x)
        for (int64_t c = 0; c < s.channels; ++c) {
          const float v = input.at(b, y, x, c);
          out(b, y, x, c) = v >= 0.0f ? v : slopes[static_cast<size_t>(c)] * v;
        }
  return out;
}

Tensor activation(ActivationKind kind, const Tensor& input) {
  Tensor out(input.shape());
  auto src = input.data();
  auto dst = out.data();
  for (size_t i = 0; i < src.size(); ++i) {
    const double x = src[i];
    double y;
    if (kind == ActivationKind::kTanh) {
      y = std::tanh(x);
      y = std::clamp(y, -static_cast<double>(kOpenUnitUpper), static_cast<double>(kOpenUnitUpper));
    } else {
      y = 1.0 / (1.0 + std::exp(-x));
      y = std::clamp(y, static_cast<double>(std::numeric_limits<float>::min()),
                     static_cast<double>(kOpenUnitUpper));
    }
    dst[i] = static_cast<float>(y);
  }
  return out;
}

Tensor instance_norm(const Tensor& input, const NormParams& p) {
  const Shape& s = input.shape();
  const double plane = static_cast<double>(s.height * s.width);
  Tensor out(s);
  for (int64_t b = 0; b < s.batch; ++b) {
    for (int64_t c = 0; c < s.channels; ++c) {
      double sum = 0.0;
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x) sum += input.at(b, y, x, c);
      const double mean = sum / plane;
      double sq = 0.0;
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x) {
          const double d = input.at(b, y, x, c) - mean;
          sq += d * d;
        }
      const double var = sq / plane;
      const double inv = 1.0 / std::sqrt(var + p.epsilon);
      const double gamma = p.gamma[static_cast<size_t>(c)];
      const double beta = p.beta[static_cast<size_t>(c)];
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x) {
          out(b, y, x, c) = static_cast<float>(gamma * (input.at(b, y, x, c) - mean) * inv + beta);
        }
    }
  }
  return out;
}

Tensor bilinear_upsample_x2(const Tensor& input) {
  const Shape& s = input.shape();
  Tensor out(Shape{s.batch, s.height * 2, s.width * 2, s.channels});
  // Half-pixel centers: source coordinate = (dst + 0.5) / 2 - 0.5.
  const auto sample = [](int64_t dst, int64_t in_size, int64_t& lo, int64_t& hi, double& frac) {
    const double src = (static_cast<double>(dst) + 0.5) * 0.5 - 0.5;
    const double fl = std::floor(src);
    frac = src - fl;
    lo = std::max<int64_t>(static_cast<int64_t>(fl), 0);
    hi = std::min<int64_t>(static_cast<int64_t>(std::ceil(src)), in_size - 1);
  };
  for (int64_t b = 0; b < s.batch; ++b)
    for (int64_t y = 0; y < s.height * 2; ++y) {
      int64_t y0, y1;
      double fy;
      sample(y, s.height, y0, y1, fy);
      for (int64_t x = 0; x < s.width * 2; ++x) {
        int64_t x0, x1;
        double fx;
        sample(x, s.width, x0, x1, fx);
        for (int64_t c = 0; c < s.channels; ++c) {
          const double top = input.at(b, y0, x0, c) * (1.0 - fx) + input.at(b, y0, x1, c) * fx;
          const double bot = input.at(b, y1, x0, c) * (1.0 - fx) + input.at(b, y1, x1, c) * fx;
          out(b, y, x, c) = static_cast<float>(top * (1.0 - fy) + bot * fy);
        }
      }
    }
  return out;
}

// Output channel for source channel c and cell position (dy, dx) is
// c * block^2 + dy * block + dx.
Tensor space_to_depth(const Tensor& input, int block) {
  const Shape& s = input.shape();
  Tensor out(check_space_to_depth(s, block));
  for (int64_t b = 0; b < s.batch; ++b)
    for (int64_t y = 0; y < s.height; ++y)
      for (int64_t x = 0; x < s.width; ++x)
        for (int64_t c = 0; c < s.channels; ++c) {
          const int64_t cell = (y % block) * block + (x % block);
          out(b, y / block, x / block, c * block * block + cell) = input.at(b, y, x, c);
        }
  return out;
}

Tensor depth_to_space(const Tensor& input, int block) {
  const Shape& s = input.shape();
  const Shape os = check_depth_to_space(s, block);
  Tensor out(os);
  for (int64_t b = 0; b < os.batch; ++b)
    for (int64_t y = 0; y < os.height; ++y)
      for (int64_t x = 0; x < os.width; ++x)
        for (int64_t c = 0; c < os.channels; ++c) {
          const int64_t cell = (y % block) * block + (x % block);
          out(b, y, x, c) = input.at(b, y / block, x / block, c * block * block + cell);
        }
  return out;
}

Tensor max_pool_2x2(const Tensor& input) {
  const Shape os = check_max_pool_2x2(input.shape());
  Tensor out(os);
  for (int64_t b = 0; b < os.batch; ++b)
    for (int64_t y = 0; y < os.height; ++y)
      for (int64_t x = 0; x < os.width; ++x)
        for (int64_t c = 0; c < os.channels; ++c) {
          float m = input.at(b, 2 * y, 2 * x, c);
          m = std::max(m, input.at(b, 2 * y, 2 * x + 1, c));
          m = std::max(m, input.at(b, 2 * y + 1, 2 * x, c));
          m = std::max(m, input.at(b, 2 * y + 1, 2 * x + 1, c));
          out(b, y, x, c) = m;
        }
  return out;
}

Tensor global_avg_pool(const Tensor& input) {
  const Shape& s = input.shape();
  Tensor out(Shape{s.batch, 1, 1, s.channels});
  for (int64_t b = 0; b < s.batch; ++b)
    for (int64_t c = 0; c < s.channels; ++c) {
      double sum = 0.0;
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x) sum += input.at(b, y, x, c);
      out(b, 0, 0, c) = static_cast<float>(sum / static_cast<double>(s.height * s.width));
    }
  return out;
}

Tensor concat_channels(std::span<const Tensor* const> inputs) {
  std::vector<Shape> shapes;
  for (const Tensor* t : inputs) shapes.push_back(t->shape());
  Tensor out(check_concat_channels(shapes));
  int64_t base = 0;
  for (const Tensor* t : inputs) {
    const Shape& s = t->shape();
    for (int64_t b = 0; b < s.batch; ++b)
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x)
          for (int64_t c = 0; c < s.channels; ++c) out(b, y, x, base + c) = t->at(b, y, x, c);
    base += s.channels;
  }
  return out;
}

Tensor elementwise(ElementwiseKind kind, const Tensor& a, const Tensor& b) {
  const Shape& s = a.shape();
  const Shape& bs = b.shape();
  Tensor out(s);
  for (int64_t n = 0; n < s.batch; ++n)
    for (int64_t y = 0; y < s.height; ++y)
      for (int64_t x = 0; x < s.width; ++x)
        for (int64_t c = 0; c < s.channels; ++c) {
          const float rhs = b.at(bs.batch == 1 ? 0 : n, bs.height == 1 ? 0 : y,
                                 bs.width == 1 ? 0 : x, bs.channels == 1 ? 0 : c);
          const float lhs = a.at(n, y, x, c);
          out(n, y, x, c) = kind == ElementwiseKind::kAdd ? lhs + rhs : lhs * rhs;
        }
  return out;
}

}  // namespace rawisp::kernels::reference
