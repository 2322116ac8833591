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
#define EIGEN_DONT_PARALLELIZE
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "parallel.hpp"
#include "rawisp/kernels.hpp"

namespace rawisp::kernels::optimized {
namespace {

using RowMajor = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using StridedMap = Eigen::Map<RowMajor, 0, Eigen::OuterStride<>>;
using ConstStridedMap = Eigen::Map<const RowMajor, 0, Eigen::OuterStride<>>;

std::vector<float>& scratch(size_t n) {
  thread_local std::vector<float> buffer;
  if (buffer.size() < n) buffer.resize(n);
  return buffer;
}

}  // namespace

// Each output row is an independent task: the row's patches are unrolled into
// an [out_w x kh*kw*icg] matrix (per group) and multiplied against the weight
// rows, whose [out_c][kh][kw][icg] layout already matches the patch order.
Tensor conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
              const ConvParams& p, int threads) {
  const Shape& in = input.shape();
  const int64_t out_c = weights.shape().batch;
  const int64_t icg = weights.shape().channels;
  const int64_t ocg = out_c / p.groups;
  const int64_t kh = p.kernel_height;
  const int64_t kw = p.kernel_width;
  const int64_t k_group = kh * kw * icg;
  const int64_t oh = conv_output_extent(in.height, p.kernel_height, p.stride, p.padding);
  const int64_t ow = conv_output_extent(in.width, p.kernel_width, p.stride, p.padding);
  const int64_t pad_t = conv_pad_before(in.height, p.kernel_height, p.stride, p.padding);
  const int64_t pad_l = conv_pad_before(in.width, p.kernel_width, p.stride, p.padding);
  const bool pointwise = kh == 1 && kw == 1 && p.stride == 1;

  Tensor out(Shape{in.batch, oh, ow, out_c});
  const float* src = input.ptr();
  float* dst = out.ptr();
  const ConstStridedMap w_all(weights.ptr(), out_c, k_group, Eigen::OuterStride<>(k_group));

  detail::parallel_for(in.batch * oh, threads, [&](int64_t begin, int64_t end) {
    std::vector<float>& cols = scratch(pointwise ? 0 : static_cast<size_t>(ow * k_group));
    for (int64_t row = begin; row < end; ++row) {
      const int64_t b = row / oh;
      const int64_t y = row % oh;
      float* out_row = dst + (b * oh + y) * ow * out_c;
      for (int64_t g = 0; g < p.groups; ++g) {
        const int64_t c0 = p.channel_offset + g * icg;
        StridedMap result(out_row + g * ocg, ow, ocg, Eigen::OuterStride<>(out_c));
        const auto w = w_all.middleRows(g * ocg, ocg);
        if (pointwise) {
          const ConstStridedMap patches(src + ((b * in.height + y) * in.width) * in.channels + c0,
                                        ow, icg, Eigen::OuterStride<>(in.channels));
          result.noalias() = patches * w.transpose();
          continue;
        }
        for (int64_t x = 0; x < ow; ++x) {
          float* col = cols.data() + x * k_group;
          for (int64_t ky = 0; ky < kh; ++ky) {
            const int64_t iy = y * p.stride + ky - pad_t;
            for (int64_t kx = 0; kx < kw; ++kx) {
              const int64_t ix = x * p.stride + kx - pad_l;
              float* cell = col + (ky * kw + kx) * icg;
              if (iy < 0 || iy >= in.height || ix < 0 || ix >= in.width) {
                std::fill(cell, cell + icg, 0.0f);
              } else {
                const float* pix = src + ((b * in.height + iy) * in.width + ix) * in.channels + c0;
                std::memcpy(cell, pix, static_cast<size_t>(icg) * sizeof(float));
              }
            }
          }
        }
        const Eigen::Map<const RowMajor> patches(cols.data(), ow, k_group);
        result.noalias() = patches * w.transpose();
      }
      if (!bias.empty()) {
        for (int64_t x = 0; x < ow; ++x) {
          float* px = out_row + x * out_c;
          for (int64_t oc = 0; oc < out_c; ++oc) px[oc] += bias[static_cast<size_t>(oc)];
        }
      }
    }
  });
  return out;
}

Tensor depthwise_conv2d(const Tensor& input, const Tensor& weights, std::span<const float> bias,
                        int stride, int threads) {
  const Shape& in = input.shape();
  const int64_t c_count = in.channels;
  const int64_t kh = weights.shape().height;
  const int64_t kw = weights.shape().width;
  const int64_t oh = conv_output_extent(in.height, static_cast<int>(kh), stride, Padding::kSameZero);
  const int64_t ow = conv_output_extent(in.width, static_cast<int>(kw), stride, Padding::kSameZero);
  const int64_t pad_t = conv_pad_before(in.height, static_cast<int>(kh), stride, Padding::kSameZero);
  const int64_t pad_l = conv_pad_before(in.width, static_cast<int>(kw), stride, Padding::kSameZero);

  // [kh][kw][c] so the innermost loop runs over contiguous channels.
  std::vector<float> taps(static_cast<size_t>(kh * kw * c_count));
  for (int64_t c = 0; c < c_count; ++c)
    for (int64_t t = 0; t < kh * kw; ++t)
      taps[static_cast<size_t>(t * c_count + c)] = weights.ptr()[c * kh * kw + t];

  Tensor out(Shape{in.batch, oh, ow, c_count});
  const float* src = input.ptr();
  float* dst = out.ptr();
  detail::parallel_for(in.batch * oh, threads, [&](int64_t begin, int64_t end) {
    for (int64_t row = begin; row < end; ++row) {
      const int64_t b = row / oh;
      const int64_t y = row % oh;
      float* out_row = dst + row * ow * c_count;
      for (int64_t x = 0; x < ow; ++x) {
        float* acc = out_row + x * c_count;
        if (bias.empty()) {
          std::fill(acc, acc + c_count, 0.0f);
        } else {
          std::copy(bias.begin(), bias.end(), acc);
        }
        for (int64_t ky = 0; ky < kh; ++ky) {
          const int64_t iy = y * stride + ky - pad_t;
          if (iy < 0 || iy >= in.height) continue;
          for (int64_t kx = 0; kx < kw; ++kx) {
            const int64_t ix = x * stride + kx - pad_l;
            if (ix < 0 || ix >= in.width) continue;
            const float* pix = src + ((b * in.height + iy) * in.width + ix) * c_count;
            const float* tap = taps.data() + (ky * kw + kx) * c_count;
            for (int64_t c = 0; c < c_count; ++c) acc[c] += pix[c] * tap[c];
          }
        }
      }
    }
  });
  return out;
}

Tensor prelu(const Tensor& input, std::span<const float> slopes, int threads) {
  Tensor out(input.shape());
  const int64_t c_count = input.channels();
  const int64_t pixels = input.size() / c_count;
  const float* src = input.ptr();
  float* dst = out.ptr();
  detail::parallel_for(pixels, threads, [&](int64_t begin, int64_t end) {
    for (int64_t i = begin; i < end; ++i) {
      const float* s = src + i * c_count;
      float* d = dst + i * c_count;
      for (int64_t c = 0; c < c_count; ++c) {
        const float v = s[c];
        d[c] = v >= 0.0f ? v : slopes[static_cast<size_t>(c)] * v;
      }
    }
  });
  return out;
}

Tensor activation(ActivationKind kind, const Tensor& input, int threads) {
  Tensor out(input.shape());
  const float* src = input.ptr();
  float* dst = out.ptr();
  constexpr float kTiny = std::numeric_limits<float>::min();
  detail::parallel_for(input.size(), threads, [&](int64_t begin, int64_t end) {
    if (kind == ActivationKind::kTanh) {
      for (int64_t i = begin; i < end; ++i) {
        dst[i] = std::clamp(std::tanh(src[i]), -kOpenUnitUpper, kOpenUnitUpper);
      }
    } else {
      for (int64_t i = begin; i < end; ++i) {
        dst[i] = std::clamp(1.0f / (1.0f + std::exp(-src[i])), kTiny, kOpenUnitUpper);
      }
    }
  });
  return out;
}

// Per-row partial sums are combined in row order, so the statistics do not
// depend on how rows are distributed over workers.
Tensor instance_norm(const Tensor& input, const NormParams& p, int threads) {
  const Shape& s = input.shape();
  const int64_t c_count = s.channels;
  const int64_t row_len = s.width * c_count;
  const double plane = static_cast<double>(s.height * s.width);
  Tensor out(s);
  std::vector<double> partial(static_cast<size_t>(s.height * c_count));
  std::vector<double> scale(static_cast<size_t>(c_count));

  for (int64_t b = 0; b < s.batch; ++b) {
    const float* base = input.ptr() + b * s.height * row_len;
    float* out_base = out.ptr() + b * s.height * row_len;

    detail::parallel_for(s.height, threads, [&](int64_t begin, int64_t end) {
      for (int64_t y = begin; y < end; ++y) {
        double* acc = partial.data() + y * c_count;
        std::fill(acc, acc + c_count, 0.0);
        const float* row = base + y * row_len;
        for (int64_t x = 0; x < s.width; ++x)
          for (int64_t c = 0; c < c_count; ++c) acc[c] += row[x * c_count + c];
      }
    });
    std::vector<double> mean_d(static_cast<size_t>(c_count), 0.0);
    for (int64_t y = 0; y < s.height; ++y)
      for (int64_t c = 0; c < c_count; ++c) mean_d[static_cast<size_t>(c)] += partial[static_cast<size_t>(y * c_count + c)];
    for (auto& m : mean_d) m /= plane;

    detail::parallel_for(s.height, threads, [&](int64_t begin, int64_t end) {
      for (int64_t y = begin; y < end; ++y) {
        double* acc = partial.data() + y * c_count;
        std::fill(acc, acc + c_count, 0.0);
        const float* row = base + y * row_len;
        for (int64_t x = 0; x < s.width; ++x)
          for (int64_t c = 0; c < c_count; ++c) {
            const double d = row[x * c_count + c] - mean_d[static_cast<size_t>(c)];
            acc[c] += d * d;
          }
      }
    });
    for (int64_t c = 0; c < c_count; ++c) {
      double sq = 0.0;
      for (int64_t y = 0; y < s.height; ++y) sq += partial[static_cast<size_t>(y * c_count + c)];
      const double inv = 1.0 / std::sqrt(sq / plane + p.epsilon);
      scale[static_cast<size_t>(c)] = p.gamma[static_cast<size_t>(c)] * inv;
    }

    // Centering stays in double: with a tiny variance the scale is large and
    // a float mean would amplify its rounding error.
    detail::parallel_for(s.height, threads, [&](int64_t begin, int64_t end) {
      for (int64_t y = begin; y < end; ++y) {
        const float* row = base + y * row_len;
        float* orow = out_base + y * row_len;
        for (int64_t x = 0; x < s.width; ++x)
          for (int64_t c = 0; c < c_count; ++c) {
            const size_t ci = static_cast<size_t>(c);
            orow[x * c_count + c] = static_cast<float>(
                (row[x * c_count + c] - mean_d[ci]) * scale[ci] + p.beta[ci]);
          }
      }
    });
  }
  return out;
}

Tensor bilinear_upsample_x2(const Tensor& input, int threads) {
  const Shape& s = input.shape();
  const int64_t oh = s.height * 2;
  const int64_t ow = s.width * 2;
  const int64_t c_count = s.channels;
  struct Tap {
    int64_t lo, hi;
    float frac;
  };
  const auto table = [](int64_t out_size, int64_t in_size) {
    std::vector<Tap> taps(static_cast<size_t>(out_size));
    for (int64_t i = 0; i < out_size; ++i) {
      const float src = (static_cast<float>(i) + 0.5f) * 0.5f - 0.5f;
      const float fl = std::floor(src);
      taps[static_cast<size_t>(i)] = {std::max<int64_t>(static_cast<int64_t>(fl), 0),
                                      std::min<int64_t>(static_cast<int64_t>(std::ceil(src)), in_size - 1),
                                      src - fl};
    }
    return taps;
  };
  const std::vector<Tap> ys = table(oh, s.height);
  const std::vector<Tap> xs = table(ow, s.width);

  Tensor out(Shape{s.batch, oh, ow, c_count});
  const float* src = input.ptr();
  float* dst = out.ptr();
  detail::parallel_for(s.batch * oh, threads, [&](int64_t begin, int64_t end) {
    for (int64_t row = begin; row < end; ++row) {
      const int64_t b = row / oh;
      const Tap& ty = ys[static_cast<size_t>(row % oh)];
      const float* r0 = src + (b * s.height + ty.lo) * s.width * c_count;
      const float* r1 = src + (b * s.height + ty.hi) * s.width * c_count;
      float* orow = dst + row * ow * c_count;
      for (int64_t x = 0; x < ow; ++x) {
        const Tap& tx = xs[static_cast<size_t>(x)];
        const float* a = r0 + tx.lo * c_count;
        const float* bb = r0 + tx.hi * c_count;
        const float* cc = r1 + tx.lo * c_count;
        const float* d = r1 + tx.hi * c_count;
        float* o = orow + x * c_count;
        for (int64_t c = 0; c < c_count; ++c) {
          const float top = a[c] + (bb[c] - a[c]) * tx.frac;
          const float bot = cc[c] + (d[c] - cc[c]) * tx.frac;
          o[c] = top + (bot - top) * ty.frac;
        }
      }
    }
  });
  return out;
}

Tensor space_to_depth(const Tensor& input, int block, int threads) {
  const Shape& s = input.shape();
  const Shape os = check_space_to_depth(s, block);
  Tensor out(os);
  const float* src = input.ptr();
  float* dst = out.ptr();
  const int64_t cells = static_cast<int64_t>(block) * block;
  detail::parallel_for(os.batch * os.height, threads, [&](int64_t begin, int64_t end) {
    for (int64_t row = begin; row < end; ++row) {
      const int64_t b = row / os.height;
      const int64_t y = row % os.height;
      for (int64_t x = 0; x < os.width; ++x) {
        float* o = dst + (row * os.width + x) * os.channels;
        for (int64_t dy = 0; dy < block; ++dy)
          for (int64_t dx = 0; dx < block; ++dx) {
            const float* pix =
                src + ((b * s.height + y * block + dy) * s.width + x * block + dx) * s.channels;
            const int64_t cell = dy * block + dx;
            for (int64_t c = 0; c < s.channels; ++c) o[c * cells + cell] = pix[c];
          }
      }
    }
  });
  return out;
}

Tensor depth_to_space(const Tensor& input, int block, int threads) {
  const Shape& s = input.shape();
  const Shape os = check_depth_to_space(s, block);
  Tensor out(os);
  const float* src = input.ptr();
  float* dst = out.ptr();
  const int64_t cells = static_cast<int64_t>(block) * block;
  detail::parallel_for(s.batch * s.height, threads, [&](int64_t begin, int64_t end) {
    for (int64_t row = begin; row < end; ++row) {
      const int64_t b = row / s.height;
      const int64_t y = row % s.height;
      for (int64_t x = 0; x < s.width; ++x) {
        const float* pix = src + (row * s.width + x) * s.channels;
        for (int64_t dy = 0; dy < block; ++dy)
          for (int64_t dx = 0; dx < block; ++dx) {
            float* o =
                dst + ((b * os.height + y * block + dy) * os.width + x * block + dx) * os.channels;
            const int64_t cell = dy * block + dx;
            for (int64_t c = 0; c < os.channels; ++c) o[c] = pix[c * cells + cell];
          }
      }
    }
  });
  return out;
}

Tensor max_pool_2x2(const Tensor& input, int threads) {
  const Shape& s = input.shape();
  const Shape os = check_max_pool_2x2(s);
  Tensor out(os);
  const float* src = input.ptr();
  float* dst = out.ptr();
  const int64_t c_count = s.channels;
  detail::parallel_for(os.batch * os.height, threads, [&](int64_t begin, int64_t end) {
    for (int64_t row = begin; row < end; ++row) {
      const int64_t b = row / os.height;
      const int64_t y = row % os.height;
      const float* r0 = src + (b * s.height + 2 * y) * s.width * c_count;
      const float* r1 = r0 + s.width * c_count;
      float* o = dst + row * os.width * c_count;
      for (int64_t x = 0; x < os.width; ++x) {
        const float* a = r0 + 2 * x * c_count;
        const float* bb = r1 + 2 * x * c_count;
        for (int64_t c = 0; c < c_count; ++c) {
          o[x * c_count + c] =
              std::max(std::max(a[c], a[c + c_count]), std::max(bb[c], bb[c + c_count]));
        }
      }
    }
  });
  return out;
}

Tensor global_avg_pool(const Tensor& input, int threads) {
  const Shape& s = input.shape();
  const int64_t c_count = s.channels;
  const int64_t pixels = s.height * s.width;
  Tensor out(Shape{s.batch, 1, 1, c_count});
  detail::parallel_for(s.batch, threads, [&](int64_t begin, int64_t end) {
    std::vector<double> acc(static_cast<size_t>(c_count));
    for (int64_t b = begin; b < end; ++b) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const float* base = input.ptr() + b * pixels * c_count;
      for (int64_t i = 0; i < pixels; ++i)
        for (int64_t c = 0; c < c_count; ++c) acc[static_cast<size_t>(c)] += base[i * c_count + c];
      for (int64_t c = 0; c < c_count; ++c) {
        out.ptr()[b * c_count + c] =
            static_cast<float>(acc[static_cast<size_t>(c)] / static_cast<double>(pixels));
      }
    }
  });
  return out;
}

Tensor concat_channels(std::span<const Tensor* const> inputs, int threads) {
  std::vector<Shape> shapes;
  for (const Tensor* t : inputs) shapes.push_back(t->shape());
  const Shape os = check_concat_channels(shapes);
  Tensor out(os);
  const int64_t pixels = os.batch * os.height * os.width;
  float* dst = out.ptr();
  detail::parallel_for(pixels, threads, [&](int64_t begin, int64_t end) {
    int64_t base = 0;
    for (const Tensor* t : inputs) {
      const int64_t c = t->channels();
      const float* src = t->ptr();
      for (int64_t i = begin; i < end; ++i) {
        std::memcpy(dst + i * os.channels + base, src + i * c, static_cast<size_t>(c) * sizeof(float));
      }
      base += c;
    }
  });
  return out;
}

Tensor elementwise(ElementwiseKind kind, const Tensor& a, const Tensor& b, int threads) {
  const Shape& s = a.shape();
  const Shape& bs = b.shape();
  Tensor out(s);
  const float* pa = a.ptr();
  const float* pb = b.ptr();
  float* po = out.ptr();
  const bool add = kind == ElementwiseKind::kAdd;
  const int64_t c_count = s.channels;
  const int64_t pixels = s.batch * s.height * s.width;

  if (bs == s) {
    detail::parallel_for(a.size(), threads, [&](int64_t begin, int64_t end) {
      if (add) {
        for (int64_t i = begin; i < end; ++i) po[i] = pa[i] + pb[i];
      } else {
        for (int64_t i = begin; i < end; ++i) po[i] = pa[i] * pb[i];
      }
    });
    return out;
  }
  // General broadcast: resolve the b pixel once per output pixel, then run
  // the channel loop with either a per-channel or a single rhs value.
  detail::parallel_for(pixels, threads, [&](int64_t begin, int64_t end) {
    for (int64_t i = begin; i < end; ++i) {
      const int64_t x = i % s.width;
      const int64_t y = (i / s.width) % s.height;
      const int64_t n = i / (s.width * s.height);
      const int64_t bpix = ((bs.batch == 1 ? 0 : n) * bs.height + (bs.height == 1 ? 0 : y)) * bs.width +
                           (bs.width == 1 ? 0 : x);
      const float* rhs = pb + bpix * bs.channels;
      const float* lhs = pa + i * c_count;
      float* o = po + i * c_count;
      if (bs.channels == 1) {
        const float r = rhs[0];
        for (int64_t c = 0; c < c_count; ++c) o[c] = add ? lhs[c] + r : lhs[c] * r;
      } else {
        for (int64_t c = 0; c < c_count; ++c) o[c] = add ? lhs[c] + rhs[c] : lhs[c] * rhs[c];
      }
    }
  });
  return out;
}

}  // namespace rawisp::kernels::optimized
