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
// Independent brute-force oracles and generators for the test suites. Nothing
// here calls into the engine's kernels; the oracles work on plain vectors with
// the NHWC offset written out by hand.
#ifndef RAWISP_TESTS_ORACLES_HPP_
#define RAWISP_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rawisp/tensor.hpp"

namespace oracle {

using rawisp::Shape;
using rawisp::Tensor;

inline size_t idx(const Shape& s, int64_t b, int64_t h, int64_t w, int64_t c) {
  return static_cast<size_t>(((b * s.height + h) * s.width + w) * s.channels + c);
}

inline Tensor random_tensor(std::mt19937_64& rng, const Shape& s, float lo = -1.0f,
                            float hi = 1.0f) {
  std::uniform_real_distribution<float> d(lo, hi);
  std::vector<float> v(static_cast<size_t>(s.elements()));
  for (auto& x : v) x = d(rng);
  return Tensor(s, std::move(v));
}

inline std::vector<float> random_vector(std::mt19937_64& rng, int64_t n, float lo = -1.0f,
                                        float hi = 1.0f) {
  std::uniform_real_distribution<float> d(lo, hi);
  std::vector<float> v(static_cast<size_t>(n));
  for (auto& x : v) x = d(rng);
  return v;
}

inline int64_t rand_int(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

// Six nested loops over output position, output channel and taps. SAME
// padding splits the total as floor(total/2) before.
inline Tensor conv2d(const Tensor& in, const Tensor& w, const std::vector<float>& bias, int stride,
                     int groups, bool same) {
  const Shape s = in.shape();
  const int64_t oc = w.shape().batch, kh = w.shape().height, kw = w.shape().width;
  const int64_t icg = w.shape().channels;
  const int64_t ocg = oc / groups;
  int64_t oh, ow, pt, pl;
  if (same) {
    oh = (s.height + stride - 1) / stride;
    ow = (s.width + stride - 1) / stride;
    pt = std::max<int64_t>((oh - 1) * stride + kh - s.height, 0) / 2;
    pl = std::max<int64_t>((ow - 1) * stride + kw - s.width, 0) / 2;
  } else {
    oh = (s.height - kh) / stride + 1;
    ow = (s.width - kw) / stride + 1;
    pt = pl = 0;
  }
  const Shape os{s.batch, oh, ow, oc};
  std::vector<float> out(static_cast<size_t>(os.elements()));
  const auto iv = in.data();
  const auto wv = w.data();
  for (int64_t b = 0; b < s.batch; ++b)
    for (int64_t y = 0; y < oh; ++y)
      for (int64_t x = 0; x < ow; ++x)
        for (int64_t o = 0; o < oc; ++o) {
          const int64_t g = o / ocg;
          double acc = bias.empty() ? 0.0 : bias[static_cast<size_t>(o)];
          for (int64_t i = 0; i < kh; ++i)
            for (int64_t j = 0; j < kw; ++j)
              for (int64_t c = 0; c < icg; ++c) {
                const int64_t sy = y * stride + i - pt, sx = x * stride + j - pl;
                if (sy < 0 || sx < 0 || sy >= s.height || sx >= s.width) continue;
                acc += static_cast<double>(iv[idx(s, b, sy, sx, g * icg + c)]) *
                       wv[static_cast<size_t>(((o * kh + i) * kw + j) * icg + c)];
              }
          out[idx(os, b, y, x, o)] = static_cast<float>(acc);
        }
  return Tensor(os, std::move(out));
}

// Per-channel depthwise loop, SAME padding. Weights shaped (c, kh, kw, 1).
inline Tensor depthwise(const Tensor& in, const Tensor& w, const std::vector<float>& bias) {
  const Shape s = in.shape();
  const int64_t kh = w.shape().height, kw = w.shape().width;
  std::vector<float> out(static_cast<size_t>(s.elements()));
  for (int64_t c = 0; c < s.channels; ++c)
    for (int64_t b = 0; b < s.batch; ++b)
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x) {
          double acc = bias.empty() ? 0.0 : bias[static_cast<size_t>(c)];
          for (int64_t i = 0; i < kh; ++i)
            for (int64_t j = 0; j < kw; ++j) {
              const int64_t sy = y + i - kh / 2, sx = x + j - kw / 2;
              if (sy < 0 || sx < 0 || sy >= s.height || sx >= s.width) continue;
              acc += static_cast<double>(in.data()[idx(s, b, sy, sx, c)]) *
                     w.data()[static_cast<size_t>((c * kh + i) * kw + j)];
            }
          out[idx(s, b, y, x, c)] = static_cast<float>(acc);
        }
  return Tensor(s, std::move(out));
}

// Scalar interpolator for one output coordinate with half-pixel centers.
inline double interp_1d(const std::vector<double>& src, int64_t dst) {
  const double pos = (dst + 0.5) / 2.0 - 0.5;
  const double clamped = std::clamp(pos, 0.0, static_cast<double>(src.size() - 1));
  const auto lo = static_cast<size_t>(std::floor(clamped));
  const size_t hi = std::min(lo + 1, src.size() - 1);
  const double t = clamped - static_cast<double>(lo);
  return src[lo] * (1.0 - t) + src[hi] * t;
}

inline Tensor bilinear_x2(const Tensor& in) {
  const Shape s = in.shape();
  const Shape os{s.batch, s.height * 2, s.width * 2, s.channels};
  std::vector<float> out(static_cast<size_t>(os.elements()));
  for (int64_t b = 0; b < s.batch; ++b)
    for (int64_t c = 0; c < s.channels; ++c) {
      // Separable: rows first, then columns.
      std::vector<std::vector<double>> rows(static_cast<size_t>(s.height));
      for (int64_t y = 0; y < s.height; ++y) {
        std::vector<double> line(static_cast<size_t>(s.width));
        for (int64_t x = 0; x < s.width; ++x) line[static_cast<size_t>(x)] = in.data()[idx(s, b, y, x, c)];
        rows[static_cast<size_t>(y)].resize(static_cast<size_t>(os.width));
        for (int64_t x = 0; x < os.width; ++x) rows[static_cast<size_t>(y)][static_cast<size_t>(x)] = interp_1d(line, x);
      }
      for (int64_t x = 0; x < os.width; ++x) {
        std::vector<double> col(static_cast<size_t>(s.height));
        for (int64_t y = 0; y < s.height; ++y) col[static_cast<size_t>(y)] = rows[static_cast<size_t>(y)][static_cast<size_t>(x)];
        for (int64_t y = 0; y < os.height; ++y)
          out[idx(os, b, y, x, c)] = static_cast<float>(interp_1d(col, y));
      }
    }
  return Tensor(os, std::move(out));
}

// Two-pass population mean / variance per (batch, channel) plane.
inline Tensor instance_norm(const Tensor& in, const std::vector<float>& gamma,
                            const std::vector<float>& beta, double eps) {
  const Shape s = in.shape();
  std::vector<float> out(static_cast<size_t>(s.elements()));
  const double n = static_cast<double>(s.height * s.width);
  for (int64_t b = 0; b < s.batch; ++b)
    for (int64_t c = 0; c < s.channels; ++c) {
      double mean = 0.0;
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x) mean += in.data()[idx(s, b, y, x, c)];
      mean /= n;
      double var = 0.0;
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x) {
          const double d = in.data()[idx(s, b, y, x, c)] - mean;
          var += d * d;
        }
      var /= n;
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x)
          out[idx(s, b, y, x, c)] = static_cast<float>(
              (in.data()[idx(s, b, y, x, c)] - mean) / std::sqrt(var + eps) * gamma[static_cast<size_t>(c)] +
              beta[static_cast<size_t>(c)]);
    }
  return Tensor(s, std::move(out));
}

inline Tensor max_pool(const Tensor& in) {
  const Shape s = in.shape();
  const Shape os{s.batch, s.height / 2, s.width / 2, s.channels};
  std::vector<float> out(static_cast<size_t>(os.elements()));
  for (int64_t b = 0; b < os.batch; ++b)
    for (int64_t y = 0; y < os.height; ++y)
      for (int64_t x = 0; x < os.width; ++x)
        for (int64_t c = 0; c < os.channels; ++c) {
          float m = -INFINITY;
          for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) m = std::max(m, in.data()[idx(s, b, 2 * y + dy, 2 * x + dx, c)]);
          out[idx(os, b, y, x, c)] = m;
        }
  return Tensor(os, std::move(out));
}

inline Tensor avg_pool(const Tensor& in) {
  const Shape s = in.shape();
  const Shape os{s.batch, 1, 1, s.channels};
  std::vector<float> out(static_cast<size_t>(os.elements()));
  for (int64_t b = 0; b < s.batch; ++b)
    for (int64_t c = 0; c < s.channels; ++c) {
      double sum = 0.0;
      for (int64_t y = 0; y < s.height; ++y)
        for (int64_t x = 0; x < s.width; ++x) sum += in.data()[idx(s, b, y, x, c)];
      out[idx(os, b, 0, 0, c)] = static_cast<float>(sum / static_cast<double>(s.height * s.width));
    }
  return Tensor(os, std::move(out));
}

// Explicit broadcast: a size-1 axis of b is read at index 0.
inline Tensor broadcast_mul(const Tensor& a, const Tensor& bt) {
  const Shape s = a.shape(), t = bt.shape();
  std::vector<float> out(static_cast<size_t>(s.elements()));
  for (int64_t b = 0; b < s.batch; ++b)
    for (int64_t y = 0; y < s.height; ++y)
      for (int64_t x = 0; x < s.width; ++x)
        for (int64_t c = 0; c < s.channels; ++c) {
          const float v = bt.data()[idx(t, t.batch == 1 ? 0 : b, t.height == 1 ? 0 : y,
                                        t.width == 1 ? 0 : x, t.channels == 1 ? 0 : c)];
          out[idx(s, b, y, x, c)] = a.data()[idx(s, b, y, x, c)] * v;
        }
  return Tensor(s, std::move(out));
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (int64_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(static_cast<double>(a.data()[static_cast<size_t>(i)]) -
                             b.data()[static_cast<size_t>(i)]));
  return m;
}

// True when |a - b| <= abs + rel * |b| elementwise, b being the oracle.
inline bool close(const Tensor& a, const Tensor& b, double abs_tol, double rel_tol) {
  if (!(a.shape() == b.shape())) return false;
  for (int64_t i = 0; i < a.size(); ++i) {
    const double x = a.data()[static_cast<size_t>(i)], y = b.data()[static_cast<size_t>(i)];
    if (std::abs(x - y) > abs_tol + rel_tol * std::abs(y)) return false;
  }
  return true;
}

// SSIM by direct evaluation at every valid window position: a fresh 11x11
// Gaussian-weighted sum of means, variances and covariance per position,
// averaged over positions, then channels and batch.
inline double ssim(const Tensor& a, const Tensor& b) {
  constexpr int kWin = 11;
  const double sigma = 1.5, c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  double wts[kWin][kWin];
  double wsum = 0.0;
  for (int i = 0; i < kWin; ++i)
    for (int j = 0; j < kWin; ++j) {
      const double di = i - kWin / 2, dj = j - kWin / 2;
      wts[i][j] = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
      wsum += wts[i][j];
    }
  for (auto& row : wts)
    for (double& w : row) w /= wsum;
  const Shape s = a.shape();
  double total = 0.0;
  for (int64_t bb = 0; bb < s.batch; ++bb)
    for (int64_t c = 0; c < s.channels; ++c) {
      double plane = 0.0;
      int64_t count = 0;
      for (int64_t y = 0; y + kWin <= s.height; ++y)
        for (int64_t x = 0; x + kWin <= s.width; ++x) {
          double ma = 0, mb = 0;
          for (int i = 0; i < kWin; ++i)
            for (int j = 0; j < kWin; ++j) {
              ma += wts[i][j] * a.data()[idx(s, bb, y + i, x + j, c)];
              mb += wts[i][j] * b.data()[idx(s, bb, y + i, x + j, c)];
            }
          double va = 0, vb = 0, cov = 0;
          for (int i = 0; i < kWin; ++i)
            for (int j = 0; j < kWin; ++j) {
              const double da = a.data()[idx(s, bb, y + i, x + j, c)] - ma;
              const double db = b.data()[idx(s, bb, y + i, x + j, c)] - mb;
              va += wts[i][j] * da * da;
              vb += wts[i][j] * db * db;
              cov += wts[i][j] * da * db;
            }
          plane += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
          ++count;
        }
      total += plane / static_cast<double>(count);
    }
  return total / static_cast<double>(s.batch * s.channels);
}

}  // namespace oracle

#endif  // RAWISP_TESTS_ORACLES_HPP_
