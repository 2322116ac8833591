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
#include "rawisp/metrics.hpp"

#include <cmath>
#include <vector>

#include "rawisp/error.hpp"

namespace rawisp {
namespace {

void check_same(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw_error(ErrorCode::kShape, std::string(what) + ": shapes " + a.shape().str() + " and " +
                                       b.shape().str() + " differ");
  }
}

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(static_cast<size_t>(size));
  const double center = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    w[static_cast<size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += w[static_cast<size_t>(i)];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Valid-mode separable filtering of a row-major plane.
std::vector<double> filter_valid(const std::vector<double>& plane, int64_t h, int64_t w,
                                 const std::vector<double>& k) {
  const int64_t n = static_cast<int64_t>(k.size());
  const int64_t ow = w - n + 1;
  const int64_t oh = h - n + 1;
  std::vector<double> tmp(static_cast<size_t>(h * ow));
  for (int64_t y = 0; y < h; ++y)
    for (int64_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int64_t i = 0; i < n; ++i) acc += k[static_cast<size_t>(i)] * plane[static_cast<size_t>(y * w + x + i)];
      tmp[static_cast<size_t>(y * ow + x)] = acc;
    }
  std::vector<double> out(static_cast<size_t>(oh * ow));
  for (int64_t y = 0; y < oh; ++y)
    for (int64_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int64_t i = 0; i < n; ++i) acc += k[static_cast<size_t>(i)] * tmp[static_cast<size_t>((y + i) * ow + x)];
      out[static_cast<size_t>(y * ow + x)] = acc;
    }
  return out;
}

}  // namespace

double psnr(const Tensor& a, const Tensor& b) {
  check_same(a, b, "psnr");
  auto da = a.data();
  auto db = b.data();
  double sum = 0.0;
  for (size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(da.size());
  if (mse == 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

double ssim(const Tensor& a, const Tensor& b, const SsimParams& p) {
  check_same(a, b, "ssim");
  const Shape& s = a.shape();
  if (s.height < p.window || s.width < p.window) {
    throw_error(ErrorCode::kShape, "ssim: image " + s.str() + " smaller than the " +
                                       std::to_string(p.window) + "x" +
                                       std::to_string(p.window) + " window");
  }
  const std::vector<double> k = gaussian_window(p.window, p.sigma);
  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
  const int64_t plane = s.height * s.width;

  double total = 0.0;
  std::vector<double> x(static_cast<size_t>(plane)), y(x.size()), xx(x.size()), yy(x.size()),
      xy(x.size());
  for (int64_t n = 0; n < s.batch; ++n) {
    for (int64_t c = 0; c < s.channels; ++c) {
      for (int64_t i = 0; i < plane; ++i) {
        const double va = a.data()[static_cast<size_t>((n * plane + i) * s.channels + c)];
        const double vb = b.data()[static_cast<size_t>((n * plane + i) * s.channels + c)];
        const size_t j = static_cast<size_t>(i);
        x[j] = va;
        y[j] = vb;
        xx[j] = va * va;
        yy[j] = vb * vb;
        xy[j] = va * vb;
      }
      const auto mx = filter_valid(x, s.height, s.width, k);
      const auto my = filter_valid(y, s.height, s.width, k);
      const auto mxx = filter_valid(xx, s.height, s.width, k);
      const auto myy = filter_valid(yy, s.height, s.width, k);
      const auto mxy = filter_valid(xy, s.height, s.width, k);
      double sum = 0.0;
      for (size_t i = 0; i < mx.size(); ++i) {
        const double vx = mxx[i] - mx[i] * mx[i];
        const double vy = myy[i] - my[i] * my[i];
        const double cov = mxy[i] - mx[i] * my[i];
        sum += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
               ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
      }
      total += sum / static_cast<double>(mx.size());
    }
  }
  return total / static_cast<double>(s.batch * s.channels);
}

MetricReport evaluate(const Tensor& a, const Tensor& b) { return {psnr(a, b), ssim(a, b)}; }

}  // namespace rawisp
