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
#ifndef RAWISP_METRICS_HPP_
#define RAWISP_METRICS_HPP_

#include "rawisp/tensor.hpp"

namespace rawisp {

/// Returned by psnr() for identical inputs.
inline constexpr double kPsnrCapDb = 100.0;

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// 10 log10(1 / MSE) over all samples of two equally shaped tensors in [0, 1].
double psnr(const Tensor& a, const Tensor& b);

/// Single-scale SSIM with a Gaussian window, averaged over all valid window
/// positions and then over channels (and batch entries). Throws kShape when
/// the shapes differ or the image is smaller than the window.
double ssim(const Tensor& a, const Tensor& b, const SsimParams& params = {});

struct MetricReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
};

MetricReport evaluate(const Tensor& a, const Tensor& b);

}  // namespace rawisp

#endif  // RAWISP_METRICS_HPP_
