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
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rawisp/metrics.hpp"
#include "test_util.hpp"

namespace rawisp {
namespace {

using testutil::code_of;

TEST(Psnr, IdenticalIsCapped) {
  std::mt19937_64 rng(1);
  const Tensor x = oracle::random_tensor(rng, {1, 16, 16, 3}, 0.0f, 1.0f);
  EXPECT_EQ(psnr(x, x), 100.0);
}

TEST(Psnr, UniformTenthDifference) {
  // 0.1f is not exactly 0.1, so the closed form holds to float resolution.
  const Tensor a = Tensor::filled({1, 8, 8, 3}, 0.0f);
  const Tensor b = Tensor::filled({1, 8, 8, 3}, 0.1f);
  EXPECT_NEAR(psnr(a, b), 20.0, 1e-6);
  const Tensor c = Tensor::filled({1, 8, 8, 3}, 0.25f);
  const Tensor d = Tensor::filled({1, 8, 8, 3}, 0.75f);  // exact in binary: MSE 0.25
  EXPECT_DOUBLE_EQ(psnr(c, d), 10.0 * std::log10(4.0));
}

TEST(Psnr, SymmetricAndShapeChecked) {
  std::mt19937_64 rng(2);
  const Tensor a = oracle::random_tensor(rng, {1, 9, 7, 3}, 0.0f, 1.0f);
  const Tensor b = oracle::random_tensor(rng, {1, 9, 7, 3}, 0.0f, 1.0f);
  EXPECT_EQ(psnr(a, b), psnr(b, a));
  EXPECT_GE(psnr(a, b), 0.0);
  EXPECT_EQ(code_of([&] { psnr(a, Tensor(Shape{1, 9, 7, 1})); }), ErrorCode::kShape);
}

TEST(Psnr, DecreasesWithNoiseAmplitude) {
  std::mt19937_64 rng(3);
  const Tensor base = oracle::random_tensor(rng, {1, 32, 32, 3}, 0.3f, 0.7f);
  const Tensor noise = oracle::random_tensor(rng, base.shape(), -1.0f, 1.0f);
  double previous = 1e9;
  for (int step = 1; step <= 20; ++step) {
    const float amp = 0.01f * static_cast<float>(step);
    Tensor noisy(base.shape());
    for (int64_t i = 0; i < base.size(); ++i)
      noisy.data()[static_cast<size_t>(i)] = base.data()[static_cast<size_t>(i)] + amp * noise.data()[static_cast<size_t>(i)];
    const double p = psnr(base, noisy);
    ASSERT_LT(p, previous) << "amplitude " << amp;
    previous = p;
  }
}

TEST(Ssim, SelfSimilarity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Tensor x = oracle::random_tensor(rng, {1, 20 + trial, 24, 3}, 0.0f, 1.0f);
    EXPECT_NEAR(ssim(x, x), 1.0, 1e-9);
  }
}

TEST(Ssim, ConstantImagesClosedForm) {
  const double c1 = 0.01 * 0.01;
  for (auto [p, q] : {std::pair{0.2f, 0.7f}, {0.5f, 0.5f}, {0.0f, 1.0f}, {0.9f, 0.1f}}) {
    const double expected = (2.0 * p * q + c1) / (double(p) * p + double(q) * q + c1);
    const double got = ssim(Tensor::filled({1, 16, 16, 1}, p), Tensor::filled({1, 16, 16, 1}, q));
    EXPECT_NEAR(got, expected, 1e-6) << p << " vs " << q;
  }
}

TEST(Ssim, MatchesNaiveWindowOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int64_t channels = trial % 2 == 0 ? 1 : 3;
    const Tensor a = oracle::random_tensor(rng, {1, 32, 32, channels}, 0.0f, 1.0f);
    Tensor b = oracle::random_tensor(rng, a.shape(), 0.0f, 1.0f);
    // Mix in some of a so the pairs span a range of similarities.
    const float mix = 0.1f * static_cast<float>(trial);
    for (int64_t i = 0; i < a.size(); ++i)
      b.data()[static_cast<size_t>(i)] = mix * a.data()[static_cast<size_t>(i)] + (1 - mix) * b.data()[static_cast<size_t>(i)];
    EXPECT_NEAR(ssim(a, b), oracle::ssim(a, b), 1e-6) << trial;
  }
}

TEST(Ssim, SymmetricBoundedAndSizeChecked) {
  std::mt19937_64 rng(6);
  const Tensor a = oracle::random_tensor(rng, {1, 14, 19, 3}, 0.0f, 1.0f);
  const Tensor b = oracle::random_tensor(rng, a.shape(), 0.0f, 1.0f);
  EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-12);
  EXPECT_GE(ssim(a, b), -1.0);
  EXPECT_LE(ssim(a, b), 1.0);
  EXPECT_EQ(code_of([] { ssim(Tensor(Shape{1, 10, 20, 1}), Tensor(Shape{1, 10, 20, 1})); }), ErrorCode::kShape);
  EXPECT_EQ(code_of([&] { ssim(a, Tensor(Shape{1, 14, 19, 1})); }), ErrorCode::kShape);
}

TEST(Evaluate, IdenticalImages) {
  std::mt19937_64 rng(7);
  const Tensor x = oracle::random_tensor(rng, {1, 16, 16, 3}, 0.0f, 1.0f);
  const MetricReport r = evaluate(x, x);
  EXPECT_EQ(r.psnr_db, 100.0);
  EXPECT_NEAR(r.ssim, 1.0, 1e-9);
}

}  // namespace
}  // namespace rawisp
