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

#include <limits>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "rawisp/error.hpp"
#include "rawisp/tensor.hpp"

namespace rawisp {
namespace {

using testutil::code_of;

TEST(Tensor, FilledZeros) {
  Tensor t = Tensor::filled({1, 2, 2, 1}, 0.0f);
  ASSERT_EQ(t.size(), 4);
  for (float v : t.data()) EXPECT_EQ(v, 0.0f);
}

TEST(Tensor, FilledValue) {
  Tensor t = Tensor::filled({1, 1, 1, 4}, 1.5f);
  ASSERT_EQ(t.size(), 4);
  for (float v : t.data()) EXPECT_EQ(v, 1.5f);
}

TEST(Tensor, ZeroExtentRejected) {
  EXPECT_EQ(code_of([] { Tensor::filled({1, 0, 2, 1}, 0.0f); }), ErrorCode::kInvalidShape);
  EXPECT_EQ(code_of([] { Tensor t(Shape{0, 1, 1, 1}); }), ErrorCode::kInvalidShape);
}

TEST(Tensor, DataLengthMustMatchShape) {
  EXPECT_EQ(code_of([] { Tensor t(Shape{1, 2, 2, 1}, std::vector<float>(3)); }),
            ErrorCode::kInvalidShape);
}

TEST(Tensor, ChannelsMinorLayout) {
  Tensor t(Shape{1, 1, 2, 2}, {1.0f, 2.0f, 3.0f, 4.0f});
  EXPECT_EQ(t.at(0, 0, 1, 0), 3.0f);
  Tensor u(Shape{1, 2, 1, 1}, {5.0f, 6.0f});
  EXPECT_EQ(u.at(0, 1, 0, 0), 6.0f);
}

TEST(Tensor, OutOfRangeIndex) {
  Tensor t(Shape{1, 1, 1, 2});
  EXPECT_EQ(code_of([&] { (void)t.at(0, 0, 0, 5); }), ErrorCode::kBounds);
  EXPECT_EQ(code_of([&] { t.set(0, 0, 0, -1, 1.0f); }), ErrorCode::kBounds);
  EXPECT_EQ(code_of([&] { (void)t.at(1, 0, 0, 0); }), ErrorCode::kBounds);
}

TEST(TensorProperty, WriteThenReadRoundTrips) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape s{oracle::rand_int(rng, 1, 8), oracle::rand_int(rng, 1, 8),
                  oracle::rand_int(rng, 1, 8), oracle::rand_int(rng, 1, 8)};
    Tensor t(s);
    std::uniform_real_distribution<float> d(-10.0f, 10.0f);
    for (int k = 0; k < 20; ++k) {
      const int64_t b = oracle::rand_int(rng, 0, s.batch - 1), h = oracle::rand_int(rng, 0, s.height - 1);
      const int64_t w = oracle::rand_int(rng, 0, s.width - 1), c = oracle::rand_int(rng, 0, s.channels - 1);
      const float v = d(rng);
      t.set(b, h, w, c, v);
      EXPECT_EQ(t.at(b, h, w, c), v);
    }
  }
}

TEST(TensorProperty, OffsetFormulaExhaustive) {
  const Shape s{2, 3, 4, 5};
  std::vector<float> v(static_cast<size_t>(s.elements()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(i);
  Tensor t(s, v);
  for (int64_t b = 0; b < 2; ++b)
    for (int64_t h = 0; h < 3; ++h)
      for (int64_t w = 0; w < 4; ++w)
        for (int64_t c = 0; c < 5; ++c) {
          const int64_t expected = ((b * 3 + h) * 4 + w) * 5 + c;
          EXPECT_EQ(t.offset(b, h, w, c), expected);
          EXPECT_EQ(t.at(b, h, w, c), static_cast<float>(expected));
        }
}

TEST(Tensor, FiniteCheck) {
  Tensor t(Shape{1, 1, 1, 2}, {1.0f, 2.0f});
  EXPECT_TRUE(t.all_finite());
  t.set(0, 0, 0, 1, std::numeric_limits<float>::quiet_NaN());
  EXPECT_FALSE(t.all_finite());
}

}  // namespace
}  // namespace rawisp
