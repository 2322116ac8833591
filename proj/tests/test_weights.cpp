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

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "rawisp/executor.hpp"
#include "rawisp/graph.hpp"
#include "rawisp/weights.hpp"
#include "test_util.hpp"

namespace rawisp {
namespace {

using testutil::code_of;

WeightStore random_store(std::mt19937_64& rng) {
  WeightStore ws;
  const int64_t entries = oracle::rand_int(rng, 0, 12);
  for (int64_t e = 0; e < entries; ++e) {
    std::string name = "t" + std::to_string(e);
    const int64_t extra = oracle::rand_int(rng, 0, 20);
    for (int64_t i = 0; i < extra; ++i) name += static_cast<char>('a' + oracle::rand_int(rng, 0, 25));
    std::vector<uint32_t> dims(static_cast<size_t>(oracle::rand_int(rng, 1, 4)));
    int64_t n = 1;
    for (auto& d : dims) {
      d = static_cast<uint32_t>(oracle::rand_int(rng, 1, 5));
      n *= d;
    }
    ws.insert(name, dims, oracle::random_vector(rng, n, -100.0f, 100.0f));
  }
  return ws;
}

TEST(WeightStore, InsertValidation) {
  WeightStore ws;
  ws.insert("a", {2, 2}, {1, 2, 3, 4});
  EXPECT_EQ(code_of([&] { ws.insert("a", {1}, {1}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { ws.insert("", {1}, {1}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { ws.insert("b", {3}, {1, 2}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ws.parameter_count(), 4);
}

TEST(WeightStore, ExactLayout) {
  WeightStore ws;
  ws.insert("ab", {2}, {1.0f, -2.0f});
  const std::vector<uint8_t> bytes = ws.serialize();
  // magic 4 + version 4 + count 4 + name len 2 + name 2 + rank 1 + dim 4 + data 8 + crc 4
  ASSERT_EQ(bytes.size(), 33u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "P2WM");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 1);
  EXPECT_EQ(bytes[12], 2);
  EXPECT_EQ(bytes[13], 0);
  EXPECT_EQ(bytes[14], 'a');
  EXPECT_EQ(bytes[16], 1);
  EXPECT_EQ(bytes[17], 2);
  // 1.0f little-endian = 00 00 80 3f
  EXPECT_EQ(bytes[21], 0x00);
  EXPECT_EQ(bytes[24], 0x3f);
  EXPECT_EQ(bytes[23], 0x80);
}

TEST(WeightStore, RoundTripByteIdentity) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const WeightStore ws = random_store(rng);
    const std::vector<uint8_t> bytes = ws.serialize();
    const WeightStore back = WeightStore::deserialize(bytes);
    ASSERT_EQ(back, ws);
    ASSERT_EQ(back.serialize(), bytes);
  }
}

TEST(WeightStore, EverySingleByteCorruptionDetected) {
  std::mt19937_64 rng(2);
  WeightStore ws;
  while (ws.size() < 2) ws = random_store(rng);
  const std::vector<uint8_t> bytes = ws.serialize();
  for (size_t i = 0; i < bytes.size(); ++i) {
    for (uint8_t flip : {uint8_t{0x01}, uint8_t{0x80}, uint8_t{0xff}}) {
      std::vector<uint8_t> bad = bytes;
      bad[i] ^= flip;
      const auto code = code_of([&] { WeightStore::deserialize(bad); });
      ASSERT_TRUE(code.has_value()) << "byte " << i << " flip " << int(flip);
    }
  }
}

TEST(WeightStore, PayloadFlipIsCorruption) {
  WeightStore ws;
  ws.insert("w", {4}, {1, 2, 3, 4});
  std::vector<uint8_t> bytes = ws.serialize();
  bytes[bytes.size() - 8] ^= 0x10;  // inside the float data
  EXPECT_EQ(code_of([&] { WeightStore::deserialize(bytes); }), ErrorCode::kCorruption);
}

TEST(WeightStore, TruncationAndMagic) {
  WeightStore ws;
  ws.insert("w", {4}, {1, 2, 3, 4});
  const std::vector<uint8_t> bytes = ws.serialize();
  for (size_t len = 0; len < bytes.size(); ++len) {
    const std::span<const uint8_t> head(bytes.data(), len);
    const auto code = code_of([&] { WeightStore::deserialize(head); });
    ASSERT_TRUE(code == ErrorCode::kTruncation || (len < 4 && code == ErrorCode::kFormat)) << len;
  }
  std::vector<uint8_t> bad = bytes;
  bad[0] = 'X';
  EXPECT_EQ(code_of([&] { WeightStore::deserialize(bad); }), ErrorCode::kFormat);
}

TEST(WeightStore, FileRoundTripAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "rawisp_test_weights.p2w";
  std::mt19937_64 rng(3);
  const WeightStore ws = random_store(rng);
  const size_t written = ws.save(path.string());
  EXPECT_EQ(written, std::filesystem::file_size(path));
  EXPECT_EQ(WeightStore::load(path.string()), ws);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { WeightStore::load(path.string()); }), ErrorCode::kIo);
}

TEST(RandomInit, DeterministicAndStated) {
  const Graph g = build_model(ModelConfig{});
  const WeightStore a = random_init(g, 9);
  EXPECT_EQ(a.serialize(), random_init(g, 9).serialize());
  EXPECT_NE(a.serialize(), random_init(g, 10).serialize());
  EXPECT_TRUE(bind_check(g, a).ok());
  for (const auto& [name, e] : a.entries()) {
    const auto ends = [&](const std::string& suffix) {
      return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends(".gamma")) for (float v : e.data) ASSERT_EQ(v, 1.0f) << name;
    if (ends(".beta") || ends(".bias")) for (float v : e.data) ASSERT_EQ(v, 0.0f) << name;
    if (ends(".slope")) for (float v : e.data) ASSERT_EQ(v, 0.25f) << name;
    if (ends(".weight")) {
      int64_t fan_in = 1;
      for (size_t i = 1; i < e.dims.size(); ++i) fan_in *= e.dims[i];
      const float bound = std::sqrt(3.0f / static_cast<float>(fan_in));
      for (float v : e.data) ASSERT_LE(std::abs(v), bound) << name;
    }
  }
}

TEST(RandomInit, CalibratedFileSize) {
  const Graph g = build_model(ModelConfig{});
  const size_t bytes = random_init(g, 1).serialize().size();
  EXPECT_GE(bytes, 1'800'000u);
  EXPECT_LE(bytes, 5'400'000u);
  EXPECT_GT(bytes, static_cast<size_t>(count_params(g) * 4));
}

TEST(BindCheck, ReportsMissingExtraAndMismatch) {
  const Graph g = build_model(ModelConfig{});
  WeightStore ws = random_init(g, 1);
  EXPECT_TRUE(bind_check(g, ws).str().empty());

  WeightStore missing = ws;
  missing.erase("stem.conv.bias");
  BindReport r = bind_check(g, missing);
  EXPECT_EQ(r.missing, std::vector<std::string>{"stem.conv.bias"});
  EXPECT_NE(r.first_problem().find("stem.conv.bias"), std::string::npos);

  WeightStore extra = ws;
  extra.insert("unused.weight", {1}, {0.0f});
  r = bind_check(g, extra);
  EXPECT_EQ(r.extra, std::vector<std::string>{"unused.weight"});
  EXPECT_FALSE(r.ok());

  // Transposed dims: same element count, different shape.
  WeightStore transposed = ws;
  const WeightEntry e = *ws.find("stem.conv.weight");
  transposed.erase("stem.conv.weight");
  std::vector<uint32_t> dims(e.dims.rbegin(), e.dims.rend());
  transposed.insert("stem.conv.weight", dims, e.data);
  r = bind_check(g, transposed);
  ASSERT_EQ(r.mismatched.size(), 1u);
  EXPECT_EQ(r.mismatched[0].name, "stem.conv.weight");
  EXPECT_NE(r.str().find("stem.conv.weight"), std::string::npos);
}

TEST(BindCheck, EmptyReportIffInferenceBinds) {
  ModelConfig c;
  c.base_width = 8;
  const Graph g = build_model(c);
  const WeightStore good = random_init(g, 1);
  const Tensor x = Tensor::filled({1, 16, 16, 1}, 0.5f);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    WeightStore ws = good;
    const auto& names = good.entries();
    auto it = names.begin();
    std::advance(it, oracle::rand_int(rng, 0, static_cast<int64_t>(names.size()) - 1));
    ws.erase(it->first);
    EXPECT_FALSE(bind_check(g, ws).ok());
    EXPECT_EQ(code_of([&] { run_inference(g, ws, x); }), ErrorCode::kBinding);
  }
  EXPECT_FALSE(code_of([&] { run_inference(g, good, x); }).has_value());
}

}  // namespace
}  // namespace rawisp
