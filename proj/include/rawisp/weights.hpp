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
#ifndef RAWISP_WEIGHTS_HPP_
#define RAWISP_WEIGHTS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rawisp/graph.hpp"

namespace rawisp {

struct WeightEntry {
  std::vector<uint32_t> dims;
  std::vector<float> data;

  friend bool operator==(const WeightEntry&, const WeightEntry&) = default;
};

/// Named parameter tensors, kept in name order so serialization is canonical.
///
/// File layout (all integers little-endian):
///   "P2WM" | u32 version = 1 | u32 entry count
///   per entry: u16 name length | name bytes | u8 rank | rank x u32 dims | f32 data
///   u32 CRC-32 of every preceding byte
class WeightStore {
 public:
  static constexpr uint32_t kVersion = 1;

  /// Throws kInvalidArgument on an empty/duplicate name or a data length that
  /// does not match the dims.
  void insert(const std::string& name, std::vector<uint32_t> dims, std::vector<float> data);
  void erase(const std::string& name);

  const WeightEntry* find(const std::string& name) const;
  const std::map<std::string, WeightEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  int64_t parameter_count() const;

  std::vector<uint8_t> serialize() const;
  /// Throws kFormat (bad magic/version/layout), kTruncation or kCorruption.
  static WeightStore deserialize(std::span<const uint8_t> bytes);

  /// Returns the number of bytes written. Throws kIo.
  size_t save(const std::string& path) const;
  static WeightStore load(const std::string& path);

  friend bool operator==(const WeightStore&, const WeightStore&) = default;

 private:
  std::map<std::string, WeightEntry> entries_;
};

/// One entry per parameter slot of `g`: conv and depthwise weights uniform in
/// +-sqrt(3 / fan_in), biases 0, PReLU slopes 0.25, gamma 1, beta 0.
WeightStore random_init(const Graph& g, uint64_t seed);

struct ShapeMismatch {
  std::string name;
  std::vector<int64_t> expected;
  std::vector<int64_t> actual;
};

struct BindReport {
  std::vector<std::string> missing;
  std::vector<std::string> extra;
  std::vector<ShapeMismatch> mismatched;

  bool ok() const { return missing.empty() && extra.empty() && mismatched.empty(); }
  /// First problem, phrased for an error message; empty when ok().
  std::string first_problem() const;
  std::string str() const;
};

BindReport bind_check(const Graph& g, const WeightStore& w);

}  // namespace rawisp

#endif  // RAWISP_WEIGHTS_HPP_
