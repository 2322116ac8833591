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
#include "rawisp/weights.hpp"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "rawisp/error.hpp"

namespace rawisp {
namespace {

static_assert(std::endian::native == std::endian::little,
              "weight serialization assumes a little-endian host");

uint32_t crc32_of(std::span<const uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  size_t done = 0;
  while (done < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<size_t>(bytes.size() - done, 1u << 30));
    crc = crc32(crc, bytes.data() + done, chunk);
    done += chunk;
  }
  return static_cast<uint32_t>(crc);
}

class Writer {
 public:
  template <typename T>
  void put(T value) {
    const auto* p = reinterpret_cast<const uint8_t*>(&value);
    out_.insert(out_.end(), p, p + sizeof(T));
  }
  void put_bytes(const void* data, size_t n) {
    const auto* p = static_cast<const uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  std::vector<uint8_t>& bytes() { return out_; }

 private:
  std::vector<uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    T value;
    std::memcpy(&value, take(sizeof(T)), sizeof(T));
    return value;
  }
  const uint8_t* take(size_t n) {
    if (n > bytes_.size() - pos_) {
      throw_error(ErrorCode::kTruncation, "weight file truncated at byte " + std::to_string(pos_));
    }
    const uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  size_t pos() const { return pos_; }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

int64_t product(const std::vector<uint32_t>& dims) {
  int64_t n = 1;
  for (uint32_t d : dims) n *= d;
  return n;
}

std::string dims_str(const std::vector<int64_t>& dims) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << "]";
  return os.str();
}

}  // namespace

void WeightStore::insert(const std::string& name, std::vector<uint32_t> dims,
                         std::vector<float> data) {
  if (name.empty()) throw_error(ErrorCode::kInvalidArgument, "weight name must be non-empty");
  if (name.size() > 0xFFFF) throw_error(ErrorCode::kInvalidArgument, "weight name too long");
  if (dims.size() > 0xFF) throw_error(ErrorCode::kInvalidArgument, "weight rank too large");
  if (entries_.count(name)) {
    throw_error(ErrorCode::kInvalidArgument, "duplicate weight name '" + name + "'");
  }
  if (product(dims) != static_cast<int64_t>(data.size())) {
    throw_error(ErrorCode::kInvalidArgument,
                "weight '" + name + "' data length does not match its dims");
  }
  entries_.emplace(name, WeightEntry{std::move(dims), std::move(data)});
}

void WeightStore::erase(const std::string& name) { entries_.erase(name); }

const WeightEntry* WeightStore::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

int64_t WeightStore::parameter_count() const {
  int64_t n = 0;
  for (const auto& [name, e] : entries_) n += static_cast<int64_t>(e.data.size());
  return n;
}

std::vector<uint8_t> WeightStore::serialize() const {
  Writer w;
  w.put_bytes("P2WM", 4);
  w.put<uint32_t>(kVersion);
  w.put<uint32_t>(static_cast<uint32_t>(entries_.size()));
  for (const auto& [name, e] : entries_) {
    w.put<uint16_t>(static_cast<uint16_t>(name.size()));
    w.put_bytes(name.data(), name.size());
    w.put<uint8_t>(static_cast<uint8_t>(e.dims.size()));
    for (uint32_t d : e.dims) w.put<uint32_t>(d);
    w.put_bytes(e.data.data(), e.data.size() * sizeof(float));
  }
  const uint32_t crc = crc32_of(w.bytes());
  w.put<uint32_t>(crc);
  return std::move(w.bytes());
}

// The layout is walked first so a short file reports truncation; any byte
// flip that leaves the layout intact is caught by the trailing CRC.
WeightStore WeightStore::deserialize(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "P2WM", 4) != 0) {
    throw_error(ErrorCode::kFormat, "not a weight file (bad magic)");
  }
  r.take(4);
  const auto version = r.get<uint32_t>();
  if (version != kVersion) {
    throw_error(ErrorCode::kFormat, "unsupported weight file version " + std::to_string(version));
  }
  const auto count = r.get<uint32_t>();
  WeightStore store;
  std::string previous;
  for (uint32_t i = 0; i < count; ++i) {
    const auto name_len = r.get<uint16_t>();
    const auto* name_bytes = reinterpret_cast<const char*>(r.take(name_len));
    std::string name(name_bytes, name_len);
    const auto rank = r.get<uint8_t>();
    std::vector<uint32_t> dims(rank);
    for (auto& d : dims) d = r.get<uint32_t>();
    const int64_t n = product(dims);
    if (n < 0 || static_cast<uint64_t>(n) > bytes.size() / sizeof(float)) {
      throw_error(ErrorCode::kTruncation, "weight '" + name + "' payload exceeds file size");
    }
    std::vector<float> data(static_cast<size_t>(n));
    std::memcpy(data.data(), r.take(data.size() * sizeof(float)), data.size() * sizeof(float));
    if (name.empty() || (i > 0 && name <= previous)) {
      throw_error(ErrorCode::kFormat, "weight names empty, duplicated or out of order");
    }
    previous = name;
    store.entries_.emplace(std::move(name), WeightEntry{std::move(dims), std::move(data)});
  }
  const size_t payload_end = r.pos();
  const auto stored_crc = r.get<uint32_t>();
  if (r.pos() != bytes.size()) {
    uint32_t trailer;
    std::memcpy(&trailer, bytes.data() + bytes.size() - 4, sizeof(trailer));
    if (crc32_of(bytes.first(bytes.size() - 4)) != trailer) {
      throw_error(ErrorCode::kCorruption, "weight file checksum mismatch");
    }
    throw_error(ErrorCode::kFormat, "trailing bytes after weight payload");
  }
  if (crc32_of(bytes.first(payload_end)) != stored_crc) {
    throw_error(ErrorCode::kCorruption, "weight file checksum mismatch");
  }
  return store;
}

size_t WeightStore::save(const std::string& path) const {
  const std::vector<uint8_t> bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw_error(ErrorCode::kIo, "write to '" + path + "' failed");
  return bytes.size();
}

WeightStore WeightStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

WeightStore random_init(const Graph& g, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> unit(-1.0f, 1.0f);
  WeightStore store;
  for (const Node& n : g.nodes()) {
    for (const ParamSlot& slot : n.params) {
      std::vector<uint32_t> dims(slot.dims.begin(), slot.dims.end());
      std::vector<float> data(static_cast<size_t>(slot.elements()), 0.0f);
      const bool is_weight = slot.name.ends_with(".weight");
      if (is_weight) {
        int64_t fan_in = 1;
        for (size_t i = 1; i < slot.dims.size(); ++i) fan_in *= slot.dims[i];
        const float bound = std::sqrt(3.0f / static_cast<float>(fan_in));
        for (float& v : data) v = bound * unit(rng);
      } else if (slot.name.ends_with(".slope")) {
        std::fill(data.begin(), data.end(), 0.25f);
      } else if (slot.name.ends_with(".gamma")) {
        std::fill(data.begin(), data.end(), 1.0f);
      }
      store.insert(slot.name, std::move(dims), std::move(data));
    }
  }
  return store;
}

std::string BindReport::first_problem() const {
  if (!missing.empty()) return "missing weight for slot '" + missing.front() + "'";
  if (!mismatched.empty()) {
    const ShapeMismatch& m = mismatched.front();
    return "slot '" + m.name + "' expects shape " + dims_str(m.expected) + " but weight has " +
           dims_str(m.actual);
  }
  if (!extra.empty()) return "weight '" + extra.front() + "' matches no slot";
  return {};
}

std::string BindReport::str() const {
  std::ostringstream os;
  for (const auto& m : missing) os << "missing: " << m << "\n";
  for (const auto& m : mismatched) {
    os << "shape mismatch: " << m.name << " expected " << dims_str(m.expected) << " got "
       << dims_str(m.actual) << "\n";
  }
  for (const auto& e : extra) os << "extra: " << e << "\n";
  return os.str();
}

BindReport bind_check(const Graph& g, const WeightStore& w) {
  BindReport report;
  std::map<std::string, const ParamSlot*> slots;
  for (const Node& n : g.nodes())
    for (const ParamSlot& s : n.params) slots.emplace(s.name, &s);
  for (const auto& [name, slot] : slots) {
    const WeightEntry* e = w.find(name);
    if (!e) {
      report.missing.push_back(name);
      continue;
    }
    std::vector<int64_t> actual(e->dims.begin(), e->dims.end());
    if (actual != slot->dims) report.mismatched.push_back({name, slot->dims, actual});
  }
  for (const auto& [name, e] : w.entries()) {
    if (!slots.count(name)) report.extra.push_back(name);
  }
  return report;
}

}  // namespace rawisp
