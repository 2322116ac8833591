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
#ifndef RAWISP_TENSOR_HPP_
#define RAWISP_TENSOR_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rawisp {

/// Extents of a rank-4 NHWC tensor. Every extent is >= 1.
struct Shape {
  int64_t batch = 1;
  int64_t height = 1;
  int64_t width = 1;
  int64_t channels = 1;

  int64_t elements() const { return batch * height * width * channels; }
  bool valid() const { return batch >= 1 && height >= 1 && width >= 1 && channels >= 1; }
  std::string str() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Throws ErrorCode::kInvalidShape when any extent is < 1.
void check_shape(const Shape& shape);

/// Dense float32 tensor, batch-major then row-major spatial, channels minor:
/// offset(b,h,w,c) = ((b*H + h)*W + w)*C + c.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(const Shape& shape);
  Tensor(const Shape& shape, std::vector<float> data);

  static Tensor filled(const Shape& shape, float value);

  const Shape& shape() const { return shape_; }
  int64_t batch() const { return shape_.batch; }
  int64_t height() const { return shape_.height; }
  int64_t width() const { return shape_.width; }
  int64_t channels() const { return shape_.channels; }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  int64_t bytes() const { return size() * static_cast<int64_t>(sizeof(float)); }
  bool empty() const { return data_.empty(); }

  int64_t offset(int64_t b, int64_t h, int64_t w, int64_t c) const {
    return ((b * shape_.height + h) * shape_.width + w) * shape_.channels + c;
  }

  /// Bounds-checked element access.
  float at(int64_t b, int64_t h, int64_t w, int64_t c) const;
  void set(int64_t b, int64_t h, int64_t w, int64_t c, float value);

  // Unchecked access for kernels.
  float operator()(int64_t b, int64_t h, int64_t w, int64_t c) const {
    return data_[static_cast<size_t>(offset(b, h, w, c))];
  }
  float& operator()(int64_t b, int64_t h, int64_t w, int64_t c) {
    return data_[static_cast<size_t>(offset(b, h, w, c))];
  }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }
  const float* ptr() const { return data_.data(); }
  float* ptr() { return data_.data(); }

  bool all_finite() const;

 private:
  void check_index(int64_t b, int64_t h, int64_t w, int64_t c) const;

  Shape shape_{};
  std::vector<float> data_;
};

}  // namespace rawisp

#endif  // RAWISP_TENSOR_HPP_
