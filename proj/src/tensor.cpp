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
#include "rawisp/tensor.hpp"

#include <cmath>
#include <sstream>

#include "rawisp/error.hpp"

namespace rawisp {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kInvalidShape: return "invalid shape";
    case ErrorCode::kBounds: return "bounds";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kBinding: return "binding";
    case ErrorCode::kAlignment: return "alignment";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kTruncation: return "truncation";
    case ErrorCode::kCorruption: return "corruption";
    case ErrorCode::kMetadata: return "metadata";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kTolerance: return "tolerance";
  }
  return "unknown";
}

void throw_error(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

std::string Shape::str() const {
  std::ostringstream os;
  os << "(" << batch << "," << height << "," << width << "," << channels << ")";
  return os.str();
}

void check_shape(const Shape& shape) {
  if (!shape.valid()) {
    throw_error(ErrorCode::kInvalidShape, "invalid tensor shape " + shape.str() +
                                              ": every extent must be >= 1");
  }
}

Tensor::Tensor(const Shape& shape) : shape_(shape) {
  check_shape(shape);
  data_.assign(static_cast<size_t>(shape.elements()), 0.0f);
}

Tensor::Tensor(const Shape& shape, std::vector<float> data) : shape_(shape), data_(std::move(data)) {
  check_shape(shape);
  if (static_cast<int64_t>(data_.size()) != shape.elements()) {
    throw_error(ErrorCode::kInvalidShape,
                "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                    shape.str());
  }
}

Tensor Tensor::filled(const Shape& shape, float value) {
  check_shape(shape);
  return Tensor(shape, std::vector<float>(static_cast<size_t>(shape.elements()), value));
}

void Tensor::check_index(int64_t b, int64_t h, int64_t w, int64_t c) const {
  if (b < 0 || b >= shape_.batch || h < 0 || h >= shape_.height || w < 0 || w >= shape_.width ||
      c < 0 || c >= shape_.channels) {
    std::ostringstream os;
    os << "index (" << b << "," << h << "," << w << "," << c << ") out of range for shape "
       << shape_.str();
    throw_error(ErrorCode::kBounds, os.str());
  }
}

float Tensor::at(int64_t b, int64_t h, int64_t w, int64_t c) const {
  check_index(b, h, w, c);
  return (*this)(b, h, w, c);
}

void Tensor::set(int64_t b, int64_t h, int64_t w, int64_t c, float value) {
  check_index(b, h, w, c);
  (*this)(b, h, w, c) = value;
}

bool Tensor::all_finite() const {
  for (float v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace rawisp
