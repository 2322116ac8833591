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
#ifndef RAWISP_ERROR_HPP_
#define RAWISP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rawisp {

/// Error classes surfaced by the engine. The C API maps these 1:1 onto
/// rawisp_status values, so the order here is part of the ABI.
enum class ErrorCode {
  kInvalidArgument = 1,
  kInvalidShape,
  kBounds,
  kShape,
  kConfig,
  kBinding,
  kAlignment,
  kFormat,
  kTruncation,
  kCorruption,
  kMetadata,
  kIo,
  kValidation,
  kTolerance,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string& message);

}  // namespace rawisp

#endif  // RAWISP_ERROR_HPP_
