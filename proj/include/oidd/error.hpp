// Copyright 2026 The oidd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oidd {

enum class ErrorCode {
  kIo,
  kBadMagic,
  kBadVersion,
  kBadDtype,
  kTruncatedPayload,
  kDimOverflow,
  kTrailingBytes,
  kUnsupportedFormat,
  kMaxvalNot255,
  kShapeMismatch,
  kSimplexViolation,
  kNonFiniteLogit,
  kWindowTooLarge,
  kEmptyClass,
  kEmptySample,
  kDegenerateLabels,
  kUnknownDetector,
  kMissingSplit,
  kInvalidArgument,
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception. Format errors
// carry the byte offset at which decoding failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace oidd
