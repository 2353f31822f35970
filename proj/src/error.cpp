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

#include "oidd/error.hpp"

namespace oidd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kBadVersion: return "BadVersion";
    case ErrorCode::kBadDtype: return "BadDtype";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kDimOverflow: return "DimOverflow";
    case ErrorCode::kTrailingBytes: return "TrailingBytes";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kMaxvalNot255: return "MaxvalNot255";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kSimplexViolation: return "SimplexViolation";
    case ErrorCode::kNonFiniteLogit: return "NonFiniteLogit";
    case ErrorCode::kWindowTooLarge: return "WindowTooLarge";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kUnknownDetector: return "UnknownDetector";
    case ErrorCode::kMissingSplit: return "MissingSplit";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::string with_offset(const std::string& message,
                        std::optional<std::size_t> offset) {
  if (!offset) return message;
  return message + " (at byte offset " + std::to_string(*offset) + ")";
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> offset)
    : std::runtime_error(std::string(to_string(code)) + ": " +
                         with_offset(message, offset)),
      code_(code),
      offset_(offset) {}

}  // namespace oidd
