// Copyright 2026 The expo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "expo/error.hpp"

namespace expo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorCode::kParse:
      return "ParseError";
    case ErrorCode::kEmptyDataset:
      return "EmptyDataset";
    case ErrorCode::kUnknownColumn:
      return "UnknownColumn";
    case ErrorCode::kBadShape:
      return "BadShape";
    case ErrorCode::kBadIndex:
      return "BadIndex";
    case ErrorCode::kBadParameter:
      return "BadParameter";
    case ErrorCode::kWrongExplanationKind:
      return "WrongExplanationKind";
    case ErrorCode::kNonFiniteLoss:
      return "NonFiniteLoss";
    case ErrorCode::kConfig:
      return "ConfigError";
    case ErrorCode::kIo:
      return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code) {}

ParseError::ParseError(std::size_t row, std::size_t column,
                       const std::string& detail)
    : Error(ErrorCode::kParse, "row " + std::to_string(row) + ", column " +
                                   std::to_string(column) + ": " + detail),
      row_(row),
      column_(column) {}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kBadParameter:
    case ErrorCode::kBadShape:
    case ErrorCode::kBadIndex:
    case ErrorCode::kWrongExplanationKind:
      return 2;
    case ErrorCode::kParse:
    case ErrorCode::kEmptyDataset:
    case ErrorCode::kUnknownColumn:
    case ErrorCode::kIo:
      return 3;
    case ErrorCode::kNotPositiveDefinite:
    case ErrorCode::kNonFiniteLoss:
      return 4;
  }
  return 1;
}

}  // namespace expo
