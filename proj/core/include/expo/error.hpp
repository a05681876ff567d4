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

#ifndef EXPO_ERROR_HPP_
#define EXPO_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace expo {

enum class ErrorCode {
  kNotPositiveDefinite,
  kParse,
  kEmptyDataset,
  kUnknownColumn,
  kBadShape,
  kBadIndex,
  kBadParameter,
  kWrongExplanationKind,
  kNonFiniteLoss,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library is an expo::Error carrying a code so
// that front ends can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by load_csv. Rows are 1-based data rows (the header is row 0),
// columns are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& detail);

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// Process exit status used by the CLI: 2 config, 3 data, 4 numerical.
int exit_status(ErrorCode code);

}  // namespace expo

#endif  // EXPO_ERROR_HPP_
