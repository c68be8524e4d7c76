/*
 * Copyright 2026 The Sentinel Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SENTINEL_CORE_ERROR_H_
#define SENTINEL_CORE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sentinel {

enum class ErrorCode {
  kUnknownKind,
  kUndeclaredMetric,
  kNotFound,
  kDanglingEndpoint,
  kOutOfRange,
  kInconsistentSnapshot,
  kHttpError,
  kMalformedResponse,
  kPartialResult,
  kUnknownTarget,
  kDuplicateFault,
  kParseError,
  kInvalidArgument,
  kDimensionMismatch,
  kDegenerateData,
  kSingleClass,
  kDegenerateGrouping,
  kEmptyTrials,
  kCyclicPolicy,
  kNoNodes,
  kMissingBundle,
  kTooFewRows,
  kInsufficientData,
  kInvalidConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure surfaced by the library is an Error carrying a stable code;
// the HTTP layer maps codes to status lines and the CLI to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// kParseError raised while reading a line-oriented file.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + detail),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sentinel

#endif  // SENTINEL_CORE_ERROR_H_
