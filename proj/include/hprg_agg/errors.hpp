// Copyright 2026 The hprg_agg Authors
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

#ifndef HPRG_AGG_ERRORS_HPP_
#define HPRG_AGG_ERRORS_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hprg_agg {

enum class ErrorCode {
  kInvalidArgument,
  kDuplicateIndex,
  kInsufficientShares,
  kIndexMismatch,
  kNotInRange,
  kAuthFailure,
  kMalformed,
  kThresholdTooLow,
  kConfig,
};

std::string_view error_code_name(ErrorCode code);

// Base class for every error raised by the library. Protocol-level aborts are
// not errors in this sense; see ProtocolAbort in protocol.hpp.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ThresholdTooLow : public Error {
 public:
  ThresholdTooLow(std::size_t required, const std::string& what)
      : Error(ErrorCode::kThresholdTooLow, what), required_(required) {}

  // Smallest threshold accepted under the requested threat model.
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

class NotInRange : public Error {
 public:
  explicit NotInRange(const std::string& what,
                      std::optional<std::size_t> component = std::nullopt)
      : Error(ErrorCode::kNotInRange, what), component_(component) {}

  // Set by dlog_vector: index of the component that failed.
  std::optional<std::size_t> component() const noexcept { return component_; }

 private:
  std::optional<std::size_t> component_;
};

}  // namespace hprg_agg

#endif  // HPRG_AGG_ERRORS_HPP_
