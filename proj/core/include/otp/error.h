// Copyright 2026 The OTP Authors.
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

#ifndef OTP_ERROR_H_
#define OTP_ERROR_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace otp {

enum class ErrorCode {
  kInvalidInput,
  kCapacity,
  kDegenerateDistribution,
  kNumericFailure,
  kUnderdetermined,
  kIllConditioned,
  kEmptyNeighborhood,
  kInfeasibleBudget,
  kUndefinedGap,
  kThresholdUnreachable,
  kParse,
  kVersion,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Where in a pipeline a failure happened. Unset fields are unknown.
struct ErrorContext {
  std::optional<std::int64_t> iteration;
  std::optional<std::int64_t> covariate;
  std::optional<std::int64_t> replication;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        ErrorContext context = {});

  ErrorCode code() const { return code_; }
  const ErrorContext& context() const { return context_; }
  // The bare message without code prefix or context suffix.
  const std::string& message() const { return message_; }

  // Returns a copy with the given context fields filled in.
  Error WithCovariate(std::int64_t index) const;
  Error WithReplication(std::int64_t index) const;

 private:
  ErrorCode code_;
  std::string message_;
  ErrorContext context_;
};

}  // namespace otp

#endif  // OTP_ERROR_H_
