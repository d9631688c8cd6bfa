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


#include "otp/error.h"

#include <utility>

namespace otp {
namespace {

std::string Describe(ErrorCode code, const std::string& message,
                     const ErrorContext& context) {
  std::string out(ErrorCodeName(code));
  out += ": ";
  out += message;
  if (context.replication) {
    out += " [replication " + std::to_string(*context.replication) + "]";
  }
  if (context.covariate) {
    out += " [covariate " + std::to_string(*context.covariate) + "]";
  }
  if (context.iteration) {
    out += " [iteration " + std::to_string(*context.iteration) + "]";
  }
  return out;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kDegenerateDistribution: return "degenerate distribution";
    case ErrorCode::kNumericFailure: return "numeric failure";
    case ErrorCode::kUnderdetermined: return "underdetermined";
    case ErrorCode::kIllConditioned: return "ill-conditioned";
    case ErrorCode::kEmptyNeighborhood: return "empty neighborhood";
    case ErrorCode::kInfeasibleBudget: return "infeasible budget";
    case ErrorCode::kUndefinedGap: return "undefined gap";
    case ErrorCode::kThresholdUnreachable: return "threshold unreachable";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kVersion: return "version mismatch";
    case ErrorCode::kIo: return "io error";
  }
  return "error";
}

Error::Error(ErrorCode code, const std::string& message, ErrorContext context)
    : std::runtime_error(Describe(code, message, context)),
      code_(code),
      message_(message),
      context_(std::move(context)) {}

Error Error::WithCovariate(std::int64_t index) const {
  ErrorContext context = context_;
  context.covariate = index;
  return Error(code_, message_, context);
}

Error Error::WithReplication(std::int64_t index) const {
  ErrorContext context = context_;
  context.replication = index;
  return Error(code_, message_, context);
}

}  // namespace otp
