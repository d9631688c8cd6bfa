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

#ifndef OTP_IO_H_
#define OTP_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "otp/allocate.h"
#include "otp/design.h"
#include "otp/evaluate.h"
#include "otp/harness.h"
#include "otp/problem.h"
#include "otp/prsgd.h"
#include "otp/smooth.h"

// JSON persistence. Every document carries "format" and "version" keys;
// loaders throw kParse for malformed input (with the byte offset when the
// text is not JSON) and kVersion for an unsupported version.
namespace otp::io {

inline constexpr int kFormatVersion = 1;

std::string ReadFile(const std::filesystem::path& path);
// Writes through a temporary file and renames, so readers never see a
// partial document. Throws kIo.
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Missing fields take NewsvendorSpec::Default(q, d) values.
std::string NewsvendorToJson(const NewsvendorSpec& spec);
NewsvendorSpec NewsvendorFromJson(std::string_view text);

std::string DesignToJson(const CovariateDesign& design);
CovariateDesign DesignFromJson(std::string_view text);

std::string SolutionSetToJson(const InexactSolutionSet& set);
InexactSolutionSet SolutionSetFromJson(std::string_view text);

std::string PlanToJson(const AllocationPlan& plan);
AllocationPlan PlanFromJson(std::string_view text);

// Spec, design, training matrix and fit options; LR coefficients are stored
// for reference. Loading refits, which recomputes the KRR factorization.
std::string ModelToJson(const FittedSolutionMap& map);
FittedSolutionMap ModelFromJson(std::string_view text);
void SaveModel(const FittedSolutionMap& map, const std::filesystem::path& path);
FittedSolutionMap LoadModel(const std::filesystem::path& path);

// Unknown keys are rejected with kInvalidInput.
std::string ExperimentConfigToJson(const ExperimentConfig& config);
ExperimentConfig ExperimentConfigFromJson(std::string_view text);

std::string ReportToJson(const ExperimentReport& report);
std::string GapRecordsToJson(std::span<const GapRecord> records);
std::string GapRecordsToCsv(std::span<const GapRecord> records);
std::string RateFitToJson(const RateFit& fit);
std::string RateFitToCsv(const RateFit& fit);

}  // namespace otp::io

#endif  // OTP_IO_H_
