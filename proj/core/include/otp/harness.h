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

#ifndef OTP_HARNESS_H_
#define OTP_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otp/allocate.h"
#include "otp/design.h"
#include "otp/evaluate.h"
#include "otp/problem.h"
#include "otp/prsgd.h"
#include "otp/smooth.h"

namespace otp {

inline constexpr int kDeskReplications = 20;
inline constexpr int kPaperReplications = 100;

// One optimize-then-predict experiment on the newsvendor benchmark.
struct ExperimentConfig {
  NewsvendorSpec problem = NewsvendorSpec::Default(5, 2);
  Technique technique = Technique::kKnn;
  AllocationRule rule = AllocationRule::kOptimal;
  std::int64_t t_bar = 100;  // fixed-T rules only
  AllocationOverrides overrides;
  // kNN/KS: position of the T exponent inside [1/(d+2), 2/(d+2)), from 0 at
  // the lower end to 1 at the upper end. 0.5 is the plain midpoint rule.
  // Ignored when overrides.exponent is set.
  double local_interval_position = 0.9;
  // Unset: 5(d+1) for KRR, 1.5 times the basis size (rounded up) for LR and
  // no floor otherwise. See overrides.min_n.
  std::optional<std::int64_t> min_design_points;
  std::int64_t budget = 4000;
  double smoothness = kInfiniteSmoothness;
  DesignKind design_kind = DesignKind::kFarthestPoint;
  int pool_factor = 10;
  int n_test = 100;
  double test_margin = 1.0 / 30.0;
  int replications = kDeskReplications;
  std::uint64_t master_seed = 0;
  std::optional<double> step_constant;  // DefaultStepConstant(d) when unset
  InitialPoint initial_point = InitialPoint::kFixed;
  std::optional<Vector> initial_decision;  // all-ones when unset
  BasisSpec lr_basis;
  KernelSpec krr_kernel;
  bool krr_center_labels = true;
  double lengthscale_factor = 1.0;
  EmptyNeighborhood ks_empty = EmptyNeighborhood::kNearestNeighbor;
  bool project_predictions = true;

  void Validate() const;
};

AllocationRequest MakeAllocationRequest(const ExperimentConfig& config);
// Throws kInfeasibleBudget like Allocate / FixedTPlan.
AllocationPlan PlanFor(const ExperimentConfig& config);
SmootherSpec SmootherFor(const ExperimentConfig& config,
                         const AllocationPlan& plan);
PrSgdConfig PrSgdConfigFor(const ExperimentConfig& config,
                           std::int64_t iterations);

struct ReplicationStats {
  GapSummary online;
  double offline_mean = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  AllocationPlan plan;
  // False when the plan cannot be fitted (the "-" cells of the gap table);
  // the statistics are then empty.
  bool feasible = true;
  std::string infeasible_reason;
  std::vector<Finding> findings;
  std::vector<ReplicationStats> replications;
  GapSummary grand;  // grand averages of mean, sd, min and max
  double offline_mean = 0.0;
  std::int64_t simulation_calls = 0;
  std::int64_t gap_evaluations = 0;
  std::int64_t out_of_tolerance_gaps = 0;
  double wall_seconds = 0.0;
};

// Seed roles for per-replication stream derivation.
enum class SeedRole : std::uint64_t { kDesign = 1, kSolve = 2, kTest = 3 };
std::uint64_t ReplicationSeed(std::uint64_t master_seed,
                              std::int64_t replication, SeedRole role);

// Test covariates drawn uniformly from the inset covariate box.
Matrix DrawTestCovariates(const ExperimentConfig& config, RngStream stream);

// Runs the offline and online stages config.replications times. When
// test_covariates is given it replaces the per-replication test draws.
// Infeasible fixed-T plans yield feasible = false instead of throwing;
// infeasible optimal plans throw kInfeasibleBudget.
ExperimentReport RunOtpExperiment(const ExperimentConfig& config,
                                  int workers = 1,
                                  const Matrix* test_covariates = nullptr);

struct SweepResult {
  std::vector<ExperimentReport> reports;
  RateFit fit;
  Matrix test_covariates;
};

// One shared test set for all budgets; needs >= 3 increasing budgets.
SweepResult SweepBudget(const ExperimentConfig& config,
                        std::span<const std::int64_t> budgets,
                        int workers = 1);

struct PilotRequest {
  NewsvendorSpec problem = NewsvendorSpec::Default(5, 2);
  std::optional<double> step_constant;
  std::vector<std::int64_t> candidates{50, 100, 150};
  double threshold = 0.02;
  int n_pilot = 1024;
  int replications = kDeskReplications;
  std::uint64_t master_seed = 0;
  InitialPoint initial_point = InitialPoint::kFixed;
  std::optional<Vector> initial_decision;
};

struct PilotResult {
  std::int64_t selected = 0;
  std::vector<std::int64_t> evaluated;
  std::vector<double> grand_gaps;  // aligned with evaluated
  std::int64_t simulation_calls = 0;
};

// Grand-average relative gap of plain PR-SGD at covariates drawn from the
// full covariate box.
double PilotGap(const PilotRequest& request, std::int64_t iterations,
                int workers = 1, std::int64_t* calls = nullptr);
// Smallest candidate whose grand gap is below the threshold. Throws
// kThresholdUnreachable listing every achieved gap otherwise.
PilotResult PilotSelectT(const PilotRequest& request, int workers = 1);

// CSV emission with six significant digits.
struct CsvOptions {
  // Adds one offline_mean row per report after the grand mean.
  bool include_offline = false;
};
std::string ExperimentCsv(std::span<const ExperimentReport> reports,
                          const CsvOptions& options = {});
void EmitExperimentCsv(std::span<const ExperimentReport> reports,
                       const std::filesystem::path& path,
                       const CsvOptions& options = {});
std::string SweepCsv(const SweepResult& sweep);
void EmitSweepCsv(const SweepResult& sweep, const std::filesystem::path& path);

struct SweepTable {
  std::string technique;
  std::vector<double> gammas;
  std::vector<double> grand_mean_gaps;
  std::optional<double> stored_slope;
  std::optional<double> stored_r_squared;
};
SweepTable ParseSweepCsv(std::string_view text);
SweepTable LoadSweepCsv(const std::filesystem::path& path);

}  // namespace otp

#endif  // OTP_HARNESS_H_
