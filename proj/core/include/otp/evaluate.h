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

#ifndef OTP_EVALUATE_H_
#define OTP_EVALUATE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "otp/design.h"
#include "otp/problem.h"
#include "otp/prsgd.h"
#include "otp/smooth.h"
#include "otp/types.h"

namespace otp {

// Negative relative gaps down to -kGapClampTolerance are rounding noise and
// clamp to zero; anything more negative is still clamped but flagged.
inline constexpr double kGapClampTolerance = 1e-10;

struct GapRecord {
  Vector x;
  Vector theta_hat;
  double cost_hat = 0.0;
  double cost_star = 0.0;
  double relative_gap = 0.0;  // (cost_hat - cost_star) / cost_star, >= 0
  bool clamped = false;
  bool out_of_tolerance = false;  // raw gap < -kGapClampTolerance
};

// Exact relative optimality gap from the oracle's closed-form cost and
// optimum. Throws kUndefinedGap when cost_star == 0 and kInvalidInput when
// the oracle has no exact solution.
GapRecord RelativeOptimalityGap(const SimulationOracle& oracle,
                                const Vector& theta_hat, const Vector& x);
GapRecord RelativeGapFromCosts(double cost_hat, double cost_star);

// Mean, sample standard deviation (divisor n - 1), minimum and maximum.
struct GapSummary {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::int64_t count = 0;
};

GapSummary Summarize(std::span<const double> values);

enum class LabelSource {
  kPrSgd,
  // Labels are theta*(x_i); isolates the interpolation error.
  kExact,
};

struct MseOptions {
  int replications = 200;
  std::uint64_t master_seed = 0;
  LabelSource labels = LabelSource::kPrSgd;
  FitOptions fit;
  int workers = 1;
};

// Monte-Carlo decomposition of E|theta_hat(x) - theta*(x)|^2 over fresh
// offline stages on a fixed design.
struct MseDecomposition {
  double bias_squared = 0.0;      // |mean(theta_hat) - theta*|^2
  double variance = 0.0;          // trace of sample covariance, divisor R - 1
  double total_mse = 0.0;         // bias_squared + variance
  double mean_squared_error = 0.0;  // mean |theta_hat - theta*|^2
  double mse_standard_error = 0.0;
  Vector mean_prediction;
};

MseDecomposition EstimateMseDecomposition(const SimulationOracle& oracle,
                                          const CovariateDesign& design,
                                          const PrSgdConfig& config,
                                          const SmootherSpec& spec,
                                          const Vector& x,
                                          const MseOptions& options);

struct RateFit {
  std::vector<double> gammas;
  std::vector<double> mean_gaps;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares of log(gap) on log(Gamma). Needs at least three
// positive pairs spanning a factor of ten in Gamma.
RateFit EmpiricalRate(std::span<const double> gammas,
                      std::span<const double> mean_gaps);

}  // namespace otp

#endif  // OTP_EVALUATE_H_
