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

#ifndef OTP_PRSGD_H_
#define OTP_PRSGD_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "otp/design.h"
#include "otp/problem.h"
#include "otp/rng.h"
#include "otp/types.h"

namespace otp {

enum class InitialPoint {
  kBoxCenter,
  kFixed,
  // Starts from the solution of the nearest already-solved design point.
  // Makes BatchSolve sequential.
  kWarmStart,
};

struct PrSgdConfig {
  std::int64_t iterations = 100;  // T, one oracle call per iteration
  double step_constant = 0.8;     // gamma in gamma_t = gamma log(t+1)/(t+1)
  InitialPoint initial_point = InitialPoint::kBoxCenter;
  Vector fixed_initial;  // used when initial_point == kFixed
  bool record_trace = false;

  double StepSize(std::int64_t t) const;
  void Validate(int decision_dim) const;
};

// 0.8 for d <= 2, 4.0 for d >= 10, linear in log d between.
double DefaultStepConstant(int covariate_dim);

struct InexactSolution {
  Vector x;
  Vector theta_bar;  // mean of theta_0, ..., theta_T
  std::int64_t iterations = 0;
  RngStream stream;
  Vector final_iterate;
  std::vector<Vector> trace;  // theta_0..theta_T when recorded
};

struct InexactSolutionSet {
  CovariateDesign design;
  std::vector<InexactSolution> solutions;  // aligned with design rows
  PrSgdConfig config;
  std::uint64_t master_seed = 0;

  int size() const { return static_cast<int>(solutions.size()); }
  // n x q matrix whose row i is theta_bar at design point i.
  Matrix Labels() const;
};

// Componentwise clamp onto [box.lo, box.hi].
Vector Project(const Vector& theta, const Box& box);

// T-step projected SGD with Polyak-Ruppert averaging at covariate x. A
// non-finite gradient aborts with kNumericFailure carrying the iteration.
InexactSolution Solve(const SimulationOracle& oracle, const Vector& x,
                      const PrSgdConfig& config, RngStream stream,
                      const Vector* warm_start = nullptr);

// Stream id assigned to design point i.
RngStream BatchStream(std::uint64_t master_seed, std::int64_t index);

// Solves every design point. Output does not depend on `workers`.
InexactSolutionSet BatchSolve(const SimulationOracle& oracle,
                              const CovariateDesign& design,
                              const PrSgdConfig& config,
                              std::uint64_t master_seed, int workers = 1);

struct BiasVariance {
  Vector bias;      // mean(theta_bar) - theta*(x)
  Vector variance;  // sample variance of theta_bar, divisor R - 1
  Vector mean;
};

BiasVariance EstimateBiasVariance(const SimulationOracle& oracle,
                                  const Vector& x, const PrSgdConfig& config,
                                  int replications, std::uint64_t master_seed,
                                  int workers = 1);

}  // namespace otp

#endif  // OTP_PRSGD_H_
