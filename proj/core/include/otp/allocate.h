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

#ifndef OTP_ALLOCATE_H_
#define OTP_ALLOCATE_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "otp/smooth.h"

namespace otp {

inline constexpr double kInfiniteSmoothness =
    std::numeric_limits<double>::infinity();

struct AllocationOverrides {
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> iterations;
  // Exponent e in T = round(Gamma^e); replaces the interval midpoint.
  std::optional<double> exponent;
  std::optional<int> k;
  std::optional<double> bandwidth;
  std::optional<double> lambda;
  // Raises n to at least this many points, shortening T to keep n*T within
  // the budget. Optimal rule only.
  std::optional<std::int64_t> min_n;
};

struct AllocationRequest {
  Technique technique = Technique::kKnn;
  std::int64_t budget = 0;  // Gamma
  int d = 1;
  double smoothness = kInfiniteSmoothness;  // m
  // Axis range of the covariate domain; the KS bandwidth is expressed in
  // these units.
  double domain_scale = 1.0;
  // Number of LR basis functions s; 0 means d + 1 (affine basis).
  int basis_size = 0;
  AllocationOverrides overrides;
};

enum class AllocationRule { kOptimal, kFixedT };

struct AllocationPlan {
  Technique technique = Technique::kKnn;
  AllocationRule rule = AllocationRule::kOptimal;
  std::int64_t budget = 0;
  int d = 1;
  std::int64_t n = 0;
  std::int64_t iterations = 0;  // T
  std::optional<int> k;
  std::optional<double> bandwidth;
  std::optional<double> lambda;
  double exponent_used = 0.0;  // log T / log Gamma
};

// Order interval for T from the allocation theorems, [lo, hi) or [lo, hi].
struct TInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool hi_closed = false;

  bool Contains(double t) const {
    return t >= lo && (hi_closed ? t <= hi : t < hi);
  }
};

// knn/ks: [G^{1/(d+2)}, G^{2/(d+2)}); lr: [G^{1/2}, G];
// krr: [G^{1/2 - d/(4m)}, G^{1 - d/(2m)}).
TInterval TheoreticalInterval(Technique technique, std::int64_t budget, int d,
                              double smoothness);

// Exponent at the midpoint of the interval: 1.5/(d+2), 3/4, 3/4 - 3d/(8m).
double MidpointExponent(Technique technique, int d, double smoothness);

// Smallest admissible number of design points for the technique.
std::int64_t MinimumDesignPoints(const AllocationRequest& request,
                                 std::optional<int> k);

// Optimal-rule plan: T from the midpoint exponent (moved inside the interval
// when rounding leaves it and an integer exists there), n = floor(Gamma / T),
// then the technique hyperparameter. Throws kInfeasibleBudget naming the
// binding constraint when n falls below MinimumDesignPoints.
AllocationPlan Allocate(const AllocationRequest& request);

// T = T_bar, n = floor(Gamma / T_bar), hyperparameters from the technique
// rule at the realized (n, T). Throws kInfeasibleBudget only when n = 0.
AllocationPlan FixedTPlan(const AllocationRequest& request,
                          std::int64_t t_bar);

struct Finding {
  std::string code;
  std::string message;
};

// Warnings only: T outside the theoretical interval, unused budget of T or
// more, and too few design points for the technique.
std::vector<Finding> ValidatePlan(const AllocationPlan& plan,
                                  const AllocationRequest& request);

// Value reported in the CSV "hyper" column; unset for LR.
std::optional<double> PlanHyperparameter(const AllocationPlan& plan);
std::string PlanSummary(const AllocationPlan& plan);

}  // namespace otp

#endif  // OTP_ALLOCATE_H_
