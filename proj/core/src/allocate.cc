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


#include "otp/allocate.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "otp/error.h"

namespace otp {
namespace {

[[noreturn]] void Infeasible(const std::string& message) {
  throw Error(ErrorCode::kInfeasibleBudget, message);
}

void ValidateRequest(const AllocationRequest& request) {
  if (request.budget < 16) {
    throw Error(ErrorCode::kInvalidInput, "budget must be >= 16");
  }
  if (request.d < 1) throw Error(ErrorCode::kInvalidInput, "d must be >= 1");
  if (!(request.domain_scale > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "domain scale must be positive");
  }
  if (request.technique == Technique::kKrr && !std::isinf(request.smoothness) &&
      !(request.smoothness > 0.5 * request.d)) {
    throw Error(ErrorCode::kInvalidInput, "krr requires smoothness m > d/2");
  }
  if (request.basis_size < 0) {
    throw Error(ErrorCode::kInvalidInput, "basis size must be >= 0");
  }
}

int LrBasisSize(const AllocationRequest& request) {
  return request.basis_size > 0 ? request.basis_size : request.d + 1;
}

double Power(std::int64_t budget, double exponent) {
  return std::pow(static_cast<double>(budget), exponent);
}

// Technique hyperparameters from the rule at the realized (n, T).
void FillHyperparameters(const AllocationRequest& request, AllocationPlan& plan) {
  const auto& o = request.overrides;
  const int d = request.d;
  switch (request.technique) {
    case Technique::kKnn: {
      int k = o.k.value_or(static_cast<int>(std::max<double>(
          2.0, std::round(Power(request.budget, 2.0 / (d + 2)) /
                          static_cast<double>(plan.iterations)))));
      if (k < 1) throw Error(ErrorCode::kInvalidInput, "k must be >= 1");
      plan.k = k;
      break;
    }
    case Technique::kKs: {
      const double h = o.bandwidth.value_or(
          Power(request.budget, -1.0 / (d + 2)) * request.domain_scale);
      if (!(h > 0.0)) throw Error(ErrorCode::kInvalidInput, "bandwidth must be positive");
      plan.bandwidth = h;
      break;
    }
    case Technique::kLr:
      break;
    case Technique::kKrr: {
      const double lambda =
          o.lambda.value_or(1.0 / static_cast<double>(request.budget));
      if (!(lambda > 0.0)) throw Error(ErrorCode::kInvalidInput, "lambda must be positive");
      plan.lambda = lambda;
      break;
    }
  }
}

double UsedExponent(const AllocationPlan& plan) {
  return std::log(static_cast<double>(plan.iterations)) /
         std::log(static_cast<double>(plan.budget));
}

}  // namespace

TInterval TheoreticalInterval(Technique technique, std::int64_t budget, int d,
                              double smoothness) {
  TInterval interval;
  switch (technique) {
    case Technique::kKnn:
    case Technique::kKs:
      interval.lo = Power(budget, 1.0 / (d + 2));
      interval.hi = Power(budget, 2.0 / (d + 2));
      break;
    case Technique::kLr:
      interval.lo = Power(budget, 0.5);
      interval.hi = static_cast<double>(budget);
      interval.hi_closed = true;
      break;
    case Technique::kKrr: {
      const double ratio = std::isinf(smoothness) ? 0.0 : d / smoothness;
      interval.lo = Power(budget, 0.5 - ratio / 4.0);
      interval.hi = Power(budget, 1.0 - ratio / 2.0);
      break;
    }
  }
  return interval;
}

double MidpointExponent(Technique technique, int d, double smoothness) {
  switch (technique) {
    case Technique::kKnn:
    case Technique::kKs:
      return 1.5 / (d + 2);
    case Technique::kLr:
      return 0.75;
    case Technique::kKrr:
      return std::isinf(smoothness) ? 0.75 : 0.75 - 3.0 * d / (8.0 * smoothness);
  }
  return 0.5;
}

std::int64_t MinimumDesignPoints(const AllocationRequest& request,
                                 std::optional<int> k) {
  switch (request.technique) {
    case Technique::kKnn:
      return std::max<std::int64_t>(2, k.value_or(1) + 1);
    case Technique::kLr:
      return LrBasisSize(request) + 1;
    case Technique::kKs:
    case Technique::kKrr:
      return 2;
  }
  return 2;
}

AllocationPlan Allocate(const AllocationRequest& request) {
  ValidateRequest(request);
  const auto& o = request.overrides;
  const std::int64_t budget = request.budget;

  AllocationPlan plan;
  plan.technique = request.technique;
  plan.rule = AllocationRule::kOptimal;
  plan.budget = budget;
  plan.d = request.d;

  const double exponent = o.exponent.value_or(
      MidpointExponent(request.technique, request.d, request.smoothness));
  if (!(exponent >= 0.0 && exponent <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "allocation exponent must lie in [0, 1]");
  }

  std::int64_t t = 0;
  if (o.iterations) {
    t = *o.iterations;
  } else if (o.n) {
    t = budget / std::max<std::int64_t>(1, *o.n);
  } else {
    t = std::max<std::int64_t>(1, std::llround(Power(budget, exponent)));
    // Rounding can step outside the interval; pull T back when an integer
    // exists inside it.
    const TInterval interval = TheoreticalInterval(
        request.technique, budget, request.d, request.smoothness);
    const auto lo = static_cast<std::int64_t>(std::ceil(interval.lo - 1e-9));
    auto hi = static_cast<std::int64_t>(std::floor(interval.hi + 1e-9));
    if (!interval.Contains(static_cast<double>(hi))) --hi;
    if (lo <= hi && !interval.Contains(static_cast<double>(t))) {
      t = std::clamp<std::int64_t>(t, std::max<std::int64_t>(lo, 1), hi);
    }
  }
  if (t < 1) Infeasible("iterations per design point must be >= 1");
  std::int64_t n = o.n.value_or(budget / t);

  if (request.technique == Technique::kLr && !o.n) {
    const std::int64_t floor_n = LrBasisSize(request) + 1;
    if (n < floor_n) {
      n = floor_n;
      if (!o.iterations) t = budget / n;
    }
  }
  if (o.min_n && !o.n && n < *o.min_n) {
    n = *o.min_n;
    if (!o.iterations) t = budget / n;
  }
  if (t < 1) {
    Infeasible("budget " + std::to_string(budget) + " cannot give " +
               std::to_string(n) + " design points one iteration each");
  }
  if (n * t > budget) {
    Infeasible("n*T = " + std::to_string(n * t) + " exceeds the budget " +
               std::to_string(budget));
  }
  plan.n = n;
  plan.iterations = t;
  FillHyperparameters(request, plan);

  const std::int64_t minimum = MinimumDesignPoints(request, plan.k);
  if (n < minimum) {
    std::string constraint;
    switch (request.technique) {
      case Technique::kKnn:
        constraint = "n > k (k=" + std::to_string(*plan.k) + ")";
        break;
      case Technique::kLr:
        constraint = "n >= s+1 (s=" + std::to_string(LrBasisSize(request)) + ")";
        break;
      default:
        constraint = "n >= 2";
        break;
    }
    Infeasible("allocation gives n=" + std::to_string(n) + ", violating " +
               constraint);
  }
  plan.exponent_used = UsedExponent(plan);
  return plan;
}

AllocationPlan FixedTPlan(const AllocationRequest& request, std::int64_t t_bar) {
  ValidateRequest(request);
  if (t_bar < 1) throw Error(ErrorCode::kInvalidInput, "T_bar must be >= 1");
  AllocationPlan plan;
  plan.technique = request.technique;
  plan.rule = AllocationRule::kFixedT;
  plan.budget = request.budget;
  plan.d = request.d;
  plan.iterations = t_bar;
  plan.n = request.budget / t_bar;
  if (plan.n == 0) {
    Infeasible("budget " + std::to_string(request.budget) +
               " is below T_bar=" + std::to_string(t_bar));
  }
  FillHyperparameters(request, plan);
  if (plan.k && !request.overrides.k) {
    // Keep k usable on tiny designs; ValidatePlan flags the coverage.
    plan.k = static_cast<int>(std::clamp<std::int64_t>(*plan.k, 1,
                                                   std::max<std::int64_t>(1, plan.n - 1)));
  }
  plan.exponent_used = UsedExponent(plan);
  return plan;
}

std::vector<Finding> ValidatePlan(const AllocationPlan& plan,
                                  const AllocationRequest& request) {
  std::vector<Finding> findings;
  const TInterval interval =
      TheoreticalInterval(plan.technique, plan.budget, plan.d, request.smoothness);
  char buffer[160];
  if (!interval.Contains(static_cast<double>(plan.iterations))) {
    std::snprintf(buffer, sizeof(buffer), "T=%lld outside [%.4g, %.4g%c",
                  static_cast<long long>(plan.iterations), interval.lo,
                  interval.hi, interval.hi_closed ? ']' : ')');
    findings.push_back({"t_outside_interval", buffer});
  }
  if (plan.n * plan.iterations > plan.budget) {
    findings.push_back({"budget_exceeded", "n*T exceeds the budget"});
  } else if (plan.budget - plan.n * plan.iterations >= plan.iterations) {
    findings.push_back({"budget_unused", "unused budget of at least T"});
  }
  AllocationRequest probe = request;
  probe.technique = plan.technique;
  if (plan.technique == Technique::kLr && plan.n < LrBasisSize(probe) + 1) {
    findings.push_back({"lr_identifiability",
                        "n=" + std::to_string(plan.n) + " < s+1=" +
                            std::to_string(LrBasisSize(probe) + 1) +
                            ", identifiability violated"});
  }
  if (plan.k && plan.n <= *plan.k) {
    findings.push_back({"knn_neighbors", "n <= k"});
  }
  if (plan.n < std::max<std::int64_t>(2, plan.d + 1)) {
    findings.push_back({"low_coverage",
                        "n=" + std::to_string(plan.n) +
                            " below recommended coverage of d+1 points"});
  }
  return findings;
}

std::optional<double> PlanHyperparameter(const AllocationPlan& plan) {
  if (plan.k) return static_cast<double>(*plan.k);
  if (plan.bandwidth) return *plan.bandwidth;
  if (plan.lambda) return *plan.lambda;
  return std::nullopt;
}

std::string PlanSummary(const AllocationPlan& plan) {
  std::string out = std::string(TechniqueName(plan.technique));
  out += plan.rule == AllocationRule::kOptimal ? " opt" : " fixed_T";
  out += " Gamma=" + std::to_string(plan.budget);
  out += " d=" + std::to_string(plan.d);
  out += " n=" + std::to_string(plan.n);
  out += " T=" + std::to_string(plan.iterations);
  char buffer[64];
  if (plan.k) out += " k=" + std::to_string(*plan.k);
  if (plan.bandwidth) {
    std::snprintf(buffer, sizeof(buffer), " h=%.6g", *plan.bandwidth);
    out += buffer;
  }
  if (plan.lambda) {
    std::snprintf(buffer, sizeof(buffer), " lambda=%.6g", *plan.lambda);
    out += buffer;
  }
  std::snprintf(buffer, sizeof(buffer), " exponent=%.4f", plan.exponent_used);
  out += buffer;
  return out;
}

}  // namespace otp
