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


#include "otp/problem.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "otp/error.h"
#include "otp/normal.h"

namespace otp {

double SimulationOracle::ExpectedCost(const Vector&, const Vector&) const {
  throw Error(ErrorCode::kInvalidInput, "oracle has no closed-form cost");
}

Vector SimulationOracle::OptimalSolution(const Vector&) const {
  throw Error(ErrorCode::kInvalidInput, "oracle has no closed-form optimum");
}

void CountingOracle::StochasticGradient(const Vector& theta, const Vector& x,
                                        Rng& rng, Vector& gradient) const {
  calls_.fetch_add(1, std::memory_order_relaxed);
  inner_.StochasticGradient(theta, x, rng, gradient);
}

NewsvendorSpec NewsvendorSpec::Default(int q, int d) {
  if (q < 1 || d < 1) {
    throw Error(ErrorCode::kInvalidInput, "newsvendor needs q >= 1 and d >= 1");
  }
  NewsvendorSpec spec;
  spec.q = q;
  spec.d = d;
  spec.factor_weights = Matrix::Ones(q, d);
  spec.idiosyncratic_means =
      q == 1 ? Vector(Vector::Zero(1)) : Vector(Vector::LinSpaced(q, 0.0, 0.4));
  spec.covariate_lo = Vector::Zero(d);
  spec.covariate_hi = Vector::Constant(d, 3.0);
  spec.ResetDecisionBox();
  return spec;
}

void NewsvendorSpec::ResetDecisionBox() {
  Vector reach(d);
  for (int j = 0; j < d; ++j) {
    reach[j] = std::max(std::abs(covariate_lo[j]), std::abs(covariate_hi[j]));
  }
  decision_lo = Vector::Zero(q);
  decision_hi.resize(q);
  for (int i = 0; i < q; ++i) {
    const double mean = factor_weights.row(i).cwiseAbs().dot(reach) +
                        idiosyncratic_means[i];
    const double var = factor_weights.row(i).cwiseAbs2().dot(reach.cwiseAbs2()) +
                       idiosyncratic_means[i] * idiosyncratic_means[i];
    decision_hi[i] = mean + 4.0 * noise_scale * std::sqrt(var);
  }
}

void NewsvendorSpec::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidInput, "newsvendor: " + what);
  };
  if (q < 1 || d < 1) fail("q and d must be positive");
  if (!(shortage_cost > 0.0) || !(overage_cost > 0.0)) {
    fail("shortage and overage costs must be positive");
  }
  if (!(noise_scale >= 0.0)) fail("noise_scale must be nonnegative");
  if (factor_weights.rows() != q || factor_weights.cols() != d) {
    fail("factor_weights must be q x d");
  }
  if (idiosyncratic_means.size() != q) fail("idiosyncratic_means must have q entries");
  if ((idiosyncratic_means.array() < 0.0).any()) {
    fail("idiosyncratic_means must be nonnegative");
  }
  if (covariate_lo.size() != d || covariate_hi.size() != d) {
    fail("covariate bounds must have d entries");
  }
  if (decision_lo.size() != q || decision_hi.size() != q) {
    fail("decision bounds must have q entries");
  }
  if ((covariate_lo.array() > covariate_hi.array()).any()) {
    fail("covariate_lo exceeds covariate_hi");
  }
  if ((decision_lo.array() > decision_hi.array()).any()) {
    fail("decision_lo exceeds decision_hi");
  }
  if ((decision_lo.array() < 0.0).any()) fail("decision_lo must be >= 0");
  const double alpha = critical_ratio();
  if (!(alpha > 0.0 && alpha < 1.0)) fail("critical ratio outside (0, 1)");
}

Newsvendor::Newsvendor(NewsvendorSpec spec) : spec_(std::move(spec)) {
  spec_.Validate();
  covariate_box_ = Box(spec_.covariate_lo, spec_.covariate_hi);
  decision_box_ = Box(spec_.decision_lo, spec_.decision_hi);
  critical_quantile_ = normal::Quantile(spec_.critical_ratio());
}

void Newsvendor::CheckDims(const Vector* theta, const Vector& x) const {
  if (x.size() != spec_.d) {
    throw Error(ErrorCode::kInvalidInput,
                "covariate has " + std::to_string(x.size()) +
                    " coordinates, expected " + std::to_string(spec_.d));
  }
  if (theta != nullptr && theta->size() != spec_.q) {
    throw Error(ErrorCode::kInvalidInput,
                "decision has " + std::to_string(theta->size()) +
                    " coordinates, expected " + std::to_string(spec_.q));
  }
}

Vector Newsvendor::SampleDemand(const Vector& x, Rng& rng) const {
  CheckDims(nullptr, x);
  const double gamma = spec_.noise_scale;
  Vector factors(spec_.d);
  for (int j = 0; j < spec_.d; ++j) {
    factors[j] = x[j] + gamma * std::abs(x[j]) * rng.Normal();
  }
  Vector demand = spec_.factor_weights * factors;
  for (int i = 0; i < spec_.q; ++i) {
    const double mu = spec_.idiosyncratic_means[i];
    demand[i] += mu + gamma * mu * rng.Normal();
  }
  return demand;
}

void Newsvendor::StochasticGradient(const Vector& theta, const Vector& x,
                                    Rng& rng, Vector& gradient) const {
  CheckDims(&theta, x);
  const Vector demand = SampleDemand(x, rng);
  gradient.resize(spec_.q);
  for (int i = 0; i < spec_.q; ++i) {
    gradient[i] = demand[i] > theta[i] ? -spec_.shortage_cost : spec_.overage_cost;
  }
}

Vector Newsvendor::StochasticGradient(const Vector& theta, const Vector& x,
                                      Rng& rng) const {
  Vector gradient;
  StochasticGradient(theta, x, rng, gradient);
  return gradient;
}

Vector Newsvendor::DemandMean(const Vector& x) const {
  CheckDims(nullptr, x);
  return spec_.factor_weights * x + spec_.idiosyncratic_means;
}

Vector Newsvendor::DemandStdDev(const Vector& x) const {
  CheckDims(nullptr, x);
  const Vector var = spec_.factor_weights.cwiseAbs2() * x.cwiseAbs2() +
                     spec_.idiosyncratic_means.cwiseAbs2();
  return spec_.noise_scale * var.cwiseSqrt();
}

double Newsvendor::ExpectedCost(const Vector& theta, const Vector& x) const {
  CheckDims(&theta, x);
  const Vector mean = DemandMean(x);
  const Vector sd = DemandStdDev(x);
  double cost = 0.0;
  for (int i = 0; i < spec_.q; ++i) {
    if (!(sd[i] > 0.0)) {
      throw Error(ErrorCode::kDegenerateDistribution,
                  "demand of product " + std::to_string(i) +
                      " has zero variance at this covariate");
    }
    cost += spec_.shortage_cost * normal::UpperPartialMoment(theta[i], mean[i], sd[i]) +
            spec_.overage_cost * normal::LowerPartialMoment(theta[i], mean[i], sd[i]);
  }
  return cost;
}

Vector Newsvendor::ExpectedCostGradient(const Vector& theta,
                                        const Vector& x) const {
  CheckDims(&theta, x);
  const Vector mean = DemandMean(x);
  const Vector sd = DemandStdDev(x);
  Vector gradient(spec_.q);
  for (int i = 0; i < spec_.q; ++i) {
    if (!(sd[i] > 0.0)) {
      throw Error(ErrorCode::kDegenerateDistribution,
                  "demand of product " + std::to_string(i) +
                      " has zero variance at this covariate");
    }
    const double z = (theta[i] - mean[i]) / sd[i];
    gradient[i] = (spec_.shortage_cost + spec_.overage_cost) * normal::Cdf(z) -
                  spec_.shortage_cost;
  }
  return gradient;
}

Vector Newsvendor::OptimalSolution(const Vector& x) const {
  return DemandMean(x) + critical_quantile_ * DemandStdDev(x);
}

}  // namespace otp
