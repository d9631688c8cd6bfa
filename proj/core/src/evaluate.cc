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


#include "otp/evaluate.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "otp/error.h"
#include "otp/parallel.h"

namespace otp {

GapRecord RelativeGapFromCosts(double cost_hat, double cost_star) {
  if (cost_star == 0.0) {
    throw Error(ErrorCode::kUndefinedGap, "optimal cost is zero");
  }
  if (!std::isfinite(cost_hat) || !std::isfinite(cost_star)) {
    throw Error(ErrorCode::kNumericFailure, "non-finite cost");
  }
  GapRecord record;
  record.cost_hat = cost_hat;
  record.cost_star = cost_star;
  const double raw = (cost_hat - cost_star) / cost_star;
  if (raw < 0.0) {
    record.clamped = true;
    record.out_of_tolerance = raw < -kGapClampTolerance;
    record.relative_gap = 0.0;
  } else {
    record.relative_gap = raw;
  }
  return record;
}

GapRecord RelativeOptimalityGap(const SimulationOracle& oracle,
                                const Vector& theta_hat, const Vector& x) {
  if (!oracle.has_exact_solution()) {
    throw Error(ErrorCode::kInvalidInput, "oracle has no closed-form optimum");
  }
  const Vector theta_star = oracle.OptimalSolution(x);
  GapRecord record = RelativeGapFromCosts(oracle.ExpectedCost(theta_hat, x),
                                          oracle.ExpectedCost(theta_star, x));
  record.x = x;
  record.theta_hat = theta_hat;
  return record;
}

GapSummary Summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidInput, "no values to summarize");
  GapSummary s;
  s.count = static_cast<std::int64_t>(values.size());
  double sum = 0.0;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

MseDecomposition EstimateMseDecomposition(const SimulationOracle& oracle,
                                          const CovariateDesign& design,
                                          const PrSgdConfig& config,
                                          const SmootherSpec& spec,
                                          const Vector& x,
                                          const MseOptions& options) {
  const int r_count = options.replications;
  if (r_count < 10) {
    throw Error(ErrorCode::kInvalidInput, "decomposition needs R >= 10");
  }
  if (!oracle.has_exact_solution()) {
    throw Error(ErrorCode::kInvalidInput, "oracle has no closed-form optimum");
  }
  const Vector theta_star = oracle.OptimalSolution(x);

  Matrix exact_labels;
  if (options.labels == LabelSource::kExact) {
    exact_labels.resize(design.size(), oracle.decision_dim());
    for (int i = 0; i < design.size(); ++i) {
      exact_labels.row(i) = oracle.OptimalSolution(design.point(i)).transpose();
    }
  }

  std::vector<Vector> predictions(r_count);
  ParallelFor(r_count, options.workers, [&](std::int64_t r) {
    try {
      Matrix labels;
      if (options.labels == LabelSource::kExact) {
        labels = exact_labels;
      } else {
        const std::uint64_t seed = HashCombine(
            {options.master_seed, static_cast<std::uint64_t>(r)});
        labels = BatchSolve(oracle, design, config, seed, 1).Labels();
      }
      predictions[r] =
          FittedSolutionMap::Fit(spec, design, labels, options.fit).Predict(x);
    } catch (const Error& e) {
      throw e.WithReplication(r);
    }
  });

  const int q = oracle.decision_dim();
  Vector mean = Vector::Zero(q);
  for (const auto& p : predictions) mean += p;
  mean /= r_count;

  double variance = 0.0;
  std::vector<double> squared_errors(r_count);
  for (int r = 0; r < r_count; ++r) {
    variance += (predictions[r] - mean).squaredNorm();
    squared_errors[r] = (predictions[r] - theta_star).squaredNorm();
  }
  variance /= r_count - 1;
  const GapSummary se = Summarize(squared_errors);

  MseDecomposition out;
  out.bias_squared = (mean - theta_star).squaredNorm();
  out.variance = variance;
  out.total_mse = out.bias_squared + out.variance;
  out.mean_squared_error = se.mean;
  out.mse_standard_error = se.sd / std::sqrt(static_cast<double>(r_count));
  out.mean_prediction = mean;
  return out;
}

RateFit EmpiricalRate(std::span<const double> gammas,
                      std::span<const double> mean_gaps) {
  if (gammas.size() != mean_gaps.size()) {
    throw Error(ErrorCode::kInvalidInput, "budgets and gaps differ in length");
  }
  if (gammas.size() < 3) {
    throw Error(ErrorCode::kInvalidInput, "rate fit needs at least 3 budgets");
  }
  const int n = static_cast<int>(gammas.size());
  double lo = gammas[0];
  double hi = gammas[0];
  for (int i = 0; i < n; ++i) {
    if (!(gammas[i] > 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "budgets must be positive");
    }
    if (!(mean_gaps[i] > 0.0) || !std::isfinite(mean_gaps[i])) {
      throw Error(ErrorCode::kInvalidInput,
                  "gap " + std::to_string(i) + " is not positive");
    }
    lo = std::min(lo, gammas[i]);
    hi = std::max(hi, gammas[i]);
  }
  if (hi < 10.0 * lo * (1.0 - 1e-12)) {
    throw Error(ErrorCode::kInvalidInput, "budgets must span at least a decade");
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += std::log(gammas[i]);
    my += std::log(mean_gaps[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = std::log(gammas[i]) - mx;
    const double dy = std::log(mean_gaps[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.gammas.assign(gammas.begin(), gammas.end());
  fit.mean_gaps.assign(mean_gaps.begin(), mean_gaps.end());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace otp
