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


#include "otp/prsgd.h"

#include <cmath>
#include <limits>
#include <string>

#include "otp/error.h"
#include "otp/parallel.h"

namespace otp {

double PrSgdConfig::StepSize(std::int64_t t) const {
  const double u = static_cast<double>(t) + 1.0;
  return step_constant * std::log(u) / u;
}

void PrSgdConfig::Validate(int decision_dim) const {
  if (iterations < 0) {
    throw Error(ErrorCode::kInvalidInput, "PR-SGD iterations must be >= 0");
  }
  if (!(step_constant > 0.0) || !std::isfinite(step_constant)) {
    throw Error(ErrorCode::kInvalidInput, "PR-SGD step constant must be positive");
  }
  if (initial_point == InitialPoint::kFixed && fixed_initial.size() != decision_dim) {
    throw Error(ErrorCode::kInvalidInput,
                "fixed initial point must have " + std::to_string(decision_dim) +
                    " coordinates");
  }
}

double DefaultStepConstant(int covariate_dim) {
  if (covariate_dim <= 2) return 0.8;
  if (covariate_dim >= 10) return 4.0;
  const double frac = (std::log(covariate_dim) - std::log(2.0)) /
                      (std::log(10.0) - std::log(2.0));
  return 0.8 + frac * (4.0 - 0.8);
}

Matrix InexactSolutionSet::Labels() const {
  if (solutions.empty()) return Matrix();
  Matrix labels(size(), solutions.front().theta_bar.size());
  for (int i = 0; i < size(); ++i) labels.row(i) = solutions[i].theta_bar.transpose();
  return labels;
}

Vector Project(const Vector& theta, const Box& box) {
  return theta.cwiseMax(box.lo).cwiseMin(box.hi);
}

InexactSolution Solve(const SimulationOracle& oracle, const Vector& x,
                      const PrSgdConfig& config, RngStream stream,
                      const Vector* warm_start) {
  config.Validate(oracle.decision_dim());
  const Box& box = oracle.decision_box();
  Vector theta;
  switch (config.initial_point) {
    case InitialPoint::kBoxCenter:
      theta = box.center();
      break;
    case InitialPoint::kFixed:
      theta = Project(config.fixed_initial, box);
      break;
    case InitialPoint::kWarmStart:
      theta = warm_start != nullptr ? Project(*warm_start, box) : box.center();
      break;
  }

  InexactSolution out;
  out.x = x;
  out.iterations = config.iterations;
  out.stream = stream;
  if (config.record_trace) {
    out.trace.reserve(static_cast<std::size_t>(config.iterations) + 1);
    out.trace.push_back(theta);
  }

  Rng rng(stream);
  Vector sum = theta;
  Vector gradient(theta.size());
  for (std::int64_t t = 1; t <= config.iterations; ++t) {
    oracle.StochasticGradient(theta, x, rng, gradient);
    if (!gradient.allFinite()) {
      ErrorContext context;
      context.iteration = t;
      throw Error(ErrorCode::kNumericFailure, "non-finite stochastic gradient",
                  context);
    }
    theta = Project(theta - config.StepSize(t) * gradient, box);
    sum += theta;
    if (config.record_trace) out.trace.push_back(theta);
  }
  out.theta_bar = sum / static_cast<double>(config.iterations + 1);
  out.final_iterate = theta;
  return out;
}

RngStream BatchStream(std::uint64_t master_seed, std::int64_t index) {
  return RngStream{master_seed,
                   HashCombine({master_seed, static_cast<std::uint64_t>(index)})};
}

InexactSolutionSet BatchSolve(const SimulationOracle& oracle,
                              const CovariateDesign& design,
                              const PrSgdConfig& config,
                              std::uint64_t master_seed, int workers) {
  const int n = design.size();
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "design is empty");
  if (design.dim() != oracle.covariate_dim()) {
    throw Error(ErrorCode::kInvalidInput, "design dimension mismatch");
  }
  config.Validate(oracle.decision_dim());

  InexactSolutionSet set;
  set.design = design;
  set.config = config;
  set.master_seed = master_seed;
  set.solutions.resize(n);

  auto solve_one = [&](std::int64_t i, const Vector* warm) {
    try {
      set.solutions[i] =
          Solve(oracle, design.point(static_cast<int>(i)), config,
                BatchStream(master_seed, i), warm);
    } catch (const Error& e) {
      throw e.WithCovariate(i);
    }
  };

  if (config.initial_point == InitialPoint::kWarmStart) {
    for (int i = 0; i < n; ++i) {
      const Vector* warm = nullptr;
      if (i > 0) {
        const Vector xi = design.point(i);
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < i; ++j) {
          const double dj = (design.points.row(j).transpose() - xi).squaredNorm();
          if (dj < best_d) {
            best_d = dj;
            best = j;
          }
        }
        warm = &set.solutions[best].theta_bar;
      }
      solve_one(i, warm);
    }
  } else {
    ParallelFor(n, workers, [&](std::int64_t i) { solve_one(i, nullptr); });
  }
  return set;
}

BiasVariance EstimateBiasVariance(const SimulationOracle& oracle,
                                  const Vector& x, const PrSgdConfig& config,
                                  int replications, std::uint64_t master_seed,
                                  int workers) {
  if (replications < 2) {
    throw Error(ErrorCode::kInvalidInput, "bias/variance needs R >= 2");
  }
  if (!oracle.has_exact_solution()) {
    throw Error(ErrorCode::kInvalidInput, "bias/variance needs an exact optimum");
  }
  std::vector<Vector> bars(replications);
  ParallelFor(replications, workers, [&](std::int64_t r) {
    bars[r] = Solve(oracle, x, config, BatchStream(master_seed, r)).theta_bar;
  });
  const int q = oracle.decision_dim();
  Vector mean = Vector::Zero(q);
  for (const auto& b : bars) mean += b;
  mean /= replications;
  Vector var = Vector::Zero(q);
  for (const auto& b : bars) var += (b - mean).cwiseAbs2();
  var /= replications - 1;

  BiasVariance out;
  out.mean = mean;
  out.bias = mean - oracle.OptimalSolution(x);
  out.variance = var;
  return out;
}

}  // namespace otp
