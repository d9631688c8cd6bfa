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
#ifndef OTP_PROBLEM_H_
#define OTP_PROBLEM_H_

#include <atomic>
#include <cstdint>
#include <memory>

#include "otp/rng.h"
#include "otp/types.h"

namespace otp {

// Simulation oracle for one contextual strongly convex problem
// min_theta E[F(theta; x)] over a box. Implementations must be safe to call
// concurrently as long as every caller owns its Rng.
class SimulationOracle {
 public:
  virtual ~SimulationOracle() = default;

  virtual int covariate_dim() const = 0;
  virtual int decision_dim() const = 0;
  virtual const Box& covariate_box() const = 0;
  virtual const Box& decision_box() const = 0;

  // One unbiased draw of grad_theta F(theta; x). Writes decision_dim() values.
  virtual void StochasticGradient(const Vector& theta, const Vector& x,
                                  Rng& rng, Vector& gradient) const = 0;

  // Optional closed-form ground truth. The defaults throw kInvalidInput.
  virtual bool has_exact_solution() const { return false; }
  virtual double ExpectedCost(const Vector& theta, const Vector& x) const;
  virtual Vector OptimalSolution(const Vector& x) const;
};

// Forwards to another oracle and counts StochasticGradient calls.
class CountingOracle final : public SimulationOracle {
 public:
  explicit CountingOracle(const SimulationOracle& inner) : inner_(inner) {}

  int covariate_dim() const override { return inner_.covariate_dim(); }
  int decision_dim() const override { return inner_.decision_dim(); }
  const Box& covariate_box() const override { return inner_.covariate_box(); }
  const Box& decision_box() const override { return inner_.decision_box(); }
  void StochasticGradient(const Vector& theta, const Vector& x, Rng& rng,
                          Vector& gradient) const override;
  bool has_exact_solution() const override {
    return inner_.has_exact_solution();
  }
  double ExpectedCost(const Vector& theta, const Vector& x) const override {
    return inner_.ExpectedCost(theta, x);
  }
  Vector OptimalSolution(const Vector& x) const override {
    return inner_.OptimalSolution(x);
  }

  std::int64_t calls() const { return calls_.load(std::memory_order_relaxed); }
  void Reset() { calls_.store(0, std::memory_order_relaxed); }

 private:
  const SimulationOracle& inner_;
  mutable std::atomic<std::int64_t> calls_{0};
};

// Multi-product newsvendor with a linear factor demand model:
//   D_i = sum_j w_ij Z_j + eps_i,  Z_j ~ N(x_j, (gamma x_j)^2),
//   eps_i ~ N(mu_i, (gamma mu_i)^2),
// and cost sum_i c_s (D_i - theta_i)^+ + c_o (theta_i - D_i)^+.
struct NewsvendorSpec {
  int q = 1;
  int d = 1;
  double shortage_cost = 3.0;
  double overage_cost = 1.0;
  double noise_scale = 0.3;
  Matrix factor_weights;      // q x d
  Vector idiosyncratic_means;  // q
  Vector covariate_lo;
  Vector covariate_hi;
  Vector decision_lo;
  Vector decision_hi;

  // Homogeneous weights, c_s = 3, c_o = 1, gamma = 0.3, X = [0, 3]^d and
  // mu_i equally spaced on [0, 0.4]. The decision box is [0, hi] with hi the
  // mean plus four standard deviations of demand at the upper covariate
  // corner.
  static NewsvendorSpec Default(int q, int d);

  double critical_ratio() const {
    return shortage_cost / (shortage_cost + overage_cost);
  }
  // Fills decision_hi from the covariate box as described for Default().
  void ResetDecisionBox();
  // Throws kInvalidInput when any invariant fails.
  void Validate() const;
};

class Newsvendor final : public SimulationOracle {
 public:
  explicit Newsvendor(NewsvendorSpec spec);

  const NewsvendorSpec& spec() const { return spec_; }

  int covariate_dim() const override { return spec_.d; }
  int decision_dim() const override { return spec_.q; }
  const Box& covariate_box() const override { return covariate_box_; }
  const Box& decision_box() const override { return decision_box_; }

  // One demand realization. Consumes d + q standard normals from rng.
  Vector SampleDemand(const Vector& x, Rng& rng) const;

  void StochasticGradient(const Vector& theta, const Vector& x, Rng& rng,
                          Vector& gradient) const override;
  Vector StochasticGradient(const Vector& theta, const Vector& x,
                            Rng& rng) const;

  bool has_exact_solution() const override { return true; }
  // Normal-loss closed form. Throws kDegenerateDistribution when some
  // demand standard deviation is zero.
  double ExpectedCost(const Vector& theta, const Vector& x) const override;
  // Closed-form gradient (c_s + c_o) Phi(z_i) - c_s of ExpectedCost.
  Vector ExpectedCostGradient(const Vector& theta, const Vector& x) const;
  Vector OptimalSolution(const Vector& x) const override;

  Vector DemandMean(const Vector& x) const;
  Vector DemandStdDev(const Vector& x) const;

 private:
  void CheckDims(const Vector* theta, const Vector& x) const;

  NewsvendorSpec spec_;
  Box covariate_box_;
  Box decision_box_;
  double critical_quantile_;
};

}  // namespace otp

#endif  // OTP_PROBLEM_H_
