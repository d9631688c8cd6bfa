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

#include <cmath>

#include "doctest.h"
#include "otp/error.h"
#include "otp/normal.h"
#include "otp/problem.h"
#include "otp/rng.h"

namespace otp {
namespace {

NewsvendorSpec Scalar(double noise, double mu = 0.0) {
  NewsvendorSpec spec = NewsvendorSpec::Default(1, 1);
  spec.noise_scale = noise;
  spec.idiosyncratic_means = Vector::Constant(1, mu);
  spec.ResetDecisionBox();
  return spec;
}

Vector V(std::initializer_list<double> v) {
  Vector out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST_SUITE("problem") {

TEST_CASE("normal helpers") {
  CHECK(normal::Cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal::Quantile(0.75) == doctest::Approx(0.6744897502).epsilon(1e-9));
  CHECK(normal::Cdf(normal::Quantile(0.01)) == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(normal::Pdf(0.0) == doctest::Approx(0.3989422804));
  CHECK(normal::Cdf(-30.0) > 0.0);
}

TEST_CASE("zero noise demand is deterministic") {
  const Newsvendor nv(Scalar(0.0));
  Rng rng(RngStream{1, 2});
  CHECK(nv.SampleDemand(V({2.0}), rng)(0) == 2.0);
  const Vector g = nv.StochasticGradient(V({1.5}), V({2.0}), rng);
  CHECK(g(0) == -3.0);
  CHECK(nv.StochasticGradient(V({2.5}), V({2.0}), rng)(0) == 1.0);
  CHECK_THROWS_AS(nv.ExpectedCost(V({1.0}), V({2.0})), Error);
}

TEST_CASE("identical streams give identical draws") {
  const Newsvendor nv(NewsvendorSpec::Default(5, 2));
  Rng a(RngStream{7, 3});
  Rng b(RngStream{7, 3});
  for (int i = 0; i < 5; ++i) {
    CHECK(nv.SampleDemand(V({1.0, 2.0}), a) == nv.SampleDemand(V({1.0, 2.0}), b));
  }
}

TEST_CASE("demand sample mean") {
  const Newsvendor nv(Scalar(0.3));
  Rng rng(RngStream{11, 0});
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += nv.SampleDemand(V({2.0}), rng)(0);
  CHECK(std::abs(sum / n - 2.0) < 3 * 0.6 / std::sqrt(n));
  CHECK(nv.DemandStdDev(V({2.0}))(0) == doctest::Approx(0.6));
}

TEST_CASE("closed form costs and optimum") {
  const Newsvendor nv(Scalar(0.3));
  const Vector star = nv.OptimalSolution(V({2.0}));
  CHECK(star(0) == doctest::Approx(2.0 + 0.6744897502 * 0.6).epsilon(1e-9));
  CHECK(nv.ExpectedCost(star, V({2.0})) == doctest::Approx(4 * 0.6 * 0.3177765).epsilon(1e-6));
  CHECK(nv.ExpectedCost(V({2.0}), V({2.0})) == doctest::Approx(4 * 0.6 * 0.3989423).epsilon(1e-6));
  CHECK(nv.OptimalSolution(V({1.0}))(0) == doctest::Approx(1.2023).epsilon(1e-4));
  CHECK(nv.ExpectedCost(V({100.0}), V({2.0})) == doctest::Approx(98.0).epsilon(1e-6));
}

TEST_CASE("symmetric costs put the optimum at the mean") {
  NewsvendorSpec spec = NewsvendorSpec::Default(3, 2);
  spec.shortage_cost = 2.0;
  spec.overage_cost = 2.0;
  const Newsvendor nv(spec);
  const Vector x = V({0.7, 2.2});
  CHECK((nv.OptimalSolution(x) - nv.DemandMean(x)).norm() < 1e-12);
}

TEST_CASE("random probes never beat the optimum") {
  const Newsvendor nv(NewsvendorSpec::Default(5, 2));
  Rng rng(RngStream{3, 0});
  for (int c = 0; c < 10; ++c) {
    Vector x(2);
    x << rng.Uniform(0, 3), rng.Uniform(0, 3);
    const Vector star = nv.OptimalSolution(x);
    const double best = nv.ExpectedCost(star, x);
    CHECK(nv.ExpectedCostGradient(star, x).norm() < 1e-8);
    for (int p = 0; p < 100; ++p) {
      Vector theta(5);
      for (int i = 0; i < 5; ++i) {
        theta(i) = rng.Uniform(nv.decision_box().lo(i), nv.decision_box().hi(i));
      }
      CHECK(nv.ExpectedCost(theta, x) >= best);
    }
  }
}

TEST_CASE("stochastic gradient is unbiased") {
  const Newsvendor nv(NewsvendorSpec::Default(2, 2));
  const Vector x = V({1.0, 2.0});
  const Vector theta = V({2.0, 3.5});
  Rng rng(RngStream{5, 1});
  const int n = 100000;
  Vector sum = Vector::Zero(2), sq = Vector::Zero(2);
  for (int i = 0; i < n; ++i) {
    const Vector g = nv.StochasticGradient(theta, x, rng);
    sum += g;
    sq += g.cwiseProduct(g);
  }
  const Vector mean = sum / n;
  const Vector se = ((sq / n - mean.cwiseProduct(mean)) / n).cwiseSqrt();
  for (int i = 0; i < 2; ++i) {
    Vector up = theta, down = theta;
    up(i) += 1e-4;
    down(i) -= 1e-4;
    const double fd = (nv.ExpectedCost(up, x) - nv.ExpectedCost(down, x)) / 2e-4;
    CHECK(std::abs(mean(i) - fd) < 4 * se(i));
    CHECK(nv.ExpectedCostGradient(theta, x)(i) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("spec validation") {
  NewsvendorSpec spec = NewsvendorSpec::Default(2, 2);
  spec.shortage_cost = -1.0;
  CHECK_THROWS_AS(spec.Validate(), Error);
  spec = NewsvendorSpec::Default(2, 2);
  spec.factor_weights = Matrix::Ones(3, 2);
  CHECK_THROWS_AS(spec.Validate(), Error);
  const Newsvendor nv(NewsvendorSpec::Default(2, 2));
  Rng rng(RngStream{});
  CHECK_THROWS_AS(nv.StochasticGradient(V({1.0}), V({1.0, 1.0}), rng), Error);
}

TEST_CASE("counting oracle counts") {
  const Newsvendor nv(NewsvendorSpec::Default(1, 1));
  CountingOracle counter(nv);
  Rng rng(RngStream{});
  Vector g(1);
  for (int i = 0; i < 17; ++i) counter.StochasticGradient(V({1.0}), V({1.0}), rng, g);
  CHECK(counter.calls() == 17);
  counter.Reset();
  CHECK(counter.calls() == 0);
}

}  // TEST_SUITE

}  // namespace
}  // namespace otp
