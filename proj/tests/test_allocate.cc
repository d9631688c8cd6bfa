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
#include <string>

#include "doctest.h"
#include "otp/allocate.h"
#include "otp/error.h"

namespace otp {
namespace {

AllocationRequest Request(Technique t, std::int64_t budget, int d = 2) {
  AllocationRequest r;
  r.technique = t;
  r.budget = budget;
  r.d = d;
  return r;
}

bool HasFinding(const std::vector<Finding>& findings, const std::string& code) {
  for (const auto& f : findings) {
    if (f.code == code) return true;
  }
  return false;
}

TEST_SUITE("allocate") {

TEST_CASE("rule formulas") {
  const AllocationPlan knn = Allocate(Request(Technique::kKnn, 4096));
  CHECK(knn.iterations == 23);
  CHECK(knn.n == 178);
  CHECK(knn.k == 3);
  const AllocationPlan krr = Allocate(Request(Technique::kKrr, 4096));
  CHECK(krr.iterations == 512);
  CHECK(krr.n == 8);
  CHECK(*krr.lambda == doctest::Approx(1.0 / 4096));
  const AllocationPlan ks = Allocate(Request(Technique::kKs, 4096));
  CHECK(*ks.bandwidth == doctest::Approx(0.125));
  AllocationRequest scaled = Request(Technique::kKs, 4096);
  scaled.domain_scale = 3.0;
  CHECK(*Allocate(scaled).bandwidth == doctest::Approx(0.375));
}

TEST_CASE("intervals") {
  const TInterval knn = TheoreticalInterval(Technique::kKnn, 4096, 2, kInfiniteSmoothness);
  CHECK(knn.lo == doctest::Approx(8.0));
  CHECK(knn.hi == doctest::Approx(64.0));
  CHECK(knn.Contains(23));
  CHECK_FALSE(knn.Contains(64));
  const TInterval lr = TheoreticalInterval(Technique::kLr, 4096, 2, kInfiniteSmoothness);
  CHECK(lr.hi_closed);
  CHECK(lr.Contains(4096));
  const TInterval krr = TheoreticalInterval(Technique::kKrr, 4096, 2, 4.0);
  CHECK(krr.lo == doctest::Approx(std::pow(4096.0, 0.5 - 2.0 / 16)));
  CHECK(krr.hi == doctest::Approx(std::pow(4096.0, 1 - 2.0 / 8)));
  CHECK(MidpointExponent(Technique::kKrr, 2, 4.0) == doctest::Approx(0.75 - 6.0 / 32));
  CHECK(MidpointExponent(Technique::kKs, 10, kInfiniteSmoothness) == doctest::Approx(1.5 / 12));
}

TEST_CASE("plans stay inside the interval and use the budget") {
  for (Technique t : {Technique::kKnn, Technique::kKs, Technique::kLr, Technique::kKrr}) {
    for (int d : {1, 2, 5, 10}) {
      std::int64_t prev_t = 0;
      for (std::int64_t budget = 1000; budget <= 1000000; budget *= 4) {
        AllocationRequest r = Request(t, budget, d);
        AllocationPlan p;
        try {
          p = Allocate(r);
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::kInfeasibleBudget);
          continue;
        }
        CHECK(p.n * p.iterations <= budget);
        CHECK(budget - p.n * p.iterations < p.iterations);
        CHECK(p.iterations >= prev_t);
        prev_t = p.iterations;
        const TInterval in = TheoreticalInterval(t, budget, d, kInfiniteSmoothness);
        const bool integer_inside = std::ceil(in.lo) < in.hi ||
                                     (in.hi_closed && std::ceil(in.lo) <= in.hi);
        if (integer_inside && t != Technique::kLr) {
          CHECK(in.Contains(static_cast<double>(p.iterations)));
        }
      }
    }
  }
}

TEST_CASE("fixed T plans") {
  const AllocationRequest r = Request(Technique::kKnn, 250);
  CHECK(FixedTPlan(r, 100).n == 2);
  CHECK(FixedTPlan(Request(Technique::kKnn, 2000), 50).n == 40);
  CHECK(FixedTPlan(Request(Technique::kKnn, 2000), 150).n == 13);
  CHECK_THROWS_AS(FixedTPlan(Request(Technique::kKnn, 50), 100), Error);
  CHECK(HasFinding(ValidatePlan(FixedTPlan(r, 100), r), "low_coverage"));
}

TEST_CASE("validation findings") {
  const AllocationRequest knn = Request(Technique::kKnn, 4096);
  CHECK(ValidatePlan(Allocate(knn), knn).empty());
  AllocationRequest lr = Request(Technique::kLr, 4096);
  AllocationPlan degenerate = Allocate(lr);
  degenerate.n = 1;
  degenerate.iterations = 4096;
  CHECK(HasFinding(ValidatePlan(degenerate, lr), "lr_identifiability"));
}

TEST_CASE("infeasible budgets name the constraint") {
  AllocationRequest lr = Request(Technique::kLr, 16, 10);
  lr.basis_size = 20;
  try {
    Allocate(lr);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasibleBudget);
    CHECK(e.message().find("n") != std::string::npos);
  }
  CHECK_THROWS_AS(Allocate(Request(Technique::kKnn, 4)), Error);
}

TEST_CASE("overrides") {
  AllocationRequest r = Request(Technique::kKnn, 4096);
  r.overrides.exponent = 0.4;
  CHECK(Allocate(r).iterations == 28);
  r.overrides = {};
  r.overrides.n = 100;
  CHECK(Allocate(r).iterations == 40);
  r.overrides = {};
  r.overrides.min_n = 400;
  const AllocationPlan p = Allocate(r);
  CHECK(p.n >= 400);
  CHECK(p.n * p.iterations <= 4096);
  CHECK(PlanSummary(Allocate(Request(Technique::kKnn, 4096))).find("n=178") !=
        std::string::npos);
  CHECK(PlanHyperparameter(Allocate(Request(Technique::kLr, 4096))) == std::nullopt);
}

}  // TEST_SUITE

}  // namespace
}  // namespace otp
