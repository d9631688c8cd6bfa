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

#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "otp/error.h"
#include "otp/harness.h"

namespace otp {
namespace {

ExperimentConfig Small(Technique t) {
  ExperimentConfig c;
  c.technique = t;
  c.budget = 2000;
  c.replications = 3;
  c.n_test = 20;
  c.master_seed = 17;
  return c;
}

int CountLines(const std::string& s) {
  int n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

TEST_SUITE("harness") {

TEST_CASE("seeds separate roles and replications") {
  CHECK(ReplicationSeed(1, 0, SeedRole::kDesign) != ReplicationSeed(1, 0, SeedRole::kSolve));
  CHECK(ReplicationSeed(1, 0, SeedRole::kTest) != ReplicationSeed(1, 1, SeedRole::kTest));
  CHECK(ReplicationSeed(1, 2, SeedRole::kTest) == ReplicationSeed(1, 2, SeedRole::kTest));
}

TEST_CASE("test covariates are interior") {
  ExperimentConfig c = Small(Technique::kKnn);
  c.n_test = 500;
  const Matrix xs = DrawTestCovariates(c, RngStream{4, 4});
  const Box inner =
      Box(c.problem.covariate_lo, c.problem.covariate_hi).Inset(c.test_margin);
  for (int i = 0; i < xs.rows(); ++i) CHECK(inner.Contains(xs.row(i).transpose(), 1e-12));
}

TEST_CASE("experiment accounting and csv schema") {
  for (Technique t : {Technique::kKnn, Technique::kKs, Technique::kLr, Technique::kKrr}) {
    const ExperimentConfig c = Small(t);
    const ExperimentReport r = RunOtpExperiment(c);
    REQUIRE(r.feasible);
    CHECK(r.simulation_calls == c.replications * r.plan.n * r.plan.iterations);
    CHECK(r.replications.size() == 3);
    CHECK(r.grand.mean >= 0.0);
    const std::vector<ExperimentReport> one{r};
    const std::string csv = ExperimentCsv(one);
    CHECK(csv.rfind("technique,rule,gamma,n,T,hyper,replication,stat,value\n", 0) == 0);
    CHECK(CountLines(csv) == 1 + 3 * 4 + 1);
    CHECK(ExperimentCsv(one) == csv);
    CsvOptions with;
    with.include_offline = true;
    CHECK(CountLines(ExperimentCsv(one, with)) == CountLines(csv) + 1);
  }
}

TEST_CASE("reports do not depend on worker count") {
  const ExperimentConfig c = Small(Technique::kKrr);
  const std::vector<ExperimentReport> a{RunOtpExperiment(c, 1)};
  const std::vector<ExperimentReport> b{RunOtpExperiment(c, 4)};
  CHECK(ExperimentCsv(a) == ExperimentCsv(b));
}

TEST_CASE("infeasible fixed plans become dash cells") {
  ExperimentConfig c = Small(Technique::kLr);
  c.problem = NewsvendorSpec::Default(5, 10);
  c.budget = 1000;
  c.rule = AllocationRule::kFixedT;
  c.t_bar = 150;
  const ExperimentReport r = RunOtpExperiment(c);
  CHECK_FALSE(r.feasible);
  const std::vector<ExperimentReport> one{r};
  const std::string csv = ExperimentCsv(one);
  CHECK(CountLines(csv) == 2);
  CHECK(csv.find(",grand_mean,-\n") != std::string::npos);
}

TEST_CASE("config validation") {
  ExperimentConfig c = Small(Technique::kKnn);
  c.replications = 0;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = Small(Technique::kKnn);
  c.test_margin = 0.6;
  CHECK_THROWS_AS(c.Validate(), Error);
}

TEST_CASE("sweep csv round trip") {
  ExperimentConfig c = Small(Technique::kLr);
  c.replications = 2;
  const std::vector<std::int64_t> budgets{500, 1000, 2000, 5000};
  const SweepResult s = SweepBudget(c, budgets);
  CHECK(s.reports.size() == 4);
  const std::string csv = SweepCsv(s);
  const SweepTable t = ParseSweepCsv(csv);
  CHECK(t.technique == "lr");
  CHECK(t.gammas.size() == 4);
  const RateFit refit = EmpiricalRate(t.gammas, t.grand_mean_gaps);
  CHECK(refit.slope == doctest::Approx(*t.stored_slope).epsilon(1e-4));
  CHECK_THROWS_AS(ParseSweepCsv("technique,gamma,grand_mean_gap\nlr,abc,1\n"), Error);
  const std::vector<std::int64_t> two{500, 1000};
  CHECK_THROWS_AS(SweepBudget(c, two), Error);
}

TEST_CASE("pilot selection") {
  PilotRequest p;
  p.problem = NewsvendorSpec::Default(5, 2);
  p.n_pilot = 64;
  p.replications = 2;
  p.candidates = {50, 100, 150};
  p.threshold = 0.5;
  const PilotResult ok = PilotSelectT(p);
  CHECK(ok.selected == 50);
  CHECK(ok.simulation_calls == 2 * 64 * 50);
  p.threshold = 1e-9;
  p.candidates = {5, 10};
  try {
    PilotSelectT(p);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kThresholdUnreachable);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace otp
