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


#include "otp/harness.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>

#include "otp/error.h"
#include "otp/io.h"
#include "otp/parallel.h"

namespace otp {
namespace {

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidInput, message);
}

std::string FormatG6(double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

Vector InitialDecision(const std::optional<Vector>& given, int q) {
  return given ? *given : Vector::Ones(q);
}

FitOptions FitOptionsFor(const ExperimentConfig& config, const Box& decision_box) {
  FitOptions options;
  options.project = config.project_predictions;
  options.decision_box = decision_box;
  options.ks_empty = config.ks_empty;
  options.lengthscale_factor = config.lengthscale_factor;
  return options;
}

// Design for one replication. Grids use the largest full grid with at most
// n points.
CovariateDesign BuildDesign(const ExperimentConfig& config, const Box& domain,
                            std::int64_t n, std::uint64_t seed) {
  if (config.design_kind == DesignKind::kGrid) {
    const int d = domain.dim();
    int per_axis = static_cast<int>(
        std::floor(std::pow(static_cast<double>(n), 1.0 / d) + 1e-9));
    per_axis = std::max(per_axis, 1);
    return GridDesign(domain, per_axis);
  }
  const std::int64_t pool = n * config.pool_factor;
  if (pool > kMaxDesignPoints) {
    throw Error(ErrorCode::kCapacity, "candidate pool of " + std::to_string(pool) +
                                         " exceeds the design capacity");
  }
  return FarthestPointDesign(domain, static_cast<int>(n), static_cast<int>(pool),
                             RngStream{seed, 0});
}

}  // namespace

void ExperimentConfig::Validate() const {
  problem.Validate();
  if (budget < 16) Invalid("budget must be >= 16");
  if (n_test < 1) Invalid("n_test must be >= 1");
  if (replications < 1) Invalid("replications must be >= 1");
  if (pool_factor < 10) Invalid("pool_factor must be >= 10");
  if (!(test_margin >= 0.0 && test_margin < 0.5)) {
    Invalid("test_margin must lie in [0, 0.5)");
  }
  if (rule == AllocationRule::kFixedT && t_bar < 1) Invalid("t_bar must be >= 1");
  if (step_constant && !(*step_constant > 0.0)) {
    Invalid("step constant must be positive");
  }
  if (initial_decision && initial_decision->size() != problem.q) {
    Invalid("initial decision must have q coordinates");
  }
  if (!(local_interval_position >= 0.0 && local_interval_position < 1.0)) {
    Invalid("local_interval_position must lie in [0, 1)");
  }
  if (min_design_points && *min_design_points < 1) {
    Invalid("min_design_points must be >= 1");
  }
  if (!(lengthscale_factor > 0.0)) Invalid("lengthscale factor must be positive");
  if (krr_kernel.lengthscale && !(*krr_kernel.lengthscale > 0.0)) {
    Invalid("kernel lengthscale must be positive");
  }
}

AllocationRequest MakeAllocationRequest(const ExperimentConfig& config) {
  AllocationRequest request;
  request.technique = config.technique;
  request.budget = config.budget;
  request.d = config.problem.d;
  request.smoothness = config.smoothness;
  request.domain_scale =
      (config.problem.covariate_hi - config.problem.covariate_lo).maxCoeff();
  if (config.technique == Technique::kLr) {
    request.basis_size = BasisSize(config.lr_basis, config.problem.d);
  }
  request.overrides = config.overrides;
  const int d = config.problem.d;
  if (!request.overrides.exponent &&
      (config.technique == Technique::kKnn || config.technique == Technique::kKs)) {
    request.overrides.exponent = (1.0 + config.local_interval_position) / (d + 2);
  }
  if (!request.overrides.min_n) {
    if (config.min_design_points) {
      request.overrides.min_n = config.min_design_points;
    } else if (config.technique == Technique::kKrr) {
      request.overrides.min_n = 5 * (d + 1);
    } else if (config.technique == Technique::kLr) {
      request.overrides.min_n = (3 * request.basis_size + 1) / 2;
    }
  }
  return request;
}

AllocationPlan PlanFor(const ExperimentConfig& config) {
  const AllocationRequest request = MakeAllocationRequest(config);
  return config.rule == AllocationRule::kOptimal
             ? Allocate(request)
             : FixedTPlan(request, config.t_bar);
}

SmootherSpec SmootherFor(const ExperimentConfig& config,
                         const AllocationPlan& plan) {
  switch (config.technique) {
    case Technique::kKnn:
      return KnnSpec{plan.k.value_or(1)};
    case Technique::kKs:
      return KsSpec{plan.bandwidth.value_or(1.0)};
    case Technique::kLr:
      return LrSpec{config.lr_basis};
    case Technique::kKrr:
      return KrrSpec{config.krr_kernel, plan.lambda.value_or(1e-3),
                     config.krr_center_labels};
  }
  return KnnSpec{};
}

PrSgdConfig PrSgdConfigFor(const ExperimentConfig& config,
                           std::int64_t iterations) {
  PrSgdConfig sgd;
  sgd.iterations = iterations;
  sgd.step_constant =
      config.step_constant.value_or(DefaultStepConstant(config.problem.d));
  sgd.initial_point = config.initial_point;
  sgd.fixed_initial = InitialDecision(config.initial_decision, config.problem.q);
  return sgd;
}

std::uint64_t ReplicationSeed(std::uint64_t master_seed,
                              std::int64_t replication, SeedRole role) {
  return HashCombine({master_seed, static_cast<std::uint64_t>(replication),
                      static_cast<std::uint64_t>(role)});
}

Matrix DrawTestCovariates(const ExperimentConfig& config, RngStream stream) {
  const Box domain(config.problem.covariate_lo, config.problem.covariate_hi);
  Rng rng(stream);
  return SampleUniform(domain.Inset(config.test_margin), config.n_test, rng);
}

ExperimentReport RunOtpExperiment(const ExperimentConfig& config, int workers,
                                  const Matrix* test_covariates) {
  const auto start = std::chrono::steady_clock::now();
  config.Validate();
  if (test_covariates != nullptr && test_covariates->cols() != config.problem.d) {
    Invalid("test covariates have the wrong dimension");
  }

  ExperimentReport report;
  report.config = config;
  const AllocationRequest request = MakeAllocationRequest(config);
  try {
    report.plan = PlanFor(config);
  } catch (const Error& e) {
    if (config.rule == AllocationRule::kOptimal ||
        e.code() != ErrorCode::kInfeasibleBudget) {
      throw;
    }
    report.feasible = false;
    report.infeasible_reason = e.message();
    report.plan.technique = config.technique;
    report.plan.rule = config.rule;
    report.plan.budget = config.budget;
    report.plan.d = config.problem.d;
    report.plan.iterations = config.t_bar;
    report.plan.n = 0;
  }
  if (report.feasible) {
    report.findings = ValidatePlan(report.plan, request);
    if (config.technique == Technique::kLr &&
        report.plan.n < request.basis_size + 1) {
      report.feasible = false;
      report.infeasible_reason = "n=" + std::to_string(report.plan.n) +
                                 " < s+1=" + std::to_string(request.basis_size + 1);
    }
  }
  if (!report.feasible) {
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
  }

  const Newsvendor problem(config.problem);
  const CountingOracle oracle(problem);
  const AllocationPlan& plan = report.plan;
  const SmootherSpec spec = SmootherFor(config, plan);
  const PrSgdConfig sgd = PrSgdConfigFor(config, plan.iterations);
  const FitOptions fit_options = FitOptionsFor(config, problem.decision_box());

  const int reps = config.replications;
  report.replications.resize(reps);
  std::vector<std::int64_t> out_of_tolerance(reps, 0);
  std::vector<std::int64_t> evaluations(reps, 0);

  // Replications fan out; everything inside one is sequential so results do
  // not depend on scheduling.
  ParallelFor(reps, workers, [&](std::int64_t r) {
    try {
      const CovariateDesign design = BuildDesign(
          config, problem.covariate_box(), plan.n,
          ReplicationSeed(config.master_seed, r, SeedRole::kDesign));
      const InexactSolutionSet solutions = BatchSolve(
          oracle, design, sgd,
          ReplicationSeed(config.master_seed, r, SeedRole::kSolve), 1);

      double offline_sum = 0.0;
      for (const auto& s : solutions.solutions) {
        offline_sum += RelativeOptimalityGap(problem, s.theta_bar, s.x).relative_gap;
      }

      const FittedSolutionMap map =
          FittedSolutionMap::Fit(spec, solutions, fit_options);
      const Matrix tests =
          test_covariates != nullptr
              ? *test_covariates
              : DrawTestCovariates(
                    config, RngStream{ReplicationSeed(config.master_seed, r,
                                                      SeedRole::kTest),
                                      0});
      std::vector<double> gaps(tests.rows());
      for (Eigen::Index j = 0; j < tests.rows(); ++j) {
        const Vector x = tests.row(j).transpose();
        const GapRecord record = RelativeOptimalityGap(problem, map.Predict(x), x);
        gaps[j] = record.relative_gap;
        if (record.out_of_tolerance) ++out_of_tolerance[r];
      }
      evaluations[r] = static_cast<std::int64_t>(gaps.size());
      report.replications[r].online = Summarize(gaps);
      report.replications[r].offline_mean =
          offline_sum / static_cast<double>(solutions.size());
    } catch (const Error& e) {
      throw e.WithReplication(r);
    }
  });

  GapSummary& grand = report.grand;
  for (int r = 0; r < reps; ++r) {
    const auto& s = report.replications[r];
    grand.mean += s.online.mean;
    grand.sd += s.online.sd;
    grand.min += s.online.min;
    grand.max += s.online.max;
    report.offline_mean += s.offline_mean;
    report.gap_evaluations += evaluations[r];
    report.out_of_tolerance_gaps += out_of_tolerance[r];
  }
  grand.mean /= reps;
  grand.sd /= reps;
  grand.min /= reps;
  grand.max /= reps;
  grand.count = reps;
  report.offline_mean /= reps;
  report.simulation_calls = oracle.calls();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

SweepResult SweepBudget(const ExperimentConfig& config,
                        std::span<const std::int64_t> budgets, int workers) {
  if (budgets.size() < 3) Invalid("a sweep needs at least 3 budgets");
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i] <= budgets[i - 1]) Invalid("sweep budgets must increase");
  }
  SweepResult sweep;
  sweep.test_covariates = DrawTestCovariates(
      config,
      RngStream{ReplicationSeed(config.master_seed, 0, SeedRole::kTest), 1});
  std::vector<double> gammas;
  std::vector<double> gaps;
  for (std::int64_t budget : budgets) {
    ExperimentConfig at = config;
    at.budget = budget;
    ExperimentReport report = RunOtpExperiment(at, workers, &sweep.test_covariates);
    if (!report.feasible) {
      throw Error(ErrorCode::kInfeasibleBudget,
                  "sweep budget " + std::to_string(budget) + ": " +
                      report.infeasible_reason);
    }
    gammas.push_back(static_cast<double>(budget));
    gaps.push_back(report.grand.mean);
    sweep.reports.push_back(std::move(report));
  }
  sweep.fit = EmpiricalRate(gammas, gaps);
  return sweep;
}

double PilotGap(const PilotRequest& request, std::int64_t iterations,
                int workers, std::int64_t* calls) {
  request.problem.Validate();
  if (request.n_pilot < 1) Invalid("n_pilot must be >= 1");
  if (request.replications < 1) Invalid("pilot replications must be >= 1");
  const Newsvendor problem(request.problem);
  const CountingOracle oracle(problem);

  PrSgdConfig sgd;
  sgd.iterations = iterations;
  sgd.step_constant =
      request.step_constant.value_or(DefaultStepConstant(request.problem.d));
  sgd.initial_point = request.initial_point;
  sgd.fixed_initial = InitialDecision(request.initial_decision, request.problem.q);
  sgd.Validate(request.problem.q);

  const int reps = request.replications;
  std::vector<double> means(reps, 0.0);
  ParallelFor(reps, workers, [&](std::int64_t r) {
    Rng rng(RngStream{ReplicationSeed(request.master_seed, r, SeedRole::kTest), 0});
    const Matrix xs = SampleUniform(problem.covariate_box(), request.n_pilot, rng);
    const std::uint64_t solve_seed =
        ReplicationSeed(request.master_seed, r, SeedRole::kSolve);
    double sum = 0.0;
    for (int i = 0; i < request.n_pilot; ++i) {
      const Vector x = xs.row(i).transpose();
      const InexactSolution s = Solve(oracle, x, sgd, BatchStream(solve_seed, i));
      sum += RelativeOptimalityGap(problem, s.theta_bar, x).relative_gap;
    }
    means[r] = sum / request.n_pilot;
  });
  double grand = 0.0;
  for (double m : means) grand += m;
  if (calls != nullptr) *calls += oracle.calls();
  return grand / reps;
}

PilotResult PilotSelectT(const PilotRequest& request, int workers) {
  if (request.candidates.empty()) Invalid("pilot needs candidate T values");
  for (std::size_t i = 0; i < request.candidates.size(); ++i) {
    if (request.candidates[i] < 1 ||
        (i > 0 && request.candidates[i] <= request.candidates[i - 1])) {
      Invalid("pilot candidates must be positive and ascending");
    }
  }
  if (!(request.threshold > 0.0 && request.threshold < 1.0)) {
    Invalid("pilot threshold must lie in (0, 1)");
  }
  PilotResult result;
  for (std::int64_t t : request.candidates) {
    const double gap = PilotGap(request, t, workers, &result.simulation_calls);
    result.evaluated.push_back(t);
    result.grand_gaps.push_back(gap);
    if (gap < request.threshold) {
      result.selected = t;
      return result;
    }
  }
  std::string achieved;
  for (std::size_t i = 0; i < result.evaluated.size(); ++i) {
    if (i > 0) achieved += ", ";
    achieved += "T=" + std::to_string(result.evaluated[i]) + ": " +
                FormatG6(result.grand_gaps[i]);
  }
  throw Error(ErrorCode::kThresholdUnreachable,
              "no candidate reaches gap " + FormatG6(request.threshold) + " (" +
                  achieved + ")");
}

std::string ExperimentCsv(std::span<const ExperimentReport> reports,
                          const CsvOptions& options) {
  std::ostringstream out;
  out << "technique,rule,gamma,n,T,hyper,replication,stat,value\n";
  for (const auto& report : reports) {
    const AllocationPlan& plan = report.plan;
    const std::optional<double> hyper =
        report.feasible ? PlanHyperparameter(plan) : std::nullopt;
    std::string prefix = std::string(TechniqueName(plan.technique)) + "," +
                         (plan.rule == AllocationRule::kOptimal ? "opt" : "fixed") +
                         "," + std::to_string(plan.budget) + "," +
                         std::to_string(plan.n) + "," +
                         std::to_string(plan.iterations) + "," +
                         (hyper ? FormatG6(*hyper) : "") + ",";
    if (!report.feasible) {
      out << prefix << ",grand_mean,-\n";
      continue;
    }
    for (std::size_t r = 0; r < report.replications.size(); ++r) {
      const GapSummary& s = report.replications[r].online;
      const std::string rep = prefix + std::to_string(r) + ",";
      out << rep << "mean," << FormatG6(s.mean) << "\n";
      out << rep << "sd," << FormatG6(s.sd) << "\n";
      out << rep << "min," << FormatG6(s.min) << "\n";
      out << rep << "max," << FormatG6(s.max) << "\n";
    }
    out << prefix << ",grand_mean," << FormatG6(report.grand.mean) << "\n";
    if (options.include_offline) {
      out << prefix << ",offline_mean," << FormatG6(report.offline_mean) << "\n";
    }
  }
  return out.str();
}

void EmitExperimentCsv(std::span<const ExperimentReport> reports,
                       const std::filesystem::path& path,
                       const CsvOptions& options) {
  io::WriteFile(path, ExperimentCsv(reports, options));
}

std::string SweepCsv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "technique,gamma,grand_mean_gap\n";
  for (const auto& report : sweep.reports) {
    out << TechniqueName(report.plan.technique) << "," << report.plan.budget
        << "," << FormatG6(report.grand.mean) << "\n";
  }
  out << "# slope=" << FormatG6(sweep.fit.slope)
      << " r2=" << FormatG6(sweep.fit.r_squared) << "\n";
  return out.str();
}

void EmitSweepCsv(const SweepResult& sweep, const std::filesystem::path& path) {
  io::WriteFile(path, SweepCsv(sweep));
}

SweepTable ParseSweepCsv(std::string_view text) {
  SweepTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  auto fail = [&](const std::string& why) -> void {
    throw Error(ErrorCode::kParse,
                "sweep csv line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      double slope = 0.0, r2 = 0.0;
      if (std::sscanf(line.c_str(), "# slope=%lf r2=%lf", &slope, &r2) != 2) {
        fail("bad trailer");
      }
      table.stored_slope = slope;
      table.stored_r_squared = r2;
      continue;
    }
    if (!header) {
      if (line != "technique,gamma,grand_mean_gap") fail("unexpected header");
      header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) fail("expected three fields");
    const std::string technique = line.substr(0, c1);
    if (table.technique.empty()) {
      table.technique = technique;
    } else if (table.technique != technique) {
      fail("mixed techniques");
    }
    try {
      std::size_t used = 0;
      const std::string g = line.substr(c1 + 1, c2 - c1 - 1);
      const std::string v = line.substr(c2 + 1);
      table.gammas.push_back(std::stod(g, &used));
      if (used != g.size()) fail("bad budget");
      table.grand_mean_gaps.push_back(std::stod(v, &used));
      if (used != v.size()) fail("bad gap");
    } catch (const std::logic_error&) {
      fail("bad number");
    }
  }
  if (!header) fail("missing header");
  return table;
}

SweepTable LoadSweepCsv(const std::filesystem::path& path) {
  return ParseSweepCsv(io::ReadFile(path));
}

}  // namespace otp
