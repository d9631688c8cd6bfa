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


// Command-line front end: allocation plans, designs, offline solves, model
// fitting and prediction, gap evaluation, full experiments, budget sweeps and
// the fixed-T pilot.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "otp/allocate.h"
#include "otp/design.h"
#include "otp/error.h"
#include "otp/evaluate.h"
#include "otp/harness.h"
#include "otp/io.h"
#include "otp/prsgd.h"
#include "otp/smooth.h"

namespace otp {
namespace {

enum ExitCode {
  kExitOk = 0,
  kExitInvalid = 2,
  kExitInfeasible = 3,
  kExitNumeric = 4,
  kExitIo = 5,
};

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
    case ErrorCode::kCapacity:
    case ErrorCode::kParse:
    case ErrorCode::kVersion:
    case ErrorCode::kUnderdetermined:
      return kExitInvalid;
    case ErrorCode::kInfeasibleBudget:
    case ErrorCode::kThresholdUnreachable:
      return kExitInfeasible;
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kDegenerateDistribution:
    case ErrorCode::kNumericFailure:
    case ErrorCode::kIllConditioned:
    case ErrorCode::kEmptyNeighborhood:
    case ErrorCode::kUndefinedGap:
      return kExitNumeric;
  }
  return kExitNumeric;
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  bool json = false;
  std::string out;
  bool paper_scale = false;
};

ExperimentConfig LoadConfig(const Globals& g) {
  ExperimentConfig config;
  if (!g.config_path.empty()) {
    config = io::ExperimentConfigFromJson(io::ReadFile(g.config_path));
  }
  if (g.seed) config.master_seed = *g.seed;
  if (g.paper_scale) config.replications = kPaperReplications;
  return config;
}

// Writes to --out when given, stdout otherwise.
void Emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    io::WriteFile(g.out, text);
  }
}

std::string G(double v, int digits = 6) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.*g", digits, v);
  return buffer;
}

double ParseReal(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::kInvalidInput, "not a number: '" + text + "'");
}

Vector ParseVector(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) values.push_back(ParseReal(field));
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// One covariate per line, comma separated. A non-numeric first line is
// treated as a header.
Matrix ReadCovariateCsv(const std::string& path) {
  std::stringstream in(io::ReadFile(path));
  std::vector<Vector> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      rows.push_back(ParseVector(line));
    } catch (const Error&) {
      if (rows.empty() && line_no == 1) continue;
      throw Error(ErrorCode::kParse,
                  path + ": bad covariate on line " + std::to_string(line_no));
    }
    if (rows.back().size() != rows.front().size()) {
      throw Error(ErrorCode::kParse,
                  path + ": ragged covariate on line " + std::to_string(line_no));
    }
  }
  if (rows.empty()) throw Error(ErrorCode::kParse, path + ": no covariates");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].transpose();
  return m;
}

NewsvendorSpec ProblemFor(const Globals& g, int q, int d) {
  if (!g.config_path.empty()) {
    NewsvendorSpec spec = LoadConfig(g).problem;
    if (spec.d != d) {
      throw Error(ErrorCode::kInvalidInput,
                  "config problem has d=" + std::to_string(spec.d) +
                      " but the input has d=" + std::to_string(d));
    }
    return spec;
  }
  return NewsvendorSpec::Default(q, d);
}

std::string ReportLine(const ExperimentReport& r) {
  if (!r.feasible) return PlanSummary(r.plan) + " infeasible: " + r.infeasible_reason;
  return PlanSummary(r.plan) + " grand_mean=" + G(r.grand.mean) +
         " grand_sd=" + G(r.grand.sd) + " offline_mean=" + G(r.offline_mean) +
         " calls=" + std::to_string(r.simulation_calls) +
         " wall=" + G(r.wall_seconds, 3) + "s";
}

// --- allocate -------------------------------------------------------------

struct AllocateArgs {
  std::string technique = "knn";
  std::int64_t budget = 4000;
  int d = 2;
  std::string smoothness = "inf";
  std::string rule = "opt";
  std::int64_t t_bar = 100;
  int basis_size = 0;
  std::optional<double> exponent;
};

int RunAllocate(const Globals& g, const AllocateArgs& a, bool explicit_args) {
  AllocationRequest request;
  AllocationPlan plan;
  if (!g.config_path.empty()) {
    ExperimentConfig config = LoadConfig(g);
    if (explicit_args) {
      config.technique = ParseTechnique(a.technique);
      config.budget = a.budget;
    }
    request = MakeAllocationRequest(config);
    plan = PlanFor(config);
  } else {
    request.technique = ParseTechnique(a.technique);
    request.budget = a.budget;
    request.d = a.d;
    request.smoothness = ParseReal(a.smoothness);
    request.basis_size = a.basis_size;
    request.domain_scale = 1.0;
    request.overrides.exponent = a.exponent;
    plan = a.rule == "opt" ? Allocate(request) : FixedTPlan(request, a.t_bar);
  }
  for (const Finding& f : ValidatePlan(plan, request)) {
    std::cerr << "warning: " << f.code << ": " << f.message << "\n";
  }
  Emit(g, g.json ? io::PlanToJson(plan) : PlanSummary(plan) + "\n");
  return kExitOk;
}

// --- design ---------------------------------------------------------------

struct DesignArgs {
  std::string kind = "farthest_point";
  int n = 100;
  int points_per_axis = 10;
  int d = 2;
  double lo = 0.0;
  double hi = 3.0;
  int pool_factor = 10;
};

int RunDesign(const Globals& g, const DesignArgs& a) {
  const Box domain = Box::Cube(a.d, a.lo, a.hi);
  const CovariateDesign design =
      ParseDesignKind(a.kind) == DesignKind::kGrid
          ? GridDesign(domain, a.points_per_axis)
          : FarthestPointDesign(domain, a.n, a.n * a.pool_factor,
                                RngStream{g.seed.value_or(0), 0});
  std::cerr << "design n=" << design.size() << " d=" << design.dim()
            << " fill=" << G(design.fill_distance)
            << " separation=" << G(design.separation_distance) << "\n";
  Emit(g, io::DesignToJson(design));
  return kExitOk;
}

// --- offline --------------------------------------------------------------

struct OfflineArgs {
  std::string design_path;
  std::int64_t iterations = 100;
  std::optional<double> step_constant;
  int q = 5;
  std::string initial = "fixed";
};

int RunOffline(const Globals& g, const OfflineArgs& a) {
  const CovariateDesign design = io::DesignFromJson(io::ReadFile(a.design_path));
  const Newsvendor problem(ProblemFor(g, a.q, design.dim()));
  PrSgdConfig sgd;
  sgd.iterations = a.iterations;
  sgd.step_constant = a.step_constant.value_or(DefaultStepConstant(design.dim()));
  if (a.initial == "box_center") {
    sgd.initial_point = InitialPoint::kBoxCenter;
  } else if (a.initial == "warm_start") {
    sgd.initial_point = InitialPoint::kWarmStart;
  } else if (a.initial == "fixed") {
    sgd.initial_point = InitialPoint::kFixed;
    sgd.fixed_initial = Vector::Ones(problem.decision_dim());
  } else {
    throw Error(ErrorCode::kInvalidInput, "unknown initial point '" + a.initial + "'");
  }
  const InexactSolutionSet set =
      BatchSolve(problem, design, sgd, g.seed.value_or(0), g.workers);
  Emit(g, io::SolutionSetToJson(set));
  return kExitOk;
}

// --- fit ------------------------------------------------------------------

struct FitArgs {
  std::string solutions_path;
  std::string technique = "krr";
  int k = 3;
  double bandwidth = 0.5;
  std::string basis = "linear_plus_norm";
  int degree = 1;
  std::vector<std::string> features;
  bool no_intercept = false;
  std::string kernel = "squared_exponential";
  std::optional<double> lengthscale;
  double lengthscale_factor = 1.0;
  std::optional<double> lambda;
  bool no_center = false;
  bool no_project = false;
};

int RunFit(const Globals& g, const FitArgs& a) {
  const InexactSolutionSet set = io::SolutionSetFromJson(io::ReadFile(a.solutions_path));
  if (set.size() == 0) throw Error(ErrorCode::kInvalidInput, "solution set is empty");
  const int q = static_cast<int>(set.solutions.front().theta_bar.size());
  const Newsvendor problem(ProblemFor(g, q, set.design.dim()));
  SmootherSpec spec;
  switch (ParseTechnique(a.technique)) {
    case Technique::kKnn:
      spec = KnnSpec{a.k};
      break;
    case Technique::kKs:
      spec = KsSpec{a.bandwidth};
      break;
    case Technique::kLr: {
      BasisSpec basis;
      if (a.basis == "linear_plus_norm") {
        basis.kind = BasisKind::kLinearPlusNorm;
      } else if (a.basis == "polynomial") {
        basis.kind = BasisKind::kPolynomial;
      } else if (a.basis == "custom") {
        basis.kind = BasisKind::kCustom;
      } else {
        throw Error(ErrorCode::kInvalidInput, "unknown basis '" + a.basis + "'");
      }
      basis.degree = a.degree;
      basis.custom = a.features;
      basis.include_intercept = !a.no_intercept;
      spec = LrSpec{basis};
      break;
    }
    case Technique::kKrr: {
      KrrSpec krr;
      krr.kernel.family = ParseKernelFamily(a.kernel);
      krr.kernel.lengthscale = a.lengthscale;
      krr.lambda = a.lambda.value_or(1.0 / static_cast<double>(std::max<std::int64_t>(
                                               1, set.size() * set.config.iterations)));
      krr.center_labels = !a.no_center;
      spec = krr;
      break;
    }
  }
  FitOptions options;
  options.project = !a.no_project;
  options.decision_box = problem.decision_box();
  options.lengthscale_factor = a.lengthscale_factor;
  const FittedSolutionMap map = FittedSolutionMap::Fit(spec, set, options);
  Emit(g, io::ModelToJson(map));
  return kExitOk;
}

// --- predict / evaluate ---------------------------------------------------

Matrix QueryPoints(const std::vector<std::string>& xs, const std::string& csv) {
  if (!csv.empty()) return ReadCovariateCsv(csv);
  if (xs.empty()) throw Error(ErrorCode::kInvalidInput, "give --x or --covariates");
  std::vector<Vector> rows;
  for (const auto& x : xs) rows.push_back(ParseVector(x));
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) {
      throw Error(ErrorCode::kInvalidInput, "query points differ in dimension");
    }
    m.row(i) = rows[i].transpose();
  }
  return m;
}

struct PredictArgs {
  std::string model_path;
  std::vector<std::string> x;
  std::string covariates;
};

int RunPredict(const Globals& g, const PredictArgs& a) {
  const FittedSolutionMap map = io::LoadModel(a.model_path);
  const Matrix xs = QueryPoints(a.x, a.covariates);
  std::ostringstream out;
  if (g.json) out << "[";
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    const Vector theta = map.Predict(xs.row(i).transpose());
    if (g.json) out << (i > 0 ? "," : "") << "[";
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      out << (j > 0 ? "," : "") << G(theta(j), 10);
    }
    out << (g.json ? "]" : "\n");
  }
  if (g.json) out << "]\n";
  Emit(g, out.str());
  return kExitOk;
}

struct EvaluateArgs {
  std::string model_path;
  std::string covariates;
  int n_test = 100;
  double margin = 1.0 / 30.0;
};

int RunEvaluate(const Globals& g, const EvaluateArgs& a) {
  const FittedSolutionMap map = io::LoadModel(a.model_path);
  const Newsvendor problem(ProblemFor(g, map.output_dim(), map.design().dim()));
  Matrix xs;
  if (!a.covariates.empty()) {
    xs = ReadCovariateCsv(a.covariates);
  } else {
    Rng rng(RngStream{g.seed.value_or(0), 3});
    xs = SampleUniform(problem.covariate_box().Inset(a.margin), a.n_test, rng);
  }
  std::vector<GapRecord> records;
  std::vector<double> gaps;
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    const Vector x = xs.row(i).transpose();
    records.push_back(RelativeOptimalityGap(problem, map.Predict(x), x));
    gaps.push_back(records.back().relative_gap);
  }
  const GapSummary s = Summarize(gaps);
  std::cerr << "gaps n=" << s.count << " mean=" << G(s.mean) << " sd=" << G(s.sd)
            << " min=" << G(s.min) << " max=" << G(s.max) << "\n";
  if (g.json) {
    Emit(g, io::GapRecordsToJson(records));
  } else if (!g.out.empty()) {
    Emit(g, io::GapRecordsToCsv(records));
  } else {
    std::cout << "mean=" << G(s.mean) << " sd=" << G(s.sd) << " min=" << G(s.min)
              << " max=" << G(s.max) << "\n";
  }
  return kExitOk;
}

// --- experiment / sweep / pilot / rate ------------------------------------

struct ExperimentArgs {
  std::optional<std::string> technique;
  std::optional<std::int64_t> budget;
  std::optional<std::string> rule;
  std::optional<std::int64_t> t_bar;
  std::optional<int> replications;
  bool table = false;
  bool with_offline = false;
};

void ApplyExperimentArgs(const ExperimentArgs& a, ExperimentConfig& config) {
  if (a.technique) config.technique = ParseTechnique(*a.technique);
  if (a.budget) config.budget = *a.budget;
  if (a.rule) {
    if (*a.rule == "opt") {
      config.rule = AllocationRule::kOptimal;
    } else if (*a.rule == "fixed") {
      config.rule = AllocationRule::kFixedT;
    } else {
      throw Error(ErrorCode::kInvalidInput, "unknown rule '" + *a.rule + "'");
    }
  }
  if (a.t_bar) config.t_bar = *a.t_bar;
  if (a.replications) config.replications = *a.replications;
}

int RunExperiment(const Globals& g, const ExperimentArgs& a) {
  ExperimentConfig config = LoadConfig(g);
  ApplyExperimentArgs(a, config);
  std::vector<ExperimentConfig> runs;
  if (a.table) {
    // The optimal rule followed by T = T_bar, 0.5 T_bar and 1.5 T_bar.
    ExperimentConfig opt = config;
    opt.rule = AllocationRule::kOptimal;
    runs.push_back(opt);
    for (double f : {1.0, 0.5, 1.5}) {
      ExperimentConfig fixed = config;
      fixed.rule = AllocationRule::kFixedT;
      fixed.t_bar = static_cast<std::int64_t>(std::llround(f * config.t_bar));
      runs.push_back(fixed);
    }
  } else {
    runs.push_back(config);
  }
  std::vector<ExperimentReport> reports;
  for (const auto& run : runs) {
    reports.push_back(RunOtpExperiment(run, g.workers));
    std::cerr << ReportLine(reports.back()) << "\n";
  }
  if (g.json) {
    std::string text = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i > 0) text += ",\n";
      text += io::ReportToJson(reports[i]);
    }
    Emit(g, text + "]\n");
  } else {
    CsvOptions options;
    options.include_offline = a.with_offline;
    Emit(g, ExperimentCsv(reports, options));
  }
  return kExitOk;
}

struct SweepArgs {
  std::vector<std::int64_t> budgets{512, 1024, 2048, 4096, 8192, 16384};
  std::optional<std::string> technique;
};

int RunSweep(const Globals& g, const SweepArgs& a) {
  ExperimentConfig config = LoadConfig(g);
  if (a.technique) config.technique = ParseTechnique(*a.technique);
  const SweepResult sweep = SweepBudget(config, a.budgets, g.workers);
  for (const auto& r : sweep.reports) std::cerr << ReportLine(r) << "\n";
  std::cerr << "slope=" << G(sweep.fit.slope) << " r2=" << G(sweep.fit.r_squared)
            << "\n";
  Emit(g, g.json ? io::RateFitToJson(sweep.fit) : SweepCsv(sweep));
  return kExitOk;
}

struct PilotArgs {
  std::vector<std::int64_t> candidates{50, 100, 150};
  double threshold = 0.02;
  int n_pilot = 1024;
  std::optional<int> replications;
  std::optional<double> step_constant;
  std::optional<int> q;
  std::optional<int> d;
};

int RunPilot(const Globals& g, const PilotArgs& a) {
  PilotRequest request;
  if (!g.config_path.empty()) {
    const ExperimentConfig config = LoadConfig(g);
    request.problem = config.problem;
    request.step_constant = config.step_constant;
    request.initial_point = config.initial_point;
    request.initial_decision = config.initial_decision;
  }
  if (a.q || a.d) {
    request.problem = NewsvendorSpec::Default(a.q.value_or(request.problem.q),
                                              a.d.value_or(request.problem.d));
  }
  if (a.step_constant) request.step_constant = a.step_constant;
  request.candidates = a.candidates;
  request.threshold = a.threshold;
  request.n_pilot = a.n_pilot;
  request.replications =
      a.replications.value_or(g.paper_scale ? kPaperReplications : kDeskReplications);
  request.master_seed = g.seed.value_or(0);
  const PilotResult result = PilotSelectT(request, g.workers);
  std::ostringstream out;
  if (g.json) {
    out << "{\"selected\":" << result.selected << ",\"evaluated\":[";
    for (std::size_t i = 0; i < result.evaluated.size(); ++i) {
      out << (i > 0 ? "," : "") << "{\"T\":" << result.evaluated[i]
          << ",\"grand_gap\":" << G(result.grand_gaps[i], 10) << "}";
    }
    out << "],\"simulation_calls\":" << result.simulation_calls << "}\n";
  } else {
    for (std::size_t i = 0; i < result.evaluated.size(); ++i) {
      out << "T=" << result.evaluated[i] << " grand_gap=" << G(result.grand_gaps[i])
          << "\n";
    }
    out << "selected T_bar=" << result.selected << "\n";
  }
  Emit(g, out.str());
  return kExitOk;
}

int RunRate(const Globals& g, const std::string& in) {
  const SweepTable table = LoadSweepCsv(in);
  const RateFit fit = EmpiricalRate(table.gammas, table.grand_mean_gaps);
  std::ostringstream out;
  out << "technique=" << table.technique << " slope=" << G(fit.slope)
      << " r2=" << G(fit.r_squared);
  if (table.stored_slope) out << " stored_slope=" << G(*table.stored_slope);
  out << "\n";
  Emit(g, g.json ? io::RateFitToJson(fit) : out.str());
  if (table.stored_slope && std::abs(*table.stored_slope - fit.slope) > 1e-4) {
    std::cerr << "error: recomputed slope differs from the stored slope\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Optimize-then-predict experiments on the contextual newsvendor"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Experiment config JSON");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--out", g.out, "Output path (stdout when omitted)");
  app.add_flag("--paper-scale", g.paper_scale, "Use 100 replications");

  AllocateArgs alloc;
  auto* c_alloc = app.add_subcommand("allocate", "Print an allocation plan");
  c_alloc->add_option("--technique", alloc.technique, "knn, ks, lr or krr");
  c_alloc->add_option("--budget", alloc.budget, "Total simulation budget");
  c_alloc->add_option("--d", alloc.d, "Covariate dimension");
  c_alloc->add_option("--smoothness", alloc.smoothness, "Smoothness m (or inf)");
  c_alloc->add_option("--rule", alloc.rule, "opt or fixed");
  c_alloc->add_option("--t-bar", alloc.t_bar, "T for the fixed rule");
  c_alloc->add_option("--basis-size", alloc.basis_size, "LR basis size s");
  c_alloc->add_option("--exponent", alloc.exponent, "T exponent override");

  DesignArgs design;
  auto* c_design = app.add_subcommand("design", "Build a covariate design");
  c_design->add_option("--kind", design.kind, "grid or farthest_point");
  c_design->add_option("--n", design.n, "Number of points (farthest_point)");
  c_design->add_option("--points-per-axis", design.points_per_axis, "Grid nodes per axis");
  c_design->add_option("--d", design.d, "Dimension");
  c_design->add_option("--lo", design.lo, "Lower bound of every axis");
  c_design->add_option("--hi", design.hi, "Upper bound of every axis");
  c_design->add_option("--pool-factor", design.pool_factor, "Candidate pool multiple");

  OfflineArgs offline;
  auto* c_offline = app.add_subcommand("offline", "Run PR-SGD on every design point");
  c_offline->add_option("--design", offline.design_path, "Design JSON")->required();
  c_offline->add_option("--iterations", offline.iterations, "PR-SGD iterations T");
  c_offline->add_option("--step-constant", offline.step_constant, "Step constant");
  c_offline->add_option("--q", offline.q, "Decision dimension");
  c_offline->add_option("--initial", offline.initial, "box_center, fixed or warm_start");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Fit a smoother to offline solutions");
  c_fit->add_option("--solutions", fit.solutions_path, "Solution set JSON")->required();
  c_fit->add_option("--technique", fit.technique, "knn, ks, lr or krr");
  c_fit->add_option("--k", fit.k, "Neighbors for knn");
  c_fit->add_option("--bandwidth", fit.bandwidth, "Radius for ks");
  c_fit->add_option("--basis", fit.basis, "linear_plus_norm, polynomial or custom");
  c_fit->add_option("--degree", fit.degree, "Polynomial degree");
  c_fit->add_option("--feature", fit.features, "Custom feature such as x1*x2^2");
  c_fit->add_flag("--no-intercept", fit.no_intercept, "Drop the LR intercept");
  c_fit->add_option("--kernel", fit.kernel, "matern12, matern32, matern52 or se");
  c_fit->add_option("--lengthscale", fit.lengthscale, "Kernel lengthscale");
  c_fit->add_option("--lengthscale-factor", fit.lengthscale_factor,
                    "Lengthscale as a multiple of the domain diagonal");
  c_fit->add_option("--lambda", fit.lambda, "KRR ridge (default 1/(nT))");
  c_fit->add_flag("--no-center", fit.no_center, "Do not center KRR labels");
  c_fit->add_flag("--no-project", fit.no_project, "Do not clamp predictions");

  PredictArgs predict;
  auto* c_predict = app.add_subcommand("predict", "Predict decisions from a model");
  c_predict->add_option("--model", predict.model_path, "Model JSON")->required();
  c_predict->add_option("--x", predict.x, "Covariate as comma-separated values");
  c_predict->add_option("--covariates", predict.covariates, "Covariate CSV");

  EvaluateArgs evaluate;
  auto* c_evaluate = app.add_subcommand("evaluate", "Relative optimality gaps of a model");
  c_evaluate->add_option("--model", evaluate.model_path, "Model JSON")->required();
  c_evaluate->add_option("--covariates", evaluate.covariates, "Covariate CSV");
  c_evaluate->add_option("--n-test", evaluate.n_test, "Random test covariates");
  c_evaluate->add_option("--margin", evaluate.margin, "Inset fraction for test draws");

  ExperimentArgs experiment;
  auto* c_experiment = app.add_subcommand("experiment", "Run the full pipeline");
  c_experiment->add_option("--technique", experiment.technique, "knn, ks, lr or krr");
  c_experiment->add_option("--budget", experiment.budget, "Total simulation budget");
  c_experiment->add_option("--rule", experiment.rule, "opt or fixed");
  c_experiment->add_option("--t-bar", experiment.t_bar, "T for the fixed rule");
  c_experiment->add_option("--replications", experiment.replications, "Replications");
  c_experiment->add_flag("--table", experiment.table,
                         "Optimal rule plus T_bar, 0.5 T_bar and 1.5 T_bar");
  c_experiment->add_flag("--with-offline", experiment.with_offline,
                         "Add offline_mean rows to the CSV");

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Budget sweep and rate fit");
  c_sweep->add_option("--budgets", sweep.budgets, "Increasing budgets")->delimiter(',');
  c_sweep->add_option("--technique", sweep.technique, "knn, ks, lr or krr");

  PilotArgs pilot;
  auto* c_pilot = app.add_subcommand("pilot", "Select T_bar for the fixed-T rules");
  c_pilot->add_option("--candidates", pilot.candidates, "Ascending T values")->delimiter(',');
  c_pilot->add_option("--threshold", pilot.threshold, "Gap threshold");
  c_pilot->add_option("--n-pilot", pilot.n_pilot, "Covariates per replication");
  c_pilot->add_option("--replications", pilot.replications, "Replications");
  c_pilot->add_option("--step-constant", pilot.step_constant, "Step constant");
  c_pilot->add_option("--q", pilot.q, "Decision dimension");
  c_pilot->add_option("--d", pilot.d, "Covariate dimension");

  std::string rate_in;
  auto* c_rate = app.add_subcommand("rate", "Refit the rate stored in a sweep CSV");
  c_rate->add_option("--in", rate_in, "Sweep CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    if (c_alloc->parsed()) {
      const bool explicit_args = c_alloc->count("--technique") + c_alloc->count("--budget") > 0;
      return RunAllocate(g, alloc, explicit_args);
    }
    if (c_design->parsed()) return RunDesign(g, design);
    if (c_offline->parsed()) return RunOffline(g, offline);
    if (c_fit->parsed()) return RunFit(g, fit);
    if (c_predict->parsed()) return RunPredict(g, predict);
    if (c_evaluate->parsed()) return RunEvaluate(g, evaluate);
    if (c_experiment->parsed()) return RunExperiment(g, experiment);
    if (c_sweep->parsed()) return RunSweep(g, sweep);
    if (c_pilot->parsed()) return RunPilot(g, pilot);
    if (c_rate->parsed()) return RunRate(g, rate_in);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInvalid;
}

}  // namespace
}  // namespace otp

int main(int argc, char** argv) { return otp::Main(argc, argv); }
