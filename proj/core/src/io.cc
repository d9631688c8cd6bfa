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


#include "otp/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <system_error>

#include "json.hpp"
#include "otp/error.h"

namespace otp::io {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void ParseFail(const std::string& message) {
  throw Error(ErrorCode::kParse, message);
}

// Parses text and maps library failures onto kParse.
Json Parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    ParseFail("malformed JSON at byte " + std::to_string(e.byte));
  }
}

void CheckHeader(const Json& j, std::string_view format) {
  if (!j.is_object()) ParseFail("expected a JSON object");
  if (!j.contains("format") || j["format"] != format) {
    ParseFail("expected format '" + std::string(format) + "'");
  }
  if (!j.contains("version") || !j["version"].is_number_integer()) {
    ParseFail("missing version");
  }
  const int version = j["version"].get<int>();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kVersion,
                "unsupported version " + std::to_string(version) +
                    " (expected " + std::to_string(kFormatVersion) + ")");
  }
}

Json Header(std::string_view format) {
  Json j;
  j["format"] = format;
  j["version"] = kFormatVersion;
  return j;
}

void RejectUnknown(const Json& j, std::initializer_list<std::string_view> keys,
                   std::string_view where) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidInput, std::string(where) + " must be an object");
  }
  const std::set<std::string_view> allowed(keys);
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw Error(ErrorCode::kInvalidInput,
                  "unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

// Non-finite values travel as null (infinity) since JSON has no literal.
Json Real(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}
double ReadReal(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (j.is_string() && (j == "inf" || j == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  return j.get<double>();
}

Json VecJson(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}
Vector ReadVec(const Json& j) {
  if (!j.is_array()) ParseFail("expected an array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

Json MatJson(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    a.push_back(std::move(row));
  }
  return a;
}
Matrix ReadMat(const Json& j) {
  if (!j.is_array()) ParseFail("expected an array of rows");
  if (j.empty()) return Matrix();
  const std::size_t cols = j[0].size();
  Matrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) ParseFail("ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

Json BoxJson(const Box& b) { return Json{{"lo", VecJson(b.lo)}, {"hi", VecJson(b.hi)}}; }
Box ReadBox(const Json& j) { return Box(ReadVec(j.at("lo")), ReadVec(j.at("hi"))); }

Json StreamJson(const RngStream& s) {
  return Json{{"seed", s.seed}, {"stream_id", s.stream_id}};
}
RngStream ReadStream(const Json& j) {
  return RngStream{j.at("seed").get<std::uint64_t>(),
                   j.at("stream_id").get<std::uint64_t>()};
}

template <typename T>
Json Optional(const std::optional<T>& v) {
  if (v) return Json(*v);
  return nullptr;
}
template <typename T>
std::optional<T> ReadOptional(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

std::string_view InitialPointName(InitialPoint p) {
  switch (p) {
    case InitialPoint::kBoxCenter:
      return "box_center";
    case InitialPoint::kFixed:
      return "fixed";
    case InitialPoint::kWarmStart:
      return "warm_start";
  }
  return "box_center";
}
InitialPoint ParseInitialPoint(const std::string& s) {
  if (s == "box_center") return InitialPoint::kBoxCenter;
  if (s == "fixed") return InitialPoint::kFixed;
  if (s == "warm_start") return InitialPoint::kWarmStart;
  throw Error(ErrorCode::kInvalidInput, "unknown initial point '" + s + "'");
}

std::string_view RuleName(AllocationRule r) {
  return r == AllocationRule::kOptimal ? "opt" : "fixed";
}
AllocationRule ParseRule(const std::string& s) {
  if (s == "opt" || s == "optimal") return AllocationRule::kOptimal;
  if (s == "fixed" || s == "fixed_T") return AllocationRule::kFixedT;
  throw Error(ErrorCode::kInvalidInput, "unknown allocation rule '" + s + "'");
}

std::string_view EmptyName(EmptyNeighborhood e) {
  return e == EmptyNeighborhood::kError ? "error" : "nearest_neighbor";
}
EmptyNeighborhood ParseEmpty(const std::string& s) {
  if (s == "error") return EmptyNeighborhood::kError;
  if (s == "nearest_neighbor") return EmptyNeighborhood::kNearestNeighbor;
  throw Error(ErrorCode::kInvalidInput, "unknown ks_empty policy '" + s + "'");
}

std::string_view BasisKindName(BasisKind k) {
  switch (k) {
    case BasisKind::kLinearPlusNorm:
      return "linear_plus_norm";
    case BasisKind::kPolynomial:
      return "polynomial";
    case BasisKind::kCustom:
      return "custom";
  }
  return "polynomial";
}
BasisKind ParseBasisKind(const std::string& s) {
  if (s == "linear_plus_norm") return BasisKind::kLinearPlusNorm;
  if (s == "polynomial") return BasisKind::kPolynomial;
  if (s == "custom") return BasisKind::kCustom;
  throw Error(ErrorCode::kInvalidInput, "unknown basis kind '" + s + "'");
}

Json BasisJson(const BasisSpec& b) {
  return Json{{"kind", BasisKindName(b.kind)},
              {"degree", b.degree},
              {"custom", b.custom},
              {"include_intercept", b.include_intercept}};
}
BasisSpec ReadBasis(const Json& j) {
  RejectUnknown(j, {"kind", "degree", "custom", "include_intercept"}, "basis");
  BasisSpec b;
  if (j.contains("kind")) b.kind = ParseBasisKind(j["kind"].get<std::string>());
  if (j.contains("degree")) b.degree = j["degree"].get<int>();
  if (j.contains("custom")) b.custom = j["custom"].get<std::vector<std::string>>();
  if (j.contains("include_intercept")) {
    b.include_intercept = j["include_intercept"].get<bool>();
  }
  return b;
}

Json KernelJson(const KernelSpec& k) {
  return Json{{"family", KernelFamilyName(k.family)},
              {"lengthscale", Optional(k.lengthscale)}};
}
KernelSpec ReadKernel(const Json& j) {
  RejectUnknown(j, {"family", "lengthscale"}, "kernel");
  KernelSpec k;
  if (j.contains("family")) k.family = ParseKernelFamily(j["family"].get<std::string>());
  k.lengthscale = ReadOptional<double>(j, "lengthscale");
  return k;
}

Json SmootherJson(const SmootherSpec& spec) {
  Json j;
  j["technique"] = TechniqueName(TechniqueOf(spec));
  if (const auto* s = std::get_if<KnnSpec>(&spec)) j["k"] = s->k;
  if (const auto* s = std::get_if<KsSpec>(&spec)) j["bandwidth"] = s->bandwidth;
  if (const auto* s = std::get_if<LrSpec>(&spec)) j["basis"] = BasisJson(s->basis);
  if (const auto* s = std::get_if<KrrSpec>(&spec)) {
    j["kernel"] = KernelJson(s->kernel);
    j["lambda"] = s->lambda;
    j["center_labels"] = s->center_labels;
  }
  return j;
}
SmootherSpec ReadSmoother(const Json& j) {
  switch (ParseTechnique(j.at("technique").get<std::string>())) {
    case Technique::kKnn:
      return KnnSpec{j.at("k").get<int>()};
    case Technique::kKs:
      return KsSpec{j.at("bandwidth").get<double>()};
    case Technique::kLr:
      return LrSpec{ReadBasis(j.at("basis"))};
    case Technique::kKrr:
      return KrrSpec{ReadKernel(j.at("kernel")), j.at("lambda").get<double>(),
                     j.value("center_labels", true)};
  }
  ParseFail("unknown smoother");
}

Json NewsvendorJsonObject(const NewsvendorSpec& s) {
  return Json{{"q", s.q},
              {"d", s.d},
              {"shortage_cost", s.shortage_cost},
              {"overage_cost", s.overage_cost},
              {"noise_scale", s.noise_scale},
              {"factor_weights", MatJson(s.factor_weights)},
              {"idiosyncratic_means", VecJson(s.idiosyncratic_means)},
              {"covariate_lo", VecJson(s.covariate_lo)},
              {"covariate_hi", VecJson(s.covariate_hi)},
              {"decision_lo", VecJson(s.decision_lo)},
              {"decision_hi", VecJson(s.decision_hi)}};
}

NewsvendorSpec ReadNewsvendor(const Json& j, int default_q, int default_d) {
  RejectUnknown(j,
                {"format", "version", "q", "d", "shortage_cost", "overage_cost",
                 "noise_scale", "factor_weights", "idiosyncratic_means",
                 "covariate_lo", "covariate_hi", "decision_lo", "decision_hi"},
                "problem");
  const int q = j.value("q", default_q);
  const int d = j.value("d", default_d);
  if (q < 1 || d < 1) throw Error(ErrorCode::kInvalidInput, "q and d must be >= 1");
  NewsvendorSpec s = NewsvendorSpec::Default(q, d);
  if (j.contains("shortage_cost")) s.shortage_cost = j["shortage_cost"].get<double>();
  if (j.contains("overage_cost")) s.overage_cost = j["overage_cost"].get<double>();
  if (j.contains("noise_scale")) s.noise_scale = j["noise_scale"].get<double>();
  if (j.contains("factor_weights")) s.factor_weights = ReadMat(j["factor_weights"]);
  if (j.contains("idiosyncratic_means")) {
    s.idiosyncratic_means = ReadVec(j["idiosyncratic_means"]);
  }
  if (j.contains("covariate_lo")) s.covariate_lo = ReadVec(j["covariate_lo"]);
  if (j.contains("covariate_hi")) s.covariate_hi = ReadVec(j["covariate_hi"]);
  if (j.contains("decision_lo")) s.decision_lo = ReadVec(j["decision_lo"]);
  if (j.contains("decision_hi")) {
    s.decision_hi = ReadVec(j["decision_hi"]);
  } else {
    s.ResetDecisionBox();
  }
  s.Validate();
  return s;
}

Json DesignJsonObject(const CovariateDesign& d) {
  Json j;
  j["points"] = MatJson(d.points);
  j["domain"] = BoxJson(d.domain);
  j["kind"] = DesignKindName(d.kind);
  j["fill_distance"] = Real(d.fill_distance);
  j["separation_distance"] = Real(d.separation_distance);
  j["stream"] = d.stream ? StreamJson(*d.stream) : Json(nullptr);
  return j;
}
CovariateDesign ReadDesign(const Json& j) {
  CovariateDesign d;
  d.points = ReadMat(j.at("points"));
  d.domain = ReadBox(j.at("domain"));
  d.kind = ParseDesignKind(j.at("kind").get<std::string>());
  d.fill_distance = ReadReal(j.at("fill_distance"));
  d.separation_distance = ReadReal(j.at("separation_distance"));
  if (j.contains("stream") && !j["stream"].is_null()) d.stream = ReadStream(j["stream"]);
  if (d.points.cols() != d.domain.dim()) ParseFail("design points do not match the domain");
  return d;
}

Json PrSgdJson(const PrSgdConfig& c) {
  return Json{{"iterations", c.iterations},
              {"step_constant", c.step_constant},
              {"initial_point", InitialPointName(c.initial_point)},
              {"fixed_initial", VecJson(c.fixed_initial)},
              {"record_trace", c.record_trace}};
}
PrSgdConfig ReadPrSgd(const Json& j) {
  PrSgdConfig c;
  c.iterations = j.at("iterations").get<std::int64_t>();
  c.step_constant = j.at("step_constant").get<double>();
  c.initial_point = ParseInitialPoint(j.at("initial_point").get<std::string>());
  c.fixed_initial = ReadVec(j.at("fixed_initial"));
  c.record_trace = j.value("record_trace", false);
  return c;
}

Json PlanJsonObject(const AllocationPlan& p) {
  return Json{{"technique", TechniqueName(p.technique)},
              {"rule", RuleName(p.rule)},
              {"budget", p.budget},
              {"d", p.d},
              {"n", p.n},
              {"iterations", p.iterations},
              {"k", Optional(p.k)},
              {"bandwidth", Optional(p.bandwidth)},
              {"lambda", Optional(p.lambda)},
              {"exponent_used", p.exponent_used}};
}

Json ConfigJsonObject(const ExperimentConfig& c) {
  const auto& o = c.overrides;
  Json j;
  j["problem"] = NewsvendorJsonObject(c.problem);
  j["technique"] = TechniqueName(c.technique);
  j["rule"] = RuleName(c.rule);
  j["t_bar"] = c.t_bar;
  j["overrides"] = Json{{"n", Optional(o.n)},
                        {"iterations", Optional(o.iterations)},
                        {"exponent", Optional(o.exponent)},
                        {"k", Optional(o.k)},
                        {"bandwidth", Optional(o.bandwidth)},
                        {"lambda", Optional(o.lambda)},
                        {"min_n", Optional(o.min_n)}};
  j["local_interval_position"] = c.local_interval_position;
  j["min_design_points"] = Optional(c.min_design_points);
  j["budget"] = c.budget;
  j["smoothness"] = std::isinf(c.smoothness) ? Json("inf") : Json(c.smoothness);
  j["design_kind"] = DesignKindName(c.design_kind);
  j["pool_factor"] = c.pool_factor;
  j["n_test"] = c.n_test;
  j["test_margin"] = c.test_margin;
  j["replications"] = c.replications;
  j["master_seed"] = c.master_seed;
  j["step_constant"] = Optional(c.step_constant);
  j["initial_point"] = InitialPointName(c.initial_point);
  j["initial_decision"] =
      c.initial_decision ? VecJson(*c.initial_decision) : Json(nullptr);
  j["lr_basis"] = BasisJson(c.lr_basis);
  j["krr_kernel"] = KernelJson(c.krr_kernel);
  j["krr_center_labels"] = c.krr_center_labels;
  j["lengthscale_factor"] = c.lengthscale_factor;
  j["ks_empty"] = EmptyName(c.ks_empty);
  j["project_predictions"] = c.project_predictions;
  return j;
}

ExperimentConfig ReadConfig(const Json& j) {
  RejectUnknown(j,
                {"format", "version", "problem", "technique", "rule",
                 "allocation", "t_bar", "overrides", "local_interval_position",
                 "min_design_points", "budget", "Gamma",
                 "smoothness", "design_kind", "pool_factor", "n_test",
                 "test_margin", "replications", "master_seed", "step_constant",
                 "gamma0", "initial_point", "initial_decision", "lr_basis",
                 "krr_kernel", "krr_center_labels", "lengthscale_factor",
                 "ks_empty", "project_predictions"},
                "experiment config");
  if (j.contains("version") && j["version"] != kFormatVersion) {
    throw Error(ErrorCode::kVersion, "unsupported config version");
  }
  ExperimentConfig c;
  if (j.contains("problem")) c.problem = ReadNewsvendor(j["problem"], 5, 2);
  if (j.contains("technique")) c.technique = ParseTechnique(j["technique"].get<std::string>());
  if (j.contains("rule")) c.rule = ParseRule(j["rule"].get<std::string>());
  if (j.contains("allocation")) c.rule = ParseRule(j["allocation"].get<std::string>());
  if (j.contains("t_bar")) c.t_bar = j["t_bar"].get<std::int64_t>();
  if (j.contains("overrides")) {
    const Json& o = j["overrides"];
    RejectUnknown(o, {"n", "iterations", "exponent", "k", "bandwidth", "lambda", "min_n"},
                  "overrides");
    c.overrides.n = ReadOptional<std::int64_t>(o, "n");
    c.overrides.iterations = ReadOptional<std::int64_t>(o, "iterations");
    c.overrides.exponent = ReadOptional<double>(o, "exponent");
    c.overrides.k = ReadOptional<int>(o, "k");
    c.overrides.bandwidth = ReadOptional<double>(o, "bandwidth");
    c.overrides.lambda = ReadOptional<double>(o, "lambda");
    c.overrides.min_n = ReadOptional<std::int64_t>(o, "min_n");
  }
  if (j.contains("local_interval_position")) {
    c.local_interval_position = j["local_interval_position"].get<double>();
  }
  c.min_design_points = ReadOptional<std::int64_t>(j, "min_design_points");
  if (j.contains("budget")) c.budget = j["budget"].get<std::int64_t>();
  if (j.contains("Gamma")) c.budget = j["Gamma"].get<std::int64_t>();
  if (j.contains("smoothness")) c.smoothness = ReadReal(j["smoothness"]);
  if (j.contains("design_kind")) {
    c.design_kind = ParseDesignKind(j["design_kind"].get<std::string>());
  }
  if (j.contains("pool_factor")) c.pool_factor = j["pool_factor"].get<int>();
  if (j.contains("n_test")) c.n_test = j["n_test"].get<int>();
  if (j.contains("test_margin")) c.test_margin = j["test_margin"].get<double>();
  if (j.contains("replications")) c.replications = j["replications"].get<int>();
  if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
  if (j.contains("step_constant")) c.step_constant = ReadOptional<double>(j, "step_constant");
  if (j.contains("gamma0")) c.step_constant = ReadOptional<double>(j, "gamma0");
  if (j.contains("initial_point")) {
    c.initial_point = ParseInitialPoint(j["initial_point"].get<std::string>());
  }
  if (j.contains("initial_decision") && !j["initial_decision"].is_null()) {
    c.initial_decision = ReadVec(j["initial_decision"]);
  }
  if (j.contains("lr_basis")) c.lr_basis = ReadBasis(j["lr_basis"]);
  if (j.contains("krr_kernel")) c.krr_kernel = ReadKernel(j["krr_kernel"]);
  if (j.contains("krr_center_labels")) c.krr_center_labels = j["krr_center_labels"].get<bool>();
  if (j.contains("lengthscale_factor")) {
    c.lengthscale_factor = j["lengthscale_factor"].get<double>();
  }
  if (j.contains("ks_empty")) c.ks_empty = ParseEmpty(j["ks_empty"].get<std::string>());
  if (j.contains("project_predictions")) {
    c.project_predictions = j["project_predictions"].get<bool>();
  }
  c.Validate();
  return c;
}

Json SummaryJson(const GapSummary& s) {
  return Json{{"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}};
}

// Runs a loader body and maps JSON access errors onto kParse.
template <typename F>
auto Guard(F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception& e) {
    ParseFail(std::string("invalid document: ") + e.what());
  }
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw Error(ErrorCode::kIo, "cannot replace " + path.string());
  }
}

std::string NewsvendorToJson(const NewsvendorSpec& spec) {
  Json j = Header("otp.newsvendor");
  const Json body = NewsvendorJsonObject(spec);
  for (const auto& item : body.items()) j[item.key()] = item.value();
  return Dump(j);
}

NewsvendorSpec NewsvendorFromJson(std::string_view text) {
  const Json j = Parse(text);
  return Guard([&] {
    CheckHeader(j, "otp.newsvendor");
    return ReadNewsvendor(j, 1, 1);
  });
}

std::string DesignToJson(const CovariateDesign& design) {
  Json j = Header("otp.design");
  j["design"] = DesignJsonObject(design);
  return Dump(j);
}

CovariateDesign DesignFromJson(std::string_view text) {
  const Json j = Parse(text);
  return Guard([&] {
    CheckHeader(j, "otp.design");
    return ReadDesign(j.at("design"));
  });
}

std::string SolutionSetToJson(const InexactSolutionSet& set) {
  Json j = Header("otp.solutions");
  j["design"] = DesignJsonObject(set.design);
  j["config"] = PrSgdJson(set.config);
  j["master_seed"] = set.master_seed;
  Json solutions = Json::array();
  for (const auto& s : set.solutions) {
    solutions.push_back(Json{{"x", VecJson(s.x)},
                             {"theta_bar", VecJson(s.theta_bar)},
                             {"iterations", s.iterations},
                             {"stream", StreamJson(s.stream)},
                             {"final_iterate", VecJson(s.final_iterate)}});
  }
  j["solutions"] = std::move(solutions);
  return Dump(j);
}

InexactSolutionSet SolutionSetFromJson(std::string_view text) {
  const Json j = Parse(text);
  return Guard([&] {
    CheckHeader(j, "otp.solutions");
    InexactSolutionSet set;
    set.design = ReadDesign(j.at("design"));
    set.config = ReadPrSgd(j.at("config"));
    set.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& s : j.at("solutions")) {
      InexactSolution sol;
      sol.x = ReadVec(s.at("x"));
      sol.theta_bar = ReadVec(s.at("theta_bar"));
      sol.iterations = s.at("iterations").get<std::int64_t>();
      sol.stream = ReadStream(s.at("stream"));
      sol.final_iterate = ReadVec(s.at("final_iterate"));
      set.solutions.push_back(std::move(sol));
    }
    if (set.size() != set.design.size()) {
      ParseFail("solution count does not match the design");
    }
    return set;
  });
}

std::string PlanToJson(const AllocationPlan& plan) {
  Json j = Header("otp.plan");
  const Json body = PlanJsonObject(plan);
  for (const auto& item : body.items()) j[item.key()] = item.value();
  return Dump(j);
}

AllocationPlan PlanFromJson(std::string_view text) {
  const Json j = Parse(text);
  return Guard([&] {
    CheckHeader(j, "otp.plan");
    AllocationPlan p;
    p.technique = ParseTechnique(j.at("technique").get<std::string>());
    p.rule = ParseRule(j.at("rule").get<std::string>());
    p.budget = j.at("budget").get<std::int64_t>();
    p.d = j.at("d").get<int>();
    p.n = j.at("n").get<std::int64_t>();
    p.iterations = j.at("iterations").get<std::int64_t>();
    p.k = ReadOptional<int>(j, "k");
    p.bandwidth = ReadOptional<double>(j, "bandwidth");
    p.lambda = ReadOptional<double>(j, "lambda");
    p.exponent_used = j.at("exponent_used").get<double>();
    return p;
  });
}

std::string ModelToJson(const FittedSolutionMap& map) {
  Json j = Header("otp.model");
  j["spec"] = SmootherJson(map.spec());
  j["design"] = DesignJsonObject(map.design());
  j["labels"] = MatJson(map.train_solutions());
  const FitOptions& o = map.options();
  j["options"] = Json{{"project", o.project},
                      {"decision_box", o.decision_box ? BoxJson(*o.decision_box)
                                                      : Json(nullptr)},
                      {"ks_empty", EmptyName(o.ks_empty)},
                      {"lengthscale_factor", o.lengthscale_factor}};
  if (map.technique() == Technique::kLr) {
    j["lr_coefficients"] = MatJson(map.lr_coefficients());
  }
  return Dump(j);
}

FittedSolutionMap ModelFromJson(std::string_view text) {
  const Json j = Parse(text);
  return Guard([&] {
    CheckHeader(j, "otp.model");
    const SmootherSpec spec = ReadSmoother(j.at("spec"));
    const CovariateDesign design = ReadDesign(j.at("design"));
    const Matrix labels = ReadMat(j.at("labels"));
    FitOptions options;
    const Json& o = j.at("options");
    options.project = o.at("project").get<bool>();
    if (!o.at("decision_box").is_null()) options.decision_box = ReadBox(o["decision_box"]);
    options.ks_empty = ParseEmpty(o.at("ks_empty").get<std::string>());
    options.lengthscale_factor = o.at("lengthscale_factor").get<double>();
    FittedSolutionMap map = FittedSolutionMap::Fit(spec, design, labels, options);
    if (j.contains("lr_coefficients") && map.technique() == Technique::kLr) {
      const Matrix stored = ReadMat(j["lr_coefficients"]);
      const Matrix& refit = map.lr_coefficients();
      if (stored.rows() != refit.rows() || stored.cols() != refit.cols() ||
          (stored - refit).norm() > 1e-8 * (1.0 + refit.norm())) {
        ParseFail("stored LR coefficients disagree with the refit");
      }
    }
    return map;
  });
}

void SaveModel(const FittedSolutionMap& map, const std::filesystem::path& path) {
  WriteFile(path, ModelToJson(map));
}

FittedSolutionMap LoadModel(const std::filesystem::path& path) {
  return ModelFromJson(ReadFile(path));
}

std::string ExperimentConfigToJson(const ExperimentConfig& config) {
  Json j = Header("otp.experiment_config");
  const Json body = ConfigJsonObject(config);
  for (const auto& item : body.items()) j[item.key()] = item.value();
  return Dump(j);
}

ExperimentConfig ExperimentConfigFromJson(std::string_view text) {
  const Json j = Parse(text);
  return Guard([&] {
    if (j.contains("format") && j["format"] != "otp.experiment_config") {
      ParseFail("expected format 'otp.experiment_config'");
    }
    return ReadConfig(j);
  });
}

std::string ReportToJson(const ExperimentReport& report) {
  Json j = Header("otp.report");
  j["config"] = ConfigJsonObject(report.config);
  j["plan"] = PlanJsonObject(report.plan);
  j["feasible"] = report.feasible;
  j["infeasible_reason"] = report.infeasible_reason;
  Json findings = Json::array();
  for (const auto& f : report.findings) {
    findings.push_back(Json{{"code", f.code}, {"message", f.message}});
  }
  j["findings"] = std::move(findings);
  Json reps = Json::array();
  for (const auto& r : report.replications) {
    Json s = SummaryJson(r.online);
    s["offline_mean"] = r.offline_mean;
    reps.push_back(std::move(s));
  }
  j["replications"] = std::move(reps);
  j["grand"] = report.feasible ? SummaryJson(report.grand) : Json(nullptr);
  j["offline_mean"] = report.feasible ? Json(report.offline_mean) : Json(nullptr);
  j["simulation_calls"] = report.simulation_calls;
  j["gap_evaluations"] = report.gap_evaluations;
  j["out_of_tolerance_gaps"] = report.out_of_tolerance_gaps;
  j["wall_seconds"] = report.wall_seconds;
  return Dump(j);
}

std::string GapRecordsToJson(std::span<const GapRecord> records) {
  Json j = Header("otp.gaps");
  Json list = Json::array();
  for (const auto& r : records) {
    list.push_back(Json{{"x", VecJson(r.x)},
                        {"theta_hat", VecJson(r.theta_hat)},
                        {"cost_hat", r.cost_hat},
                        {"cost_star", r.cost_star},
                        {"relative_gap", r.relative_gap},
                        {"clamped", r.clamped}});
  }
  j["records"] = std::move(list);
  return Dump(j);
}

std::string GapRecordsToCsv(std::span<const GapRecord> records) {
  std::ostringstream out;
  out << "relative_gap,cost_hat,cost_star";
  const Eigen::Index d = records.empty() ? 0 : records.front().x.size();
  const Eigen::Index q = records.empty() ? 0 : records.front().theta_hat.size();
  for (Eigen::Index i = 0; i < d; ++i) out << ",x_" << i + 1;
  for (Eigen::Index i = 0; i < q; ++i) out << ",theta_" << i + 1;
  out << "\n";
  char buffer[48];
  auto put = [&](double v) {
    std::snprintf(buffer, sizeof(buffer), "%.10g", v);
    out << buffer;
  };
  for (const auto& r : records) {
    put(r.relative_gap);
    out << ",";
    put(r.cost_hat);
    out << ",";
    put(r.cost_star);
    for (Eigen::Index i = 0; i < r.x.size(); ++i) {
      out << ",";
      put(r.x(i));
    }
    for (Eigen::Index i = 0; i < r.theta_hat.size(); ++i) {
      out << ",";
      put(r.theta_hat(i));
    }
    out << "\n";
  }
  return out.str();
}

std::string RateFitToJson(const RateFit& fit) {
  Json j = Header("otp.rate_fit");
  j["gammas"] = fit.gammas;
  j["mean_gaps"] = fit.mean_gaps;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  return Dump(j);
}

std::string RateFitToCsv(const RateFit& fit) {
  std::ostringstream out;
  char buffer[96];
  out << "gamma,mean_gap\n";
  for (std::size_t i = 0; i < fit.gammas.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.6g,%.6g\n", fit.gammas[i],
                  fit.mean_gaps[i]);
    out << buffer;
  }
  std::snprintf(buffer, sizeof(buffer), "# slope=%.6g r2=%.6g intercept=%.6g\n",
                fit.slope, fit.r_squared, fit.intercept);
  out << buffer;
  return out.str();
}

}  // namespace otp::io
