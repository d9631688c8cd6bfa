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


#include "otp/smooth.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Cholesky>

#include "otp/error.h"

namespace otp {
namespace {

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidInput, message);
}

// One factor of a custom feature: coordinate index and power, or the norm.
struct Factor {
  int coordinate = -1;  // -1 means |x|
  int power = 1;
};

int ParsePositive(std::string_view text, std::string_view descriptor) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  if (text.empty() || result.ec != std::errc() || result.ptr != end || value < 1) {
    Invalid("bad basis descriptor '" + std::string(descriptor) + "'");
  }
  return value;
}

std::vector<Factor> ParseDescriptor(std::string_view descriptor, int d) {
  std::vector<Factor> factors;
  std::size_t start = 0;
  while (start <= descriptor.size()) {
    std::size_t stop = descriptor.find('*', start);
    if (stop == std::string_view::npos) stop = descriptor.size();
    std::string_view token = descriptor.substr(start, stop - start);
    Factor f;
    std::string_view base = token;
    const std::size_t caret = token.find('^');
    if (caret != std::string_view::npos) {
      base = token.substr(0, caret);
      f.power = ParsePositive(token.substr(caret + 1), descriptor);
    }
    if (base == "norm") {
      f.coordinate = -1;
    } else if (base.size() >= 2 && base[0] == 'x') {
      f.coordinate = ParsePositive(base.substr(1), descriptor) - 1;
      if (f.coordinate >= d) {
        Invalid("basis descriptor '" + std::string(descriptor) +
                "' exceeds the covariate dimension");
      }
    } else {
      Invalid("bad basis descriptor '" + std::string(descriptor) + "'");
    }
    factors.push_back(f);
    start = stop + 1;
  }
  return factors;
}

// Index multisets i_1 <= ... <= i_p in lexicographic order, for p = 0..degree.
void Monomials(int d, int degree, std::vector<std::vector<int>>& out) {
  std::vector<int> current;
  auto recurse = [&](auto&& self, int first, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (int j = first; j < d; ++j) {
      current.push_back(j);
      self(self, j, remaining - 1);
      current.pop_back();
    }
  };
  for (int p = 0; p <= degree; ++p) recurse(recurse, 0, p);
}

double Binomial(int n, int k) {
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

// Smallest pivot of an LDLT factorization, for diagnostics.
double SmallestPivot(const Matrix& m) {
  Eigen::LDLT<Matrix> ldlt(m);
  return ldlt.vectorD().minCoeff();
}

}  // namespace

std::string_view KernelFamilyName(KernelFamily family) {
  switch (family) {
    case KernelFamily::kMatern12:
      return "matern12";
    case KernelFamily::kMatern32:
      return "matern32";
    case KernelFamily::kMatern52:
      return "matern52";
    case KernelFamily::kSquaredExponential:
      return "squared_exponential";
  }
  return "unknown";
}

KernelFamily ParseKernelFamily(std::string_view name) {
  if (name == "matern12" || name == "matern0.5") return KernelFamily::kMatern12;
  if (name == "matern32" || name == "matern1.5") return KernelFamily::kMatern32;
  if (name == "matern52" || name == "matern2.5") return KernelFamily::kMatern52;
  if (name == "squared_exponential" || name == "se") {
    return KernelFamily::kSquaredExponential;
  }
  Invalid("unknown kernel family '" + std::string(name) + "'");
}

KernelFamily KernelFamilyForSmoothness(double m, int d) {
  if (std::isinf(m)) return KernelFamily::kSquaredExponential;
  const double nu = m - 0.5 * d;
  if (!(nu >= 0.5)) {
    Invalid("smoothness m must exceed d/2 + 1/2 for a Matern kernel");
  }
  if (nu > 2.5) return KernelFamily::kSquaredExponential;
  if (nu >= 2.5) return KernelFamily::kMatern52;
  if (nu >= 1.5) return KernelFamily::kMatern32;
  return KernelFamily::kMatern12;
}

double KernelOfDistance(KernelFamily family, double lengthscale, double r) {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    Invalid("kernel lengthscale must be positive");
  }
  const double u = r / lengthscale;
  switch (family) {
    case KernelFamily::kMatern12:
      return std::exp(-u);
    case KernelFamily::kMatern32: {
      const double a = std::sqrt(3.0) * u;
      return (1.0 + a) * std::exp(-a);
    }
    case KernelFamily::kMatern52: {
      const double a = std::sqrt(5.0) * u;
      return (1.0 + a + 5.0 * u * u / 3.0) * std::exp(-a);
    }
    case KernelFamily::kSquaredExponential:
      return std::exp(-0.5 * u * u);
  }
  return 0.0;
}

double KernelEval(const KernelSpec& kernel, const Vector& x, const Vector& y) {
  if (!kernel.lengthscale) Invalid("kernel lengthscale is unset");
  return KernelOfDistance(kernel.family, *kernel.lengthscale, (x - y).norm());
}

int BasisSize(const BasisSpec& basis, int d) {
  const int intercept = basis.include_intercept ? 1 : 0;
  switch (basis.kind) {
    case BasisKind::kLinearPlusNorm:
      return d + 1 + intercept;
    case BasisKind::kPolynomial: {
      if (basis.degree < 1) Invalid("polynomial degree must be >= 1");
      const double count = Binomial(d + basis.degree, basis.degree);
      if (count > 1e6) Invalid("polynomial basis is too large");
      return static_cast<int>(count) - 1 + intercept;
    }
    case BasisKind::kCustom:
      for (const auto& descriptor : basis.custom) ParseDescriptor(descriptor, d);
      if (basis.custom.empty() && !basis.include_intercept) {
        Invalid("basis must have at least one feature");
      }
      return static_cast<int>(basis.custom.size()) + intercept;
  }
  return 0;
}

Vector BasisEval(const BasisSpec& basis, const Vector& x) {
  const int d = static_cast<int>(x.size());
  const int s = BasisSize(basis, d);
  Vector phi(s);
  int k = 0;
  if (basis.include_intercept) phi(k++) = 1.0;
  switch (basis.kind) {
    case BasisKind::kLinearPlusNorm:
      for (int j = 0; j < d; ++j) phi(k++) = x(j);
      phi(k++) = x.norm();
      break;
    case BasisKind::kPolynomial: {
      std::vector<std::vector<int>> monomials;
      Monomials(d, basis.degree, monomials);
      for (std::size_t m = 1; m < monomials.size(); ++m) {
        double value = 1.0;
        for (int j : monomials[m]) value *= x(j);
        phi(k++) = value;
      }
      break;
    }
    case BasisKind::kCustom: {
      const double norm = x.norm();
      for (const auto& descriptor : basis.custom) {
        double value = 1.0;
        for (const Factor& f : ParseDescriptor(descriptor, d)) {
          const double base = f.coordinate < 0 ? norm : x(f.coordinate);
          value *= std::pow(base, f.power);
        }
        phi(k++) = value;
      }
      break;
    }
  }
  return phi;
}

std::string_view TechniqueName(Technique technique) {
  switch (technique) {
    case Technique::kKnn:
      return "knn";
    case Technique::kKs:
      return "ks";
    case Technique::kLr:
      return "lr";
    case Technique::kKrr:
      return "krr";
  }
  return "unknown";
}

Technique ParseTechnique(std::string_view name) {
  if (name == "knn") return Technique::kKnn;
  if (name == "ks") return Technique::kKs;
  if (name == "lr") return Technique::kLr;
  if (name == "krr") return Technique::kKrr;
  Invalid("unknown technique '" + std::string(name) + "'");
}

Technique TechniqueOf(const SmootherSpec& spec) {
  return static_cast<Technique>(spec.index());
}

FittedSolutionMap FittedSolutionMap::Fit(const SmootherSpec& spec,
                                         const InexactSolutionSet& data,
                                         FitOptions options) {
  return Fit(spec, data.design, data.Labels(), std::move(options));
}

FittedSolutionMap FittedSolutionMap::Fit(const SmootherSpec& spec,
                                         const CovariateDesign& design,
                                         const Matrix& labels,
                                         FitOptions options) {
  const int n = design.size();
  if (n < 1) Invalid("cannot fit on an empty design");
  if (labels.rows() != n) Invalid("labels must have one row per design point");
  if (labels.cols() < 1) Invalid("labels must have at least one column");
  if (!labels.allFinite()) Invalid("labels must be finite");
  if (options.decision_box && options.decision_box->dim() != labels.cols()) {
    Invalid("decision box dimension does not match the labels");
  }

  FittedSolutionMap map;
  map.spec_ = spec;
  map.design_ = design;
  map.labels_ = labels;
  map.options_ = options;

  if (const auto* knn = std::get_if<KnnSpec>(&map.spec_)) {
    if (knn->k < 1 || knn->k > n) {
      Invalid("knn requires 1 <= k <= n, got k=" + std::to_string(knn->k) +
              " with n=" + std::to_string(n));
    }
  } else if (const auto* ks = std::get_if<KsSpec>(&map.spec_)) {
    if (!(ks->bandwidth > 0.0) || !std::isfinite(ks->bandwidth)) {
      Invalid("ks bandwidth must be positive");
    }
  } else if (const auto* lr = std::get_if<LrSpec>(&map.spec_)) {
    const int d = design.dim();
    const int s = BasisSize(lr->basis, d);
    if (n < s) {
      throw Error(ErrorCode::kUnderdetermined,
                  "lr needs n >= s, got n=" + std::to_string(n) +
                      " with s=" + std::to_string(s));
    }
    Matrix phi(n, s);
    for (int i = 0; i < n; ++i) phi.row(i) = BasisEval(lr->basis, design.point(i));

    LrState state;
    state.feature_shift = Vector::Zero(s);
    state.feature_scale = Vector::Ones(s);
    const int first = lr->basis.include_intercept ? 1 : 0;
    for (int j = first; j < s; ++j) {
      const double mean = phi.col(j).mean();
      const double shift = lr->basis.include_intercept ? mean : 0.0;
      const double spread =
          std::sqrt((phi.col(j).array() - shift).square().mean());
      state.feature_shift(j) = shift;
      state.feature_scale(j) = spread > 0.0 ? spread : 1.0;
    }
    state.standardized =
        (phi.rowwise() - state.feature_shift.transpose()).array().rowwise() /
        state.feature_scale.transpose().array();
    const Matrix gram = state.standardized.transpose() * state.standardized;
    state.normal_factor.compute(gram);
    const Matrix& factor_l = state.normal_factor.matrixLLT();
    const double dmax = factor_l.diagonal().cwiseAbs().maxCoeff();
    const double dmin = factor_l.diagonal().cwiseAbs().minCoeff();
    if (state.normal_factor.info() != Eigen::Success || !(dmin > 1e-7 * dmax)) {
      throw Error(ErrorCode::kIllConditioned,
                  "lr normal equations are singular (smallest pivot " +
                      std::to_string(SmallestPivot(gram)) + ")");
    }
    state.standardized_coefficients =
        state.normal_factor.solve(state.standardized.transpose() * labels);
    // Undo the feature standardization: z_j = (phi_j - shift_j) / scale_j.
    state.coefficients = state.standardized_coefficients.array().colwise() /
                         state.feature_scale.array();
    if (lr->basis.include_intercept) {
      state.coefficients.row(0) -=
          state.feature_shift.transpose() * state.coefficients;
    }
    map.lr_ = std::move(state);
  } else if (auto* krr = std::get_if<KrrSpec>(&map.spec_)) {
    if (!(krr->lambda > 0.0) || !std::isfinite(krr->lambda)) {
      Invalid("krr lambda must be positive");
    }
    if (!krr->kernel.lengthscale) {
      if (!(options.lengthscale_factor > 0.0)) {
        Invalid("lengthscale factor must be positive");
      }
      krr->kernel.lengthscale = options.lengthscale_factor * design.domain.diagonal();
    }
    if (!(*krr->kernel.lengthscale > 0.0)) Invalid("kernel lengthscale must be positive");
    Matrix gram(n, n);
    for (int i = 0; i < n; ++i) {
      gram(i, i) = 1.0 + n * krr->lambda;
      for (int j = 0; j < i; ++j) {
        const double r = (design.points.row(i) - design.points.row(j)).norm();
        gram(i, j) = gram(j, i) =
            KernelOfDistance(krr->kernel.family, *krr->kernel.lengthscale, r);
      }
    }
    KrrState state;
    state.factor.compute(gram);
    if (state.factor.info() != Eigen::Success ||
        !state.factor.matrixLLT().diagonal().allFinite()) {
      throw Error(ErrorCode::kIllConditioned,
                  "krr system is not positive definite (smallest pivot " +
                      std::to_string(SmallestPivot(gram)) + ")");
    }
    if (krr->center_labels) {
      state.label_mean = labels.colwise().mean();
    } else {
      state.label_mean = Eigen::RowVectorXd::Zero(labels.cols());
    }
    state.coefficients =
        state.factor.solve(labels.rowwise() - state.label_mean);
    map.krr_ = std::move(state);
  }
  return map;
}

Vector FittedSolutionMap::StandardizedFeatures(const Vector& x) const {
  const auto& lr = std::get<LrSpec>(spec_);
  return ((BasisEval(lr.basis, x) - lr_->feature_shift).array() /
          lr_->feature_scale.array())
      .matrix();
}

Vector FittedSolutionMap::KernelColumn(const Vector& x) const {
  const auto& krr = std::get<KrrSpec>(spec_);
  const int n = size();
  Vector r(n);
  for (int i = 0; i < n; ++i) {
    const double dist = (design_.points.row(i).transpose() - x).norm();
    r(i) = KernelOfDistance(krr.kernel.family, *krr.kernel.lengthscale, dist);
  }
  return r;
}

std::vector<int> FittedSolutionMap::SphereMembers(const Vector& x) const {
  const double h = std::get<KsSpec>(spec_).bandwidth;
  const double h2 = h * h;
  std::vector<int> members;
  for (int i = 0; i < size(); ++i) {
    if ((design_.points.row(i).transpose() - x).squaredNorm() <= h2) {
      members.push_back(i);
    }
  }
  if (members.empty()) {
    if (options_.ks_empty == EmptyNeighborhood::kError) {
      throw Error(ErrorCode::kEmptyNeighborhood,
                  "no design point within bandwidth " + std::to_string(h));
    }
    members = KNearest(design_.points, x, 1);
  }
  return members;
}

Vector FittedSolutionMap::Weights(const Vector& x) const {
  if (x.size() != design_.dim()) Invalid("query dimension mismatch");
  const int n = size();
  Vector w = Vector::Zero(n);
  switch (technique()) {
    case Technique::kKnn: {
      const int k = std::get<KnnSpec>(spec_).k;
      for (int i : KNearest(design_.points, x, k)) w(i) = 1.0 / k;
      break;
    }
    case Technique::kKs: {
      const std::vector<int> members = SphereMembers(x);
      for (int i : members) w(i) = 1.0 / static_cast<double>(members.size());
      break;
    }
    case Technique::kLr:
      w = lr_->standardized * lr_->normal_factor.solve(StandardizedFeatures(x));
      break;
    case Technique::kKrr: {
      w = krr_->factor.solve(KernelColumn(x));
      if (std::get<KrrSpec>(spec_).center_labels) {
        w.array() += (1.0 - w.sum()) / n;
      }
      break;
    }
  }
  return w;
}

Vector FittedSolutionMap::PredictUnprojected(const Vector& x) const {
  if (x.size() != design_.dim()) Invalid("query dimension mismatch");
  switch (technique()) {
    case Technique::kKnn: {
      const auto idx = KNearest(design_.points, x, std::get<KnnSpec>(spec_).k);
      Vector sum = Vector::Zero(output_dim());
      for (int i : idx) sum += labels_.row(i).transpose();
      return sum / static_cast<double>(idx.size());
    }
    case Technique::kKs: {
      const auto idx = SphereMembers(x);
      Vector sum = Vector::Zero(output_dim());
      for (int i : idx) sum += labels_.row(i).transpose();
      return sum / static_cast<double>(idx.size());
    }
    case Technique::kLr:
      return lr_->standardized_coefficients.transpose() * StandardizedFeatures(x);
    case Technique::kKrr:
      return (krr_->label_mean + KernelColumn(x).transpose() * krr_->coefficients)
          .transpose();
  }
  return Vector();
}

Vector FittedSolutionMap::Predict(const Vector& x) const {
  Vector theta = PredictUnprojected(x);
  if (options_.project && options_.decision_box) {
    theta = theta.cwiseMax(options_.decision_box->lo)
                .cwiseMin(options_.decision_box->hi);
  }
  return theta;
}

const Matrix& FittedSolutionMap::lr_coefficients() const {
  if (!lr_) Invalid("lr_coefficients is only defined for lr fits");
  return lr_->coefficients;
}

}  // namespace otp
