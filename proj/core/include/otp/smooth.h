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

#ifndef OTP_SMOOTH_H_
#define OTP_SMOOTH_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>

#include "otp/design.h"
#include "otp/prsgd.h"
#include "otp/types.h"

namespace otp {

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

enum class KernelFamily {
  kMatern12,
  kMatern32,
  kMatern52,
  kSquaredExponential,
};

std::string_view KernelFamilyName(KernelFamily family);
KernelFamily ParseKernelFamily(std::string_view name);

// Matern family with nu = m - d/2 rounded down to the nearest supported
// half-integer; squared exponential when m is infinite or nu > 5/2.
KernelFamily KernelFamilyForSmoothness(double m, int d);

struct KernelSpec {
  KernelFamily family = KernelFamily::kSquaredExponential;
  // Unset means "lengthscale_factor * domain diagonal", resolved at fit time.
  std::optional<double> lengthscale;
};

// Unit-variance stationary kernel of r = |x - y|. Throws kInvalidInput when
// the lengthscale is unset or not positive.
double KernelEval(const KernelSpec& kernel, const Vector& x, const Vector& y);
double KernelOfDistance(KernelFamily family, double lengthscale, double r);

// ---------------------------------------------------------------------------
// Basis functions
// ---------------------------------------------------------------------------

enum class BasisKind { kLinearPlusNorm, kPolynomial, kCustom };

// Feature descriptors for kCustom are products of factors joined by '*',
// each factor either "x<j>", "x<j>^<p>" (1-based j) or "norm" (the Euclidean
// norm of x), e.g. "x1*x2^2" or "norm".
struct BasisSpec {
  BasisKind kind = BasisKind::kLinearPlusNorm;
  int degree = 1;
  std::vector<std::string> custom;
  bool include_intercept = true;
};

int BasisSize(const BasisSpec& basis, int d);
// (1, x_1, ..., x_d, |x|) for kLinearPlusNorm; all monomials of total degree
// <= degree in graded lexicographic order for kPolynomial. The intercept,
// when included, is always feature 0.
Vector BasisEval(const BasisSpec& basis, const Vector& x);

// ---------------------------------------------------------------------------
// Smoothers
// ---------------------------------------------------------------------------

struct KnnSpec {
  int k = 1;
};

// Nadaraya-Watson with the sphere kernel 1{|x - x_i| <= h}.
struct KsSpec {
  double bandwidth = 1.0;
};

struct LrSpec {
  BasisSpec basis;
};

struct KrrSpec {
  KernelSpec kernel;
  double lambda = 1e-3;
  // Smooth the deviations from the label mean and add the mean back. The
  // weights then sum to exactly one. Off gives the textbook estimator
  // r(x)^T (R + n lambda I)^{-1} Y.
  bool center_labels = true;
};

using SmootherSpec = std::variant<KnnSpec, KsSpec, LrSpec, KrrSpec>;

enum class Technique { kKnn, kKs, kLr, kKrr };

std::string_view TechniqueName(Technique technique);
Technique ParseTechnique(std::string_view name);
Technique TechniqueOf(const SmootherSpec& spec);

enum class EmptyNeighborhood {
  kError,
  // Use the single nearest design point.
  kNearestNeighbor,
};

struct FitOptions {
  // Clamp predictions onto decision_box when it is set.
  bool project = true;
  std::optional<Box> decision_box;
  EmptyNeighborhood ks_empty = EmptyNeighborhood::kError;
  // Used when a KRR kernel has no explicit lengthscale.
  double lengthscale_factor = 1.0;
};

// Approximation of the optimal-solution function fitted to (design, labels).
// Every prediction has the form sum_i w(x_i, x) labels.row(i) with weights
// that do not depend on the labels, and the same weights serve all q output
// columns. Immutable after Fit.
class FittedSolutionMap {
 public:
  // labels is n x q, one row per design point. Throws kInvalidInput for
  // shape or hyperparameter problems, kUnderdetermined when LR has fewer
  // points than features, kIllConditioned when a factorization fails.
  static FittedSolutionMap Fit(const SmootherSpec& spec,
                               const CovariateDesign& design,
                               const Matrix& labels, FitOptions options = {});
  static FittedSolutionMap Fit(const SmootherSpec& spec,
                               const InexactSolutionSet& data,
                               FitOptions options = {});

  // Projected onto options().decision_box when enabled.
  Vector Predict(const Vector& x) const;
  Vector PredictUnprojected(const Vector& x) const;
  // w(x_i, x) for every design point.
  Vector Weights(const Vector& x) const;

  // Spec with any defaulted hyperparameter filled in.
  const SmootherSpec& spec() const { return spec_; }
  Technique technique() const { return TechniqueOf(spec_); }
  const CovariateDesign& design() const { return design_; }
  const Matrix& train_solutions() const { return labels_; }
  const FitOptions& options() const { return options_; }
  int size() const { return design_.size(); }
  int output_dim() const { return static_cast<int>(labels_.cols()); }

  // LR only: s x q coefficients on the unstandardized basis.
  const Matrix& lr_coefficients() const;

 private:
  struct LrState {
    Vector feature_shift;
    Vector feature_scale;
    Matrix standardized;  // n x s
    Eigen::LLT<Matrix> normal_factor;
    Matrix standardized_coefficients;  // s x q
    Matrix coefficients;               // s x q
  };
  struct KrrState {
    Eigen::LLT<Matrix> factor;  // of R + n lambda I
    Matrix coefficients;        // n x q
    Eigen::RowVectorXd label_mean;
  };

  FittedSolutionMap() = default;

  Vector StandardizedFeatures(const Vector& x) const;
  Vector KernelColumn(const Vector& x) const;
  // Indices inside the KS sphere, or the fallback neighbor.
  std::vector<int> SphereMembers(const Vector& x) const;

  SmootherSpec spec_;
  CovariateDesign design_;
  Matrix labels_;
  FitOptions options_;
  std::optional<LrState> lr_;
  std::optional<KrrState> krr_;
};

}  // namespace otp

#endif  // OTP_SMOOTH_H_
