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
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "otp/design.h"
#include "otp/error.h"
#include "otp/problem.h"
#include "otp/rng.h"
#include "otp/smooth.h"
#include "test_util.h"

namespace otp {
namespace {

struct Fixture {
  Box box = Box::Cube(2, 0.0, 3.0);
  CovariateDesign design = FarthestPointDesign(box, 30, 300, RngStream{21, 0});
  Matrix y1;
  Matrix y2;
  Matrix queries;
  Fixture() {
    Rng rng(RngStream{21, 1});
    y1 = Matrix(30, 3);
    y2 = Matrix(30, 3);
    for (int i = 0; i < 30; ++i) {
      for (int j = 0; j < 3; ++j) {
        y1(i, j) = rng.Normal();
        y2(i, j) = rng.Normal(2.0, 1.0);
      }
    }
    queries = SampleUniform(box, 25, rng);
  }
};

std::vector<SmootherSpec> AllSmoothers() {
  KrrSpec krr;
  krr.kernel.lengthscale = 1.0;
  krr.lambda = 1e-3;
  KrrSpec raw = krr;
  raw.center_labels = false;
  return {KnnSpec{4}, KsSpec{1.0}, LrSpec{BasisSpec{}}, krr, raw};
}

FitOptions Unprojected() {
  FitOptions o;
  o.project = false;
  o.ks_empty = EmptyNeighborhood::kNearestNeighbor;
  return o;
}

TEST_SUITE("smooth") {

TEST_CASE("kernels") {
  const Vector x = Vector::Zero(2);
  Vector y(2);
  y << 0.6, 0.8;
  for (KernelFamily f : {KernelFamily::kMatern12, KernelFamily::kMatern32,
                         KernelFamily::kMatern52, KernelFamily::kSquaredExponential}) {
    CHECK(KernelEval(KernelSpec{f, 0.7}, x, x) == 1.0);
    double prev = 1.0;
    for (int i = 1; i <= 40; ++i) {
      const double k = KernelOfDistance(f, 0.7, 0.1 * i);
      CHECK(k < prev);
      CHECK(k > 0.0);
      prev = k;
    }
    CHECK(ParseKernelFamily(KernelFamilyName(f)) == f);
  }
  CHECK(KernelEval(KernelSpec{KernelFamily::kMatern12, 1.0}, x, y) ==
        doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(KernelEval(KernelSpec{KernelFamily::kMatern12, std::nullopt}, x, y),
                  Error);
  CHECK_THROWS_AS(KernelEval(KernelSpec{KernelFamily::kMatern12, -1.0}, x, y), Error);
  CHECK(KernelFamilyForSmoothness(std::numeric_limits<double>::infinity(), 2) ==
        KernelFamily::kSquaredExponential);
  CHECK(KernelFamilyForSmoothness(2.5, 2) == KernelFamily::kMatern32);
  CHECK(KernelFamilyForSmoothness(1.5, 2) == KernelFamily::kMatern12);
  CHECK_THROWS_AS(KernelFamilyForSmoothness(1.2, 2), Error);
}

TEST_CASE("bases") {
  const BasisSpec lpn;
  Vector x(2);
  x << 3.0, 4.0;
  Vector want(4);
  want << 1, 3, 4, 5;
  CHECK(BasisEval(lpn, x) == want);
  CHECK(BasisSize(lpn, 2) == 4);
  BasisSpec poly;
  poly.kind = BasisKind::kPolynomial;
  poly.degree = 1;
  CHECK(BasisSize(poly, 2) == 3);
  Vector want_poly(3);
  want_poly << 1, 3, 4;
  CHECK(BasisEval(poly, x) == want_poly);
  poly.degree = 2;
  CHECK(BasisSize(poly, 2) == 6);
  CHECK(BasisSize(poly, 10) == 66);
  const Vector zero = Vector::Zero(2);
  for (const BasisSpec& b : {lpn, poly}) {
    const Vector phi = BasisEval(b, zero);
    CHECK(phi(0) == 1.0);
    CHECK(phi.tail(phi.size() - 1).isZero());
  }
  BasisSpec custom;
  custom.kind = BasisKind::kCustom;
  custom.custom = {"x1*x2^2", "norm"};
  custom.include_intercept = false;
  Vector want_custom(2);
  want_custom << 48, 5;
  CHECK(BasisEval(custom, x) == want_custom);
  custom.custom = {"x3"};
  CHECK_THROWS_AS(BasisEval(custom, x), Error);
  custom.custom = {"y1"};
  CHECK_THROWS_AS(BasisSize(custom, 2), Error);
}

TEST_CASE("knn") {
  Fixture f;
  const Matrix labels = f.y1;
  const FittedSolutionMap one = FittedSolutionMap::Fit(KnnSpec{1}, f.design, labels, Unprojected());
  for (int i = 0; i < 5; ++i) CHECK(one.Predict(f.design.point(i)) == labels.row(i).transpose());
  const FittedSolutionMap all = FittedSolutionMap::Fit(KnnSpec{30}, f.design, labels, Unprojected());
  const Vector mean = labels.colwise().mean().transpose();
  CHECK(testing::RelativeError(all.Predict(f.box.center()), mean) < 1e-12);
  const FittedSolutionMap four = FittedSolutionMap::Fit(KnnSpec{4}, f.design, labels, Unprojected());
  for (int i = 0; i < f.queries.rows(); ++i) {
    const Vector x = f.queries.row(i).transpose();
    const Vector w = four.Weights(x);
    CHECK(w.sum() == doctest::Approx(1.0));
    CHECK((w.array() != 0.0).count() == 4);
    Vector brute = Vector::Zero(3);
    for (int j : testing::BruteForceKNearest(f.design.points, x, 4)) {
      brute += labels.row(j).transpose() / 4.0;
    }
    CHECK(testing::RelativeError(four.Predict(x), brute) < 1e-12);
  }
  CHECK_THROWS_AS(FittedSolutionMap::Fit(KnnSpec{31}, f.design, labels), Error);
  CHECK_THROWS_AS(FittedSolutionMap::Fit(KnnSpec{0}, f.design, labels), Error);
}

TEST_CASE("kernel smoothing") {
  Fixture f;
  const FittedSolutionMap wide = FittedSolutionMap::Fit(KsSpec{10.0}, f.design, f.y1, Unprojected());
  CHECK(testing::RelativeError(wide.Predict(f.box.center()),
                               f.y1.colwise().mean().transpose()) < 1e-12);
  FitOptions strict;
  strict.project = false;
  const FittedSolutionMap tiny = FittedSolutionMap::Fit(KsSpec{1e-6}, f.design, f.y1, strict);
  CHECK_THROWS_AS(tiny.Predict(f.box.center() + Vector::Constant(2, 0.0123)), Error);
  const FittedSolutionMap fallback =
      FittedSolutionMap::Fit(KsSpec{1e-6}, f.design, f.y1, Unprojected());
  const Vector x = f.queries.row(0).transpose();
  CHECK(fallback.Predict(x) ==
        f.y1.row(testing::BruteForceKNearest(f.design.points, x, 1)[0]).transpose());
  CHECK_THROWS_AS(FittedSolutionMap::Fit(KsSpec{0.0}, f.design, f.y1), Error);
}

TEST_CASE("linear regression") {
  Fixture f;
  const BasisSpec basis;
  Matrix beta(4, 3);
  beta << 1, 2, -1, 0.5, 0, 1, -0.25, 3, 0, 2, 1, 0.1;
  Matrix labels(30, 3);
  for (int i = 0; i < 30; ++i) {
    labels.row(i) = BasisEval(basis, f.design.point(i)).transpose() * beta;
  }
  const FittedSolutionMap lr = FittedSolutionMap::Fit(LrSpec{basis}, f.design, labels, Unprojected());
  CHECK((lr.lr_coefficients() - beta).cwiseAbs().maxCoeff() < 1e-8);
  for (int i = 0; i < f.queries.rows(); ++i) {
    CHECK(std::abs(lr.Weights(f.queries.row(i).transpose()).sum() - 1.0) < 1e-10);
  }
  const CovariateDesign few = FarthestPointDesign(f.box, 3, 30, RngStream{2, 2});
  CHECK_THROWS_AS(FittedSolutionMap::Fit(LrSpec{basis}, few, Matrix::Ones(3, 1)), Error);
  try {
    FittedSolutionMap::Fit(LrSpec{basis}, few, Matrix::Ones(3, 1));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnderdetermined);
  }
  // Collinear design points make the normal equations singular.
  CovariateDesign line = f.design;
  line.points = Matrix(6, 2);
  for (int i = 0; i < 6; ++i) line.points.row(i) << 0.5 * i, 0.5 * i;
  BasisSpec affine;
  affine.kind = BasisKind::kPolynomial;
  try {
    FittedSolutionMap::Fit(LrSpec{affine}, line, Matrix::Ones(6, 1));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIllConditioned);
  }
}

TEST_CASE("kernel ridge regression matches a naive solve") {
  Fixture f;
  for (bool center : {false, true}) {
    KrrSpec spec;
    spec.kernel = KernelSpec{KernelFamily::kMatern52, 1.3};
    spec.lambda = 1e-3;
    spec.center_labels = center;
    const FittedSolutionMap krr = FittedSolutionMap::Fit(spec, f.design, f.y1, Unprojected());
    const int n = f.design.size();
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a(i, j) = KernelEval(spec.kernel, f.design.point(i), f.design.point(j));
      }
      a(i, i) += n * spec.lambda;
    }
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(3);
    if (center) mean = f.y1.colwise().mean();
    const Matrix alpha = testing::NaiveSolve(a, f.y1.rowwise() - mean);
    for (int q = 0; q < f.queries.rows(); ++q) {
      const Vector x = f.queries.row(q).transpose();
      Vector r(n);
      for (int i = 0; i < n; ++i) r(i) = KernelEval(spec.kernel, f.design.point(i), x);
      const Vector want = (r.transpose() * alpha + mean).transpose();
      CHECK(testing::RelativeError(krr.Predict(x), want) < 1e-8);
      if (center) CHECK(krr.Weights(x).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel ridge near interpolation") {
  CovariateDesign d = GridDesign(Box::Cube(2, 0.0, 1.0), 2);
  d.points = d.points.topRows(3).eval();
  Matrix y(3, 1);
  y << 1.0, -2.0, 0.5;
  KrrSpec spec;
  spec.kernel = KernelSpec{KernelFamily::kSquaredExponential, 0.5};
  spec.lambda = 1e-10;
  spec.center_labels = false;
  const FittedSolutionMap krr = FittedSolutionMap::Fit(spec, d, y, Unprojected());
  for (int i = 0; i < 3; ++i) CHECK(std::abs(krr.Predict(d.point(i))(0) - y(i, 0)) < 1e-4);
}

TEST_CASE("uncentered kernel ridge weights sum near one") {
  const Box box = Box::Cube(2, 0.0, 3.0);
  const CovariateDesign d = GridDesign(box, 10);
  KrrSpec spec;
  spec.kernel = KernelSpec{KernelFamily::kMatern52, 1.0};
  spec.lambda = 1.0 / d.size();
  spec.center_labels = false;
  const FittedSolutionMap krr = FittedSolutionMap::Fit(spec, d, Matrix::Ones(d.size(), 1));
  Rng rng(RngStream{5, 5});
  const Matrix xs = SampleUniform(box.Inset(0.2), 20, rng);
  for (int i = 0; i < xs.rows(); ++i) {
    CHECK(std::abs(krr.Weights(xs.row(i).transpose()).sum() - 1.0) <= 0.2);
  }
}

TEST_CASE("predictions are affine in the labels") {
  Fixture f;
  const double a = 0.3;
  for (const SmootherSpec& spec : AllSmoothers()) {
    const FitOptions o = Unprojected();
    const FittedSolutionMap m1 = FittedSolutionMap::Fit(spec, f.design, f.y1, o);
    const FittedSolutionMap m2 = FittedSolutionMap::Fit(spec, f.design, f.y2, o);
    const FittedSolutionMap mix =
        FittedSolutionMap::Fit(spec, f.design, a * f.y1 + (1 - a) * f.y2, o);
    for (int i = 0; i < f.queries.rows(); ++i) {
      const Vector x = f.queries.row(i).transpose();
      const Vector want = a * m1.Predict(x) + (1 - a) * m2.Predict(x);
      CHECK(testing::RelativeError(mix.Predict(x), want) < 1e-10);
      const Vector via_weights = f.y1.transpose() * m1.Weights(x);
      CHECK(testing::RelativeError(m1.Predict(x), via_weights) < 1e-10);
    }
  }
}

TEST_CASE("projection clamps predictions") {
  Fixture f;
  FitOptions o;
  o.decision_box = Box::Cube(3, 0.0, 0.5);
  const FittedSolutionMap m = FittedSolutionMap::Fit(KnnSpec{2}, f.design, f.y2, o);
  for (int i = 0; i < f.queries.rows(); ++i) {
    CHECK(o.decision_box->Contains(m.Predict(f.queries.row(i).transpose())));
  }
}

TEST_CASE("fit validates shapes") {
  Fixture f;
  CHECK_THROWS_AS(FittedSolutionMap::Fit(KnnSpec{1}, f.design, Matrix::Ones(29, 3)), Error);
  const FittedSolutionMap m = FittedSolutionMap::Fit(KnnSpec{1}, f.design, f.y1);
  CHECK_THROWS_AS(m.Predict(Vector::Zero(3)), Error);
  CHECK_THROWS_AS(m.lr_coefficients(), Error);
  CHECK(ParseTechnique("krr") == Technique::kKrr);
  CHECK(TechniqueName(Technique::kKs) == "ks");
}

}  // TEST_SUITE

}  // namespace
}  // namespace otp
