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
#include <vector>

#include "doctest.h"
#include "otp/design.h"
#include "otp/error.h"
#include "otp/rng.h"
#include "test_util.h"

namespace otp {
namespace {

TEST_SUITE("design") {

TEST_CASE("grid geometry") {
  const CovariateDesign g = GridDesign(Box::Cube(2, 0.0, 3.0), 5);
  CHECK(g.size() == 25);
  CHECK(g.separation_distance == doctest::Approx(0.375));
  CHECK(g.fill_distance == doctest::Approx(0.75 * std::sqrt(2.0) / 2));
  const CovariateDesign e = GridDesign(Box::Cube(1, 0.0, 1.0), 2);
  CHECK(e.size() == 2);
  CHECK(e.point(0)(0) == 0.0);
  CHECK(e.point(1)(0) == 1.0);
  CHECK(e.separation_distance == doctest::Approx(0.5));
  CHECK(e.fill_distance == doctest::Approx(0.5));
}

TEST_CASE("grid distances scale like n^(-1/d)") {
  for (int d = 1; d <= 3; ++d) {
    std::vector<double> n, fill, sep;
    for (int m : {4, 8, 16}) {
      const CovariateDesign g = GridDesign(Box::Cube(d, 0.0, 1.0), m);
      n.push_back(g.size());
      fill.push_back(g.fill_distance);
      sep.push_back(g.separation_distance);
    }
    CHECK(testing::LogLogSlope(n, fill) == doctest::Approx(-1.0 / d).epsilon(0.15));
    CHECK(testing::LogLogSlope(n, sep) == doctest::Approx(-1.0 / d).epsilon(0.15));
  }
}

TEST_CASE("grid capacity") {
  CHECK_THROWS_AS(GridDesign(Box::Cube(10, 0.0, 1.0), 10), Error);
}

TEST_CASE("farthest point design") {
  const Box box = Box::Cube(2, 0.0, 3.0);
  const CovariateDesign one = FarthestPointDesign(box, 1, 100, RngStream{1, 0});
  CHECK(one.separation_distance == std::numeric_limits<double>::infinity());
  CHECK((one.point(0) - box.center()).norm() < 0.5);
  const CovariateDesign a = FarthestPointDesign(box, 25, 10000, RngStream{2, 0});
  CHECK(a.separation_distance > 0.375 / 2);
  CHECK(a.separation_distance < 0.375 * 2);
  const CovariateDesign b = FarthestPointDesign(box, 25, 10000, RngStream{2, 0});
  CHECK(a.points == b.points);
  CHECK_THROWS_AS(FarthestPointDesign(box, 25, 100, RngStream{}), Error);
  for (int i = 0; i < a.size(); ++i) CHECK(box.Contains(a.point(i)));
}

TEST_CASE("count within") {
  const CovariateDesign g = GridDesign(Box::Cube(2, 0.0, 3.0), 5);
  Vector x(2);
  x << 1.5, 1.5;
  CHECK(CountWithin(g, x, 0.8) == 5);
  x << 0.3, 0.3;
  CHECK(CountWithin(g, x, 0.1) == 0);
  CHECK(CountWithin(g, x, 10.0) == 25);
}

TEST_CASE("neighbor counts on grids stay within packing bounds") {
  Rng rng(RngStream{9, 0});
  for (int d = 1; d <= 3; ++d) {
    for (int m : {4, 8, 16}) {
      const Box box = Box::Cube(d, 0.0, 1.0);
      const CovariateDesign g = GridDesign(box, m);
      const Matrix xs = SampleUniform(box.Inset(1.0 / 30.0), 20, rng);
      for (int i = 0; i < xs.rows(); ++i) {
        for (double f : {2.0, 4.0}) {
          const double r = f * g.fill_distance;
          const int count = CountWithin(g, xs.row(i).transpose(), r);
          CHECK(count >= std::pow(r / g.fill_distance - 1.0, d) - 1e-9);
          CHECK(count <= std::pow(1.0 + r / g.separation_distance, d) + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("k nearest matches brute force") {
  const Box box = Box::Cube(3, 0.0, 1.0);
  const CovariateDesign g = FarthestPointDesign(box, 40, 400, RngStream{4, 0});
  CHECK(KNearest(g, g.point(7), 1) == std::vector<int>{7});
  CHECK(KNearest(g, box.center(), 40).size() == 40);
  Rng rng(RngStream{4, 1});
  const Matrix q = SampleUniform(box, 100, rng);
  for (int i = 0; i < q.rows(); ++i) {
    const int k = 1 + i % 10;
    CHECK(KNearest(g, q.row(i).transpose(), k) ==
          testing::BruteForceKNearest(g.points, q.row(i).transpose(), k));
  }
  // Ties resolve to the lower index.
  const CovariateDesign line = GridDesign(Box::Cube(1, 0.0, 2.0), 3);
  Vector mid(1);
  mid << 0.5;
  CHECK(KNearest(line, mid, 1) == std::vector<int>{0});
  CHECK_THROWS_AS(KNearest(line, mid, 4), Error);
}

TEST_CASE("design kind names") {
  CHECK(ParseDesignKind(DesignKindName(DesignKind::kGrid)) == DesignKind::kGrid);
  CHECK(ParseDesignKind("farthest_point") == DesignKind::kFarthestPoint);
  CHECK_THROWS_AS(ParseDesignKind("sobol"), Error);
}

}  // TEST_SUITE

}  // namespace
}  // namespace otp
