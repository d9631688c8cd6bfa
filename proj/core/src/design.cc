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


#include "otp/design.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "otp/error.h"

namespace otp {

std::string_view DesignKindName(DesignKind kind) {
  switch (kind) {
    case DesignKind::kGrid: return "grid";
    case DesignKind::kFarthestPoint: return "farthest_point";
  }
  return "grid";
}

DesignKind ParseDesignKind(std::string_view name) {
  if (name == "grid") return DesignKind::kGrid;
  if (name == "farthest_point") return DesignKind::kFarthestPoint;
  throw Error(ErrorCode::kInvalidInput,
              "unknown design kind '" + std::string(name) + "'");
}

CovariateDesign GridDesign(const Box& domain, int points_per_axis) {
  const int d = domain.dim();
  if (d < 1) throw Error(ErrorCode::kInvalidInput, "grid needs d >= 1");
  if (points_per_axis < 2) {
    throw Error(ErrorCode::kInvalidInput, "grid needs points_per_axis >= 2");
  }
  std::int64_t n = 1;
  for (int j = 0; j < d; ++j) {
    if (n > kMaxDesignPoints / points_per_axis) {
      throw Error(ErrorCode::kCapacity,
                  "grid of " + std::to_string(points_per_axis) + "^" +
                      std::to_string(d) + " points exceeds " +
                      std::to_string(kMaxDesignPoints));
    }
    n *= points_per_axis;
  }
  const Vector spacing = domain.range() / (points_per_axis - 1);
  if ((spacing.array() <= 0.0).any()) {
    throw Error(ErrorCode::kInvalidInput, "grid axis with zero range");
  }

  CovariateDesign design;
  design.kind = DesignKind::kGrid;
  design.domain = domain;
  design.points.resize(n, d);
  std::vector<int> digit(d, 0);
  for (std::int64_t p = 0; p < n; ++p) {
    for (int j = 0; j < d; ++j) {
      design.points(p, j) = domain.lo[j] + digit[j] * spacing[j];
    }
    // Odometer increment, last axis fastest.
    for (int j = d - 1; j >= 0; --j) {
      if (++digit[j] < points_per_axis) break;
      digit[j] = 0;
    }
  }
  design.separation_distance = 0.5 * spacing.minCoeff();
  design.fill_distance = 0.5 * spacing.norm();
  return design;
}

Matrix SampleUniform(const Box& box, int n, Rng& rng) {
  Matrix out(n, box.dim());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < box.dim(); ++j) {
      out(i, j) = rng.Uniform(box.lo[j], box.hi[j]);
    }
  }
  return out;
}

CovariateDesign FarthestPointDesign(const Box& domain, int n, int pool_size,
                                    RngStream stream) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "design needs n >= 1");
  if (n > pool_size) {
    throw Error(ErrorCode::kInvalidInput,
                "n = " + std::to_string(n) + " exceeds pool_size = " +
                    std::to_string(pool_size));
  }
  if (static_cast<std::int64_t>(pool_size) < 10LL * n) {
    throw Error(ErrorCode::kInvalidInput, "pool_size must be at least 10 n");
  }
  const int d = domain.dim();
  Rng rng(stream);
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMatrix pool = SampleUniform(domain, pool_size, rng);

  auto squared_distance = [&](int a, const double* y) {
    const double* p = pool.data() + static_cast<std::ptrdiff_t>(a) * d;
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = p[j] - y[j];
      s += diff * diff;
    }
    return s;
  };

  const Vector center = domain.center();
  std::vector<double> nearest(pool_size);
  for (int a = 0; a < pool_size; ++a) nearest[a] = squared_distance(a, center.data());
  int chosen = static_cast<int>(
      std::min_element(nearest.begin(), nearest.end()) - nearest.begin());

  std::vector<int> selected;
  selected.reserve(n);
  double last_added = std::numeric_limits<double>::infinity();
  for (;;) {
    selected.push_back(chosen);
    const double* y = pool.data() + static_cast<std::ptrdiff_t>(chosen) * d;
    if (selected.size() == 1) {
      for (int a = 0; a < pool_size; ++a) nearest[a] = squared_distance(a, y);
    } else {
      for (int a = 0; a < pool_size; ++a) {
        nearest[a] = std::min(nearest[a], squared_distance(a, y));
      }
    }
    if (static_cast<int>(selected.size()) == n) break;
    // max_element returns the first maximum, so ties go to the lowest index.
    chosen = static_cast<int>(
        std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
    last_added = nearest[chosen];
  }

  CovariateDesign design;
  design.kind = DesignKind::kFarthestPoint;
  design.domain = domain;
  design.stream = stream;
  design.points.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      design.points(i, j) = pool(selected[i], j);
    }
  }
  // Greedy insertion distances are non-increasing, so the last one is the
  // minimum pairwise distance.
  design.separation_distance = n == 1 ? std::numeric_limits<double>::infinity()
                                      : 0.5 * std::sqrt(last_added);
  design.fill_distance =
      std::sqrt(*std::max_element(nearest.begin(), nearest.end()));
  return design;
}

int CountWithin(const CovariateDesign& design, const Vector& x, double r) {
  const double r2 = r * r;
  int count = 0;
  for (int i = 0; i < design.size(); ++i) {
    if ((design.points.row(i).transpose() - x).squaredNorm() <= r2) ++count;
  }
  return count;
}

std::vector<int> KNearest(const Matrix& points, const Vector& x, int k) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kInvalidInput,
                "k = " + std::to_string(k) + " outside [1, " +
                    std::to_string(n) + "]");
  }
  if (x.size() != points.cols()) {
    throw Error(ErrorCode::kInvalidInput, "query dimension mismatch");
  }
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i) {
    dist[i] = (points.row(i).transpose() - x).squaredNorm();
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto closer = [&](int a, int b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);
  order.resize(k);
  return order;
}

}  // namespace otp
