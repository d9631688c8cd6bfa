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
#ifndef OTP_DESIGN_H_
#define OTP_DESIGN_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "otp/rng.h"
#include "otp/types.h"

namespace otp {

enum class DesignKind { kGrid, kFarthestPoint };

std::string_view DesignKindName(DesignKind kind);
DesignKind ParseDesignKind(std::string_view name);

// An immutable set of design covariates with its space-filling diagnostics.
//
// fill_distance is h_n = sup_{y in domain} min_i |y - x_i| (exact for grids,
// estimated over the candidate pool otherwise) and separation_distance is
// q_n = min_{i != j} |x_i - x_j| / 2. A singleton design reports
// separation_distance = +inf.
struct CovariateDesign {
  Matrix points;  // n x d, row i is x_i
  Box domain;
  DesignKind kind = DesignKind::kGrid;
  double fill_distance = 0.0;
  double separation_distance = 0.0;
  std::optional<RngStream> stream;  // set for randomized designs

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  Vector point(int i) const { return points.row(i).transpose(); }
  double quasi_uniformity_ratio() const {
    return fill_distance / separation_distance;
  }
};

inline constexpr std::int64_t kMaxDesignPoints = 10'000'000;

// Full Cartesian grid with points_per_axis nodes per axis, including the
// domain corners. Throws kCapacity above kMaxDesignPoints.
CovariateDesign GridDesign(const Box& domain, int points_per_axis);

// Greedy max-min selection from pool_size uniform candidates, seeded with the
// candidate nearest the domain center. Requires pool_size >= 10 n.
CovariateDesign FarthestPointDesign(const Box& domain, int n, int pool_size,
                                    RngStream stream);

// #{i : |x_i - x| <= r}.
int CountWithin(const CovariateDesign& design, const Vector& x, double r);

// Indices of the k nearest design points by Euclidean distance, nearest
// first, ties to the lower index.
std::vector<int> KNearest(const Matrix& points, const Vector& x, int k);
inline std::vector<int> KNearest(const CovariateDesign& design,
                                 const Vector& x, int k) {
  return KNearest(design.points, x, k);
}

// n points uniform on the box, one row per point.
Matrix SampleUniform(const Box& box, int n, Rng& rng);

}  // namespace otp

#endif  // OTP_DESIGN_H_
