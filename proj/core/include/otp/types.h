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

#ifndef OTP_TYPES_H_
#define OTP_TYPES_H_

#include <cstddef>

#include <Eigen/Dense>

namespace otp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Axis-aligned box [lo, hi] in R^d.
struct Box {
  Vector lo;
  Vector hi;

  Box() = default;
  Box(Vector lo_in, Vector hi_in);
  // The cube [lo, hi]^d.
  static Box Cube(int d, double lo, double hi);

  int dim() const { return static_cast<int>(lo.size()); }
  Vector center() const { return 0.5 * (lo + hi); }
  Vector range() const { return hi - lo; }
  double diagonal() const { return (hi - lo).norm(); }
  bool Contains(const Vector& x, double tol = 0.0) const;
  // Shrinks every axis by margin_fraction * range on both sides.
  Box Inset(double margin_fraction) const;
};

bool operator==(const Box& a, const Box& b);

}  // namespace otp

#endif  // OTP_TYPES_H_
