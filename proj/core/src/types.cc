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


#include "otp/types.h"

#include <utility>

#include "otp/error.h"

namespace otp {

Box::Box(Vector lo_in, Vector hi_in) : lo(std::move(lo_in)), hi(std::move(hi_in)) {
  if (lo.size() != hi.size()) {
    throw Error(ErrorCode::kInvalidInput, "box bounds have different lengths");
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) {
      throw Error(ErrorCode::kInvalidInput, "box lower bound exceeds upper bound");
    }
  }
}

Box Box::Cube(int d, double lo, double hi) {
  return Box(Vector::Constant(d, lo), Vector::Constant(d, hi));
}

bool Box::Contains(const Vector& x, double tol) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  }
  return true;
}

Box Box::Inset(double margin_fraction) const {
  const Vector margin = margin_fraction * range();
  return Box(lo + margin, hi - margin);
}

bool operator==(const Box& a, const Box& b) {
  return a.lo.size() == b.lo.size() && a.lo == b.lo && a.hi == b.hi;
}

}  // namespace otp
