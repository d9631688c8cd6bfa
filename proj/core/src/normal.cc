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


#include "otp/normal.h"

#include <cmath>
#include <numbers>

#include "otp/error.h"

namespace otp::normal {

double Pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double Cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double Quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "normal quantile needs p in (0, 1)");
  }
  // Phi is increasing, so [lo, hi] stays a bracket of the root; Newton steps
  // that leave it are replaced by bisection.
  double lo = -40.0;
  double hi = 40.0;
  double z = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = Cdf(z) - p;
    if (f > 0.0) {
      hi = z;
    } else {
      lo = z;
    }
    const double density = Pdf(z);
    double next = density > 0.0 ? z - f / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) < 1e-12 || hi - lo < 1e-12) return next;
    z = next;
  }
  return z;
}

double UpperPartialMoment(double theta, double mean, double sd) {
  const double z = (theta - mean) / sd;
  return sd * (Pdf(z) - z * Cdf(-z));
}

double LowerPartialMoment(double theta, double mean, double sd) {
  const double z = (theta - mean) / sd;
  return sd * (Pdf(z) + z * Cdf(z));
}

}  // namespace otp::normal
