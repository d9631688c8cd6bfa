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

#ifndef OTP_NORMAL_H_
#define OTP_NORMAL_H_

namespace otp::normal {

double Pdf(double z);
// Evaluated through erfc so the lower tail keeps relative precision.
double Cdf(double z);
// Inverse of Cdf on (0, 1) by bracketed Newton, absolute tolerance 1e-12.
double Quantile(double p);

// Expected shortfall E(D - theta)^+ and excess E(theta - D)^+ for
// D ~ N(mean, sd^2), sd > 0.
double UpperPartialMoment(double theta, double mean, double sd);
double LowerPartialMoment(double theta, double mean, double sd);

}  // namespace otp::normal

#endif  // OTP_NORMAL_H_
