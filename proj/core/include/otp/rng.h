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

#ifndef OTP_RNG_H_
#define OTP_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace otp {

// Names one reproducible random sequence. Distinct stream ids under the same
// seed give independent sequences.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Order-sensitive hash of a key sequence, used to derive stream ids such as
// hash(master_seed, replication, role).
std::uint64_t HashCombine(std::initializer_list<std::uint64_t> keys);

// xoshiro256** seeded from (seed, stream_id) through SplitMix64. Satisfies
// UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(RngStream stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal();
  double Normal(double mean, double sd) { return mean + sd * Normal(); }

  const RngStream& stream() const { return stream_; }

 private:
  RngStream stream_;
  std::uint64_t s_[4];
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace otp

#endif  // OTP_RNG_H_
