// Copyright 2026 The PIE Explorer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIE_RANDOM_HPP_
#define PIE_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <span>

namespace pie
{

/// Seeded generator with platform-independent uniform and normal draws.
///
/// std::normal_distribution and friends are implementation-defined, so two
/// standard libraries can produce different streams from the same engine.
/// Every draw here is a fixed function of the raw mt19937_64 output.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value);
std::uint64_t hash_sequence(std::uint64_t seed, std::span<const int> values);

}  // namespace pie

#endif  // PIE_RANDOM_HPP_
