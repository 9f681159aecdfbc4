//
// Copyright 2026 The psolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PSOLAB_RNG_HPP_
#define PSOLAB_RNG_HPP_

#include <cstdint>
#include <random>

#include "psolab/uint128.hpp"

namespace psolab {

// Role of a generator stream within one trial. Distinct roles draw from
// independent streams so that swapping the mechanism does not perturb the
// dataset or the adversary's coins.
enum class StreamRole : std::uint32_t {
  kDataset = 1,
  kMechanism = 2,
  kAdversary = 3,
  kWeight = 4,
};

// Seeded generator used everywhere randomness is consumed. Wraps
// std::mt19937_64 and only uses bit-exact transforms on its output (no
// std::*_distribution), so streams are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Stream keyed by (master seed, trial index, role).
  static Rng for_trial(std::uint64_t master_seed, std::uint64_t trial,
                       StreamRole role);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 2^bits), bits in [0, 128].
  u128 bits(int bits);

  // Uniform on [0, bound), bound >= 1, by rejection.
  u128 below(u128 bound);

  // Uniform on [lo, hi] inclusive.
  u128 in_range(u128 lo, u128 hi);

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace psolab

#endif  // PSOLAB_RNG_HPP_
