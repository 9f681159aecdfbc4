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

#include "psolab/rng.hpp"

#include <array>
#include <bit>

namespace psolab {

Rng::Rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

Rng Rng::for_trial(std::uint64_t master_seed, std::uint64_t trial,
                   StreamRole role) {
  Rng rng(0);
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(role)};
  rng.engine_.seed(seq);
  return rng;
}

u128 Rng::bits(int bits) {
  if (bits <= 0) return 0;
  if (bits <= 64) {
    return static_cast<u128>(next_u64() >> (64 - bits));
  }
  const std::uint64_t hi = next_u64() >> (128 - bits);
  const std::uint64_t lo = next_u64();
  return make_u128(hi, lo);
}

u128 Rng::below(u128 bound) {
  if (bound <= 1) return 0;
  const u128 top = bound - 1;
  const auto hi = static_cast<std::uint64_t>(top >> 64);
  const int width = hi != 0 ? 128 - std::countl_zero(hi)
                            : 64 - std::countl_zero(static_cast<std::uint64_t>(top));
  for (;;) {
    const u128 v = bits(width);
    if (v < bound) return v;
  }
}

u128 Rng::in_range(u128 lo, u128 hi) {
  if (lo == 0 && hi == ~u128{0}) return bits(128);
  return lo + below(hi - lo + 1);
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace psolab
