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

#ifndef PSOLAB_UINT128_HPP_
#define PSOLAB_UINT128_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace psolab {

using u128 = unsigned __int128;

// All-ones mask of the low `bits` bits, bits in [0, 128].
constexpr u128 low_mask(int bits) {
  if (bits >= 128) return ~u128{0};
  if (bits <= 0) return 0;
  return (u128{1} << bits) - 1;
}

constexpr u128 make_u128(std::uint64_t hi, std::uint64_t lo) {
  return (u128{hi} << 64) | lo;
}

inline int popcount128(u128 v) {
  return __builtin_popcountll(static_cast<std::uint64_t>(v)) +
         __builtin_popcountll(static_cast<std::uint64_t>(v >> 64));
}

// Lowercase hex, zero-padded to ceil(bits/4) digits, with "0x" prefix.
std::string to_hex(u128 v, int bits);

// Accepts an optional 0x prefix. Throws InputError on bad digits or overflow.
u128 parse_hex(std::string_view text);

// Decimal rendering; used for report fields that may exceed 64 bits.
std::string to_decimal(u128 v);

}  // namespace psolab

#endif  // PSOLAB_UINT128_HPP_
