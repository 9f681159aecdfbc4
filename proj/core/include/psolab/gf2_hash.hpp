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

#ifndef PSOLAB_GF2_HASH_HPP_
#define PSOLAB_GF2_HASH_HPP_

#include <string>

#include "psolab/rng.hpp"
#include "psolab/row.hpp"
#include "psolab/uint128.hpp"

namespace psolab {

// Reduction polynomials, low-order terms only (the x^d term is implicit).
// These are the lowest-weight irreducible polynomials of each degree.
inline constexpr u128 kPoly8 = 0x1B;     // x^8 + x^4 + x^3 + x + 1
inline constexpr u128 kPoly16 = 0x2B;    // x^16 + x^5 + x^3 + x + 1
inline constexpr u128 kPoly32 = 0x8D;    // x^32 + x^7 + x^3 + x^2 + 1
inline constexpr u128 kPoly64 = 0x1B;    // x^64 + x^4 + x^3 + x + 1
inline constexpr u128 kPoly128 = 0x87;   // x^128 + x^7 + x^2 + x + 1

// Bit width of a supported binary field GF(2^d), d in {8, 16, 32, 64, 128}.
class FieldWidth {
 public:
  // Throws ConfigError for unsupported d.
  static FieldWidth of(int d);
  static bool supported(int d);

  int bits() const { return bits_; }
  u128 mask() const { return low_mask(bits_); }
  u128 reduction() const;

  friend bool operator==(FieldWidth, FieldWidth) = default;

 private:
  explicit FieldWidth(int bits) : bits_(bits) {}
  int bits_;
};

// Product in GF(2^d) under the fixed reduction polynomial for d.
// Operands must already be < 2^d.
u128 gf_mul(u128 a, u128 b, FieldWidth d);

// Member of the hash family h_{a,b}(x) = top m bits of (a*x + b) in GF(2^d).
// a != 0 keeps x -> a*x + b a bijection, so the family is almost-universal
// with collision probability (2^{d-m} - 1) / (2^d - 1) <= 2^{-m}.
struct HashParams {
  u128 a = 1;
  u128 b = 0;
  int m = 1;
  int d = 8;

  // Throws ParameterError on a == 0, out-of-range m or unsupported d.
  static HashParams make(u128 a, u128 b, int m, int d);

  FieldWidth field() const { return FieldWidth::of(d); }

  friend bool operator==(const HashParams&, const HashParams&) = default;
};

// Unchecked evaluation on a raw width-d value.
u128 hash_value(const HashParams& params, u128 x);

// Top m bits of gf_mul(a, x) XOR b. Throws InputError on width mismatch.
u128 hash_eval(const HashParams& params, const Row& x);

// a uniform on [1, 2^d), b uniform on [0, 2^d). Throws ConfigError if m is
// outside [1, d] or d is unsupported.
HashParams sample_hash(Rng& rng, FieldWidth d, int m);

// "a=0x..,b=0x..,m=..,d=.." form used in reports.
std::string to_string(const HashParams& params);

}  // namespace psolab

#endif  // PSOLAB_GF2_HASH_HPP_
