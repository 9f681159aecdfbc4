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

#include "psolab/gf2_hash.hpp"

#include <string>

#include "psolab/errors.hpp"

namespace psolab {

bool FieldWidth::supported(int d) {
  return d == 8 || d == 16 || d == 32 || d == 64 || d == 128;
}

FieldWidth FieldWidth::of(int d) {
  if (!supported(d)) {
    throw ConfigError("unsupported field width " + std::to_string(d) +
                      " (expected one of 8, 16, 32, 64, 128)");
  }
  return FieldWidth(d);
}

u128 FieldWidth::reduction() const {
  switch (bits_) {
    case 8: return kPoly8;
    case 16: return kPoly16;
    case 32: return kPoly32;
    case 64: return kPoly64;
    default: return kPoly128;
  }
}

namespace {

// Carry-less product of a and b, both below 2^64, 4 bits of b at a time.
u128 clmul64(u128 a, u128 b, int d) {
  u128 table[16];
  table[0] = 0;
  table[1] = a;
  for (int j = 2; j < 16; ++j) {
    table[j] = (j & 1) ? table[j - 1] ^ a : table[j / 2] << 1;
  }
  u128 prod = 0;
  for (int shift = ((d + 3) / 4 - 1) * 4; shift >= 0; shift -= 4) {
    prod = (prod << 4) ^ table[static_cast<int>((b >> shift) & 0xF)];
  }
  return prod;
}

// Folds the bits at and above x^d back using x^d = tail.
u128 reduce(u128 prod, int d, u128 tail) {
  const u128 mask = low_mask(d);
  for (u128 high = prod >> d; high != 0; high = prod >> d) {
    prod &= mask;
    for (u128 t = tail; t != 0; t &= t - 1) {
      prod ^= high << __builtin_ctzll(static_cast<std::uint64_t>(t));
    }
  }
  return prod;
}

u128 mul128(u128 a, u128 b) {
  u128 r = 0;
  for (int i = 127; i >= 0; --i) {
    const u128 carry = r >> 127;
    r = (r << 1) ^ (kPoly128 & (u128{0} - carry));
    r ^= a & (u128{0} - ((b >> i) & 1));
  }
  return r;
}

}  // namespace

u128 gf_mul(u128 a, u128 b, FieldWidth d) {
  const int bits = d.bits();
  if (bits == 128) return mul128(a, b);
  return reduce(clmul64(a, b, bits), bits, d.reduction());
}

HashParams HashParams::make(u128 a, u128 b, int m, int d) {
  const FieldWidth field = FieldWidth::of(d);
  if (m < 1 || m > d) {
    throw ParameterError("hash output width m=" + std::to_string(m) +
                         " outside [1, " + std::to_string(d) + "]");
  }
  if (a == 0) throw ParameterError("hash multiplier a must be nonzero");
  if (((a | b) & ~field.mask()) != 0) {
    throw ParameterError("hash parameters exceed " + std::to_string(d) +
                         " bits");
  }
  return HashParams{a, b, m, d};
}

u128 hash_value(const HashParams& params, u128 x) {
  const u128 y = gf_mul(params.a, x, FieldWidth::of(params.d)) ^ params.b;
  return y >> (params.d - params.m);
}

u128 hash_eval(const HashParams& params, const Row& x) {
  if (x.width() != params.d) {
    throw InputError("row width " + std::to_string(x.width()) +
                     " does not match hash width " + std::to_string(params.d));
  }
  return hash_value(params, x.value());
}

HashParams sample_hash(Rng& rng, FieldWidth d, int m) {
  if (m < 1 || m > d.bits()) {
    throw ConfigError("hash output width m=" + std::to_string(m) +
                      " outside [1, " + std::to_string(d.bits()) + "]");
  }
  const u128 a = rng.in_range(1, d.mask());
  const u128 b = rng.bits(d.bits());
  return HashParams{a, b, m, d.bits()};
}

std::string to_string(const HashParams& params) {
  return "a=" + to_hex(params.a, params.d) + ",b=" + to_hex(params.b, params.d) +
         ",m=" + std::to_string(params.m) + ",d=" + std::to_string(params.d);
}

}  // namespace psolab
