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

#include "psolab/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>

#include "psolab/errors.hpp"

namespace psolab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Boost reads a leading 0 as an octal prefix, so strip it first.
BigInt decimal_digits(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return BigInt(0);
  return BigInt(std::string(digits.substr(first)));
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw ConfigError("malformed number '" + std::string(whole) + "'");
  }
  BigInt v = decimal_digits(s);
  return negative ? BigInt(-v) : v;
}

int parse_small_int(std::string_view s, std::string_view whole) {
  const BigInt v = parse_integer(s, whole);
  if (abs(v) > 100000) {
    throw ConfigError("exponent out of range in '" + std::string(whole) + "'");
  }
  return v.convert_to<int>();
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  int exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = parse_small_int(s.substr(e + 1), whole);
    s = s.substr(0, e);
  }
  std::string digits;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw ConfigError("malformed number '" + std::string(whole) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<int>(frac_part.size());
  } else {
    if (!all_digits(s)) {
      throw ConfigError("malformed number '" + std::string(whole) + "'");
    }
    digits = std::string(s);
  }
  Rational v{decimal_digits(digits)};
  const BigInt scale = boost::multiprecision::pow(BigInt(10), std::abs(exponent));
  v = exponent >= 0 ? Rational(v * scale) : Rational(v / scale);
  return negative ? Rational(-v) : v;
}

}  // namespace

unsigned __int128 to_u128(const BigInt& v) {
  const BigInt mask64 = (BigInt(1) << 64) - 1;
  const auto lo = static_cast<std::uint64_t>((v & mask64).convert_to<unsigned long long>());
  const auto hi =
      static_cast<std::uint64_t>(((v >> 64) & mask64).convert_to<unsigned long long>());
  return (static_cast<unsigned __int128>(hi) << 64) | lo;
}

BigInt from_u128(unsigned __int128 v) {
  return (BigInt(static_cast<unsigned long long>(v >> 64)) << 64) |
         BigInt(static_cast<unsigned long long>(v));
}

Rational pow2(int e) {
  const BigInt p = BigInt(1) << std::abs(e);
  return e >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ConfigError("empty number");
  if (s == "inf" || s == "+inf" || s == "infinity") {
    throw ConfigError("infinite value not allowed here");
  }
  if (s.starts_with("2^")) {
    return pow2(parse_small_int(s.substr(2), s));
  }
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(trim(s.substr(0, slash)), s);
    const BigInt den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
  }
  return parse_decimal(s, s);
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw ConfigError("non-finite value");
  if (v == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  return Rational(BigInt(scaled)) * pow2(exp - 53);
}

std::string to_string(const Rational& r) {
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

long double to_long_double(const Rational& r) {
  // Scale both parts down together so neither overflows long double.
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  const auto bits = [](const BigInt& v) -> std::size_t {
    return v == 0 ? 0 : boost::multiprecision::msb(abs(v)) + 1;
  };
  const std::size_t limit = 16000;
  if (bits(den) > limit || bits(num) > limit) {
    const std::size_t shift = std::max(bits(den), bits(num)) - limit;
    num >>= shift;
    den >>= shift;
    if (den == 0) return num == 0 ? 0.0L : HUGE_VALL;
  }
  return num.convert_to<long double>() / den.convert_to<long double>();
}

}  // namespace psolab
