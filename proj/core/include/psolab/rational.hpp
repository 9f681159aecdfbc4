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

#ifndef PSOLAB_RATIONAL_HPP_
#define PSOLAB_RATIONAL_HPP_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace psolab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "a/b", a decimal ("0.00273972", "1e-3"), "2^-k" or "inf".
// Decimals are converted exactly from their digits, not through double.
// Throws ConfigError on malformed input; "inf" is rejected here.
Rational parse_rational(std::string_view text);

// Exact conversion of a finite double.
Rational rational_from_double(double v);

// "num/den" (or "num" when den == 1).
std::string to_string(const Rational& r);

long double to_long_double(const Rational& r);

// 2^e for any integer e.
Rational pow2(int e);

// Low 128 bits of a non-negative integer.
unsigned __int128 to_u128(const BigInt& v);
BigInt from_u128(unsigned __int128 v);

}  // namespace psolab

#endif  // PSOLAB_RATIONAL_HPP_
