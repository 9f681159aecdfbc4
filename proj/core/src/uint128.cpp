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

#include "psolab/uint128.hpp"

#include <algorithm>

#include "psolab/errors.hpp"

namespace psolab {

std::string to_hex(u128 v, int bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const int digits = std::max(1, (bits + 3) / 4);
  std::string out(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[static_cast<int>(v & 0xF)];
    v >>= 4;
  }
  return "0x" + out;
}

u128 parse_hex(std::string_view text) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.empty()) throw InputError("empty hex literal");
  if (text.size() > 32) {
    const auto first = text.find_first_not_of('0');
    if (first == std::string_view::npos) return 0;
    text.remove_prefix(first);
    if (text.size() > 32) throw InputError("hex literal exceeds 128 bits");
  }
  u128 v = 0;
  for (char c : text) {
    int digit;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      digit = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      digit = c - 'A' + 10;
    } else {
      throw InputError("invalid hex digit '" + std::string(1, c) + "'");
    }
    v = (v << 4) | static_cast<u128>(digit);
  }
  return v;
}

std::string to_decimal(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace psolab
