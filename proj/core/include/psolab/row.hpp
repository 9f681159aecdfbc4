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

#ifndef PSOLAB_ROW_HPP_
#define PSOLAB_ROW_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "psolab/uint128.hpp"

namespace psolab {

// Largest supported record width in bits.
inline constexpr int kMaxWidth = 128;

// A fixed-width bit-string record. Bit 1 is the most significant bit of the
// d-bit representation, bit d the least significant.
class Row {
 public:
  // Throws InputError unless 1 <= width <= 128 and value < 2^width.
  Row(u128 value, int width);

  u128 value() const { return value_; }
  int width() const { return width_; }

  // 1-based, MSB-first.
  bool bit(int index) const;
  bool lsb() const { return (value_ & 1) != 0; }

  friend bool operator==(const Row&, const Row&) = default;

 private:
  u128 value_;
  int width_;
};

// 1-based MSB-first bit of a width-d value; no range checks.
constexpr bool bit_at(u128 value, int index, int width) {
  return ((value >> (width - index)) & 1) != 0;
}

// Ordered collection of n >= 1 rows sharing one width.
class Dataset {
 public:
  // Throws InputError if rows is empty, width is out of range, or a value
  // does not fit in width bits.
  Dataset(int width, std::vector<u128> rows);

  int width() const { return width_; }
  std::size_t size() const { return rows_.size(); }
  Row row(std::size_t i) const { return Row(rows_[i], width_); }
  u128 operator[](std::size_t i) const { return rows_[i]; }
  std::span<const u128> values() const { return rows_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  int width_;
  std::vector<u128> rows_;
};

// sigma(x) = (x_{sigma(1)}, ..., x_{sigma(n)}), sigma given 0-based.
// Throws InputError unless sigma is a bijection on [0, n).
Dataset permute_dataset(const Dataset& x, std::span<const std::size_t> sigma);

}  // namespace psolab

#endif  // PSOLAB_ROW_HPP_
