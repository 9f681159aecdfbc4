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

#include "psolab/row.hpp"

#include <string>

#include "psolab/errors.hpp"

namespace psolab {

namespace {

void check_width(int width) {
  if (width < 1 || width > kMaxWidth) {
    throw InputError("row width " + std::to_string(width) +
                     " outside [1, 128]");
  }
}

}  // namespace

Row::Row(u128 value, int width) : value_(value), width_(width) {
  check_width(width);
  if ((value & ~low_mask(width)) != 0) {
    throw InputError("row value " + to_hex(value, 128) + " does not fit in " +
                     std::to_string(width) + " bits");
  }
}

bool Row::bit(int index) const {
  if (index < 1 || index > width_) {
    throw InputError("bit index " + std::to_string(index) + " outside [1, " +
                     std::to_string(width_) + "]");
  }
  return bit_at(value_, index, width_);
}

Dataset::Dataset(int width, std::vector<u128> rows)
    : width_(width), rows_(std::move(rows)) {
  check_width(width);
  if (rows_.empty()) throw InputError("dataset must contain at least one row");
  const u128 over = ~low_mask(width);
  for (u128 v : rows_) {
    if ((v & over) != 0) {
      throw InputError("dataset row " + to_hex(v, 128) + " does not fit in " +
                       std::to_string(width) + " bits");
    }
  }
}

Dataset permute_dataset(const Dataset& x, std::span<const std::size_t> sigma) {
  const std::size_t n = x.size();
  if (sigma.size() != n) {
    throw InputError("permutation has " + std::to_string(sigma.size()) +
                     " entries for a dataset of " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  std::vector<u128> rows;
  rows.reserve(n);
  for (std::size_t target : sigma) {
    if (target >= n || seen[target]) {
      throw InputError("not a permutation of [0, n)");
    }
    seen[target] = true;
    rows.push_back(x[target]);
  }
  return Dataset(x.width(), std::move(rows));
}

}  // namespace psolab
