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

#ifndef PSOLAB_PREDICATE_HPP_
#define PSOLAB_PREDICATE_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "psolab/gf2_hash.hpp"
#include "psolab/rational.hpp"
#include "psolab/row.hpp"

namespace psolab {

class Predicate;

namespace pred {

// x < bound
struct Threshold {
  u128 bound;
};
// x[index] == bit, index 1-based MSB-first
struct BitTest {
  int index;
  bool bit;
};
// r(h(x)) <= bound (or < when strict), r(y) = y / (2^m - 1).
// `accepted` is the number of m-bit values y that satisfy the bound; the
// accepted set is always the prefix {0, ..., accepted - 1}.
struct HashThreshold {
  HashParams hash;
  Rational bound;
  bool strict;
  u128 accepted_minus_one;  // valid only when any_accepted
  bool any_accepted;
};
struct Equality {
  u128 value;
};
// Bits where care is set must match value; other bits are free.
struct Pattern {
  u128 care;
  u128 value;
};
// lo <= x <= hi
struct Interval {
  u128 lo;
  u128 hi;
};
// XOR of all bits equals 1.
struct Parity {};
// The bits of x at positions selected by mask, concatenated MSB-first into
// an integer, compare >= min_value.
struct ProjectedAtLeast {
  u128 mask;
  u128 min_value;
};
// inner(h(x)), inner has width h.m. Produced by adversaries against
// hash-lifted mechanisms.
struct Lift {
  HashParams hash;
  std::shared_ptr<const Predicate> inner;
};
struct And {
  std::vector<Predicate> children;
};
struct Or {
  std::vector<Predicate> children;
};
struct Not {
  std::shared_ptr<const Predicate> child;
};

using Node = std::variant<Threshold, BitTest, HashThreshold, Equality, Pattern,
                          Interval, Parity, ProjectedAtLeast, Lift, And, Or,
                          Not>;

}  // namespace pred

// Immutable predicate over width-d rows. Cheap to copy; subtrees are shared.
class Predicate {
 public:
  // Leaf constructors validate their arguments against d and throw
  // ParameterError (or InputError for widths) when they do not fit.
  static Predicate threshold(int d, u128 bound);
  static Predicate bit_test(int d, int index, bool bit);
  static Predicate hash_threshold(const HashParams& h, Rational bound,
                                  bool strict);
  static Predicate equality(int d, u128 value);
  static Predicate pattern(int d, u128 care, u128 value);
  // "1*1" (or with U+22C6 for the star); length gives the width.
  static Predicate pattern(std::string_view text);
  static Predicate interval(int d, u128 lo, u128 hi);
  static Predicate parity(int d);
  static Predicate projected_at_least(int d, u128 mask, u128 min_value);
  static Predicate lift(const HashParams& h, Predicate inner);
  // Children must share one width; throws InputError otherwise.
  static Predicate all_of(std::vector<Predicate> children);
  static Predicate any_of(std::vector<Predicate> children);
  static Predicate negate(Predicate child);

  static Predicate always_false(int d) { return threshold(d, 0); }
  static Predicate always_true(int d) { return negate(always_false(d)); }

  int width() const { return width_; }
  const pred::Node& node() const { return *node_; }

  // Unchecked evaluation on a raw value of the predicate's width.
  bool operator()(u128 x) const;

  // Throws InputError on width mismatch.
  bool eval(const Row& x) const;

  friend Predicate operator&&(Predicate a, Predicate b);
  friend Predicate operator||(Predicate a, Predicate b);
  friend Predicate operator!(Predicate a);

 private:
  Predicate(int width, pred::Node node);

  int width_;
  std::shared_ptr<const pred::Node> node_;
};

// Number of rows of x satisfying p, stopping early once `stop_at` is reached.
std::size_t count_matches(const Predicate& p, const Dataset& x,
                          std::size_t stop_at = static_cast<std::size_t>(-1));

// Exactly one row of x satisfies p. Throws InputError on width mismatch.
bool isolates(const Predicate& p, const Dataset& x);

// Compact human-readable rendering, e.g. "and(lt(0x2),bit(1=1))".
std::string to_string(const Predicate& p);

// JSON schema: {"op": <name>, "d": <width>, ...operands}. Values are hex
// strings; rationals are "num/den" strings.
nlohmann::json to_json(const Predicate& p);
Predicate predicate_from_json(const nlohmann::json& j);

}  // namespace psolab

#endif  // PSOLAB_PREDICATE_HPP_
