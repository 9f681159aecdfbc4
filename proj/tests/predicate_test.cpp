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

#include "psolab/predicate.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/random_predicates.hpp"
#include "psolab/errors.hpp"
#include "psolab/rational.hpp"
#include "psolab/rng.hpp"
#include "psolab/row.hpp"

namespace psolab {
namespace {

TEST(PredicateTest, ThresholdAndBitTest) {
  const Predicate t = Predicate::threshold(3, 2);
  EXPECT_TRUE(t(0));
  EXPECT_TRUE(t(1));
  EXPECT_FALSE(t(2));
  const Predicate b = Predicate::bit_test(3, 1, true);
  EXPECT_TRUE(b(0b100));
  EXPECT_FALSE(b(0b011));
  EXPECT_THROW(Predicate::bit_test(3, 4, true), ParameterError);
  EXPECT_THROW(Predicate::threshold(3, 9), ParameterError);
  EXPECT_NO_THROW(Predicate::threshold(3, 8));
}

TEST(PredicateTest, PatternText) {
  // Suppressed positions 2 and 4.
  const Predicate p = Predicate::pattern("1⋆1⋆");
  EXPECT_EQ(p.width(), 4);
  EXPECT_TRUE(p(0b1010));
  EXPECT_TRUE(p(0b1111));
  EXPECT_FALSE(p(0b0010));
  EXPECT_FALSE(p(0b1000));
  const Predicate q = Predicate::pattern("0*1");
  EXPECT_TRUE(q(0b001));
  EXPECT_TRUE(q(0b011));
  EXPECT_FALSE(q(0b101));
  EXPECT_THROW(Predicate::pattern("10x"), ParameterError);
}

TEST(PredicateTest, IntervalEqualityParityProjection) {
  const Predicate iv = Predicate::interval(8, 10, 12);
  EXPECT_FALSE(iv(9));
  EXPECT_TRUE(iv(10));
  EXPECT_TRUE(iv(12));
  EXPECT_FALSE(iv(13));
  EXPECT_TRUE(Predicate::equality(8, 7)(7));
  EXPECT_FALSE(Predicate::equality(8, 7)(6));
  EXPECT_TRUE(Predicate::parity(8)(0b0111));
  EXPECT_FALSE(Predicate::parity(8)(0b0110));
  // Positions 2 and 4 of a 4-bit row, read MSB-first, at least 2.
  const Predicate pk = Predicate::projected_at_least(4, 0b0101, 2);
  EXPECT_TRUE(pk(0b0100));
  EXPECT_TRUE(pk(0b0101));
  EXPECT_FALSE(pk(0b0001));
  EXPECT_FALSE(pk(0b1010));
}

TEST(PredicateTest, HashThresholdRoundingExample) {
  // w = 4/16 with a strict bound: r(y) = y/15 < 1/4 holds for y <= 3 only.
  const HashParams identity = HashParams::make(1, 0, 4, 8);
  const Predicate q = Predicate::hash_threshold(identity, Rational(1, 4), true);
  for (u128 x = 0; x < 256; ++x) EXPECT_EQ(q(x), (x >> 4) <= 3) << static_cast<int>(x);
  const auto& node = std::get<pred::HashThreshold>(q.node());
  EXPECT_EQ(node.accepted_minus_one, 3u);

  // Non-strict at an exact grid point includes it: y/15 <= 3/15.
  const Predicate r = Predicate::hash_threshold(identity, Rational(3, 15), false);
  EXPECT_TRUE(r(0x30));
  EXPECT_FALSE(r(0x40));
  const Predicate none = Predicate::hash_threshold(identity, Rational(0), true);
  EXPECT_FALSE(none(0));
  const Predicate all = Predicate::hash_threshold(identity, Rational(1), false);
  EXPECT_TRUE(all(0xFF));
}

TEST(PredicateTest, LiftAppliesHashFirst) {
  const HashParams h = HashParams::make(1, 0, 4, 8);
  const Predicate inner = Predicate::equality(4, 0xA);
  const Predicate lifted = Predicate::lift(h, inner);
  EXPECT_EQ(lifted.width(), 8);
  EXPECT_TRUE(lifted(0xA3));
  EXPECT_FALSE(lifted(0x3A));
  EXPECT_THROW(Predicate::lift(h, Predicate::equality(8, 1)), InputError);
}

TEST(PredicateTest, CombinatorsRequireMatchingWidths) {
  EXPECT_THROW(Predicate::threshold(8, 1) && Predicate::threshold(4, 1), InputError);
  EXPECT_THROW(Predicate::all_of({}), ParameterError);
  EXPECT_FALSE(Predicate::always_false(8)(0));
  EXPECT_TRUE(Predicate::always_true(8)(0));
  EXPECT_THROW(Predicate::threshold(8, 1).eval(Row(0, 4)), InputError);
}

TEST(PredicateTest, BooleanIdentitiesExhaustiveD8) {
  Rng rng(100);
  oracle::TreeOptions opt;
  for (int t = 0; t < 60; ++t) {
    const Predicate a = oracle::random_tree(8, rng, opt);
    const Predicate b = oracle::random_tree(8, rng, opt);
    const Predicate lhs1 = !(a && b);
    const Predicate rhs1 = !a || !b;
    const Predicate lhs2 = !(a || b);
    const Predicate rhs2 = !a && !b;
    const Predicate dbl = !!a;
    for (u128 x = 0; x < 256; ++x) {
      ASSERT_EQ(lhs1(x), rhs1(x));
      ASSERT_EQ(lhs2(x), rhs2(x));
      ASSERT_EQ(dbl(x), a(x));
      ASSERT_EQ((a && b)(x), a(x) && b(x));
      ASSERT_EQ((a || b)(x), a(x) || b(x));
    }
  }
}

TEST(PredicateTest, IsolationMatchesBruteForceCount) {
  Rng rng(101);
  oracle::TreeOptions opt;
  for (int t = 0; t < 300; ++t) {
    const Predicate p = oracle::random_tree(8, rng, opt);
    const std::size_t n = static_cast<std::size_t>(rng.in_range(1, 16));
    std::vector<u128> rows(n);
    for (auto& r : rows) r = rng.bits(8);
    const Dataset x(8, rows);
    std::size_t brute = 0;
    for (u128 v : rows) brute += p(v) ? 1 : 0;
    EXPECT_EQ(count_matches(p, x), brute);
    EXPECT_EQ(isolates(p, x), brute == 1);
  }
}

TEST(PredicateTest, IsolationIsPermutationInvariant) {
  Rng rng(102);
  oracle::TreeOptions opt;
  for (int t = 0; t < 100; ++t) {
    const Predicate p = oracle::random_tree(8, rng, opt);
    std::vector<u128> rows(12);
    for (auto& r : rows) r = rng.bits(8);
    const Dataset x(8, rows);
    std::vector<std::size_t> sigma(rows.size());
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    std::reverse(sigma.begin(), sigma.end());
    std::swap(sigma[0], sigma[5]);
    EXPECT_EQ(isolates(p, x), isolates(p, permute_dataset(x, sigma)));
  }
}

TEST(PredicateTest, CountStopsEarly) {
  const Dataset x(8, {1, 1, 1, 1});
  EXPECT_EQ(count_matches(Predicate::equality(8, 1), x, 2), 2u);
  EXPECT_THROW(count_matches(Predicate::equality(4, 1), x), InputError);
}

TEST(PredicateTest, JsonRoundTripPreservesSemantics) {
  Rng rng(103);
  oracle::TreeOptions opt;
  for (int t = 0; t < 100; ++t) {
    const Predicate p = oracle::random_tree(8, rng, opt);
    const Predicate q = predicate_from_json(to_json(p));
    EXPECT_EQ(to_string(p), to_string(q));
    for (u128 x = 0; x < 256; ++x) ASSERT_EQ(p(x), q(x));
  }
  EXPECT_THROW(predicate_from_json(nlohmann::json{{"op", "nope"}, {"d", 8}}), InputError);
}

TEST(PredicateTest, RenderingIsCompact) {
  const Predicate p = Predicate::threshold(3, 2) && Predicate::bit_test(3, 1, true);
  EXPECT_EQ(to_string(p), "and(lt(0x2),bit(1=1))");
}

}  // namespace
}  // namespace psolab
