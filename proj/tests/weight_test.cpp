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

#include "psolab/weight.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "oracles/random_predicates.hpp"
#include "psolab/distribution.hpp"
#include "psolab/errors.hpp"
#include "psolab/stats.hpp"

namespace psolab {
namespace {

// Direct sum over all 2^d rows of the point probabilities.
long double brute_weight(const Predicate& p, const Distribution& dist) {
  long double total = 0.0L;
  const std::uint64_t count = std::uint64_t{1} << dist.width();
  for (std::uint64_t x = 0; x < count; ++x) {
    if (p(x)) total += dist.point_probability(x);
  }
  return total;
}

TEST(WeightTest, AnalyticAgreesWithEnumeration) {
  Rng rng(200);
  int analytic_cases = 0;
  for (const auto& dist : {Distribution::uniform(8), Distribution::bernoulli(8, 0.3),
                           Distribution::uniform(16), Distribution::bernoulli(16, 0.7)}) {
    oracle::TreeOptions opt;
    for (int t = 0; t < 150; ++t) {
      const Predicate p = oracle::random_tree(dist.width(), rng, opt);
      const long double exact = enumerate_weight(p, dist);
      if (dist.width() == 8) {
        ASSERT_NEAR(static_cast<double>(exact), static_cast<double>(brute_weight(p, dist)), 1e-12);
      }
      if (const auto a = analytic_weight(p, dist)) {
        ++analytic_cases;
        ASSERT_NEAR(static_cast<double>(*a), static_cast<double>(exact), 1e-12) << to_string(p);
      }
    }
  }
  EXPECT_GT(analytic_cases, 200);
}

TEST(WeightTest, AnalyticCoversIntervalPatternConjunctionsAtWidth128) {
  const auto dist = Distribution::uniform(128);
  const Predicate p = Predicate::interval(128, 0, (u128{1} << 100) - 1) &&
                      Predicate::bit_test(128, 128, true);
  const auto w = analytic_weight(p, dist);
  ASSERT_TRUE(w.has_value());
  EXPECT_DOUBLE_EQ(static_cast<double>(*w), std::ldexp(1.0, -29));
  const Predicate e = Predicate::equality(128, 12345);
  EXPECT_DOUBLE_EQ(static_cast<double>(*analytic_weight(e, dist)), std::ldexp(1.0, -128));
}

TEST(WeightTest, CountingPredicateWeightIsAtMostTwoToMinusM) {
  // Threshold(2^40/128) and all 40 bits fixed: weight 2^-40 or 0.
  const int m = 40;
  const auto dist = Distribution::uniform(m);
  const Predicate q0 = Predicate::threshold(m, (u128{1} << m) / 128);
  Predicate inside = q0;
  Predicate outside = q0;
  const u128 y_in = 12345;
  const u128 y_out = (u128{1} << m) - 1;
  for (int i = 1; i <= m; ++i) {
    inside = inside && Predicate::bit_test(m, i, bit_at(y_in, i, m));
    outside = outside && Predicate::bit_test(m, i, bit_at(y_out, i, m));
  }
  EXPECT_EQ(*analytic_weight(inside, dist), std::ldexp(1.0L, -40));
  EXPECT_EQ(*analytic_weight(outside, dist), 0.0L);
}

TEST(WeightTest, MonteCarloCoversExactWeight) {
  // The estimate's own 99% Wilson interval should cover the exact weight.
  Rng rng(201);
  const auto dist = Distribution::bernoulli(16, 0.4);
  const Predicate p = Predicate::parity(16) || Predicate::threshold(16, 9000);
  const double exact = static_cast<double>(enumerate_weight(p, dist));
  int covered = 0;
  const int runs = 500;
  for (int t = 0; t < runs; ++t) {
    const WeightEstimate est = monte_carlo_weight(p, dist, 2000, rng);
    const auto hits = static_cast<std::uint64_t>(std::llround(est.value * 2000));
    const Interval95 ci = wilson_interval(hits, 2000, 2.5758293035489);
    covered += (ci.low <= exact && exact <= ci.high) ? 1 : 0;
  }
  EXPECT_GE(covered, 490);
}

TEST(WeightTest, UpperBoundIsSound) {
  Rng rng(202);
  const auto dist = Distribution::bernoulli(16, 0.8);
  oracle::TreeOptions opt;
  WeightBudget budget;
  int bounded = 0;
  for (int t = 0; t < 300; ++t) {
    const Predicate p = oracle::random_tree(16, rng, opt);
    const long double exact = enumerate_weight(p, dist);
    if (const auto b = weight_upper_bound(p, dist, budget)) {
      ++bounded;
      ASSERT_GE(static_cast<double>(*b) + 1e-12, static_cast<double>(exact)) << to_string(p);
    }
  }
  EXPECT_GT(bounded, 30);
}

TEST(WeightTest, MethodSelection) {
  Rng rng(203);
  const WeightBudget budget;
  const auto e1 = predicate_weight(Predicate::pattern("1**0"), Distribution::uniform(4),
                                   budget, rng);
  EXPECT_EQ(e1.method, WeightMethod::kExactAnalytic);
  EXPECT_DOUBLE_EQ(e1.value, 0.25);

  const HashParams h16 = HashParams::make(3, 5, 4, 16);
  const auto e2 = predicate_weight(Predicate::hash_threshold(h16, Rational(1, 2), false),
                                   Distribution::bernoulli(16, 0.7), budget, rng);
  EXPECT_EQ(e2.method, WeightMethod::kExactEnumeration);

  const HashParams h128 = HashParams::make(3, 5, 64, 128);
  const Predicate light = Predicate::pattern(128, low_mask(40), 7) &&
                          Predicate::hash_threshold(h128, Rational(1, 4), true);
  const auto e3 = predicate_weight(light, Distribution::uniform(128), budget, rng);
  EXPECT_EQ(e3.method, WeightMethod::kUpperBound);
  EXPECT_DOUBLE_EQ(e3.value, std::ldexp(1.0, -40));

  const HashParams h64 = HashParams::make(3, 5, 8, 64);
  const auto e4 = predicate_weight(Predicate::hash_threshold(h64, Rational(1, 2), false),
                                   Distribution::bernoulli(64, 0.6), budget, rng);
  EXPECT_EQ(e4.method, WeightMethod::kMonteCarlo);
  EXPECT_GT(e4.half_width, 0.0);

  const auto cat = Distribution::categorical(64, {1, 2, 3}, {0.5, 0.25, 0.25});
  const auto e5 = predicate_weight(Predicate::threshold(64, 3), cat, budget, rng);
  EXPECT_EQ(e5.method, WeightMethod::kExactEnumeration);
  EXPECT_DOUBLE_EQ(e5.value, 0.75);

  EXPECT_THROW(predicate_weight(Predicate::parity(8), Distribution::uniform(16), budget, rng),
               InputError);
}

TEST(WeightTest, HashThresholdUnderUniformIsExact) {
  const auto dist = Distribution::uniform(64);
  const HashParams h = HashParams::make(0x1234567, 99, 32, 64);
  const Predicate p = Predicate::hash_threshold(h, Rational(1, 365), false);
  const auto w = analytic_weight(p, dist);
  ASSERT_TRUE(w.has_value());
  const auto& node = std::get<pred::HashThreshold>(p.node());
  EXPECT_EQ(*w, std::ldexp(static_cast<long double>(node.accepted_minus_one) + 1, -32));
}

TEST(WeightTest, MethodNames) {
  EXPECT_EQ(to_string(WeightMethod::kExactAnalytic), "exact-analytic");
  EXPECT_EQ(to_string(WeightMethod::kExactEnumeration), "exact-enumeration");
  EXPECT_EQ(to_string(WeightMethod::kMonteCarlo), "monte-carlo");
  EXPECT_EQ(to_string(WeightMethod::kUpperBound), "upper-bound");
}

}  // namespace
}  // namespace psolab
