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

#include "psolab/adversaries.hpp"

#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "psolab/distribution.hpp"
#include "psolab/errors.hpp"
#include "psolab/weight.hpp"

namespace psolab {
namespace {

Counts make_counts(std::vector<std::optional<std::uint64_t>> v) {
  Counts c;
  c.values = std::move(v);
  return c;
}

PredicateFamily family_of(std::vector<std::pair<Predicate, std::size_t>> entries) {
  PredicateFamily f;
  for (auto& [p, c] : entries) f.entries.push_back({p, c});
  return f;
}

TEST(CountingAttackTest, QueriesMatchConstruction) {
  const auto q = counting_attack_queries(4, 3, 1);
  ASSERT_EQ(q.size(), 4u);
  EXPECT_EQ(to_string(q[0]), "lt(0x2)");
  for (u128 x = 0; x < 8; ++x) {
    for (int i = 1; i <= 3; ++i) {
      EXPECT_EQ(q[static_cast<std::size_t>(i)](x), x < 2 && bit_at(x, i, 3));
    }
  }
  const auto w = analytic_weight(counting_attack_queries(100, 12, 1)[0], Distribution::uniform(12));
  EXPECT_EQ(*w, 40.0L / 4096.0L);
  EXPECT_LE(*w, 1.0L / 100);
}

TEST(CountingAttackTest, RepeatedSlicesAreDisjoint) {
  const auto q = counting_attack_queries(16, 8, 2);
  ASSERT_EQ(q.size(), 18u);
  const Predicate& s1 = q[0];
  const Predicate& s2 = q[9];
  for (u128 x = 0; x < 256; ++x) EXPECT_FALSE(s1(x) && s2(x));
  EXPECT_EQ(count_matches(s1, Dataset(8, {0, 15, 16})), 2u);
  EXPECT_EQ(count_matches(s2, Dataset(8, {0, 15, 16, 31, 32})), 2u);
}

TEST(CountingAttackTest, Preconditions) {
  EXPECT_THROW(counting_attack_queries(128, 7, 1), ParameterError);
  EXPECT_NO_THROW(counting_attack_queries(128, 8, 1));
  EXPECT_THROW(counting_attack_queries(128, 40, 0), ParameterError);
  EXPECT_THROW(counting_attack_queries(4, 3, 5), ParameterError);
  EXPECT_THROW(masked_counting_queries(100, 7), ParameterError);
}

TEST(CountingAttackTest, ReconstructExamples) {
  const auto q = counting_attack_queries(4, 3, 1);
  const AttackOutput out = counting_attack_reconstruct(make_counts({1, 1, 0, 1}), q, 1);
  ASSERT_FALSE(out.aborted);
  const Predicate& p = out.predicates.at(0);
  for (u128 x = 0; x < 8; ++x) EXPECT_EQ(p(x), x == 0b101 && x < 2);
  EXPECT_EQ(to_string(p), "and(lt(0x2),bit(1=1),bit(2=0),bit(3=1))");
  EXPECT_TRUE(counting_attack_reconstruct(make_counts({0, 0, 0, 0}), q, 1).aborted);
  EXPECT_TRUE(counting_attack_reconstruct(make_counts({2, 1, 0, 1}), q, 1).aborted);
  EXPECT_TRUE(
      counting_attack_reconstruct(make_counts({std::nullopt, 1, 0, 1}), q, 1).aborted);
  EXPECT_THROW(counting_attack_reconstruct(make_counts({1, 1}), q, 1), InputError);
}

TEST(CountingAttackTest, SecondRepetitionIsUsedWhenFirstFails) {
  const auto q = counting_attack_queries(16, 8, 2);
  std::vector<std::optional<std::uint64_t>> v(18, 0);
  v[0] = 3;
  v[9] = 1;
  v[10] = 1;
  const AttackOutput out = counting_attack_reconstruct(make_counts(v), q, 2);
  ASSERT_FALSE(out.aborted);
  EXPECT_TRUE(out.predicates[0](0b10000000) == false);
  EXPECT_EQ(to_string(out.predicates[0]).substr(0, 18), "and(in[0x10,0x1f],");
}

TEST(CountingAttackTest, NoisyDecoderRoundsCounts) {
  const auto q = counting_attack_queries(4, 3, 1);
  NoisyCounts n{{1.3, 0.7, 0.2, 0.51}, 1.0, 4.0};
  const AttackOutput out = counting_attack_reconstruct(n, q, 1);
  ASSERT_FALSE(out.aborted);
  EXPECT_EQ(to_string(out.predicates[0]), "and(lt(0x2),bit(1=1),bit(2=0),bit(3=1))");
  NoisyCounts far{{1.6, 1, 1, 1}, 1.0, 4.0};
  EXPECT_TRUE(counting_attack_reconstruct(far, q, 1).aborted);
}

TEST(CountingAttackTest, EmittedPredicateIsolatesSliceRow) {
  // Exhaustive over seeds: whenever the slice count is 1 the predicate
  // isolates exactly the row inside the slice.
  for (int m : {5, 8, 12}) {
    for (std::size_t n : {2u, 9u, 16u}) {
      const auto q = counting_attack_queries(n, m, 1);
      const auto dist = Distribution::uniform(m);
      for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Rng rng(seed);
        const Dataset x = sample_dataset(dist, n, rng);
        const Counts c = multi_count_mech(q, x);
        const AttackOutput out = counting_attack_reconstruct(c, q, 1);
        if (*c.values[0] != 1) {
          EXPECT_TRUE(out.aborted);
          continue;
        }
        ASSERT_FALSE(out.aborted);
        const Predicate& p = out.predicates[0];
        std::size_t matches = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (p(x[i])) {
            ++matches;
            EXPECT_TRUE(q[0](x[i]));
          }
        }
        EXPECT_EQ(matches, 1u);
        EXPECT_LE(*analytic_weight(p, dist), std::ldexp(1.0L, -m));
      }
    }
  }
}

TEST(MaskedCountingTest, ReconstructExample) {
  const auto q = masked_counting_queries(2, 2);
  ASSERT_EQ(q.size(), 4u);
  const AttackOutput out = masked_counting_reconstruct(make_counts({50, 51, 51, 50}), q);
  ASSERT_FALSE(out.aborted);
  // q0 = x < 2 with bits (1, 0) is empty on 2-bit rows; the structure still
  // fixes bit 1 = 1, bit 2 = 0 and excludes q*.
  const Predicate& p = out.predicates[0];
  EXPECT_NE(to_string(p).find("bit(1=1),bit(2=0)"), std::string::npos);
  EXPECT_NE(to_string(p).find("not(parity)"), std::string::npos);
  EXPECT_TRUE(masked_counting_reconstruct(make_counts({50, 50, 51, 50}), q).aborted);
  EXPECT_TRUE(masked_counting_reconstruct(make_counts({50, 51, 53, 50}), q).aborted);
  EXPECT_TRUE(masked_counting_reconstruct(make_counts({std::nullopt, 51, 51, 50}), q).aborted);
}

TEST(MaskedCountingTest, EveryQueryHasWeightAtLeastHalf) {
  const int m = 12;
  const auto q = masked_counting_queries(100, m);
  const auto dist = Distribution::uniform(m);
  for (const auto& p : q) EXPECT_GE(enumerate_weight(p, dist), 0.5L);
}

TEST(MaskedCountingTest, EmittedPredicateIsolatesOnRealData) {
  const int m = 12;
  const std::size_t n = 64;
  const auto q = masked_counting_queries(n, m);
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    Rng rng(seed);
    const Dataset x = sample_dataset(Distribution::uniform(m), n, rng);
    const AttackOutput out = masked_counting_reconstruct(multi_count_mech(q, x), q);
    if (out.aborted) continue;
    EXPECT_TRUE(isolates(out.predicates[0], x));
    ++successes;
  }
  EXPECT_GT(successes, 50);
}

TEST(FullPsoTest, Examples) {
  BitMatrix m{2, 2, {1, 0, 0, 1}};
  const AttackOutput out = full_pso_attack(m, 2);
  ASSERT_EQ(out.predicates.size(), 2u);
  EXPECT_TRUE(out.predicates[0](0b10));
  EXPECT_FALSE(out.predicates[0](0b01));
  EXPECT_TRUE(out.predicates[1](0b01));
  BitMatrix dup{2, 2, {1, 1, 1, 1}};
  EXPECT_TRUE(full_pso_attack(dup, 2).aborted);
}

TEST(FullPsoTest, CollisionsAreNegligibleAtForty) {
  const auto queries = bit_queries(64, 40);
  const auto dist = Distribution::uniform(64);
  int aborts = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    Rng rng(seed);
    const Dataset x = sample_dataset(dist, 64, rng);
    const AttackOutput out = full_pso_attack(predicate_mech(queries, x), 64);
    if (out.aborted) {
      ++aborts;
      continue;
    }
    std::set<std::size_t> rows;
    for (const auto& p : out.predicates) {
      ASSERT_TRUE(isolates(p, x));
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (p(x[i])) rows.insert(i);
      }
    }
    EXPECT_EQ(rows.size(), x.size());
  }
  EXPECT_EQ(aborts, 0);
}

TEST(ExtEncAttackTest, Examples) {
  const ExtEncOutput out{0b1010, 0b0110, 4};
  const AttackOutput a = extenc_attack(out, 8);
  ASSERT_FALSE(a.aborted);
  EXPECT_TRUE(a.predicates[0](0xAC));
  EXPECT_TRUE(a.predicates[0](0x0C));
  EXPECT_FALSE(a.predicates[0](0x0D));
  EXPECT_TRUE(extenc_attack(ExtEncOutput{std::nullopt, std::nullopt, 4}, 8).aborted);

  const AttackOutput eq = extenc_attack(ExtEncOutput{0b1010, 0b0110, 8}, 8);
  EXPECT_EQ(to_string(eq.predicates[0]), "eq(0x0c)");
  EXPECT_EQ(*analytic_weight(eq.predicates[0], Distribution::uniform(8)), 1.0L / 256);

  const AttackOutput key_only = extenc_attack(KeyOrBot{0b1010, 4}, 8);
  EXPECT_TRUE(key_only.predicates[0](0x0A));
  EXPECT_TRUE(extenc_attack(KeyOrBot{std::nullopt, 4}, 8).aborted);
}

TEST(KAnonAttackTest, RoundsWeightAndUsesFirstAdmissibleGroup) {
  Rng rng(1);
  const Predicate wide = Predicate::pattern("1*******");
  const Predicate narrow = Predicate::pattern("0000****");
  const auto f = family_of({{wide, 9}, {narrow, 4}});
  const AttackOutput out = kanon_attack(f, 4, 4, 8, rng);
  ASSERT_FALSE(out.aborted);
  EXPECT_EQ(to_string(*out.anchor), to_string(narrow));
  EXPECT_EQ(out.anchor_count, 4u);
  EXPECT_NEAR(*out.predicted_isolation, 0.421875, 1e-12);
  const auto& conj = std::get<pred::And>(out.predicates[0].node());
  const auto& h = std::get<pred::HashThreshold>(conj.children.at(1).node());
  EXPECT_EQ(h.bound, Rational(1, 4));
  EXPECT_TRUE(h.strict);
  EXPECT_EQ(h.accepted_minus_one, 3u);

  Rng rng2(1);
  EXPECT_TRUE(kanon_attack(f, 3, 4, 8, rng2).aborted);
}

TEST(KAnonAttackTest, TiesRoundTowardLargerMultiple) {
  // 1/8 sits halfway between 0 and 1/4 when m = 2.
  Rng rng(2);
  const auto f = family_of({{Predicate::pattern("01******"), 8}});
  const AttackOutput out = kanon_attack(f, 8, 2, 8, rng);
  const auto& conj = std::get<pred::And>(out.predicates[0].node());
  EXPECT_EQ(std::get<pred::HashThreshold>(conj.children.at(1).node()).bound, Rational(1, 4));
}

TEST(KAnonAttackTest, LightestSelectionPrefersMoreFixedBits) {
  Rng rng(3);
  const auto f = family_of({{Predicate::pattern("1*******"), 2},
                            {Predicate::pattern("101*1***"), 3},
                            {Predicate::pattern("10******"), 2}});
  const AttackOutput first = kanon_attack(f, 4, 4, 8, rng, PhiSelect::kFirst);
  EXPECT_EQ(to_string(*first.anchor), to_string(f.entries[0].phi));
  const AttackOutput light = kanon_attack(f, 4, 4, 8, rng, PhiSelect::kLightest);
  EXPECT_EQ(to_string(*light.anchor), to_string(f.entries[1].phi));
}

TEST(KAnonAttackTest, EmittedWeightNeverExceedsAnchor) {
  Rng rng(4);
  const auto dist = Distribution::bernoulli(16, 0.3);
  for (int t = 0; t < 100; ++t) {
    const Dataset x = sample_dataset(Distribution::uniform(16), 40, rng);
    const PredicateFamily f = bit_suppress_kanon(x, 4);
    const AttackOutput out = kanon_attack(f, 8, 8, 16, rng);
    if (out.aborted) continue;
    EXPECT_LE(enumerate_weight(out.predicates[0], dist),
              enumerate_weight(*out.anchor, dist) + 1e-15L);
  }
}

TEST(BitSuppressDirectTest, Examples) {
  const auto f = family_of({{Predicate::pattern("1*1*"), 2}});
  const AttackOutput out = bitsuppress_direct_attack(f, 2);
  ASSERT_FALSE(out.aborted);
  const Predicate& p = out.predicates[0];
  for (u128 x = 0; x < 16; ++x) {
    const bool fixed = bit_at(x, 1, 4) && bit_at(x, 3, 4);
    const int value = (bit_at(x, 2, 4) ? 2 : 0) + (bit_at(x, 4, 4) ? 1 : 0);
    EXPECT_EQ(p(x), fixed && value >= 2) << static_cast<int>(x);
  }
  const auto none = family_of({{Predicate::pattern("1010"), 2}});
  EXPECT_TRUE(bitsuppress_direct_attack(none, 2).aborted);
  const auto interval = family_of({{Predicate::interval(4, 1, 3), 2}});
  EXPECT_THROW(bitsuppress_direct_attack(interval, 2), InputError);
}

TEST(BitSuppressDirectTest, WeightBoundedByFixedPositions) {
  Rng rng(5);
  const auto dist = Distribution::uniform(16);
  for (int t = 0; t < 50; ++t) {
    const PredicateFamily f = bit_suppress_kanon(sample_dataset(dist, 16, rng), 4);
    const AttackOutput out = bitsuppress_direct_attack(f, 4);
    if (out.aborted) continue;
    const auto& pat = std::get<pred::Pattern>(f.entries[0].phi.node());
    const long double w = *analytic_weight(out.predicates[0], dist);
    EXPECT_LE(w, std::ldexp(1.0L, -popcount128(pat.care)));
  }
}

TEST(IntervalEndpointTest, EmitsLowerEndpoint) {
  const PredicateFamily f = interval_bucket_kanon(Dataset(8, {40, 3, 90, 12}), 2);
  const AttackOutput out = interval_endpoint_attack(f);
  ASSERT_FALSE(out.aborted);
  EXPECT_EQ(to_string(out.predicates[0]), "eq(0x03)");
  EXPECT_TRUE(interval_endpoint_attack(PredicateFamily{}).aborted);
}

TEST(AdversaryTest, DeterministicUnderSameSeed) {
  AdversaryParams p;
  p.m = 16;
  p.w = Rational(1, 100);
  const AdversaryPtr trivial = make_adversary("trivial-hash", p);
  AttackContext ctx{100, 64, {}, nullptr};
  const MechanismOutput none{Counts{}};
  Rng a(9);
  Rng b(9);
  EXPECT_EQ(to_string(trivial->respond(none, ctx, a).predicates[0]),
            to_string(trivial->respond(none, ctx, b).predicates[0]));
  EXPECT_FALSE(trivial->reads_output());
}

TEST(AdversaryTest, LiftedOutputsProduceLiftedPredicates) {
  const auto queries = counting_attack_queries(8, 8, 1);
  MechanismParams mp;
  mp.queries = queries;
  mp.m = 8;
  const MechanismPtr mech = make_mechanism("hash-lift:counts", mp);
  const AdversaryPtr adv = make_adversary("counting", AdversaryParams{});
  AttackContext ctx{8, 32, queries, nullptr};
  int emitted = 0;
  for (std::uint64_t seed = 0; seed < 200 && emitted < 20; ++seed) {
    Rng dr(seed);
    const Dataset x = sample_dataset(Distribution::uniform(32), 8, dr);
    Rng mr(seed + 1000);
    Rng ar(seed + 2000);
    const AttackOutput out = adv->respond(mech->run(x, mr), ctx, ar);
    if (out.aborted) continue;
    ++emitted;
    EXPECT_EQ(out.predicates[0].width(), 32);
    EXPECT_TRUE(std::holds_alternative<pred::Lift>(out.predicates[0].node()));
    EXPECT_TRUE(isolates(out.predicates[0], x));
  }
  EXPECT_GT(emitted, 5);
}

TEST(AdversaryTest, RegistryAndMismatchedOutputs) {
  AdversaryParams p;
  p.m = 8;
  p.k_max = 4;
  for (const auto& name : adversary_names()) EXPECT_NO_THROW(make_adversary(name, p)) << name;
  EXPECT_THROW(make_adversary("oracle", p), ConfigError);
  const AdversaryPtr full = make_adversary("full-pso", p);
  EXPECT_TRUE(full->full());
  Rng rng(1);
  EXPECT_THROW(full->respond(MechanismOutput{Counts{}}, AttackContext{}, rng), ConfigError);
}

}  // namespace
}  // namespace psolab
