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

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "psolab/errors.hpp"
#include "psolab/stats.hpp"

namespace psolab {

std::string_view to_string(WeightMethod m) {
  switch (m) {
    case WeightMethod::kExactAnalytic: return "exact-analytic";
    case WeightMethod::kExactEnumeration: return "exact-enumeration";
    case WeightMethod::kMonteCarlo: return "monte-carlo";
    case WeightMethod::kUpperBound: return "upper-bound";
  }
  return "unknown";
}

namespace {

struct Projection {
  u128 mask;
  u128 min_value;
};

// Conjunction of literals whose probability under a product distribution has
// a closed form: lo <= x <= hi, (x & care) == value, parity, projections.
struct Cube {
  u128 lo = 0;
  u128 hi = 0;
  u128 care = 0;
  u128 value = 0;
  int parity = -1;  // -1 unconstrained, else required XOR of all bits
  bool empty = false;
  std::vector<Projection> projections;

  static Cube full(int d) {
    Cube c;
    c.hi = low_mask(d);
    return c;
  }
};

bool merge_into(Cube& acc, const Cube& c) {
  if (acc.empty || c.empty) {
    acc.empty = true;
    return true;
  }
  acc.lo = std::max(acc.lo, c.lo);
  acc.hi = std::min(acc.hi, c.hi);
  if (acc.lo > acc.hi) acc.empty = true;
  if (((acc.care & c.care) & (acc.value ^ c.value)) != 0) acc.empty = true;
  acc.care |= c.care;
  acc.value |= c.value;
  if (c.parity >= 0) {
    if (acc.parity >= 0 && acc.parity != c.parity) acc.empty = true;
    acc.parity = c.parity;
  }
  acc.projections.insert(acc.projections.end(), c.projections.begin(),
                         c.projections.end());
  return true;
}

std::optional<Cube> to_cube(const Predicate& p) {
  const int d = p.width();
  const u128 all = low_mask(d);
  Cube c = Cube::full(d);
  const auto& node = p.node();
  if (const auto* t = std::get_if<pred::Threshold>(&node)) {
    if (t->bound == 0) {
      c.empty = true;
    } else {
      c.hi = std::min(all, t->bound - 1);
    }
    return c;
  }
  if (const auto* iv = std::get_if<pred::Interval>(&node)) {
    c.lo = iv->lo;
    c.hi = iv->hi;
    c.empty = iv->lo > iv->hi;
    return c;
  }
  if (const auto* e = std::get_if<pred::Equality>(&node)) {
    c.care = all;
    c.value = e->value;
    return c;
  }
  if (const auto* pt = std::get_if<pred::Pattern>(&node)) {
    c.care = pt->care;
    c.value = pt->value;
    return c;
  }
  if (const auto* b = std::get_if<pred::BitTest>(&node)) {
    c.care = u128{1} << (d - b->index);
    c.value = b->bit ? c.care : 0;
    return c;
  }
  if (std::holds_alternative<pred::Parity>(node)) {
    c.parity = 1;
    return c;
  }
  if (const auto* pr = std::get_if<pred::ProjectedAtLeast>(&node)) {
    c.projections.push_back({pr->mask, pr->min_value});
    return c;
  }
  if (const auto* a = std::get_if<pred::And>(&node)) {
    for (const auto& child : a->children) {
      const auto cc = to_cube(child);
      if (!cc) return std::nullopt;
      merge_into(c, *cc);
    }
    return c;
  }
  if (const auto* n = std::get_if<pred::Not>(&node)) {
    const auto& inner = n->child->node();
    if (const auto* b = std::get_if<pred::BitTest>(&inner)) {
      c.care = u128{1} << (d - b->index);
      c.value = b->bit ? 0 : c.care;
      return c;
    }
    if (std::holds_alternative<pred::Parity>(inner)) {
      c.parity = 0;
      return c;
    }
    if (const auto* nn = std::get_if<pred::Not>(&inner)) {
      return to_cube(*nn->child);
    }
  }
  return std::nullopt;
}

// Pr[lo <= x <= hi, pattern, parity] for d i.i.d. bits with Pr[1] = q.
long double interval_pattern_probability(const Cube& c, int d, long double q) {
  // state index: tight_lo * 4 + tight_hi * 2 + parity
  std::array<long double, 8> cur{};
  cur[0b110] = 1.0L;
  for (int pos = d - 1; pos >= 0; --pos) {
    std::array<long double, 8> next{};
    const bool cared = ((c.care >> pos) & 1) != 0;
    const int forced = static_cast<int>((c.value >> pos) & 1);
    const int lo_bit = static_cast<int>((c.lo >> pos) & 1);
    const int hi_bit = static_cast<int>((c.hi >> pos) & 1);
    for (int s = 0; s < 8; ++s) {
      if (cur[static_cast<std::size_t>(s)] == 0.0L) continue;
      const bool tight_lo = (s & 4) != 0;
      const bool tight_hi = (s & 2) != 0;
      const int par = s & 1;
      for (int b = 0; b <= 1; ++b) {
        if (cared && b != forced) continue;
        if (tight_lo && b < lo_bit) continue;
        if (tight_hi && b > hi_bit) continue;
        const bool nlo = tight_lo && b == lo_bit;
        const bool nhi = tight_hi && b == hi_bit;
        const int ns = (nlo ? 4 : 0) | (nhi ? 2 : 0) | (par ^ b);
        const long double pb = b == 1 ? q : 1.0L - q;
        next[static_cast<std::size_t>(ns)] += cur[static_cast<std::size_t>(s)] * pb;
      }
    }
    cur = next;
  }
  long double total = 0.0L;
  for (int s = 0; s < 8; ++s) {
    if (c.parity >= 0 && (s & 1) != c.parity) continue;
    total += cur[static_cast<std::size_t>(s)];
  }
  return total;
}

// Pr[value of the t projected bits >= min] for i.i.d. bits with Pr[1] = q.
long double projection_probability(const Projection& pr, long double q) {
  const int t = popcount128(pr.mask);
  if (t < 128 && pr.min_value > low_mask(t)) return 0.0L;
  long double tight = 1.0L;  // equal to min so far
  long double above = 0.0L;  // already greater
  for (int pos = t - 1; pos >= 0; --pos) {
    const int m = static_cast<int>((pr.min_value >> pos) & 1);
    if (m == 1) {
      tight = tight * q;
    } else {
      above += tight * q;
      tight = tight * (1.0L - q);
    }
  }
  return above + tight;
}

std::optional<long double> cube_probability(const Cube& c, int d,
                                            long double q) {
  if (c.empty) return 0.0L;
  if (c.projections.empty()) return interval_pattern_probability(c, d, q);
  // Projections must be independent of everything else.
  const bool unrestricted = c.lo == 0 && c.hi == low_mask(d) && c.parity < 0;
  if (!unrestricted) return std::nullopt;
  u128 used = c.care;
  long double prob = interval_pattern_probability(c, d, q);
  for (const auto& pr : c.projections) {
    if ((used & pr.mask) != 0) return std::nullopt;
    used |= pr.mask;
    prob *= projection_probability(pr, q);
  }
  return prob;
}

long double accepted_fraction(const pred::HashThreshold& h) {
  if (!h.any_accepted) return 0.0L;
  const long double count = static_cast<long double>(h.accepted_minus_one) + 1.0L;
  return std::ldexp(count, -h.hash.m);
}

std::optional<long double> analytic(const Predicate& p, long double q,
                                    bool uniform) {
  if (const auto cube = to_cube(p)) return cube_probability(*cube, p.width(), q);
  const auto& node = p.node();
  if (const auto* h = std::get_if<pred::HashThreshold>(&node)) {
    // a != 0 makes x -> a*x + b a bijection, so h(U_d) is exactly U_m.
    if (uniform) return accepted_fraction(*h);
    return std::nullopt;
  }
  if (const auto* l = std::get_if<pred::Lift>(&node)) {
    if (uniform) return analytic(*l->inner, 0.5L, true);
    return std::nullopt;
  }
  if (const auto* n = std::get_if<pred::Not>(&node)) {
    const auto w = analytic(*n->child, q, uniform);
    if (!w) return std::nullopt;
    return 1.0L - *w;
  }
  if (const auto* o = std::get_if<pred::Or>(&node)) {
    if (o->children.size() == 1) return analytic(o->children[0], q, uniform);
    if (o->children.size() == 2) {
      const auto a = analytic(o->children[0], q, uniform);
      const auto b = analytic(o->children[1], q, uniform);
      const auto ab = analytic(o->children[0] && o->children[1], q, uniform);
      if (a && b && ab) return *a + *b - *ab;
    }
  }
  return std::nullopt;
}

void check_widths(const Predicate& p, const Distribution& dist) {
  if (p.width() != dist.width()) {
    throw InputError("predicate width " + std::to_string(p.width()) +
                     " does not match distribution width " +
                     std::to_string(dist.width()));
  }
}

bool enumerable(const Distribution& dist, const WeightBudget& budget) {
  if (std::holds_alternative<Categorical>(dist.kind())) return true;
  const int d = dist.width();
  return d < 64 && (std::uint64_t{1} << d) <= budget.enumeration_limit;
}

std::optional<long double> exact_weight(const Predicate& p,
                                        const Distribution& dist,
                                        const WeightBudget& budget) {
  if (auto w = analytic_weight(p, dist)) return w;
  if (enumerable(dist, budget)) return enumerate_weight(p, dist);
  return std::nullopt;
}

long double upper_bound(const Predicate& p, const Distribution& dist,
                        const WeightBudget& budget, double lambda) {
  if (const auto w = analytic_weight(p, dist)) return *w;
  const int d = p.width();
  const auto& node = p.node();
  if (const auto* a = std::get_if<pred::And>(&node)) {
    long double best = 1.0L;
    for (const auto& c : a->children) {
      best = std::min(best, upper_bound(c, dist, budget, lambda));
    }
    return best;
  }
  if (const auto* o = std::get_if<pred::Or>(&node)) {
    long double total = 0.0L;
    for (const auto& c : o->children) total += upper_bound(c, dist, budget, lambda);
    return std::min(1.0L, total);
  }
  // Every m-bit output of a hash with a != 0 has exactly 2^{d-m} preimages,
  // each of mass at most 2^-lambda.
  const long double preimage_scale = std::exp2(static_cast<long double>(d) - lambda);
  if (const auto* h = std::get_if<pred::HashThreshold>(&node)) {
    return std::min(1.0L, accepted_fraction(*h) * preimage_scale);
  }
  if (const auto* l = std::get_if<pred::Lift>(&node)) {
    const auto inner = exact_weight(*l->inner, Distribution::uniform(l->hash.m),
                                    budget);
    if (inner) return std::min(1.0L, *inner * preimage_scale);
  }
  return 1.0L;
}

}  // namespace

std::optional<long double> analytic_weight(const Predicate& p,
                                           const Distribution& dist) {
  check_widths(p, dist);
  const auto q = dist.product_bit_probability();
  if (!q) return std::nullopt;
  const bool uniform = std::holds_alternative<UniformBits>(dist.kind());
  return analytic(p, static_cast<long double>(*q), uniform);
}

long double enumerate_weight(const Predicate& p, const Distribution& dist) {
  check_widths(p, dist);
  if (const auto* c = std::get_if<Categorical>(&dist.kind())) {
    long double total = 0.0L;
    for (std::size_t i = 0; i < c->support.size(); ++i) {
      if (p(c->support[i])) total += c->probabilities[i];
    }
    return total;
  }
  const int d = dist.width();
  if (d >= 64) throw ConfigError("cannot enumerate 2^" + std::to_string(d) + " rows");
  const std::uint64_t count = std::uint64_t{1} << d;
  if (std::holds_alternative<UniformBits>(dist.kind())) {
    std::uint64_t hits = 0;
    for (std::uint64_t x = 0; x < count; ++x) hits += p(x) ? 1 : 0;
    return std::ldexp(static_cast<long double>(hits), -d);
  }
  // Product distribution: mass depends only on the popcount.
  std::vector<std::uint64_t> hits_by_ones(static_cast<std::size_t>(d) + 1, 0);
  for (std::uint64_t x = 0; x < count; ++x) {
    if (p(x)) ++hits_by_ones[static_cast<std::size_t>(__builtin_popcountll(x))];
  }
  const long double q = *dist.product_bit_probability();
  long double total = 0.0L;
  for (int k = 0; k <= d; ++k) {
    if (hits_by_ones[static_cast<std::size_t>(k)] == 0) continue;
    total += static_cast<long double>(hits_by_ones[static_cast<std::size_t>(k)]) *
             std::pow(q, k) * std::pow(1.0L - q, d - k);
  }
  return total;
}

std::optional<long double> weight_upper_bound(const Predicate& p,
                                              const Distribution& dist,
                                              const WeightBudget& budget) {
  check_widths(p, dist);
  const long double bound = upper_bound(p, dist, budget, min_entropy(dist));
  if (bound >= 1.0L) return std::nullopt;
  return bound;
}

WeightEstimate monte_carlo_weight(const Predicate& p, const Distribution& dist,
                                  std::uint64_t samples, Rng& rng) {
  check_widths(p, dist);
  samples = std::max<std::uint64_t>(samples, 1);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) hits += p(dist.sample(rng)) ? 1 : 0;
  const Interval95 ci = wilson_interval(hits, samples);
  WeightEstimate est;
  est.value = static_cast<double>(hits) / static_cast<double>(samples);
  est.method = WeightMethod::kMonteCarlo;
  est.samples = samples;
  est.half_width = (ci.high - ci.low) / 2.0;
  return est;
}

WeightEstimate predicate_weight(const Predicate& p, const Distribution& dist,
                                const WeightBudget& budget, Rng& rng) {
  check_widths(p, dist);
  if (const auto w = analytic_weight(p, dist)) {
    return {static_cast<double>(*w), WeightMethod::kExactAnalytic, 0, 0.0};
  }
  if (enumerable(dist, budget)) {
    return {static_cast<double>(enumerate_weight(p, dist)),
            WeightMethod::kExactEnumeration, 0, 0.0};
  }
  // A bound below the sampling resolution is more informative than sampling.
  const auto bound = weight_upper_bound(p, dist, budget);
  const double resolution =
      1.0 / static_cast<double>(std::max<std::uint64_t>(budget.monte_carlo_samples, 1));
  if (bound && *bound <= resolution) {
    return {static_cast<double>(*bound), WeightMethod::kUpperBound, 0, 0.0};
  }
  return monte_carlo_weight(p, dist, budget.monte_carlo_samples, rng);
}

}  // namespace psolab
