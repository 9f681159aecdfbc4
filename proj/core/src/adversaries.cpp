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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "psolab/errors.hpp"
#include "psolab/gf2_hash.hpp"
#include "psolab/weight.hpp"

namespace psolab {

namespace {

int ceil_log2(std::size_t n) {
  int bits = 0;
  while ((std::size_t{1} << bits) < n && bits < 63) ++bits;
  return bits;
}

void check_counting_params(std::size_t n, int m) {
  if (n == 0) throw ParameterError("n must be positive");
  if (m < ceil_log2(n) + 1 || m > kMaxWidth) {
    throw ParameterError("counting attack needs m >= ceil(log2 n) + 1 = " +
                         std::to_string(ceil_log2(n) + 1) + " and m <= 128, got m=" +
                         std::to_string(m));
  }
}

BigInt slice_width(std::size_t n, int m) {
  return (BigInt(1) << m) / BigInt(n);
}

Predicate conjoin_bits(const Predicate& q0, const std::vector<bool>& bits) {
  std::vector<Predicate> parts;
  parts.reserve(bits.size() + 1);
  parts.push_back(q0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    parts.push_back(
        Predicate::bit_test(q0.width(), static_cast<int>(i) + 1, bits[i]));
  }
  return Predicate::all_of(std::move(parts));
}

// The first child of an And / Or node.
const Predicate& first_child(const Predicate& p) {
  if (const auto* a = std::get_if<pred::And>(&p.node())) return a->children.at(0);
  if (const auto* o = std::get_if<pred::Or>(&p.node())) return o->children.at(0);
  throw InputError("query is not a conjunction or disjunction");
}

std::size_t repetition_stride(std::size_t total, int r) {
  if (r < 1 || total == 0 || total % static_cast<std::size_t>(r) != 0) {
    throw InputError("counts do not split into " + std::to_string(r) +
                     " repetitions");
  }
  return total / static_cast<std::size_t>(r);
}

// Round-to-nearest multiple of 2^-m with ties toward the larger multiple.
Rational nearest_dyadic(std::size_t k, int m) {
  const BigInt scale = BigInt(1) << m;
  const BigInt num = (2 * scale + BigInt(k)) / (2 * BigInt(k));
  return Rational(num, scale);
}

long double model_weight(const Predicate& phi, const Distribution& model) {
  const auto* pattern = std::get_if<pred::Pattern>(&phi.node());
  const auto q = model.product_bit_probability();
  if (pattern != nullptr && q) {
    const int ones = popcount128(pattern->care & pattern->value);
    const int zeros = popcount128(pattern->care) - ones;
    const long double p1 = *q;
    return std::pow(p1, ones) * std::pow(1.0L - p1, zeros);
  }
  return analytic_weight(phi, model).value_or(std::numeric_limits<long double>::max());
}

}  // namespace

AttackOutput AttackOutput::abort(std::string reason) {
  AttackOutput out;
  out.aborted = true;
  out.abort_reason = std::move(reason);
  return out;
}

AttackOutput AttackOutput::single(Predicate p) {
  AttackOutput out;
  out.predicates.push_back(std::move(p));
  return out;
}

std::vector<Predicate> counting_attack_queries(std::size_t n, int m, int r) {
  check_counting_params(n, m);
  if (r < 1) throw ParameterError("repetitions r must be >= 1");
  const BigInt s = slice_width(n, m);
  if (s * r > (BigInt(1) << m)) {
    throw ParameterError("r=" + std::to_string(r) + " slices do not fit in 2^m");
  }
  std::vector<Predicate> out;
  out.reserve(static_cast<std::size_t>(r) * (static_cast<std::size_t>(m) + 1));
  for (int j = 1; j <= r; ++j) {
    const Predicate q0 =
        r == 1 ? Predicate::threshold(m, to_u128(s))
               : Predicate::interval(m, to_u128(s * (j - 1)), to_u128(s * j - 1));
    out.push_back(q0);
    for (int i = 1; i <= m; ++i) out.push_back(q0 && Predicate::bit_test(m, i, true));
  }
  return out;
}

AttackOutput counting_attack_reconstruct(const Counts& counts,
                                         std::span<const Predicate> queries,
                                         int r) {
  if (counts.values.size() != queries.size()) {
    throw InputError("counts are not aligned with queries");
  }
  const std::size_t stride = repetition_stride(queries.size(), r);
  for (std::size_t base = 0; base < queries.size(); base += stride) {
    const auto& y0 = counts.values[base];
    if (!y0 || *y0 != 1) continue;
    std::vector<bool> bits;
    bool complete = true;
    for (std::size_t i = 1; i < stride; ++i) {
      const auto& yi = counts.values[base + i];
      if (!yi) {
        complete = false;
        break;
      }
      bits.push_back(*yi >= 1);
    }
    if (!complete) continue;
    return AttackOutput::single(conjoin_bits(queries[base], bits));
  }
  return AttackOutput::abort("no slice count equals 1");
}

AttackOutput counting_attack_reconstruct(const NoisyCounts& counts,
                                         std::span<const Predicate> queries,
                                         int r) {
  if (counts.values.size() != queries.size()) {
    throw InputError("counts are not aligned with queries");
  }
  const std::size_t stride = repetition_stride(queries.size(), r);
  for (std::size_t base = 0; base < queries.size(); base += stride) {
    if (std::llround(counts.values[base]) != 1) continue;
    std::vector<bool> bits;
    for (std::size_t i = 1; i < stride; ++i) bits.push_back(counts.values[base + i] > 0.5);
    return AttackOutput::single(conjoin_bits(queries[base], bits));
  }
  return AttackOutput::abort("no slice count rounds to 1");
}

std::vector<Predicate> masked_counting_queries(std::size_t n, int m) {
  check_counting_params(n, m);
  const Predicate star = Predicate::parity(m);
  const Predicate q0 = Predicate::threshold(m, to_u128(slice_width(n, m)));
  std::vector<Predicate> out;
  out.reserve(static_cast<std::size_t>(m) + 2);
  out.push_back(star);
  out.push_back(q0 || star);
  for (int i = 1; i <= m; ++i) {
    out.push_back((q0 && Predicate::bit_test(m, i, true)) || star);
  }
  return out;
}

AttackOutput masked_counting_reconstruct(const Counts& counts,
                                         std::span<const Predicate> queries) {
  if (counts.values.size() != queries.size() || queries.size() < 2) {
    throw InputError("counts are not aligned with queries");
  }
  for (const auto& v : counts.values) {
    if (!v) return AttackOutput::abort("a count was suppressed");
  }
  const std::uint64_t c_star = *counts.values[0];
  if (*counts.values[1] != c_star + 1) {
    return AttackOutput::abort("slice does not isolate outside q*");
  }
  std::vector<bool> bits;
  for (std::size_t i = 2; i < counts.values.size(); ++i) {
    const std::uint64_t c = *counts.values[i];
    if (c < c_star || c > c_star + 1) {
      return AttackOutput::abort("inconsistent masked counts");
    }
    bits.push_back(c == c_star + 1);
  }
  const Predicate& q0 = first_child(queries[1]);
  return AttackOutput::single(conjoin_bits(q0, bits) && !queries[0]);
}

std::vector<Predicate> bit_queries(int d, int m) {
  if (m < 1 || m > d) {
    throw ParameterError("bit query count m=" + std::to_string(m) +
                         " outside [1, " + std::to_string(d) + "]");
  }
  std::vector<Predicate> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) out.push_back(Predicate::bit_test(d, i, true));
  return out;
}

AttackOutput full_pso_attack(const BitMatrix& matrix, int d) {
  const int c = static_cast<int>(matrix.cols);
  if (c < 1 || c > d) throw InputError("bit matrix width does not fit d");
  const u128 care = low_mask(d) & ~low_mask(d - c);
  std::vector<u128> values(matrix.rows, 0);
  for (std::size_t i = 0; i < matrix.rows; ++i) {
    u128 v = 0;
    for (std::size_t j = 0; j < matrix.cols; ++j) v = (v << 1) | (matrix.at(i, j) ? 1 : 0);
    values[i] = v << (d - c);
  }
  std::vector<u128> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return AttackOutput::abort("two released rows coincide");
  }
  AttackOutput out;
  out.predicates.reserve(values.size());
  for (u128 v : values) out.predicates.push_back(Predicate::pattern(d, care, v));
  return out;
}

namespace {

Predicate low_bits_predicate(int d, int m, u128 value) {
  if (m == d) return Predicate::equality(d, value);
  return Predicate::pattern(d, low_mask(m), value);
}

}  // namespace

AttackOutput extenc_attack(const ExtEncOutput& out, int d) {
  if (!out.key || !out.ciphertext) return AttackOutput::abort("bottom output");
  if (out.m > d) throw InputError("key width exceeds row width");
  return AttackOutput::single(low_bits_predicate(d, out.m, *out.key ^ *out.ciphertext));
}

AttackOutput extenc_attack(const KeyOrBot& out, int d) {
  if (!out.key) return AttackOutput::abort("bottom output");
  if (out.m > d) throw InputError("key width exceeds row width");
  return AttackOutput::single(low_bits_predicate(d, out.m, *out.key));
}

AttackOutput kanon_attack(const PredicateFamily& family, std::size_t k_max,
                          int m, int d, Rng& rng, PhiSelect select,
                          const Distribution* model) {
  const Distribution uniform = Distribution::uniform(d);
  const Distribution& rank = model != nullptr ? *model : uniform;
  std::optional<std::size_t> chosen;
  long double best = std::numeric_limits<long double>::infinity();
  for (std::size_t g = 0; g < family.entries.size(); ++g) {
    const auto& e = family.entries[g];
    if (e.matched < 2 || e.matched > k_max) continue;
    if (select == PhiSelect::kFirst) {
      chosen = g;
      break;
    }
    const long double w = model_weight(e.phi, rank);
    if (!chosen || w < best) {
      chosen = g;
      best = w;
    }
  }
  if (!chosen) return AttackOutput::abort("no phi with 2 <= |x_phi| <= k_max");
  const FamilyEntry& e = family.entries[*chosen];
  const Rational w_phi = nearest_dyadic(e.matched, m);
  const HashParams h = sample_hash(rng, FieldWidth::of(d), m);
  AttackOutput out =
      AttackOutput::single(e.phi && Predicate::hash_threshold(h, w_phi, true));
  out.anchor = e.phi;
  out.anchor_count = e.matched;
  out.predicted_isolation =
      static_cast<double>(b_formula(e.matched, to_long_double(w_phi)));
  return out;
}

AttackOutput bitsuppress_direct_attack(const PredicateFamily& family,
                                       std::size_t k) {
  if (k < 2) throw ParameterError("k must be >= 2");
  if (family.entries.empty()) return AttackOutput::abort("empty family");
  const FamilyEntry& e = family.entries.front();
  const auto* pattern = std::get_if<pred::Pattern>(&e.phi.node());
  if (pattern == nullptr) throw InputError("family is not bit-suppression output");
  const int d = e.phi.width();
  const u128 suppressed = low_mask(d) & ~pattern->care;
  const int s = popcount128(suppressed);
  if (s == 0) return AttackOutput::abort("no suppressed positions");
  const BigInt space = BigInt(1) << s;
  const BigInt scaled = space * BigInt(k - 1);
  const BigInt min_value = (scaled + BigInt(k) - 1) / BigInt(k);
  AttackOutput out = AttackOutput::single(
      e.phi && Predicate::projected_at_least(d, suppressed, to_u128(min_value)));
  out.anchor = e.phi;
  out.anchor_count = e.matched;
  const long double fraction =
      to_long_double(Rational(space - min_value, space));
  out.predicted_isolation = static_cast<double>(b_formula(e.matched, fraction));
  return out;
}

AttackOutput interval_endpoint_attack(const PredicateFamily& family) {
  if (family.entries.empty()) return AttackOutput::abort("empty family");
  const FamilyEntry& e = family.entries.front();
  const auto* interval = std::get_if<pred::Interval>(&e.phi.node());
  if (interval == nullptr) throw InputError("family is not interval output");
  AttackOutput out =
      AttackOutput::single(Predicate::equality(e.phi.width(), interval->lo));
  out.predicted_isolation = 1.0;
  return out;
}

AttackOutput Adversary::respond(const MechanismOutput& out,
                                const AttackContext& ctx, Rng& rng) const {
  const auto* lifted = std::get_if<HashLifted>(&out.value);
  if (lifted == nullptr || !unwraps_lift()) return attack(out, ctx, rng);
  AttackContext inner_ctx = ctx;
  inner_ctx.d = lifted->hash.m;
  inner_ctx.distribution = nullptr;
  AttackOutput res = attack(*lifted->inner, inner_ctx, rng);
  for (auto& p : res.predicates) p = Predicate::lift(lifted->hash, std::move(p));
  if (res.anchor) res.anchor = Predicate::lift(lifted->hash, *res.anchor);
  return res;
}

namespace {

[[noreturn]] void wrong_output(const std::string& adversary) {
  throw ConfigError("adversary '" + adversary +
                    "' cannot attack this mechanism's output");
}

class TrivialHash final : public Adversary {
 public:
  explicit TrivialHash(const AdversaryParams& p) : m_(p.m), w_(p.w), side_(p.side) {
    if (m_ < 1) throw ConfigError("trivial-hash requires m >= 1");
  }
  std::string name() const override { return "trivial-hash"; }
  WeightSide target_side() const override { return side_; }
  bool reads_output() const override { return false; }

 protected:
  AttackOutput attack(const MechanismOutput&, const AttackContext& ctx,
                      Rng& rng) const override {
    return AttackOutput::single(trivial_hash_adversary(ctx.d, m_, w_, side_, rng));
  }

 private:
  int m_;
  Rational w_;
  WeightSide side_;
};

class Counting final : public Adversary {
 public:
  explicit Counting(int r) : r_(r) {}
  std::string name() const override { return "counting"; }

 protected:
  AttackOutput attack(const MechanismOutput& out, const AttackContext& ctx,
                      Rng&) const override {
    if (const auto* c = std::get_if<Counts>(&out.value)) {
      return counting_attack_reconstruct(*c, ctx.queries, r_);
    }
    if (const auto* c = std::get_if<NoisyCounts>(&out.value)) {
      return counting_attack_reconstruct(*c, ctx.queries, r_);
    }
    wrong_output(name());
  }

 private:
  int r_;
};

class CountingMasked final : public Adversary {
 public:
  std::string name() const override { return "counting-masked"; }

 protected:
  AttackOutput attack(const MechanismOutput& out, const AttackContext& ctx,
                      Rng&) const override {
    if (const auto* c = std::get_if<Counts>(&out.value)) {
      return masked_counting_reconstruct(*c, ctx.queries);
    }
    wrong_output(name());
  }
};

class FullPso final : public Adversary {
 public:
  std::string name() const override { return "full-pso"; }
  bool full() const override { return true; }

 protected:
  AttackOutput attack(const MechanismOutput& out, const AttackContext& ctx,
                      Rng&) const override {
    if (const auto* b = std::get_if<BitMatrix>(&out.value)) {
      return full_pso_attack(*b, ctx.d);
    }
    wrong_output(name());
  }
};

class ExtEnc final : public Adversary {
 public:
  std::string name() const override { return "ext-enc"; }

 protected:
  AttackOutput attack(const MechanismOutput& out, const AttackContext& ctx,
                      Rng&) const override {
    if (const auto* e = std::get_if<ExtEncOutput>(&out.value)) {
      return extenc_attack(*e, ctx.d);
    }
    if (const auto* k = std::get_if<KeyOrBot>(&out.value)) {
      return extenc_attack(*k, ctx.d);
    }
    wrong_output(name());
  }
};

class KanonHash final : public Adversary {
 public:
  KanonHash(std::size_t k_max, int m, PhiSelect select)
      : k_max_(k_max), m_(m), select_(select) {
    if (m_ < 1) throw ConfigError("kanon-hash requires m >= 1");
    if (k_max_ < 2) throw ConfigError("kanon-hash requires k_max >= 2");
  }
  std::string name() const override { return "kanon-hash"; }

 protected:
  AttackOutput attack(const MechanismOutput& out, const AttackContext& ctx,
                      Rng& rng) const override {
    if (const auto* f = std::get_if<PredicateFamily>(&out.value)) {
      return kanon_attack(*f, k_max_, m_, ctx.d, rng, select_, ctx.distribution);
    }
    wrong_output(name());
  }

 private:
  std::size_t k_max_;
  int m_;
  PhiSelect select_;
};

class KanonSuppressDirect final : public Adversary {
 public:
  explicit KanonSuppressDirect(std::size_t k) : k_(k) {
    if (k_ < 2) throw ConfigError("kanon-suppress-direct requires k >= 2");
  }
  std::string name() const override { return "kanon-suppress-direct"; }

 protected:
  AttackOutput attack(const MechanismOutput& out, const AttackContext&,
                      Rng&) const override {
    if (const auto* f = std::get_if<PredicateFamily>(&out.value)) {
      return bitsuppress_direct_attack(*f, k_);
    }
    wrong_output(name());
  }

 private:
  std::size_t k_;
};

class KanonIntervalEndpoint final : public Adversary {
 public:
  std::string name() const override { return "kanon-interval-endpoint"; }

 protected:
  AttackOutput attack(const MechanismOutput& out, const AttackContext&,
                      Rng&) const override {
    if (const auto* f = std::get_if<PredicateFamily>(&out.value)) {
      return interval_endpoint_attack(*f);
    }
    wrong_output(name());
  }
};

class Composed final : public Adversary {
 public:
  Composed(AdversaryPtr inner,
           std::function<MechanismOutput(const MechanismOutput&)> map)
      : inner_(std::move(inner)), map_(std::move(map)) {}
  std::string name() const override { return "post:" + inner_->name(); }
  WeightSide target_side() const override { return inner_->target_side(); }
  bool full() const override { return inner_->full(); }
  bool reads_output() const override { return inner_->reads_output(); }

 protected:
  bool unwraps_lift() const override { return false; }
  AttackOutput attack(const MechanismOutput& out, const AttackContext& ctx,
                      Rng& rng) const override {
    return inner_->respond(map_(out), ctx, rng);
  }

 private:
  AdversaryPtr inner_;
  std::function<MechanismOutput(const MechanismOutput&)> map_;
};

}  // namespace

AdversaryPtr make_adversary(std::string_view name, const AdversaryParams& params) {
  if (name == "trivial-hash") return std::make_shared<TrivialHash>(params);
  if (name == "counting") {
    if (params.r < 1) throw ConfigError("counting requires r >= 1");
    return std::make_shared<Counting>(params.r);
  }
  if (name == "counting-masked") return std::make_shared<CountingMasked>();
  if (name == "full-pso") return std::make_shared<FullPso>();
  if (name == "ext-enc") return std::make_shared<ExtEnc>();
  if (name == "kanon-hash") {
    return std::make_shared<KanonHash>(params.k_max, params.m, params.select);
  }
  if (name == "kanon-suppress-direct") {
    return std::make_shared<KanonSuppressDirect>(params.k);
  }
  if (name == "kanon-interval-endpoint") {
    return std::make_shared<KanonIntervalEndpoint>();
  }
  throw ConfigError("unknown adversary '" + std::string(name) + "'");
}

std::vector<std::string> adversary_names() {
  return {"trivial-hash", "counting",   "counting-masked",       "full-pso",
          "ext-enc",      "kanon-hash", "kanon-suppress-direct", "kanon-interval-endpoint"};
}

AdversaryPtr compose_post_map(
    AdversaryPtr inner,
    std::function<MechanismOutput(const MechanismOutput&)> map) {
  return std::make_shared<Composed>(std::move(inner), std::move(map));
}

}  // namespace psolab
