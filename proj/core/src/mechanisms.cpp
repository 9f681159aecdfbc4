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

#include "psolab/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "psolab/errors.hpp"

namespace psolab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_queries(std::span<const Predicate> queries, const Dataset& x) {
  for (const auto& q : queries) {
    if (q.width() != x.width()) {
      throw InputError("query width " + std::to_string(q.width()) +
                       " does not match dataset width " +
                       std::to_string(x.width()));
    }
  }
}

std::uint64_t exact_count(const Predicate& q, const Dataset& x) {
  std::uint64_t c = 0;
  for (u128 v : x.values()) c += q(v) ? 1 : 0;
  return c;
}

void check_k(const Dataset& x, std::size_t k) {
  if (k < 2 || k > x.size()) {
    throw ParameterError("k-anonymity parameter k=" + std::to_string(k) +
                         " outside [2, n=" + std::to_string(x.size()) + "]");
  }
}

}  // namespace

Counts count_mech(const Predicate& q, const Dataset& x) {
  return multi_count_mech(std::span<const Predicate>(&q, 1), x);
}

Counts multi_count_mech(std::span<const Predicate> queries, const Dataset& x) {
  check_queries(queries, x);
  Counts out;
  out.values.reserve(queries.size());
  for (const auto& q : queries) out.values.emplace_back(exact_count(q, x));
  return out;
}

Counts suppress_low_counts(Counts counts, std::uint64_t threshold) {
  for (auto& v : counts.values) {
    if (v && *v < threshold) v.reset();
  }
  return counts;
}

BitMatrix predicate_mech(std::span<const Predicate> queries, const Dataset& x) {
  check_queries(queries, x);
  BitMatrix out;
  out.rows = x.size();
  out.cols = queries.size();
  out.bits.resize(out.rows * out.cols);
  for (std::size_t i = 0; i < out.rows; ++i) {
    for (std::size_t j = 0; j < out.cols; ++j) {
      out.bits[i * out.cols + j] = queries[j](x[i]) ? 1 : 0;
    }
  }
  return out;
}

double laplace_noise(double scale, Rng& rng) {
  double u;
  do {
    u = rng.uniform01();
  } while (u == 0.0);
  const double v = u - 0.5;
  const double sign = v < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::fabs(v));
}

NoisyCounts laplace_count_mech(std::span<const Predicate> queries,
                               const Dataset& x, double epsilon_per_query,
                               Rng& rng) {
  if (!(epsilon_per_query > 0.0)) {
    throw ParameterError("epsilon per query must be positive");
  }
  check_queries(queries, x);
  NoisyCounts out;
  out.epsilon_per_query = epsilon_per_query;
  out.total_epsilon = epsilon_per_query * static_cast<double>(queries.size());
  out.values.reserve(queries.size());
  const bool exact = std::isinf(epsilon_per_query);
  for (const auto& q : queries) {
    double v = static_cast<double>(exact_count(q, x));
    if (!exact) v += laplace_noise(1.0 / epsilon_per_query, rng);
    out.values.push_back(v);
  }
  return out;
}

KeyOrBot von_neumann_extract(const Dataset& x, int m) {
  const std::size_t n = x.size();
  if (n % 2 != 0) throw InputError("extraction needs an even number of rows");
  if (m < 1 || m > x.width()) {
    throw InputError("key width m=" + std::to_string(m) + " outside [1, " +
                     std::to_string(x.width()) + "]");
  }
  const std::size_t source = n / 2;
  u128 key = 0;
  int bits = 0;
  for (std::size_t i = 0; i + 1 < source && bits < m; i += 2) {
    const bool a = (x[i] & 1) != 0;
    const bool b = (x[i + 1] & 1) != 0;
    if (a == b) continue;
    key = (key << 1) | (a ? 1 : 0);  // (0,1) -> 0, (1,0) -> 1
    ++bits;
  }
  KeyOrBot out;
  out.m = m;
  if (bits >= m) out.key = key;
  return out;
}

ExtEncOutput ext_enc_mech(const Dataset& x, int m) {
  const KeyOrBot s = von_neumann_extract(x, m);
  ExtEncOutput out;
  out.m = m;
  if (s.key) {
    out.key = s.key;
    out.ciphertext = *s.key ^ (x[x.size() - 1] & low_mask(m));
  }
  return out;
}

PredicateFamily bit_suppress_kanon(const Dataset& x, std::size_t k) {
  check_k(x, k);
  const int d = x.width();
  const u128 all = low_mask(d);
  PredicateFamily out;
  const std::size_t groups = x.size() / k;
  out.dropped_rows = x.size() % k;
  for (std::size_t g = 0; g < groups; ++g) {
    const u128 first = x[g * k];
    u128 disagree = 0;
    for (std::size_t i = 1; i < k; ++i) disagree |= x[g * k + i] ^ first;
    const u128 care = all & ~disagree;
    Predicate phi = Predicate::pattern(d, care, first & care);
    const std::size_t matched = exact_count(phi, x);
    out.entries.push_back({std::move(phi), matched});
  }
  return out;
}

PredicateFamily interval_bucket_kanon(const Dataset& x, std::size_t k) {
  check_k(x, k);
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  PredicateFamily out;
  const std::size_t groups = x.size() / k;
  out.dropped_rows = x.size() % k;
  for (std::size_t g = 0; g < groups; ++g) {
    const u128 lo = x[order[g * k]];
    const u128 hi = x[order[g * k + k - 1]];
    Predicate phi = Predicate::interval(x.width(), lo, hi);
    const std::size_t matched = exact_count(phi, x);
    out.entries.push_back({std::move(phi), matched});
  }
  return out;
}

MechanismOutput hash_lift(const Mechanism& inner, const Dataset& x, int m,
                          Rng& rng) {
  const HashParams h = sample_hash(rng, FieldWidth::of(x.width()), m);
  std::vector<u128> hashed;
  hashed.reserve(x.size());
  for (u128 v : x.values()) hashed.push_back(hash_value(h, v));
  const Dataset y(m, std::move(hashed));
  auto inner_out = std::make_shared<const MechanismOutput>(inner.run(y, rng));
  return MechanismOutput{HashLifted{h, std::move(inner_out)}};
}

nlohmann::json to_json(const MechanismOutput& out) {
  using nlohmann::json;
  return std::visit(
      Overloaded{
          [](const Counts& c) {
            json values = json::array();
            for (const auto& v : c.values) {
              values.push_back(v ? json(*v) : json(nullptr));
            }
            return json{{"type", "counts"}, {"values", values}};
          },
          [](const NoisyCounts& c) {
            return json{{"type", "noisy-counts"},
                        {"values", c.values},
                        {"epsilon_per_query", std::isinf(c.epsilon_per_query)
                                                  ? json("inf")
                                                  : json(c.epsilon_per_query)},
                        {"total_epsilon", std::isinf(c.total_epsilon)
                                              ? json("inf")
                                              : json(c.total_epsilon)}};
          },
          [](const BitMatrix& b) {
            json rows = json::array();
            for (std::size_t i = 0; i < b.rows; ++i) {
              std::string r;
              for (std::size_t j = 0; j < b.cols; ++j) r.push_back(b.at(i, j) ? '1' : '0');
              rows.push_back(r);
            }
            return json{{"type", "bit-matrix"}, {"rows", rows}};
          },
          [](const KeyOrBot& k) {
            return json{{"type", "key"},
                        {"key", k.key ? json(to_hex(*k.key, k.m)) : json(nullptr)}};
          },
          [](const ExtEncOutput& e) {
            return json{
                {"type", "ext-enc"},
                {"key", e.key ? json(to_hex(*e.key, e.m)) : json(nullptr)},
                {"ciphertext",
                 e.ciphertext ? json(to_hex(*e.ciphertext, e.m)) : json(nullptr)}};
          },
          [](const PredicateFamily& f) {
            json entries = json::array();
            for (const auto& e : f.entries) {
              entries.push_back({{"phi", to_json(e.phi)}, {"matched", e.matched}});
            }
            return json{{"type", "predicate-family"},
                        {"entries", entries},
                        {"dropped_rows", f.dropped_rows}};
          },
          [](const HashLifted& h) {
            return json{{"type", "hash-lifted"},
                        {"hash", to_string(h.hash)},
                        {"inner", to_json(*h.inner)}};
          },
      },
      out.value);
}

namespace {

class CountsMechanism final : public Mechanism {
 public:
  CountsMechanism(std::vector<Predicate> queries,
                  std::optional<std::uint64_t> suppress_below)
      : queries_(std::move(queries)), suppress_below_(suppress_below) {}
  std::string name() const override { return "counts"; }
  MechanismOutput run(const Dataset& x, Rng&) const override {
    Counts c = multi_count_mech(queries_, x);
    if (suppress_below_) c = suppress_low_counts(std::move(c), *suppress_below_);
    return {std::move(c)};
  }

 private:
  std::vector<Predicate> queries_;
  std::optional<std::uint64_t> suppress_below_;
};

class NoisyCountsMechanism final : public Mechanism {
 public:
  NoisyCountsMechanism(std::vector<Predicate> queries, double epsilon)
      : queries_(std::move(queries)), epsilon_(epsilon) {
    if (!(epsilon > 0.0)) throw ParameterError("epsilon per query must be positive");
  }
  std::string name() const override { return "noisy-counts"; }
  MechanismOutput run(const Dataset& x, Rng& rng) const override {
    return {laplace_count_mech(queries_, x, epsilon_, rng)};
  }

 private:
  std::vector<Predicate> queries_;
  double epsilon_;
};

class BitReleaseMechanism final : public Mechanism {
 public:
  explicit BitReleaseMechanism(std::vector<Predicate> queries)
      : queries_(std::move(queries)) {}
  std::string name() const override { return "bit-release"; }
  MechanismOutput run(const Dataset& x, Rng&) const override {
    return {predicate_mech(queries_, x)};
  }

 private:
  std::vector<Predicate> queries_;
};

class ExtMechanism final : public Mechanism {
 public:
  explicit ExtMechanism(int m) : m_(m) {}
  std::string name() const override { return "ext"; }
  MechanismOutput run(const Dataset& x, Rng&) const override {
    return {von_neumann_extract(x, m_)};
  }

 private:
  int m_;
};

class ExtEncMechanism final : public Mechanism {
 public:
  explicit ExtEncMechanism(int m) : m_(m) {}
  std::string name() const override { return "ext-enc"; }
  MechanismOutput run(const Dataset& x, Rng&) const override {
    return {ext_enc_mech(x, m_)};
  }

 private:
  int m_;
};

class KAnonMechanism final : public Mechanism {
 public:
  KAnonMechanism(std::size_t k, bool interval) : k_(k), interval_(interval) {
    if (k < 2) throw ParameterError("k-anonymity parameter k must be >= 2");
  }
  std::string name() const override {
    return interval_ ? "kanon-interval" : "kanon-suppress";
  }
  MechanismOutput run(const Dataset& x, Rng&) const override {
    return {interval_ ? interval_bucket_kanon(x, k_) : bit_suppress_kanon(x, k_)};
  }

 private:
  std::size_t k_;
  bool interval_;
};

class HashLiftMechanism final : public Mechanism {
 public:
  HashLiftMechanism(MechanismPtr inner, int m) : inner_(std::move(inner)), m_(m) {}
  std::string name() const override { return "hash-lift:" + inner_->name(); }
  MechanismOutput run(const Dataset& x, Rng& rng) const override {
    return hash_lift(*inner_, x, m_, rng);
  }

 private:
  MechanismPtr inner_;
  int m_;
};

class PostProcessed final : public Mechanism {
 public:
  PostProcessed(MechanismPtr inner,
                std::function<MechanismOutput(const MechanismOutput&)> map)
      : inner_(std::move(inner)), map_(std::move(map)) {}
  std::string name() const override { return "post:" + inner_->name(); }
  MechanismOutput run(const Dataset& x, Rng& rng) const override {
    return map_(inner_->run(x, rng));
  }

 private:
  MechanismPtr inner_;
  std::function<MechanismOutput(const MechanismOutput&)> map_;
};

class Permuted final : public Mechanism {
 public:
  Permuted(MechanismPtr inner, std::vector<std::size_t> sigma)
      : inner_(std::move(inner)), sigma_(std::move(sigma)) {}
  std::string name() const override { return "perm:" + inner_->name(); }
  MechanismOutput run(const Dataset& x, Rng& rng) const override {
    return inner_->run(permute_dataset(x, sigma_), rng);
  }

 private:
  MechanismPtr inner_;
  std::vector<std::size_t> sigma_;
};

}  // namespace

MechanismPtr post_process(
    MechanismPtr inner,
    std::function<MechanismOutput(const MechanismOutput&)> map) {
  return std::make_shared<PostProcessed>(std::move(inner), std::move(map));
}

MechanismPtr permuted(MechanismPtr inner, std::vector<std::size_t> sigma) {
  return std::make_shared<Permuted>(std::move(inner), std::move(sigma));
}

MechanismPtr make_mechanism(std::string_view name, const MechanismParams& params) {
  if (name.starts_with("hash-lift:")) {
    const std::string_view inner_name = name.substr(10);
    if (inner_name.starts_with("hash-lift:")) {
      throw ConfigError("nested hash-lift is not supported");
    }
    if (params.m < 1) throw ConfigError("hash-lift requires m >= 1");
    return std::make_shared<HashLiftMechanism>(make_mechanism(inner_name, params),
                                               params.m);
  }
  if (name == "counts") {
    return std::make_shared<CountsMechanism>(params.queries, params.suppress_below);
  }
  if (name == "noisy-counts") {
    return std::make_shared<NoisyCountsMechanism>(params.queries, params.epsilon);
  }
  if (name == "bit-release") {
    return std::make_shared<BitReleaseMechanism>(params.queries);
  }
  if (name == "ext") return std::make_shared<ExtMechanism>(params.m);
  if (name == "ext-enc") return std::make_shared<ExtEncMechanism>(params.m);
  if (name == "kanon-suppress") return std::make_shared<KAnonMechanism>(params.k, false);
  if (name == "kanon-interval") return std::make_shared<KAnonMechanism>(params.k, true);
  throw ConfigError("unknown mechanism '" + std::string(name) + "'");
}

std::vector<std::string> mechanism_names() {
  return {"counts",         "noisy-counts",   "bit-release",
          "ext",            "ext-enc",        "kanon-suppress",
          "kanon-interval", "hash-lift:<inner>"};
}

}  // namespace psolab
