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

#include "psolab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "psolab/errors.hpp"

namespace psolab {

namespace {

void check_width(int d) {
  if (d < 1 || d > kMaxWidth) {
    throw ConfigError("distribution width " + std::to_string(d) +
                      " outside [1, 128]");
  }
}

}  // namespace

Distribution::Distribution(Kind kind) : kind_(std::move(kind)) {
  if (const auto* u = std::get_if<UniformBits>(&kind_)) {
    check_width(u->d);
  } else if (const auto* b = std::get_if<BernoulliProduct>(&kind_)) {
    check_width(b->d);
    if (!(b->p >= 0.0 && b->p <= 1.0)) {
      throw ConfigError("bernoulli bit probability must lie in [0, 1]");
    }
  } else {
    const auto& c = std::get<Categorical>(kind_);
    check_width(c.d);
    if (c.support.empty() || c.support.size() != c.probabilities.size()) {
      throw ConfigError(
          "categorical support and probabilities must be non-empty and of "
          "equal length");
    }
    long double total = 0.0L;
    for (double p : c.probabilities) {
      if (!(p >= 0.0)) throw ConfigError("negative categorical probability");
      total += p;
    }
    if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12) {
      throw ConfigError("categorical probabilities sum to " +
                        std::to_string(static_cast<double>(total)) +
                        ", expected 1");
    }
    const u128 over = ~low_mask(c.d);
    for (u128 v : c.support) {
      if ((v & over) != 0) {
        throw ConfigError("categorical support value " + to_hex(v, 128) +
                          " does not fit in " + std::to_string(c.d) + " bits");
      }
    }
    cumulative_.resize(c.probabilities.size());
    std::partial_sum(c.probabilities.begin(), c.probabilities.end(),
                     cumulative_.begin());
  }
}

int Distribution::width() const {
  return std::visit([](const auto& k) { return k.d; }, kind_);
}

std::optional<double> Distribution::product_bit_probability() const {
  if (std::holds_alternative<UniformBits>(kind_)) return 0.5;
  if (const auto* b = std::get_if<BernoulliProduct>(&kind_)) return b->p;
  return std::nullopt;
}

long double Distribution::point_probability(u128 x) const {
  if (const auto* u = std::get_if<UniformBits>(&kind_)) {
    return std::ldexp(1.0L, -u->d);
  }
  if (const auto* b = std::get_if<BernoulliProduct>(&kind_)) {
    const int ones = popcount128(x);
    return std::pow(static_cast<long double>(b->p), ones) *
           std::pow(1.0L - b->p, b->d - ones);
  }
  const auto& c = std::get<Categorical>(kind_);
  long double mass = 0.0L;
  for (std::size_t i = 0; i < c.support.size(); ++i) {
    if (c.support[i] == x) mass += c.probabilities[i];
  }
  return mass;
}

u128 Distribution::sample(Rng& rng) const {
  if (const auto* u = std::get_if<UniformBits>(&kind_)) {
    return rng.bits(u->d);
  }
  if (const auto* b = std::get_if<BernoulliProduct>(&kind_)) {
    u128 v = 0;
    for (int i = 0; i < b->d; ++i) {
      v = (v << 1) | static_cast<u128>(rng.bernoulli(b->p) ? 1 : 0);
    }
    return v;
  }
  const auto& c = std::get<Categorical>(kind_);
  const double u = rng.uniform01() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return c.support[static_cast<std::size_t>(it - cumulative_.begin())];
}

Dataset sample_dataset(const Distribution& dist, std::size_t n, Rng& rng) {
  if (n == 0) throw InputError("dataset size n must be at least 1");
  std::vector<u128> rows(n);
  for (auto& r : rows) r = dist.sample(rng);
  return Dataset(dist.width(), std::move(rows));
}

double min_entropy(const Distribution& dist) {
  const auto& kind = dist.kind();
  if (const auto* u = std::get_if<UniformBits>(&kind)) {
    return static_cast<double>(u->d);
  }
  if (const auto* b = std::get_if<BernoulliProduct>(&kind)) {
    const double top = std::max(b->p, 1.0 - b->p);
    return b->d * -std::log2(top);
  }
  // Merge duplicate support values before taking the largest mass.
  const auto& c = std::get<Categorical>(kind);
  std::vector<std::pair<u128, double>> mass;
  for (std::size_t i = 0; i < c.support.size(); ++i) {
    mass.emplace_back(c.support[i], c.probabilities[i]);
  }
  std::sort(mass.begin(), mass.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  double best = 0.0;
  for (std::size_t i = 0; i < mass.size();) {
    double total = 0.0;
    std::size_t j = i;
    for (; j < mass.size() && mass[j].first == mass[i].first; ++j) {
      total += mass[j].second;
    }
    best = std::max(best, total);
    i = j;
  }
  return -std::log2(best);
}

}  // namespace psolab
