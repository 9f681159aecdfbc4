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

#include "psolab/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "psolab/errors.hpp"

namespace psolab {

long double b_formula(std::uint64_t n, long double w) {
  if (n == 0) throw ParameterError("B(n, w) requires n >= 1");
  if (!(w >= 0.0L && w <= 1.0L)) throw ParameterError("B(n, w) requires w in [0, 1]");
  if (w == 0.0L) return 0.0L;
  if (w == 1.0L) return n == 1 ? 1.0L : 0.0L;
  const long double nn = static_cast<long double>(n);
  return nn * w * std::exp((nn - 1.0L) * std::log1p(-w));
}

void BaselineQuery::validate() const {
  if (n == 0) throw ConfigError("n must be at least 1");
  const double inv = 1.0 / static_cast<double>(n);
  if (!(w_low >= 0.0 && w_low <= inv && inv <= w_high && w_high <= 1.0)) {
    throw ConfigError("weight bounds must satisfy 0 <= w_low <= 1/n <= w_high <= 1 "
                      "(w_low=" + std::to_string(w_low) + ", 1/n=" +
                      std::to_string(inv) + ", w_high=" + std::to_string(w_high) +
                      ")");
  }
}

BaselineBounds baseline_upper(const BaselineQuery& q) {
  q.validate();
  return {b_formula(q.n, q.w_low), b_formula(q.n, q.w_high)};
}

std::optional<BaselineBounds> realizable_baseline(const BaselineQuery& q,
                                                  const Distribution& dist) {
  q.validate();
  const auto* c = std::get_if<Categorical>(&dist.kind());
  if (c == nullptr) return std::nullopt;
  std::map<u128, long double> merged;
  for (std::size_t i = 0; i < c->support.size(); ++i) {
    merged[c->support[i]] += c->probabilities[i];
  }
  if (merged.size() > 20) return std::nullopt;
  std::vector<long double> mass;
  for (const auto& [v, p] : merged) mass.push_back(p);

  constexpr long double kTol = 1e-12L;
  BaselineBounds best{0.0L, 0.0L};
  const std::uint32_t subsets = std::uint32_t{1} << mass.size();
  for (std::uint32_t s = 0; s < subsets; ++s) {
    long double w = 0.0L;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      if ((s >> i) & 1) w += mass[i];
    }
    w = std::clamp(w, 0.0L, 1.0L);
    const long double b = b_formula(q.n, w);
    if (w <= q.w_low + kTol) best.low = std::max(best.low, b);
    if (w + kTol >= q.w_high) best.high = std::max(best.high, b);
  }
  return best;
}

Predicate lhl_predicate(const HashParams& h, const Rational& w, WeightSide side) {
  const Rational alpha = pow2(-h.m);
  const Rational delta = 2 * alpha;
  const Rational edge = pow2(-(h.m - 1));
  if (side == WeightSide::kLow) {
    if (w < edge) {
      throw ParameterError("low-side hash predicate needs w >= 2^-(m-1); w=" +
                           to_string(w) + " requires a larger m than m=" +
                           std::to_string(h.m));
    }
    return Predicate::hash_threshold(h, w - delta, /*strict=*/false);
  }
  if (w > 1 - edge) {
    throw ParameterError("high-side hash predicate needs w <= 1 - 2^-(m-1); w=" +
                         to_string(w) + " requires a larger m than m=" +
                         std::to_string(h.m));
  }
  return Predicate::hash_threshold(h, w + delta, /*strict=*/false);
}

Predicate trivial_hash_adversary(int d, int m, const Rational& w,
                                 WeightSide side, Rng& rng) {
  const HashParams h = sample_hash(rng, FieldWidth::of(d), m);
  return lhl_predicate(h, w, side);
}

}  // namespace psolab
