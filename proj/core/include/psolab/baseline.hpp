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

#ifndef PSOLAB_BASELINE_HPP_
#define PSOLAB_BASELINE_HPP_

#include <cstdint>
#include <optional>
#include <utility>

#include "psolab/distribution.hpp"
#include "psolab/gf2_hash.hpp"
#include "psolab/predicate.hpp"
#include "psolab/rational.hpp"
#include "psolab/rng.hpp"

namespace psolab {

// B(n, w) = n * w * (1 - w)^(n - 1): the probability that a fixed predicate
// of weight w isolates a row of an i.i.d. dataset of size n. Maximized at
// w = 1/n. Evaluated in extended precision as exp((n-1) * log1p(-w)).
long double b_formula(std::uint64_t n, long double w);

// Admissible weight classes: low = {weight <= w_low}, high = {weight >= w_high}.
struct BaselineQuery {
  std::uint64_t n;
  double w_low;
  double w_high;

  // Throws ConfigError unless 0 <= w_low <= 1/n <= w_high <= 1.
  void validate() const;
};

struct BaselineBounds {
  long double low;
  long double high;
};

// (B(n, w_low), B(n, w_high)); upper bounds on the trivial-adversary
// baseline of each class.
BaselineBounds baseline_upper(const BaselineQuery& q);

// Exact baseline for a categorical distribution: the supremum of B(n, w)
// over weights realizable as a subset sum of the support probabilities,
// restricted to each class. Support size is limited to 20.
std::optional<BaselineBounds> realizable_baseline(const BaselineQuery& q,
                                                  const Distribution& dist);

enum class WeightSide { kLow, kHigh };

// Hash-threshold predicate whose weight sits just inside the target class
// for every distribution with min-entropy >= 5m (except with probability
// 2^-m over h):
//   low:  r(h(x)) <= w - 2^{1-m}, weight in [w - 3 * 2^-m, w]
//   high: r(h(x)) <= w + 2^{1-m}, weight in [w, w + 3 * 2^-m]
// Throws ParameterError when w < 2^{-(m-1)} (low) or w > 1 - 2^{-(m-1)}
// (high).
Predicate lhl_predicate(const HashParams& h, const Rational& w, WeightSide side);

// Trivial adversary: samples h and returns lhl_predicate(h, w, side). It
// never looks at a mechanism output.
Predicate trivial_hash_adversary(int d, int m, const Rational& w,
                                 WeightSide side, Rng& rng);

// Min-entropy precondition of the construction above.
inline bool lhl_entropy_sufficient(double lambda, int m) {
  return lambda >= 5.0 * m;
}

}  // namespace psolab

#endif  // PSOLAB_BASELINE_HPP_
