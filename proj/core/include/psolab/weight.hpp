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

#ifndef PSOLAB_WEIGHT_HPP_
#define PSOLAB_WEIGHT_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "psolab/distribution.hpp"
#include "psolab/predicate.hpp"
#include "psolab/rng.hpp"

namespace psolab {

enum class WeightMethod {
  kExactAnalytic,
  kExactEnumeration,
  kMonteCarlo,
  // Sound upper bound; used when the weight is too small for sampling and
  // no exact route exists (e.g. a pattern conjoined with a hash threshold
  // over 128-bit rows).
  kUpperBound,
};

std::string_view to_string(WeightMethod m);

// weight_D(p) = E_{x ~ D}[p(x)] together with how it was obtained.
struct WeightEstimate {
  double value = 0.0;
  WeightMethod method = WeightMethod::kExactAnalytic;
  std::uint64_t samples = 0;  // monte-carlo only
  double half_width = 0.0;    // Wilson 95% half-width, monte-carlo only

  bool exact() const {
    return method == WeightMethod::kExactAnalytic ||
           method == WeightMethod::kExactEnumeration;
  }
};

struct WeightBudget {
  // Enumerate all 2^d rows when 2^d <= this.
  std::uint64_t enumeration_limit = std::uint64_t{1} << 24;
  std::uint64_t monte_carlo_samples = 100000;
};

// Closed-form weight under UniformBits / BernoulliProduct, when the predicate
// is built from interval, pattern, parity and projected-threshold literals
// (and negations / disjunctions of such), or is a bare hash threshold or lift
// under UniformBits.
std::optional<long double> analytic_weight(const Predicate& p,
                                           const Distribution& dist);

// Sum over all rows (all 2^d values, or the categorical support).
long double enumerate_weight(const Predicate& p, const Distribution& dist);

// Sound upper bound, if one is derivable without enumeration.
std::optional<long double> weight_upper_bound(const Predicate& p,
                                              const Distribution& dist,
                                              const WeightBudget& budget);

WeightEstimate monte_carlo_weight(const Predicate& p, const Distribution& dist,
                                  std::uint64_t samples, Rng& rng);

// Tries exact-analytic, then exact-enumeration (categorical support, or
// 2^d <= enumeration_limit), then an upper bound below 1, then monte-carlo.
// Throws InputError on width mismatch.
WeightEstimate predicate_weight(const Predicate& p, const Distribution& dist,
                                const WeightBudget& budget, Rng& rng);

}  // namespace psolab

#endif  // PSOLAB_WEIGHT_HPP_
