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

#ifndef PSOLAB_DISTRIBUTION_HPP_
#define PSOLAB_DISTRIBUTION_HPP_

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "psolab/rng.hpp"
#include "psolab/row.hpp"

namespace psolab {

struct UniformBits {
  int d;
};

// Each bit independently 1 with probability p.
struct BernoulliProduct {
  int d;
  double p;
};

// Finite support with explicit probabilities.
struct Categorical {
  int d;
  std::vector<u128> support;
  std::vector<double> probabilities;
};

// Samplable row source over {0,1}^d.
class Distribution {
 public:
  using Kind = std::variant<UniformBits, BernoulliProduct, Categorical>;

  // Validates: 1 <= d <= 128, p in [0,1], categorical probabilities
  // non-negative and summing to 1 within 1e-12, support values fit in d bits.
  // Throws ConfigError otherwise.
  explicit Distribution(Kind kind);

  static Distribution uniform(int d) { return Distribution(UniformBits{d}); }
  static Distribution bernoulli(int d, double p) {
    return Distribution(BernoulliProduct{d, p});
  }
  static Distribution categorical(int d, std::vector<u128> support,
                                  std::vector<double> probabilities) {
    return Distribution(
        Categorical{d, std::move(support), std::move(probabilities)});
  }

  const Kind& kind() const { return kind_; }
  int width() const;

  // Probability of 1 for every bit, when the distribution is a product of
  // identical Bernoulli bits (uniform included).
  std::optional<double> product_bit_probability() const;

  // Probability mass of a single row value.
  long double point_probability(u128 x) const;

  u128 sample(Rng& rng) const;

 private:
  Kind kind_;
  std::vector<double> cumulative_;  // categorical only
};

// n i.i.d. rows. Throws InputError if n == 0.
Dataset sample_dataset(const Distribution& dist, std::size_t n, Rng& rng);

// -log2 of the largest point probability.
double min_entropy(const Distribution& dist);

}  // namespace psolab

#endif  // PSOLAB_DISTRIBUTION_HPP_
