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

#ifndef PSOLAB_MECHANISMS_HPP_
#define PSOLAB_MECHANISMS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "psolab/gf2_hash.hpp"
#include "psolab/predicate.hpp"
#include "psolab/rng.hpp"
#include "psolab/row.hpp"

namespace psolab {

// Exact counts; nullopt marks a count suppressed by low-count masking.
struct Counts {
  std::vector<std::optional<std::uint64_t>> values;
};

struct NoisyCounts {
  std::vector<double> values;
  double epsilon_per_query;  // +inf for exact release
  double total_epsilon;      // basic composition over the queries
};

// n x q matrix, entry (i, j) = q_j(x_i), row-major.
struct BitMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> bits;

  bool at(std::size_t i, std::size_t j) const { return bits[i * cols + j] != 0; }
};

// m-bit key or bottom.
struct KeyOrBot {
  std::optional<u128> key;
  int m = 0;
};

struct ExtEncOutput {
  std::optional<u128> key;
  std::optional<u128> ciphertext;
  int m = 0;
};

struct FamilyEntry {
  Predicate phi;
  std::size_t matched;  // |x_phi| over the whole generating dataset
};

struct PredicateFamily {
  std::vector<FamilyEntry> entries;
  std::size_t dropped_rows = 0;  // trailing rows when k does not divide n
};

struct MechanismOutput;

// (h, M(h(x))).
struct HashLifted {
  HashParams hash;
  std::shared_ptr<const MechanismOutput> inner;
};

struct MechanismOutput {
  std::variant<Counts, NoisyCounts, BitMatrix, KeyOrBot, ExtEncOutput,
               PredicateFamily, HashLifted>
      value;
};

nlohmann::json to_json(const MechanismOutput& out);

// ---- Mechanism primitives -------------------------------------------------

// |{i : q(x_i) = 1}|
Counts count_mech(const Predicate& q, const Dataset& x);

// Elementwise count_mech.
Counts multi_count_mech(std::span<const Predicate> queries, const Dataset& x);

// Replaces every count below `threshold` with nullopt.
Counts suppress_low_counts(Counts counts, std::uint64_t threshold);

// Entry (i, j) = q_j(x_i), row order preserved.
BitMatrix predicate_mech(std::span<const Predicate> queries, const Dataset& x);

// Laplace(0, scale) by inverse CDF on one 53-bit uniform u in (0, 1):
//   v = u - 1/2,  noise = -scale * sgn(v) * ln(1 - 2|v|).
double laplace_noise(double scale, Rng& rng);

// Counts plus independent Laplace(1/epsilon) noise per query; an infinite
// epsilon returns exact counts. Throws ParameterError if epsilon <= 0.
NoisyCounts laplace_count_mech(std::span<const Predicate> queries,
                               const Dataset& x, double epsilon_per_query,
                               Rng& rng);

// Von Neumann extraction over the least significant bits of the first n/2
// rows, taken in pairs: (0,1) -> 0, (1,0) -> 1, otherwise skipped. Returns the
// first m extracted bits (first extracted bit most significant), or bottom.
// Throws InputError if n is odd or m is outside [1, min(d, 128)].
KeyOrBot von_neumann_extract(const Dataset& x, int m);

// Key s from von_neumann_extract; ciphertext s XOR (low m bits of x_n).
// Both components are bottom when extraction fails.
ExtEncOutput ext_enc_mech(const Dataset& x, int m);

// Groups of k consecutive rows in index order; each group yields the pattern
// keeping the bits on which the group agrees. Trailing n mod k rows are
// dropped and counted. Throws ParameterError unless 2 <= k <= n.
PredicateFamily bit_suppress_kanon(const Dataset& x, std::size_t k);

// Rows sorted ascending (ties by original index), cut into groups of k; each
// group yields the interval [group min, group max].
PredicateFamily interval_bucket_kanon(const Dataset& x, std::size_t k);

// ---- Mechanism objects ----------------------------------------------------

class Mechanism {
 public:
  virtual ~Mechanism() = default;
  virtual std::string name() const = 0;
  virtual MechanismOutput run(const Dataset& x, Rng& rng) const = 0;
};

using MechanismPtr = std::shared_ptr<const Mechanism>;

// Samples h over GF(2^d) with output width m, hashes every row, and runs
// `inner` on the width-m dataset. Returns HashLifted.
MechanismOutput hash_lift(const Mechanism& inner, const Dataset& x, int m,
                          Rng& rng);

// F o M: the output of `inner` passed through a fixed post-map.
MechanismPtr post_process(
    MechanismPtr inner,
    std::function<MechanismOutput(const MechanismOutput&)> map);

// M o sigma: runs `inner` on the permuted dataset.
MechanismPtr permuted(MechanismPtr inner, std::vector<std::size_t> sigma);

struct MechanismParams {
  std::vector<Predicate> queries;        // counts, noisy-counts, bit-release
  double epsilon = 1.0;                  // noisy-counts
  std::optional<std::uint64_t> suppress_below;  // counts
  int m = 0;                             // ext, ext-enc, hash-lift
  std::size_t k = 2;                     // kanon-*
};

// Registry names: counts, noisy-counts, bit-release, ext, ext-enc,
// kanon-suppress, kanon-interval, hash-lift:<inner>. For hash-lift the
// params (queries included) configure the inner mechanism and m is the
// hash output width. Throws ConfigError for unknown names.
MechanismPtr make_mechanism(std::string_view name, const MechanismParams& params);

// Base names, with "hash-lift:<inner>" listed as a template.
std::vector<std::string> mechanism_names();

}  // namespace psolab

#endif  // PSOLAB_MECHANISMS_HPP_
