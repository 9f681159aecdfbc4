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

#ifndef PSOLAB_ADVERSARIES_HPP_
#define PSOLAB_ADVERSARIES_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psolab/baseline.hpp"
#include "psolab/distribution.hpp"
#include "psolab/mechanisms.hpp"
#include "psolab/predicate.hpp"
#include "psolab/rational.hpp"
#include "psolab/rng.hpp"

namespace psolab {

struct AttackOutput {
  // One predicate for a standard attack, n for a full attack.
  std::vector<Predicate> predicates;
  bool aborted = false;
  std::string abort_reason;

  // k-anonymity attacks: the anonymizer predicate phi the attack built on,
  // its match count k_phi and the isolation probability B(k_phi, w_phi) the
  // hash step aims for.
  std::optional<Predicate> anchor;
  std::size_t anchor_count = 0;
  std::optional<double> predicted_isolation;

  static AttackOutput abort(std::string reason);
  static AttackOutput single(Predicate p);
};

// ---- Counting composition ---------------------------------------------------

// For each repetition j in [1, r], the slice predicate
//   q0_j(x) = 1 iff (j-1)*s <= x < j*s,  s = floor(2^m / n),
// followed by the m predicates q0_j AND x[i]. With r = 1 the slice is the
// plain threshold x < s. Throws ParameterError unless
// m >= ceil(log2 n) + 1, r >= 1 and r*s <= 2^m.
std::vector<Predicate> counting_attack_queries(std::size_t n, int m, int r);

// Finds the first repetition whose slice count is 1 and emits
// q0_j AND (x[i] == y_i for every bit query that follows it). Counts must be
// aligned with `queries`; each repetition occupies queries.size()/r entries.
// Suppressed counts abort.
AttackOutput counting_attack_reconstruct(const Counts& counts,
                                         std::span<const Predicate> queries,
                                         int r);

// Same decoder over noisy counts: the slice count is rounded to the nearest
// integer and each bit count is read as 1 when it exceeds 1/2.
AttackOutput counting_attack_reconstruct(const NoisyCounts& counts,
                                         std::span<const Predicate> queries,
                                         int r);

// Query set (q*, q0 OR q*, q1 OR q*, ..., qm OR q*) with q* = parity, so
// every query matches about half of the rows.
std::vector<Predicate> masked_counting_queries(std::size_t n, int m);

// With c* = count(q*): if count(q0 OR q*) == c* + 1, bit i is
// count(qi OR q*) - c* and the attack emits q0 AND bits AND NOT q*;
// otherwise it aborts.
AttackOutput masked_counting_reconstruct(const Counts& counts,
                                         std::span<const Predicate> queries);

// ---- Full predicate singling out ------------------------------------------

// Matrix of bit queries x[1..c] on width-d rows. Emits, for every row j, the
// pattern fixing bits 1..c to row j's released bits. Aborts when two rows of
// the matrix coincide.
AttackOutput full_pso_attack(const BitMatrix& matrix, int d);

// Queries x[1], ..., x[m] over width-d rows.
std::vector<Predicate> bit_queries(int d, int m);

// ---- Extract-and-encrypt ----------------------------------------------------

// Recovers the low m bits of x_n as c XOR s and emits the predicate fixing
// them (Equality when d == m). Aborts if either component is bottom.
AttackOutput extenc_attack(const ExtEncOutput& out, int d);

// Against the key alone: substitutes an all-zero ciphertext, i.e. guesses
// x_n = s. Aborts on bottom.
AttackOutput extenc_attack(const KeyOrBot& out, int d);

// ---- k-anonymity --------------------------------------------------------------

enum class PhiSelect {
  kFirst,     // lowest group index
  kLightest,  // smallest weight under the adversary's model, ties by index
};

// Selects phi with 2 <= |x_phi| <= k_max, sets k_phi = |x_phi|, rounds 1/k_phi
// to the nearest multiple of 2^-m (ties up) as w_phi, samples h over
// GF(2^d) with m output bits and emits phi AND [r(h(x)) < w_phi]. Aborts if
// no admissible phi exists. `model` is the distribution used to rank
// candidates under kLightest (UniformBits(d) when the adversary is not told D).
AttackOutput kanon_attack(const PredicateFamily& family, std::size_t k_max,
                          int m, int d, Rng& rng,
                          PhiSelect select = PhiSelect::kFirst,
                          const Distribution* model = nullptr);

// Bit-suppression specific attack on the first group: with s suppressed
// positions, p_k(x) = 1 iff the suppressed bits of x read MSB-first as an
// integer are >= ceil((1 - 1/k) * 2^s); emits phi AND p_k. Aborts when
// nothing is suppressed.
AttackOutput bitsuppress_direct_attack(const PredicateFamily& family,
                                       std::size_t k);

// Interval buckets: the lower endpoint of the first group is a dataset row;
// emits Equality(a_g).
AttackOutput interval_endpoint_attack(const PredicateFamily& family);

// ---- Adversary objects --------------------------------------------------------

// Public knowledge available to an adversary in addition to M(x).
struct AttackContext {
  std::size_t n = 0;
  int d = 0;                        // row width the predicate must target
  std::vector<Predicate> queries;   // the mechanism's published queries
  const Distribution* distribution = nullptr;  // only when D is disclosed
};

struct AdversaryParams {
  int m = 0;                   // hash width (trivial-hash, kanon-hash)
  Rational w = Rational(0);    // target weight (trivial-hash)
  WeightSide side = WeightSide::kLow;
  int r = 1;                   // counting repetitions
  std::size_t k = 2;           // kanon-suppress-direct
  std::size_t k_max = 2;       // kanon-hash
  PhiSelect select = PhiSelect::kFirst;
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;

  // Class the emitted predicates are meant to fall in.
  virtual WeightSide target_side() const { return WeightSide::kLow; }

  // True for adversaries scored by the full singling-out event.
  virtual bool full() const { return false; }

  // False for trivial adversaries, which never read the mechanism output.
  virtual bool reads_output() const { return true; }

  // Runs the attack. A HashLifted output is unwrapped: the adversary attacks
  // the inner output over width-h.m rows and every emitted predicate p is
  // returned as p(h(x)).
  AttackOutput respond(const MechanismOutput& out, const AttackContext& ctx,
                       Rng& rng) const;

 protected:
  // Whether respond() unwraps HashLifted outputs before attack().
  virtual bool unwraps_lift() const { return reads_output(); }

  virtual AttackOutput attack(const MechanismOutput& out,
                              const AttackContext& ctx, Rng& rng) const = 0;
};

using AdversaryPtr = std::shared_ptr<const Adversary>;

// Registry names: trivial-hash, counting, counting-masked, full-pso,
// ext-enc, kanon-hash, kanon-suppress-direct, kanon-interval-endpoint.
// Throws ConfigError for unknown names.
AdversaryPtr make_adversary(std::string_view name, const AdversaryParams& params);

std::vector<std::string> adversary_names();

// A o F: runs `inner` on map(M(x)).
AdversaryPtr compose_post_map(
    AdversaryPtr inner,
    std::function<MechanismOutput(const MechanismOutput&)> map);

}  // namespace psolab

#endif  // PSOLAB_ADVERSARIES_HPP_
