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

#ifndef PSOLAB_HARNESS_HPP_
#define PSOLAB_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "psolab/adversaries.hpp"
#include "psolab/baseline.hpp"
#include "psolab/distribution.hpp"
#include "psolab/mechanisms.hpp"
#include "psolab/stats.hpp"
#include "psolab/weight.hpp"

namespace psolab {

// Which public query set the mechanism answers.
//   none             no queries
//   counting         counting_attack_queries(n, width, r)
//   counting-masked  masked_counting_queries(n, width)
//   slice            the single slice predicate q0 of the counting attack
//   bits             bit_queries(width, m or width)
// `width` is the row width the mechanism sees: d, or the hash width for
// hash-lift mechanisms.
struct QuerySpec {
  std::string family = "none";
  int r = 1;
  int m = 0;  // bits family only; 0 means all bits
};

// A fully validated experiment. Build with parse_config.
struct ExperimentConfig {
  std::string experiment = "experiment";
  nlohmann::json distribution_spec;
  Distribution distribution = Distribution::uniform(8);
  std::size_t n = 1;
  int d = 8;

  std::string mechanism;
  QuerySpec queries;
  MechanismParams mechanism_params;

  std::string adversary;
  AdversaryParams adversary_params;

  double w_low = 0.0;
  double w_high = 1.0;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  WeightBudget weight_budget;
  bool adversary_knows_distribution = false;
  unsigned workers = 1;

  // The JSON document this config was parsed from, normalized.
  nlohmann::json source;
};

// Field names (top level): experiment, distribution, n, d, mechanism,
// adversary, w_low, w_high, trials, seed, weight_budget,
// adversary_knows_distribution, workers. Unknown fields anywhere are
// rejected. Throws ConfigError with a message naming the offending field or
// registry name.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Per-trial outcome.
struct TrialRecord {
  std::uint64_t index = 0;
  bool aborted = false;
  bool isolated = false;
  bool admissible = false;
  bool straddle = false;
  bool success = false;
  // Weight class of the k-anonymity anchor phi, or of the emitted predicate
  // when there is no anchor; aborted trials count as not admissible.
  bool eta_admissible = false;
  double weight = 0.0;  // emitted predicate (max over a full collection)
  WeightMethod method = WeightMethod::kExactAnalytic;
  std::optional<double> predicted_isolation;
  std::optional<std::uint64_t> min_count;  // smallest released count, if any
  std::string predicate;  // rendering of the first predicate (verbose only)
};

struct SuccessReport {
  std::string experiment;
  std::size_t n = 0;
  int d = 0;
  int m = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  Interval95 ci{0.0, 0.0};
  double w_bound = 0.0;
  double baseline = 0.0;  // B(n, w_low) or B(n, w_high) per target class
  std::optional<double> baseline_realizable;
  double ratio = 0.0;     // p_hat / baseline; +inf when the baseline is 0
  double eta = 0.0;
  double mean_weight = 0.0;
  double max_weight = 0.0;
  std::map<std::string, std::uint64_t> weight_methods;
  std::uint64_t aborts = 0;
  std::uint64_t straddles = 0;
  std::optional<double> mean_predicted_isolation;
  double lambda = 0.0;
  bool lambda_warning = false;  // lambda < 5m for an LHL-based construction
  std::uint64_t seed = 0;
  nlohmann::json config;
  nlohmann::json trial_details;  // per-trial summaries when verbose, else null
};

class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }

  // One sampling experiment: x <- D^n, out <- M(x), p <- A(out), scored as
  // iso(p, x) AND p in the target class. Deterministic in (seed, index).
  TrialRecord run_trial(std::uint64_t index, bool verbose = false) const;

  // All trials, in index order regardless of `workers`.
  std::vector<TrialRecord> run_trials(unsigned workers,
                                      bool verbose = false) const;

  SuccessReport run(unsigned workers, bool verbose = false) const;

 private:
  ExperimentConfig config_;
  MechanismPtr mechanism_;
  AdversaryPtr adversary_;
  std::vector<Predicate> queries_;
  int query_width_;
};

SuccessReport aggregate(const ExperimentConfig& config,
                        std::span<const TrialRecord> records,
                        bool verbose = false);

nlohmann::json to_json(const TrialRecord& record);

// Fixed CSV columns:
// experiment,n,d,m,trials,successes,p_hat,ci_low,ci_high,baseline,ratio,eta,
// mean_weight,max_weight,aborts,straddles,lambda,seed
std::string csv_header();
std::string csv_row(const SuccessReport& report);

nlohmann::json to_json(const SuccessReport& report);

// Worker count: PSOLAB_WORKERS when set, else `requested`, else 1.
unsigned resolve_workers(std::optional<unsigned> requested);

// One sweep point per value of `axis` (epsilon, m, k, n, r, w_low, seed).
struct SweepRow {
  std::string axis;
  std::string value;
  SuccessReport report;
  std::string trend;  // first, up, down, flat (p_hat vs previous row)
};

std::vector<SweepRow> sweep(const nlohmann::json& base_config,
                            std::string_view axis,
                            std::span<const std::string> values,
                            unsigned workers);

// axis,value,<fixed report columns>,trend,config, followed by a
// "# p_hat <monotonicity>" summary line.
std::string sweep_csv(std::span<const SweepRow> rows);

// "non-increasing", "non-decreasing", "constant" or "mixed".
std::string monotonicity(std::span<const SweepRow> rows);

}  // namespace psolab

#endif  // PSOLAB_HARNESS_HPP_
