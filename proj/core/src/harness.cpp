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

#include "psolab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "psolab/errors.hpp"
#include "psolab/rational.hpp"

namespace psolab {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (allowed.count(item.key()) == 0) {
      throw ConfigError("unknown field '" + item.key() + "' in " + where);
    }
  }
}

template <class T>
T get_field(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + key + "' in " + where + " is missing or has the wrong type");
  }
}

std::uint64_t get_count(const json& obj, const std::string& key,
                        const std::string& where) {
  const json& v = obj.at(key);
  const bool negative = v.is_number_integer() && !v.is_number_unsigned() &&
                        v.get<std::int64_t>() < 0;
  if (!v.is_number_integer() || negative) {
    throw ConfigError("field '" + key + "' in " + where +
                      " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Rational get_rational(const json& v, const std::string& key) {
  if (v.is_number()) return rational_from_double(v.get<double>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw ConfigError("field '" + key + "' must be a number or a rational string");
}

double get_epsilon(const json& v) {
  if (v.is_string() && (v == "inf" || v == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return static_cast<double>(to_long_double(parse_rational(v.get<std::string>())));
  throw ConfigError("field 'epsilon' must be a number or \"inf\"");
}

u128 get_hex(const json& v, const std::string& key) {
  if (v.is_string()) {
    try {
      return parse_hex(v.get<std::string>());
    } catch (const InputError& e) {
      throw ConfigError("field '" + key + "': " + e.what());
    }
  }
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    return v.get<std::uint64_t>();
  }
  throw ConfigError("field '" + key + "' must be a hex string");
}

Distribution parse_distribution(const json& j) {
  const std::string where = "distribution";
  if (!j.is_object()) throw ConfigError("distribution must be an object");
  const std::string type = get_field<std::string>(j, "type", where);
  if (type == "uniform") {
    reject_unknown(j, {"type", "d"}, where);
    return Distribution::uniform(get_field<int>(j, "d", where));
  }
  if (type == "bernoulli") {
    reject_unknown(j, {"type", "d", "p"}, where);
    return Distribution::bernoulli(get_field<int>(j, "d", where),
                                   get_field<double>(j, "p", where));
  }
  if (type == "categorical") {
    reject_unknown(j, {"type", "d", "support", "probabilities"}, where);
    std::vector<u128> support;
    for (const auto& v : j.at("support")) support.push_back(get_hex(v, "support"));
    return Distribution::categorical(
        get_field<int>(j, "d", where), std::move(support),
        get_field<std::vector<double>>(j, "probabilities", where));
  }
  throw ConfigError("unknown distribution type '" + type + "'");
}

bool known_mechanism(std::string_view name) {
  if (name.starts_with("hash-lift:")) {
    const auto inner = name.substr(10);
    return !inner.starts_with("hash-lift:") && known_mechanism(inner);
  }
  for (const auto& n : mechanism_names()) {
    if (n == name && n != "hash-lift:<inner>") return true;
  }
  return false;
}

bool is_hash_lift(const std::string& name) { return name.starts_with("hash-lift:"); }

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

// Report m: the hash width when one is configured, otherwise the query width.
int report_m(const ExperimentConfig& c, int query_width) {
  if (c.adversary_params.m > 0) return c.adversary_params.m;
  if (c.mechanism_params.m > 0) return c.mechanism_params.m;
  if (c.queries.family != "none") return query_width;
  return c.d;
}

int query_width_of(const ExperimentConfig& c) {
  return is_hash_lift(c.mechanism) ? c.mechanism_params.m : c.d;
}

std::vector<Predicate> build_queries(const ExperimentConfig& c, int width) {
  const QuerySpec& q = c.queries;
  if (q.family == "none") return {};
  if (q.family == "counting") return counting_attack_queries(c.n, width, q.r);
  if (q.family == "counting-masked") return masked_counting_queries(c.n, width);
  if (q.family == "slice") return {counting_attack_queries(c.n, width, 1).front()};
  if (q.family == "bits") return bit_queries(width, q.m > 0 ? q.m : width);
  throw ConfigError("unknown query family '" + q.family + "'");
}

struct ClassResult {
  bool admissible = false;
  bool straddle = false;
};

ClassResult classify(const WeightEstimate& w, WeightSide side, double w_low,
                     double w_high) {
  ClassResult r;
  if (side == WeightSide::kLow) {
    switch (w.method) {
      case WeightMethod::kExactAnalytic:
      case WeightMethod::kExactEnumeration:
        r.admissible = w.value <= w_low;
        break;
      case WeightMethod::kUpperBound:
        r.admissible = w.value <= w_low;
        r.straddle = !r.admissible;
        break;
      case WeightMethod::kMonteCarlo:
        r.admissible = w.value <= w_low;
        r.straddle = w.value - w.half_width <= w_low && w.value + w.half_width > w_low;
        break;
    }
  } else {
    switch (w.method) {
      case WeightMethod::kExactAnalytic:
      case WeightMethod::kExactEnumeration:
        r.admissible = w.value >= w_high;
        break;
      case WeightMethod::kUpperBound:
        r.admissible = false;
        r.straddle = w.value >= w_high;
        break;
      case WeightMethod::kMonteCarlo:
        r.admissible = w.value >= w_high;
        r.straddle = w.value + w.half_width >= w_high && w.value - w.half_width < w_high;
        break;
    }
  }
  return r;
}

const MechanismOutput& unwrap(const MechanismOutput& out) {
  if (const auto* h = std::get_if<HashLifted>(&out.value)) return unwrap(*h->inner);
  return out;
}

std::optional<std::uint64_t> smallest_count(const MechanismOutput& out) {
  const auto* c = std::get_if<Counts>(&unwrap(out).value);
  if (c == nullptr) return std::nullopt;
  std::optional<std::uint64_t> best;
  for (const auto& v : c->values) {
    if (v && (!best || *v < *best)) best = *v;
  }
  return best;
}

bool uses_lhl(const ExperimentConfig& c) {
  return is_hash_lift(c.mechanism) || c.adversary == "trivial-hash" ||
         c.adversary == "kanon-hash";
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  const std::string top = "config";
  reject_unknown(j,
                 {"experiment", "distribution", "n", "d", "mechanism", "adversary",
                  "w_low", "w_high", "trials", "seed", "weight_budget",
                  "adversary_knows_distribution", "workers"},
                 top);
  ExperimentConfig c;
  if (j.contains("experiment")) c.experiment = get_field<std::string>(j, "experiment", top);
  if (!j.contains("distribution")) throw ConfigError("field 'distribution' is required");
  c.distribution_spec = j.at("distribution");
  c.distribution = parse_distribution(c.distribution_spec);
  c.d = c.distribution.width();
  if (j.contains("d") && get_field<int>(j, "d", top) != c.d) {
    throw ConfigError("field 'd' does not match the distribution width");
  }
  if (!j.contains("n")) throw ConfigError("field 'n' is required");
  c.n = get_count(j, "n", top);
  if (c.n == 0) throw ConfigError("field 'n' must be >= 1");

  if (!j.contains("mechanism")) throw ConfigError("field 'mechanism' is required");
  const json& mj = j.at("mechanism");
  reject_unknown(mj, {"name", "queries", "epsilon", "suppress_below", "m", "k"}, "mechanism");
  c.mechanism = get_field<std::string>(mj, "name", "mechanism");
  if (!known_mechanism(c.mechanism)) {
    throw ConfigError("unknown mechanism '" + c.mechanism + "'");
  }
  if (mj.contains("queries")) {
    const json& qj = mj.at("queries");
    reject_unknown(qj, {"family", "r", "m"}, "mechanism.queries");
    c.queries.family = get_field<std::string>(qj, "family", "mechanism.queries");
    if (qj.contains("r")) c.queries.r = get_field<int>(qj, "r", "mechanism.queries");
    if (qj.contains("m")) c.queries.m = get_field<int>(qj, "m", "mechanism.queries");
    static const std::set<std::string> families = {"none", "counting", "counting-masked",
                                                   "slice", "bits"};
    if (families.count(c.queries.family) == 0) {
      throw ConfigError("unknown query family '" + c.queries.family + "'");
    }
  }
  if (mj.contains("epsilon")) c.mechanism_params.epsilon = get_epsilon(mj.at("epsilon"));
  if (mj.contains("suppress_below")) {
    c.mechanism_params.suppress_below = get_count(mj, "suppress_below", "mechanism");
  }
  if (mj.contains("m")) c.mechanism_params.m = get_field<int>(mj, "m", "mechanism");
  if (mj.contains("k")) c.mechanism_params.k = get_count(mj, "k", "mechanism");

  if (!j.contains("adversary")) throw ConfigError("field 'adversary' is required");
  const json& aj = j.at("adversary");
  reject_unknown(aj, {"name", "m", "w", "side", "r", "k", "k_max", "select"}, "adversary");
  c.adversary = get_field<std::string>(aj, "name", "adversary");
  const auto names = adversary_names();
  if (std::find(names.begin(), names.end(), c.adversary) == names.end()) {
    throw ConfigError("unknown adversary '" + c.adversary + "'");
  }
  AdversaryParams& ap = c.adversary_params;
  if (aj.contains("m")) ap.m = get_field<int>(aj, "m", "adversary");
  if (aj.contains("side")) {
    const auto side = get_field<std::string>(aj, "side", "adversary");
    if (side == "low") {
      ap.side = WeightSide::kLow;
    } else if (side == "high") {
      ap.side = WeightSide::kHigh;
    } else {
      throw ConfigError("adversary side must be 'low' or 'high'");
    }
  }
  ap.r = aj.contains("r") ? get_field<int>(aj, "r", "adversary") : c.queries.r;
  if (aj.contains("k")) ap.k = get_count(aj, "k", "adversary");
  ap.k_max = aj.contains("k_max") ? get_count(aj, "k_max", "adversary")
                                  : c.mechanism_params.k;
  if (aj.contains("select")) {
    const auto sel = get_field<std::string>(aj, "select", "adversary");
    if (sel == "first") {
      ap.select = PhiSelect::kFirst;
    } else if (sel == "lightest") {
      ap.select = PhiSelect::kLightest;
    } else {
      throw ConfigError("adversary select must be 'first' or 'lightest'");
    }
  }

  if (!j.contains("w_low")) throw ConfigError("field 'w_low' is required");
  c.w_low = static_cast<double>(to_long_double(get_rational(j.at("w_low"), "w_low")));
  if (j.contains("w_high")) {
    c.w_high = static_cast<double>(to_long_double(get_rational(j.at("w_high"), "w_high")));
  }
  BaselineQuery{c.n, c.w_low, c.w_high}.validate();
  if (aj.contains("w")) {
    ap.w = get_rational(aj.at("w"), "adversary.w");
  } else {
    const json& src = ap.side == WeightSide::kLow ? j.at("w_low")
                                                  : (j.contains("w_high") ? j.at("w_high")
                                                                          : json(1));
    ap.w = get_rational(src, "w");
  }

  if (j.contains("trials")) c.trials = get_count(j, "trials", top);
  if (c.trials == 0) throw ConfigError("field 'trials' must be >= 1");
  if (j.contains("seed")) c.seed = get_count(j, "seed", top);
  if (j.contains("weight_budget")) {
    const json& bj = j.at("weight_budget");
    reject_unknown(bj, {"enumeration_limit", "monte_carlo_samples"}, "weight_budget");
    if (bj.contains("enumeration_limit")) {
      c.weight_budget.enumeration_limit = get_count(bj, "enumeration_limit", "weight_budget");
    }
    if (bj.contains("monte_carlo_samples")) {
      c.weight_budget.monte_carlo_samples =
          get_count(bj, "monte_carlo_samples", "weight_budget");
    }
  }
  if (j.contains("adversary_knows_distribution")) {
    c.adversary_knows_distribution =
        get_field<bool>(j, "adversary_knows_distribution", top);
  }
  if (j.contains("workers")) {
    c.workers = static_cast<unsigned>(get_count(j, "workers", top));
    if (c.workers == 0) throw ConfigError("field 'workers' must be >= 1");
  }
  if (is_hash_lift(c.mechanism) && c.mechanism_params.m < 1) {
    throw ConfigError("hash-lift mechanisms require mechanism.m >= 1");
  }
  c.source = j;
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  query_width_ = query_width_of(config_);
  queries_ = build_queries(config_, query_width_);
  MechanismParams mp = config_.mechanism_params;
  mp.queries = queries_;
  mechanism_ = make_mechanism(config_.mechanism, mp);
  adversary_ = make_adversary(config_.adversary, config_.adversary_params);
}

TrialRecord Experiment::run_trial(std::uint64_t index, bool verbose) const {
  const ExperimentConfig& c = config_;
  TrialRecord rec;
  rec.index = index;

  Rng data_rng = Rng::for_trial(c.seed, index, StreamRole::kDataset);
  const Dataset x = sample_dataset(c.distribution, c.n, data_rng);

  Rng mech_rng = Rng::for_trial(c.seed, index, StreamRole::kMechanism);
  const MechanismOutput out = mechanism_->run(x, mech_rng);
  rec.min_count = smallest_count(out);

  AttackContext ctx;
  ctx.n = c.n;
  ctx.d = c.d;
  ctx.queries = queries_;
  ctx.distribution = c.adversary_knows_distribution ? &c.distribution : nullptr;
  Rng adv_rng = Rng::for_trial(c.seed, index, StreamRole::kAdversary);
  const AttackOutput res = adversary_->respond(out, ctx, adv_rng);
  rec.predicted_isolation = res.predicted_isolation;
  if (res.aborted || res.predicates.empty()) {
    rec.aborted = true;
    if (verbose) rec.predicate = "abort: " + res.abort_reason;
    return rec;
  }
  if (verbose) rec.predicate = to_string(res.predicates.front());

  Rng weight_rng = Rng::for_trial(c.seed, index, StreamRole::kWeight);
  const WeightSide side = adversary_->target_side();
  auto score = [&](const Predicate& p) {
    const WeightEstimate w = predicate_weight(p, c.distribution, c.weight_budget, weight_rng);
    return std::make_pair(w, classify(w, side, c.w_low, c.w_high));
  };

  if (adversary_->full()) {
    // Fully singling out: n predicates, each isolating a distinct row, all
    // admissible; pairwise disjointness on x follows from distinct isolation.
    bool all_isolate = res.predicates.size() == x.size();
    bool all_admissible = true;
    std::vector<char> hit(x.size(), 0);
    for (const auto& p : res.predicates) {
      const auto [w, cls] = score(p);
      if (w.value >= rec.weight) {
        rec.weight = w.value;
        rec.method = w.method;
      }
      all_admissible = all_admissible && cls.admissible;
      rec.straddle = rec.straddle || cls.straddle;
      if (!all_isolate) continue;
      std::size_t matched = 0;
      std::size_t where = 0;
      for (std::size_t i = 0; i < x.size() && matched < 2; ++i) {
        if (p(x[i])) {
          ++matched;
          where = i;
        }
      }
      if (matched != 1 || hit[where] != 0) {
        all_isolate = false;
      } else {
        hit[where] = 1;
      }
    }
    rec.isolated = all_isolate;
    rec.admissible = all_admissible;
    rec.eta_admissible = all_admissible;
  } else {
    const Predicate& p = res.predicates.front();
    rec.isolated = isolates(p, x);
    const auto [w, cls] = score(p);
    rec.weight = w.value;
    rec.method = w.method;
    rec.admissible = cls.admissible;
    rec.straddle = cls.straddle;
    if (res.anchor) {
      rec.eta_admissible = score(*res.anchor).second.admissible;
    } else {
      rec.eta_admissible = cls.admissible;
    }
  }
  rec.success = rec.isolated && rec.admissible;
  return rec;
}

std::vector<TrialRecord> Experiment::run_trials(unsigned workers, bool verbose) const {
  const std::uint64_t total = config_.trials;
  std::vector<TrialRecord> records(total);
  workers = std::max(1u, workers);
  if (workers == 1 || total < 2) {
    for (std::uint64_t i = 0; i < total; ++i) records[i] = run_trial(i, verbose);
    return records;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        records[i] = run_trial(i, verbose);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::uint64_t>(workers, total));
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

SuccessReport Experiment::run(unsigned workers, bool verbose) const {
  const auto records = run_trials(workers, verbose);
  return aggregate(config_, records, verbose);
}

nlohmann::json to_json(const TrialRecord& r) {
  json j{{"index", r.index},
         {"aborted", r.aborted},
         {"isolated", r.isolated},
         {"admissible", r.admissible},
         {"straddle", r.straddle},
         {"success", r.success},
         {"eta_admissible", r.eta_admissible},
         {"weight", json_number(r.weight)},
         {"method", std::string(to_string(r.method))}};
  if (r.predicted_isolation) j["predicted_isolation"] = *r.predicted_isolation;
  if (r.min_count) j["min_count"] = *r.min_count;
  if (!r.predicate.empty()) j["predicate"] = r.predicate;
  return j;
}

SuccessReport aggregate(const ExperimentConfig& c,
                        std::span<const TrialRecord> records, bool verbose) {
  SuccessReport r;
  r.experiment = c.experiment;
  r.n = c.n;
  r.d = c.d;
  r.m = report_m(c, query_width_of(c));
  r.trials = records.size();
  r.seed = c.seed;
  r.config = c.source;

  std::uint64_t eta_hits = 0;
  std::uint64_t weighed = 0;
  long double weight_sum = 0.0L;
  long double predicted_sum = 0.0L;
  std::uint64_t predicted = 0;
  for (const auto& t : records) {
    r.successes += t.success ? 1 : 0;
    eta_hits += t.eta_admissible ? 1 : 0;
    r.straddles += t.straddle ? 1 : 0;
    if (t.predicted_isolation) {
      predicted_sum += *t.predicted_isolation;
      ++predicted;
    }
    if (t.aborted) {
      ++r.aborts;
      continue;
    }
    ++weighed;
    weight_sum += t.weight;
    r.max_weight = std::max(r.max_weight, t.weight);
    ++r.weight_methods[std::string(to_string(t.method))];
  }
  if (r.trials > 0) {
    r.p_hat = static_cast<double>(r.successes) / static_cast<double>(r.trials);
    r.eta = static_cast<double>(eta_hits) / static_cast<double>(r.trials);
    r.ci = wilson_interval(r.successes, r.trials);
  }
  if (weighed > 0) r.mean_weight = static_cast<double>(weight_sum / weighed);
  if (predicted > 0) r.mean_predicted_isolation = static_cast<double>(predicted_sum / predicted);

  const BaselineQuery q{c.n, c.w_low, c.w_high};
  const BaselineBounds b = baseline_upper(q);
  const bool low = make_adversary(c.adversary, c.adversary_params)->target_side() ==
                   WeightSide::kLow;
  r.w_bound = low ? c.w_low : c.w_high;
  r.baseline = static_cast<double>(low ? b.low : b.high);
  if (const auto real = realizable_baseline(q, c.distribution)) {
    r.baseline_realizable = static_cast<double>(low ? real->low : real->high);
  }
  r.ratio = r.baseline > 0.0 ? r.p_hat / r.baseline
                             : (r.p_hat > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.lambda = min_entropy(c.distribution);
  r.lambda_warning = uses_lhl(c) && !lhl_entropy_sufficient(r.lambda, r.m);
  if (verbose) {
    r.trial_details = json::array();
    for (const auto& t : records) r.trial_details.push_back(to_json(t));
  }
  return r;
}

std::string csv_header() {
  return "experiment,n,d,m,trials,successes,p_hat,ci_low,ci_high,baseline,ratio,"
         "eta,mean_weight,max_weight,aborts,straddles,lambda,seed";
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string csv_row(const SuccessReport& r) {
  std::ostringstream os;
  os << csv_escape(r.experiment) << ',' << r.n << ',' << r.d << ',' << r.m << ','
     << r.trials << ',' << r.successes << ',' << fmt(r.p_hat) << ',' << fmt(r.ci.low)
     << ',' << fmt(r.ci.high) << ',' << fmt(r.baseline) << ',' << fmt(r.ratio) << ','
     << fmt(r.eta) << ',' << fmt(r.mean_weight) << ',' << fmt(r.max_weight) << ','
     << r.aborts << ',' << r.straddles << ',' << fmt(r.lambda) << ',' << r.seed;
  return os.str();
}

nlohmann::json to_json(const SuccessReport& r) {
  json methods = json::object();
  for (const auto& [k, v] : r.weight_methods) methods[k] = v;
  json j{{"experiment", r.experiment},
         {"n", r.n},
         {"d", r.d},
         {"m", r.m},
         {"trials", r.trials},
         {"successes", r.successes},
         {"p_hat", r.p_hat},
         {"ci", {{"low", r.ci.low}, {"high", r.ci.high}}},
         {"w_bound", r.w_bound},
         {"baseline", r.baseline},
         {"ratio", json_number(r.ratio)},
         {"eta", r.eta},
         {"mean_weight", r.mean_weight},
         {"max_weight", r.max_weight},
         {"weight_methods", methods},
         {"aborts", r.aborts},
         {"straddles", r.straddles},
         {"lambda", json_number(r.lambda)},
         {"lambda_warning", r.lambda_warning},
         {"seed", r.seed},
         {"config", r.config}};
  if (r.baseline_realizable) j["baseline_realizable"] = *r.baseline_realizable;
  if (r.mean_predicted_isolation) j["mean_predicted_isolation"] = *r.mean_predicted_isolation;
  if (!r.trial_details.is_null()) j["trials_detail"] = r.trial_details;
  return j;
}

unsigned resolve_workers(std::optional<unsigned> requested) {
  if (const char* env = std::getenv("PSOLAB_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == nullptr || *end != '\0' || v == 0 || v > 4096) {
      throw ConfigError(std::string("PSOLAB_WORKERS must be a positive integer, got '") +
                        env + "'");
    }
    return static_cast<unsigned>(v);
  }
  return requested.value_or(1u);
}

namespace {

json sweep_value(const std::string& text) {
  if (text == "inf" || text == "infinity") return "inf";
  try {
    json v = json::parse(text);
    if (v.is_number()) return v;
  } catch (const json::parse_error&) {
  }
  return text;
}

bool set_if_present(json& obj, const std::string& key, const json& value) {
  if (!obj.is_object() || !obj.contains(key)) return false;
  obj[key] = value;
  return true;
}

json apply_axis(json config, std::string_view axis, const std::string& text) {
  const json v = sweep_value(text);
  if (axis == "epsilon") {
    config.at("mechanism")["epsilon"] = v;
  } else if (axis == "n" || axis == "w_low" || axis == "seed") {
    config[std::string(axis)] = v;
  } else if (axis == "m") {
    bool any = set_if_present(config["mechanism"], "m", v);
    if (config["mechanism"].contains("queries")) {
      any = set_if_present(config["mechanism"]["queries"], "m", v) || any;
    }
    any = set_if_present(config["adversary"], "m", v) || any;
    if (!any) throw ConfigError("sweep axis 'm' has no field to vary in this config");
  } else if (axis == "k") {
    config.at("mechanism")["k"] = v;
    set_if_present(config["adversary"], "k", v);
    set_if_present(config["adversary"], "k_max", v);
  } else if (axis == "r") {
    if (!config["mechanism"].contains("queries")) {
      throw ConfigError("sweep axis 'r' needs mechanism.queries");
    }
    config["mechanism"]["queries"]["r"] = v;
    set_if_present(config["adversary"], "r", v);
  } else {
    throw ConfigError("unknown sweep axis '" + std::string(axis) + "'");
  }
  return config;
}

}  // namespace

std::vector<SweepRow> sweep(const nlohmann::json& base_config, std::string_view axis,
                            std::span<const std::string> values, unsigned workers) {
  std::vector<SweepRow> rows;
  for (const auto& value : values) {
    const ExperimentConfig cfg = parse_config(apply_axis(base_config, axis, value));
    SweepRow row;
    row.axis = std::string(axis);
    row.value = value;
    row.report = Experiment(cfg).run(workers);
    if (rows.empty()) {
      row.trend = "first";
    } else {
      const double prev = rows.back().report.p_hat;
      const double cur = row.report.p_hat;
      row.trend = cur > prev ? "up" : (cur < prev ? "down" : "flat");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string monotonicity(std::span<const SweepRow> rows) {
  bool up = false;
  bool down = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = rows[i - 1].report.p_hat;
    const double b = rows[i].report.p_hat;
    up = up || b > a;
    down = down || b < a;
  }
  if (up && down) return "mixed";
  if (up) return "non-decreasing";
  if (down) return "non-increasing";
  return "constant";
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "axis,value," + csv_header() + ",trend,config\n";
  for (const auto& r : rows) {
    out += csv_escape(r.axis) + ',' + csv_escape(r.value) + ',' + csv_row(r.report) +
           ',' + r.trend + ',' + csv_escape(r.report.config.dump()) + '\n';
  }
  out += "# p_hat " + monotonicity(rows) + '\n';
  return out;
}

}  // namespace psolab
