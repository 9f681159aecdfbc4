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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "psolab/baseline.hpp"
#include "psolab/harness.hpp"
#include "psolab/stats.hpp"

namespace {

using nlohmann::json;
using psolab::Experiment;
using psolab::SuccessReport;
using psolab::TrialRecord;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string config_path(const std::string& name) {
  return std::string(PSOLAB_CONFIG_DIR) + "/" + name + ".json";
}

struct CommandResult {
  int status = -1;
  std::string out;
};

CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = ::popen((cmd + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  r.status = ::pclose(pipe);
  return r;
}

std::string cli() { return PSOLAB_CLI_PATH; }

psolab::ExperimentConfig load(const std::string& name) {
  return psolab::load_config(config_path(name));
}

SuccessReport run_config(const std::string& name) {
  return Experiment(load(name)).run(psolab::resolve_workers(std::nullopt));
}

std::string describe(const SuccessReport& r) {
  std::ostringstream s;
  s << "p_hat=" << fmt("%.5f", r.p_hat) << " ci=[" << fmt("%.5f", r.ci.low) << ","
    << fmt("%.5f", r.ci.high) << "]";
  return s.str();
}

// First `digits` significant digits of 364^364 / 365^364, by exact integer
// division.
std::string oracle_digits(int digits) {
  using boost::multiprecision::cpp_int;
  cpp_int num = boost::multiprecision::pow(cpp_int(364), 364);
  const cpp_int den = boost::multiprecision::pow(cpp_int(365), 364);
  num *= boost::multiprecision::pow(cpp_int(10), digits + 5);
  const std::string q = cpp_int(num / den).str();
  cpp_int rounded(q.substr(0, static_cast<std::size_t>(digits)));
  if (q[static_cast<std::size_t>(digits)] >= '5') rounded += 1;
  return rounded.str();
}

std::string leading_digits(const std::string& printed, int digits) {
  const long double v = std::stold(printed);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Le", digits - 1, v);
  std::string out;
  for (char c : std::string(buf)) {
    if (c == 'e') break;
    if (c >= '0' && c <= '9') out.push_back(c);
  }
  return out;
}

Outcome criterion1() {
  const CommandResult r = run_command(cli() + " baseline --n 365 --w 1/365");
  if (r.status != 0) return {false, "cli exit status " + std::to_string(r.status)};
  std::string printed = r.out;
  while (!printed.empty() && std::isspace(static_cast<unsigned char>(printed.back()))) {
    printed.pop_back();
  }
  const std::string got = leading_digits(printed, 12);
  const std::string want = oracle_digits(12);
  const double v = std::stod(printed);
  const bool near_37 = std::fabs(v - 0.37) < 0.01;
  return {got == want && near_37, "printed=" + printed + " oracle_12=" + want};
}

Outcome criterion2() {
  const SuccessReport r = run_config("trivial_hash");
  return {r.p_hat >= 0.358 && r.p_hat <= 0.378, describe(r) + " target [0.358,0.378]"};
}

Outcome criterion3() {
  const SuccessReport r = run_config("single_count");
  const double bound = 2.0 * static_cast<double>(psolab::b_formula(128, std::ldexp(1.0L, -40)));
  const double slack = psolab::wilson_interval(0, r.trials).high;
  return {r.p_hat <= bound + slack,
          describe(r) + " bound=" + fmt("%.3g", bound) + "+" + fmt("%.3g", slack)};
}

Outcome criterion4() {
  const psolab::ExperimentConfig c = load("counting");
  const auto records = Experiment(c).run_trials(psolab::resolve_workers(std::nullopt));
  const SuccessReport r = psolab::aggregate(c, records);
  const double target = static_cast<double>(psolab::b_formula(128, 1.0L / 128));
  bool weights_ok = true;
  for (const TrialRecord& t : records) {
    if (t.aborted) continue;
    if (t.method != psolab::WeightMethod::kExactAnalytic &&
        t.method != psolab::WeightMethod::kExactEnumeration) {
      weights_ok = false;
    }
    if (t.weight > std::ldexp(1.0, -40)) weights_ok = false;
  }
  const SuccessReport r10 = run_config("counting_r10");
  const bool pass = std::fabs(r.p_hat - target) <= 0.02 && weights_ok && r10.p_hat >= 0.98;
  return {pass, "r=1 " + describe(r) + " target=" + fmt("%.5f", target) +
                    " exact_weights<=2^-40=" + (weights_ok ? "yes" : "no") +
                    "; r=10 p_hat=" + fmt("%.5f", r10.p_hat)};
}

Outcome criterion5() {
  const psolab::ExperimentConfig c = load("counting_masked");
  const auto records = Experiment(c).run_trials(psolab::resolve_workers(std::nullopt));
  const SuccessReport r = psolab::aggregate(c, records);
  std::uint64_t min_count = UINT64_MAX;
  for (const TrialRecord& t : records) {
    if (t.min_count) min_count = std::min(min_count, *t.min_count);
  }
  const double floor_count = 128.0 / 2 - 4 * std::sqrt(128.0);
  const double target = 0.5 * static_cast<double>(psolab::b_formula(128, 1.0L / 128)) - 0.03;
  const bool pass = static_cast<double>(min_count) >= floor_count && r.p_hat >= target;
  return {pass, describe(r) + " min_count=" + std::to_string(min_count) +
                    " floor=" + fmt("%.2f", floor_count) + " target>=" + fmt("%.4f", target)};
}

Outcome criterion6() {
  const SuccessReport r = run_config("full_pso");
  return {r.p_hat >= 0.999, describe(r) + " target>=0.999"};
}

Outcome criterion7() {
  const psolab::ExperimentConfig c = load("ext_enc");
  const auto records = Experiment(c).run_trials(psolab::resolve_workers(std::nullopt));
  const SuccessReport r = psolab::aggregate(c, records);
  bool exact = true;
  for (const TrialRecord& t : records) {
    if (t.aborted) continue;
    if (t.weight != std::ldexp(1.0, -64) || t.method != psolab::WeightMethod::kExactAnalytic) {
      exact = false;
    }
  }
  const SuccessReport control = run_config("ext_only");
  const double slack = control.ci.high - control.p_hat;
  const bool control_ok = control.p_hat <= control.baseline + std::max(slack, 1e-12);
  return {r.p_hat >= 0.99 && exact && control_ok,
          "ext-enc " + describe(r) + " weight==2^-64:" + (exact ? "yes" : "no") +
              "; ext-only p_hat=" + fmt("%.5f", control.p_hat) +
              " baseline=" + fmt("%.3g", control.baseline)};
}

Outcome criterion8() {
  const SuccessReport r = run_config("kanon_suppress");
  const psolab::ExperimentConfig ci = load("kanon_interval");
  const auto records = Experiment(ci).run_trials(psolab::resolve_workers(std::nullopt));
  const SuccessReport ri = psolab::aggregate(ci, records);
  bool weight_ok = true;
  for (const TrialRecord& t : records) {
    if (t.aborted || t.weight != std::ldexp(1.0, -128)) weight_ok = false;
  }
  const bool suppress_ok = r.eta >= 0.99 && r.p_hat >= 0.34 && r.p_hat <= 0.40;
  const bool interval_ok = ri.p_hat == 1.0 && weight_ok;
  return {suppress_ok && interval_ok,
          "suppress " + describe(r) + " eta=" + fmt("%.4f", r.eta) +
              " target eta>=0.99 p_hat in [0.34,0.40]; interval p_hat=" +
              fmt("%.4f", ri.p_hat) + " weight==2^-128:" + (weight_ok ? "yes" : "no")};
}

Outcome criterion9() {
  const SuccessReport r = run_config("noisy_counting");
  std::ifstream in(config_path("noisy_counting"));
  const json base = json::parse(in);
  const std::vector<std::string> eps{"inf", "1", "0.1", "0.01"};
  const auto rows = psolab::sweep(base, "epsilon", eps, psolab::resolve_workers(std::nullopt));
  std::string ps;
  for (const auto& row : rows) ps += (ps.empty() ? "" : ",") + fmt("%.5f", row.report.p_hat);
  const std::string mono = psolab::monotonicity(rows);
  const bool mono_ok = mono == "non-increasing" || mono == "constant";
  return {r.p_hat <= 0.01 && mono_ok,
          describe(r) + " target<=0.01; sweep eps{inf,1,0.1,0.01} p_hat={" + ps + "} " + mono};
}

Outcome criterion10() {
  const SuccessReport lifted = run_config("hash_lift_counting");
  const SuccessReport uniform = run_config("counting");
  return {std::fabs(lifted.p_hat - uniform.p_hat) <= 0.03,
          "lifted p_hat=" + fmt("%.5f", lifted.p_hat) +
              " uniform p_hat=" + fmt("%.5f", uniform.p_hat) + " tolerance 0.03"};
}

Outcome criterion11() {
  std::string failed;
  std::stringstream list(PSOLAB_UNIT_BINARIES);
  std::string bin;
  int count = 0;
  while (std::getline(list, bin, ',')) {
    ++count;
    const CommandResult r = run_command("'" + bin + "'");
    if (r.status != 0) failed += (failed.empty() ? "" : " ") + bin.substr(bin.rfind('/') + 1);
  }
  return {failed.empty(), std::to_string(count) + " suites" +
                              (failed.empty() ? " all green" : "; failed: " + failed)};
}

Outcome criterion12() {
  const std::string base = cli() + " run --config '" + config_path("counting") +
                           "' --trials 3000 --out csv --workers ";
  const CommandResult one = run_command(base + "1");
  const CommandResult three = run_command(base + "3");
  const CommandResult eight = run_command(base + "8");
  const bool ok = one.status == 0 && !one.out.empty() && one.out == three.out &&
                  one.out == eight.out;
  return {ok, "workers 1/3/8 csv bytes=" + std::to_string(one.out.size()) +
                  (ok ? " identical" : " differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 baseline exactness", criterion1},
      {"2 trivial adversary reaches baseline", criterion2},
      {"3 single count is safe", criterion3},
      {"4 counting composition", criterion4},
      {"5 masked counts", criterion5},
      {"6 full singling out", criterion6},
      {"7 ext plus enc composition", criterion7},
      {"8 k-anonymity", criterion8},
      {"9 noisy counts control", criterion9},
      {"10 hash-lift generality", criterion10},
      {"11 property suites", criterion11},
      {"12 determinism across workers", criterion12},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
