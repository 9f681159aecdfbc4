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

#include "psolab/predicate.hpp"

#include <string>
#include <utility>

#include "psolab/errors.hpp"

namespace psolab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_width(int d) {
  if (d < 1 || d > kMaxWidth) {
    throw InputError("predicate width " + std::to_string(d) +
                     " outside [1, 128]");
  }
}

void check_fits(u128 v, int d, const char* what) {
  if ((v & ~low_mask(d)) != 0) {
    throw ParameterError(std::string(what) + " " + to_hex(v, 128) +
                         " does not fit in " + std::to_string(d) + " bits");
  }
}

// Bits of x under mask, concatenated from the most significant selected bit.
u128 extract_bits(u128 x, u128 mask) {
  u128 out = 0;
  for (int i = 127; i >= 0; --i) {
    if (((mask >> i) & 1) != 0) out = (out << 1) | ((x >> i) & 1);
  }
  return out;
}

std::string pattern_text(const pred::Pattern& p, int d) {
  std::string s;
  s.reserve(static_cast<std::size_t>(d));
  for (int i = 1; i <= d; ++i) {
    if (!bit_at(p.care, i, d)) {
      s.push_back('*');
    } else {
      s.push_back(bit_at(p.value, i, d) ? '1' : '0');
    }
  }
  return s;
}

}  // namespace

Predicate::Predicate(int width, pred::Node node)
    : width_(width),
      node_(std::make_shared<const pred::Node>(std::move(node))) {}

Predicate Predicate::threshold(int d, u128 bound) {
  check_width(d);
  if (d < 128 && bound > (u128{1} << d)) {
    throw ParameterError("threshold bound exceeds 2^" + std::to_string(d));
  }
  return Predicate(d, pred::Threshold{bound});
}

Predicate Predicate::bit_test(int d, int index, bool bit) {
  check_width(d);
  if (index < 1 || index > d) {
    throw ParameterError("bit index " + std::to_string(index) +
                         " outside [1, " + std::to_string(d) + "]");
  }
  return Predicate(d, pred::BitTest{index, bit});
}

Predicate Predicate::hash_threshold(const HashParams& h, Rational bound,
                                    bool strict) {
  // Number of m-bit y with y / (2^m - 1) <= bound (or < bound).
  const BigInt range = BigInt(1) << h.m;
  const Rational scaled = Rational(range - 1) * bound;
  BigInt accepted;
  if (scaled < 0) {
    accepted = 0;
  } else {
    const BigInt fl = numerator(scaled) / denominator(scaled);
    const bool integral = Rational(fl) == scaled;
    accepted = strict ? (integral ? fl : fl + 1) : fl + 1;
    if (accepted > range) accepted = range;
  }
  pred::HashThreshold node{h, std::move(bound), strict, 0, accepted > 0};
  if (node.any_accepted) {
    node.accepted_minus_one = to_u128(accepted - 1);
  }
  return Predicate(h.d, std::move(node));
}

Predicate Predicate::equality(int d, u128 value) {
  check_width(d);
  check_fits(value, d, "equality value");
  return Predicate(d, pred::Equality{value});
}

Predicate Predicate::pattern(int d, u128 care, u128 value) {
  check_width(d);
  check_fits(care, d, "pattern mask");
  return Predicate(d, pred::Pattern{care, value & care});
}

Predicate Predicate::pattern(std::string_view text) {
  u128 care = 0;
  u128 value = 0;
  int d = 0;
  static constexpr std::string_view kStar = "\xE2\x8B\x86";
  while (!text.empty()) {
    care <<= 1;
    value <<= 1;
    if (text.starts_with(kStar)) {
      text.remove_prefix(kStar.size());
    } else {
      const char c = text.front();
      text.remove_prefix(1);
      if (c == '1') {
        care |= 1;
        value |= 1;
      } else if (c == '0') {
        care |= 1;
      } else if (c != '*') {
        throw ParameterError("pattern symbol '" + std::string(1, c) +
                             "' is not 0, 1 or *");
      }
    }
    ++d;
    if (d > kMaxWidth) throw ParameterError("pattern wider than 128 bits");
  }
  return pattern(d, care, value);
}

Predicate Predicate::interval(int d, u128 lo, u128 hi) {
  check_width(d);
  check_fits(lo, d, "interval bound");
  check_fits(hi, d, "interval bound");
  return Predicate(d, pred::Interval{lo, hi});
}

Predicate Predicate::parity(int d) {
  check_width(d);
  return Predicate(d, pred::Parity{});
}

Predicate Predicate::projected_at_least(int d, u128 mask, u128 min_value) {
  check_width(d);
  check_fits(mask, d, "projection mask");
  return Predicate(d, pred::ProjectedAtLeast{mask, min_value});
}

Predicate Predicate::lift(const HashParams& h, Predicate inner) {
  if (inner.width() != h.m) {
    throw InputError("lifted predicate width " + std::to_string(inner.width()) +
                     " does not match hash output width " +
                     std::to_string(h.m));
  }
  return Predicate(h.d, pred::Lift{h, std::make_shared<const Predicate>(
                                          std::move(inner))});
}

Predicate Predicate::all_of(std::vector<Predicate> children) {
  if (children.empty()) throw ParameterError("conjunction of no predicates");
  const int d = children.front().width();
  for (const auto& c : children) {
    if (c.width() != d) throw InputError("conjunction of mixed widths");
  }
  return Predicate(d, pred::And{std::move(children)});
}

Predicate Predicate::any_of(std::vector<Predicate> children) {
  if (children.empty()) throw ParameterError("disjunction of no predicates");
  const int d = children.front().width();
  for (const auto& c : children) {
    if (c.width() != d) throw InputError("disjunction of mixed widths");
  }
  return Predicate(d, pred::Or{std::move(children)});
}

Predicate Predicate::negate(Predicate child) {
  const int d = child.width();
  return Predicate(d,
                   pred::Not{std::make_shared<const Predicate>(std::move(child))});
}

Predicate operator&&(Predicate a, Predicate b) {
  return Predicate::all_of({std::move(a), std::move(b)});
}

Predicate operator||(Predicate a, Predicate b) {
  return Predicate::any_of({std::move(a), std::move(b)});
}

Predicate operator!(Predicate a) { return Predicate::negate(std::move(a)); }

bool Predicate::operator()(u128 x) const {
  const int d = width_;
  return std::visit(
      Overloaded{
          [&](const pred::Threshold& n) { return x < n.bound; },
          [&](const pred::BitTest& n) { return bit_at(x, n.index, d) == n.bit; },
          [&](const pred::HashThreshold& n) {
            return n.any_accepted &&
                   hash_value(n.hash, x) <= n.accepted_minus_one;
          },
          [&](const pred::Equality& n) { return x == n.value; },
          [&](const pred::Pattern& n) { return (x & n.care) == n.value; },
          [&](const pred::Interval& n) { return n.lo <= x && x <= n.hi; },
          [&](const pred::Parity&) { return (popcount128(x) & 1) == 1; },
          [&](const pred::ProjectedAtLeast& n) {
            return extract_bits(x, n.mask) >= n.min_value;
          },
          [&](const pred::Lift& n) {
            return (*n.inner)(hash_value(n.hash, x));
          },
          [&](const pred::And& n) {
            for (const auto& c : n.children) {
              if (!c(x)) return false;
            }
            return true;
          },
          [&](const pred::Or& n) {
            for (const auto& c : n.children) {
              if (c(x)) return true;
            }
            return false;
          },
          [&](const pred::Not& n) { return !(*n.child)(x); },
      },
      *node_);
}

bool Predicate::eval(const Row& x) const {
  if (x.width() != width_) {
    throw InputError("row width " + std::to_string(x.width()) +
                     " does not match predicate width " +
                     std::to_string(width_));
  }
  return (*this)(x.value());
}

std::size_t count_matches(const Predicate& p, const Dataset& x,
                          std::size_t stop_at) {
  if (p.width() != x.width()) {
    throw InputError("dataset width " + std::to_string(x.width()) +
                     " does not match predicate width " +
                     std::to_string(p.width()));
  }
  std::size_t count = 0;
  for (u128 v : x.values()) {
    if (p(v) && ++count >= stop_at) break;
  }
  return count;
}

bool isolates(const Predicate& p, const Dataset& x) {
  return count_matches(p, x, 2) == 1;
}

std::string to_string(const Predicate& p) {
  const int d = p.width();
  auto join = [](const std::vector<Predicate>& cs) {
    std::string s;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (i != 0) s += ",";
      s += to_string(cs[i]);
    }
    return s;
  };
  return std::visit(
      Overloaded{
          [&](const pred::Threshold& n) { return "lt(" + to_hex(n.bound, d) + ")"; },
          [&](const pred::BitTest& n) {
            return "bit(" + std::to_string(n.index) + "=" + (n.bit ? "1" : "0") +
                   ")";
          },
          [&](const pred::HashThreshold& n) {
            return "hash(" + to_string(n.hash) + (n.strict ? ",<" : ",<=") +
                   to_string(n.bound) + ")";
          },
          [&](const pred::Equality& n) { return "eq(" + to_hex(n.value, d) + ")"; },
          [&](const pred::Pattern& n) { return "pat(" + pattern_text(n, d) + ")"; },
          [&](const pred::Interval& n) {
            return "in[" + to_hex(n.lo, d) + "," + to_hex(n.hi, d) + "]";
          },
          [&](const pred::Parity&) { return std::string("parity"); },
          [&](const pred::ProjectedAtLeast& n) {
            return "proj(" + to_hex(n.mask, d) + ">=" + to_hex(n.min_value, 128) +
                   ")";
          },
          [&](const pred::Lift& n) {
            return "lift(" + to_string(n.hash) + ";" + to_string(*n.inner) + ")";
          },
          [&](const pred::And& n) { return "and(" + join(n.children) + ")"; },
          [&](const pred::Or& n) { return "or(" + join(n.children) + ")"; },
          [&](const pred::Not& n) { return "not(" + to_string(*n.child) + ")"; },
      },
      p.node());
}

nlohmann::json to_json(const Predicate& p) {
  using nlohmann::json;
  const int d = p.width();
  auto hash_fields = [](json& j, const HashParams& h) {
    j["a"] = to_hex(h.a, h.d);
    j["b"] = to_hex(h.b, h.d);
    j["m"] = h.m;
  };
  auto children = [](const std::vector<Predicate>& cs) {
    json arr = json::array();
    for (const auto& c : cs) arr.push_back(to_json(c));
    return arr;
  };
  json j = std::visit(
      Overloaded{
          [&](const pred::Threshold& n) {
            return json{{"op", "threshold"}, {"bound", to_hex(n.bound, d)}};
          },
          [&](const pred::BitTest& n) {
            return json{{"op", "bit"}, {"index", n.index}, {"bit", n.bit ? 1 : 0}};
          },
          [&](const pred::HashThreshold& n) {
            json j{{"op", "hash_threshold"},
                   {"bound", to_string(n.bound)},
                   {"strict", n.strict}};
            hash_fields(j, n.hash);
            return j;
          },
          [&](const pred::Equality& n) {
            return json{{"op", "equality"}, {"value", to_hex(n.value, d)}};
          },
          [&](const pred::Pattern& n) {
            return json{{"op", "pattern"}, {"pattern", pattern_text(n, d)}};
          },
          [&](const pred::Interval& n) {
            return json{{"op", "interval"},
                        {"lo", to_hex(n.lo, d)},
                        {"hi", to_hex(n.hi, d)}};
          },
          [&](const pred::Parity&) { return json{{"op", "parity"}}; },
          [&](const pred::ProjectedAtLeast& n) {
            return json{{"op", "projected_at_least"},
                        {"mask", to_hex(n.mask, d)},
                        {"min", to_hex(n.min_value, 128)}};
          },
          [&](const pred::Lift& n) {
            json j{{"op", "lift"}, {"inner", to_json(*n.inner)}};
            hash_fields(j, n.hash);
            return j;
          },
          [&](const pred::And& n) {
            return json{{"op", "and"}, {"children", children(n.children)}};
          },
          [&](const pred::Or& n) {
            return json{{"op", "or"}, {"children", children(n.children)}};
          },
          [&](const pred::Not& n) {
            return json{{"op", "not"}, {"child", to_json(*n.child)}};
          },
      },
      p.node());
  j["d"] = d;
  return j;
}

Predicate predicate_from_json(const nlohmann::json& j) {
  try {
    const std::string op = j.at("op").get<std::string>();
    const int d = j.at("d").get<int>();
    auto hex = [&](const char* key) {
      return parse_hex(j.at(key).get<std::string>());
    };
    auto hash = [&]() {
      return HashParams::make(hex("a"), hex("b"), j.at("m").get<int>(), d);
    };
    auto kids = [&]() {
      std::vector<Predicate> cs;
      for (const auto& c : j.at("children")) cs.push_back(predicate_from_json(c));
      return cs;
    };
    Predicate p = [&]() -> Predicate {
      if (op == "threshold") return Predicate::threshold(d, hex("bound"));
      if (op == "bit") {
        return Predicate::bit_test(d, j.at("index").get<int>(),
                                   j.at("bit").get<int>() != 0);
      }
      if (op == "hash_threshold") {
        return Predicate::hash_threshold(
            hash(), parse_rational(j.at("bound").get<std::string>()),
            j.at("strict").get<bool>());
      }
      if (op == "equality") return Predicate::equality(d, hex("value"));
      if (op == "pattern") {
        return Predicate::pattern(j.at("pattern").get<std::string>());
      }
      if (op == "interval") return Predicate::interval(d, hex("lo"), hex("hi"));
      if (op == "parity") return Predicate::parity(d);
      if (op == "projected_at_least") {
        return Predicate::projected_at_least(d, hex("mask"), hex("min"));
      }
      if (op == "lift") {
        return Predicate::lift(hash(), predicate_from_json(j.at("inner")));
      }
      if (op == "and") return Predicate::all_of(kids());
      if (op == "or") return Predicate::any_of(kids());
      if (op == "not") return Predicate::negate(predicate_from_json(j.at("child")));
      throw InputError("unknown predicate op '" + op + "'");
    }();
    if (p.width() != d) throw InputError("predicate width field mismatch");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed predicate JSON: ") + e.what());
  }
}

}  // namespace psolab
