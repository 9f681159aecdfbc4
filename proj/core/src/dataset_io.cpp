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

#include "psolab/dataset_io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "psolab/errors.hpp"

namespace psolab {

namespace {

void put_le(std::ostream& out, u128 v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.put(static_cast<char>(static_cast<unsigned char>(v & 0xFF)));
    v >>= 8;
  }
}

u128 get_le(std::istream& in, int bytes) {
  u128 v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      throw InputError("truncated dataset file");
    }
    v |= static_cast<u128>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void write_dataset_binary(const Dataset& x, std::ostream& out) {
  put_le(out, static_cast<u128>(x.width()), 4);
  put_le(out, static_cast<u128>(x.size()), 8);
  const int bytes = (x.width() + 7) / 8;
  for (u128 v : x.values()) put_le(out, v, bytes);
}

Dataset read_dataset_binary(std::istream& in) {
  const auto d = static_cast<int>(get_le(in, 4));
  const auto n = static_cast<std::uint64_t>(get_le(in, 8));
  if (d < 1 || d > kMaxWidth) throw InputError("dataset header width out of range");
  if (n == 0) throw InputError("dataset header declares zero rows");
  const int bytes = (d + 7) / 8;
  std::vector<u128> rows;
  rows.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 20)));
  for (std::uint64_t i = 0; i < n; ++i) rows.push_back(get_le(in, bytes));
  return Dataset(d, std::move(rows));
}

std::string dataset_to_hex(const Dataset& x) {
  std::ostringstream out;
  out << "d=" << x.width() << " n=" << x.size() << "\n";
  for (u128 v : x.values()) out << to_hex(v, x.width()) << "\n";
  return out.str();
}

Dataset dataset_from_hex(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int d = 0;
  std::uint64_t n = 0;
  bool header = false;
  std::vector<u128> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      std::istringstream h(line);
      std::string dpart, npart;
      h >> dpart >> npart;
      if (!dpart.starts_with("d=") || !npart.starts_with("n=")) {
        throw InputError("dataset hex header must read 'd=<d> n=<n>'");
      }
      try {
        d = std::stoi(dpart.substr(2));
        n = std::stoull(npart.substr(2));
      } catch (const std::exception&) {
        throw InputError("malformed dataset hex header");
      }
      header = true;
      continue;
    }
    rows.push_back(parse_hex(line));
  }
  if (!header) throw InputError("dataset hex text has no header");
  if (rows.size() != n) {
    throw InputError("dataset header declares " + std::to_string(n) +
                     " rows, found " + std::to_string(rows.size()));
  }
  return Dataset(d, std::move(rows));
}

}  // namespace psolab
