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

#ifndef PSOLAB_DATASET_IO_HPP_
#define PSOLAB_DATASET_IO_HPP_

#include <iosfwd>
#include <string>

#include "psolab/row.hpp"

namespace psolab {

// Binary layout, all integers little-endian:
//   u32 d, u64 n, then n rows of ceil(d/8) bytes each.
void write_dataset_binary(const Dataset& x, std::ostream& out);
Dataset read_dataset_binary(std::istream& in);

// Text layout: first line "d=<d> n=<n>", then one zero-padded hex row per
// line. Blank lines and lines starting with '#' are ignored on read.
std::string dataset_to_hex(const Dataset& x);
Dataset dataset_from_hex(const std::string& text);

}  // namespace psolab

#endif  // PSOLAB_DATASET_IO_HPP_
