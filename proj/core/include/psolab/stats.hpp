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

#ifndef PSOLAB_STATS_HPP_
#define PSOLAB_STATS_HPP_

#include <cstdint>

namespace psolab {

struct Interval95 {
  double low;
  double high;
};

// Wilson score interval for a binomial proportion; z defaults to the 95%
// two-sided quantile. Valid at 0 and at `trials` successes.
Interval95 wilson_interval(std::uint64_t successes, std::uint64_t trials,
                           double z = 1.959963984540054);

}  // namespace psolab

#endif  // PSOLAB_STATS_HPP_
