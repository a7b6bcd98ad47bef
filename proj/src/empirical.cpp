// Copyright 2026 The Fairchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairchain/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "fairchain/error.hpp"

namespace fairchain {

EmpiricalDistribution EmpiricalDistribution::from_sample(
    std::span<const double> values) {
  if (values.empty()) throw ValidationError("ecdf: empty sample");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  EmpiricalDistribution d;
  d.n_ = sorted.size();
  const double n = static_cast<double>(sorted.size());
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    d.support_.push_back(sorted[i]);
    d.steps_.push_back(static_cast<double>(j) / n);  // exactly 1 at the end
    i = j;
  }
  return d;
}

EmpiricalDistribution EmpiricalDistribution::from_parts(
    std::vector<double> support, std::vector<double> steps, std::size_t n) {
  if (support.empty() || support.size() != steps.size())
    throw ValidationError("ecdf: malformed support/steps");
  for (std::size_t i = 1; i < support.size(); ++i)
    if (!(support[i] > support[i - 1]) || !(steps[i] > steps[i - 1]))
      throw ValidationError("ecdf: support/steps must be strictly increasing");
  if (!(std::fabs(steps.back() - 1.0) <= 1e-9))
    throw ValidationError("ecdf: final step must be 1");
  EmpiricalDistribution d;
  d.support_ = std::move(support);
  d.steps_ = std::move(steps);
  d.n_ = n;
  return d;
}

double EmpiricalDistribution::cdf(double v) const {
  if (support_.empty()) throw Error("ecdf: empty distribution");
  auto it = std::upper_bound(support_.begin(), support_.end(), v);
  if (it == support_.begin()) return 0.0;
  return steps_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

double EmpiricalDistribution::quantile(double u) const {
  if (support_.empty()) throw Error("ecdf: empty distribution");
  if (u < 0.0 || u > 1.0)
    throw ValidationError("quantile: u outside [0,1]");
  auto it = std::lower_bound(steps_.begin(), steps_.end(), u);
  if (it == steps_.end()) return support_.back();
  return support_[static_cast<std::size_t>(it - steps_.begin())];
}

double randomized_pit(const DiscreteCdfPair& pair, Rng& rng) {
  if (!(pair.lower >= 0.0) || !(pair.upper <= 1.0) ||
      !(pair.lower <= pair.upper))
    throw ValidationError("randomized_pit: malformed cdf pair");
  if (!(pair.upper > pair.lower))
    throw ValidationError(
        "randomized_pit: degenerate cdf pair (observed value has zero "
        "probability under the fitted model)");
  return pair.lower + (pair.upper - pair.lower) * rng.uniform01();
}

}  // namespace fairchain
