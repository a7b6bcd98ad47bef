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

#ifndef FAIRCHAIN_EMPIRICAL_HPP_
#define FAIRCHAIN_EMPIRICAL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "fairchain/rng.hpp"

namespace fairchain {

// Step-function empirical CDF over a sample, with the left-continuous
// generalized inverse inf{v : F(v) >= u}. No smoothing: quantiles land
// exactly on observed sample values, which is what keeps adjusted
// columns inside the original marginal.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;

  // throws ValidationError on an empty sample
  static EmpiricalDistribution from_sample(std::span<const double> values);

  // F(v) = #{x_i <= v} / n
  double cdf(double v) const;

  // inf{v in support : F(v) >= u}; quantile(0) is the support minimum.
  // throws ValidationError for u outside [0,1].
  double quantile(double u) const;

  bool empty() const { return support_.empty(); }
  std::size_t sample_size() const { return n_; }
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& steps() const { return steps_; }

  static EmpiricalDistribution from_parts(std::vector<double> support,
                                          std::vector<double> steps,
                                          std::size_t n);

 private:
  std::vector<double> support_;  // ascending distinct values
  std::vector<double> steps_;    // cumulative probabilities, last == 1
  std::size_t n_ = 0;
};

// Half-open probability interval (F(x-), F(x)] of a discrete observation.
struct DiscreteCdfPair {
  double lower = 0.0;
  double upper = 0.0;
};

// Uniform draw on (lower, upper). Marginally Uniform(0,1) when the pair
// comes from the true conditional law. Throws ValidationError on a
// degenerate pair, which signals a zero-probability observed value.
double randomized_pit(const DiscreteCdfPair& pair, Rng& rng);

}  // namespace fairchain

#endif  // FAIRCHAIN_EMPIRICAL_HPP_
