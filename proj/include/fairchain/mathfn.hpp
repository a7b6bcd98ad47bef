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

#ifndef FAIRCHAIN_MATHFN_HPP_
#define FAIRCHAIN_MATHFN_HPP_

#include <cmath>

namespace fairchain {

// standard normal distribution function
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z * 0.7071067811865475244008443621048490);
}

// log(1 + e^x) without overflow
inline double log1pexp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// digamma and trigamma via upward recurrence into the asymptotic region
double digamma(double x);
double trigamma(double x);

}  // namespace fairchain

#endif  // FAIRCHAIN_MATHFN_HPP_
