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

#ifndef FAIRCHAIN_KS_HPP_
#define FAIRCHAIN_KS_HPP_

#include <cstddef>
#include <span>

namespace fairchain {

enum class KsVariant { Uniform, TwoSample };

struct KsReport {
  double statistic = 0.0;
  std::size_t n = 0;
  std::size_t n2 = 0;  // two-sample only
  double p_value = 1.0;
  KsVariant variant = KsVariant::Uniform;
};

// D = sup_t |ECDF(t) - t| against Uniform(0,1). The p-value uses the
// asymptotic Kolmogorov series evaluated at
// (sqrt(n) + 0.12 + 0.11/sqrt(n)) * D.
KsReport ks_uniform(std::span<const double> u);

// D = sup_t |F_a(t) - F_b(t)| with effective n = n_a n_b / (n_a + n_b).
// On discrete data the p-value is conservative.
KsReport ks_two_sample(std::span<const double> a, std::span<const double> b);

// Survival function of the Kolmogorov distribution,
// Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_q(double t);

}  // namespace fairchain

#endif  // FAIRCHAIN_KS_HPP_
