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

#include "fairchain/ks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairchain/error.hpp"

namespace fairchain {

double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.755) {
    // complementary theta-function form, accurate for small t
    double v = 1.2337005501361697 / (t * t);  // pi^2 / 8t^2
    double sum = std::exp(-v) + std::exp(-9.0 * v) + std::exp(-25.0 * v);
    double cdf = std::sqrt(2.0 * 3.14159265358979323846) / t * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-14) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double finite_n_pvalue(double d, double effective_n) {
  double sqrt_n = std::sqrt(effective_n);
  return kolmogorov_q((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
}

}  // namespace

KsReport ks_uniform(std::span<const double> u) {
  if (u.empty()) throw ValidationError("ks_uniform: empty input");
  std::vector<double> sorted(u.begin(), u.end());
  for (double v : sorted)
    if (!(v >= 0.0) || !(v <= 1.0))
      throw ValidationError("ks_uniform: value outside [0,1]");
  std::sort(sorted.begin(), sorted.end());

  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double above = (static_cast<double>(i) + 1.0) / n - sorted[i];
    double below = sorted[i] - static_cast<double>(i) / n;
    d = std::max(d, std::max(above, below));
  }

  KsReport r;
  r.statistic = d;
  r.n = sorted.size();
  r.p_value = finite_n_pvalue(d, n);
  r.variant = KsVariant::Uniform;
  return r;
}

KsReport ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw ValidationError("ks_two_sample: empty input");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < sa.size() && ib < sb.size()) {
    double t = std::min(sa[ia], sb[ib]);
    while (ia < sa.size() && sa[ia] <= t) ++ia;
    while (ib < sb.size() && sb[ib] <= t) ++ib;
    d = std::max(d, std::fabs(static_cast<double>(ia) / na -
                              static_cast<double>(ib) / nb));
  }

  KsReport r;
  r.statistic = d;
  r.n = sa.size();
  r.n2 = sb.size();
  r.p_value = finite_n_pvalue(d, na * nb / (na + nb));
  r.variant = KsVariant::TwoSample;
  return r;
}

}  // namespace fairchain
