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
//
// Test-only samplers and dataset builders. These stay out of the library
// on purpose: they are the independent side of the simulation oracles.

#ifndef FAIRCHAIN_TESTS_SYNTH_HPP_
#define FAIRCHAIN_TESTS_SYNTH_HPP_

#include <cmath>
#include <vector>

#include "fairchain/rng.hpp"
#include "fairchain/table.hpp"

namespace synth {

inline double poisson_draw(fairchain::Rng& rng, double lambda) {
  if (lambda < 30.0) {
    double l = std::exp(-lambda);
    double p = 1.0;
    double k = -1.0;
    do {
      k += 1.0;
      p *= rng.uniform01();
    } while (p > l);
    return k;
  }
  // normal approximation with rejection of negatives, adequate for tests
  for (;;) {
    double v = std::floor(lambda + std::sqrt(lambda) * rng.normal() + 0.5);
    if (v >= 0.0) return v;
  }
}

// Marsaglia–Tsang; shape boost for alpha < 1
inline double gamma_draw(fairchain::Rng& rng, double shape, double scale) {
  if (shape < 1.0) {
    double u = rng.uniform01();
    return gamma_draw(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = rng.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v * scale;
  }
}

// NB2 with mean mu and size theta (gamma-Poisson mixture)
inline double negbin_draw(fairchain::Rng& rng, double mu, double theta) {
  return poisson_draw(rng, gamma_draw(rng, theta, mu / theta));
}

inline double bernoulli_draw(fairchain::Rng& rng, double p) {
  return rng.uniform01() < p ? 1.0 : 0.0;
}

inline fairchain::Column continuous_column(std::string name,
                                           std::vector<double> values) {
  fairchain::Column c;
  c.name = std::move(name);
  c.kind = fairchain::ColumnKind::Continuous;
  c.values = std::move(values);
  return c;
}

inline fairchain::Column binary_column(std::string name,
                                       std::vector<double> values) {
  fairchain::Column c;
  c.name = std::move(name);
  c.kind = fairchain::ColumnKind::Binary;
  c.values = std::move(values);
  return c;
}

inline fairchain::Column count_column(std::string name,
                                      std::vector<double> values) {
  fairchain::Column c;
  c.name = std::move(name);
  c.kind = fairchain::ColumnKind::Count;
  c.values = std::move(values);
  return c;
}

inline fairchain::Column categorical_column(
    std::string name, std::vector<std::string> levels,
    std::vector<double> codes) {
  fairchain::Column c;
  c.name = std::move(name);
  c.kind = fairchain::ColumnKind::Categorical;
  c.levels = std::move(levels);
  c.values = std::move(codes);
  return c;
}

// A biased dataset: binary z pushes a continuous, a binary and a count
// covariate, and the outcome depends on covariates and z.
struct BiasedData {
  fairchain::Table table;
  std::vector<fairchain::VariableSpec> specs;
};

inline BiasedData make_biased_dataset(std::size_t n, std::uint64_t seed,
                                      double strength = 1.0) {
  using namespace fairchain;
  Rng rng(seed);
  std::vector<double> z(n), x1(n), x2(n), x3(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = bernoulli_draw(rng, 0.5);
    x1[i] = 1.5 * strength * z[i] + rng.normal();
    x2[i] = bernoulli_draw(rng, 0.25 + 0.4 * strength * z[i]);
    x3[i] = poisson_draw(rng, std::exp(0.2 + 0.9 * strength * z[i]));
    double eta = -0.8 + 0.8 * x1[i] + 0.6 * x2[i] + 0.25 * x3[i] -
                 0.5 * strength * z[i];
    y[i] = bernoulli_draw(rng, 1.0 / (1.0 + std::exp(-eta)));
  }
  BiasedData out;
  out.table.add_column(binary_column("z", std::move(z)));
  out.table.add_column(continuous_column("x1", std::move(x1)));
  out.table.add_column(binary_column("x2", std::move(x2)));
  out.table.add_column(count_column("x3", std::move(x3)));
  out.table.add_column(binary_column("y", std::move(y)));
  out.specs = {
      {"z", Role::Protected, ColumnKind::Binary, PreTransform::None,
       ModelChoice::Auto},
      {"x1", Role::Adjust, ColumnKind::Continuous, PreTransform::None,
       ModelChoice::Auto},
      {"x2", Role::Adjust, ColumnKind::Binary, PreTransform::None,
       ModelChoice::Auto},
      {"x3", Role::Adjust, ColumnKind::Count, PreTransform::None,
       ModelChoice::Auto},
      {"y", Role::Outcome, ColumnKind::Binary, PreTransform::None,
       ModelChoice::Auto},
  };
  return out;
}

}  // namespace synth

#endif  // FAIRCHAIN_TESTS_SYNTH_HPP_
