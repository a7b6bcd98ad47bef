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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fairchain/error.hpp"
#include "fairchain/glm.hpp"
#include "fairchain/linalg.hpp"
#include "fairchain/mathfn.hpp"
#include "fairchain/rng.hpp"
#include "synth.hpp"

using namespace fairchain;

namespace {

DesignMatrix intercept_only(std::size_t n) { return DesignMatrix(n); }

DesignMatrix with_z(const std::vector<double>& z) {
  DesignMatrix d(z.size());
  d.add_column("z", z);
  return d;
}

std::vector<double> fd_score(Family f, std::span<const double> params,
                             std::span<const double> y,
                             const DesignMatrix& x, double h = 1e-5) {
  std::vector<double> g(params.size());
  std::vector<double> p(params.begin(), params.end());
  for (std::size_t j = 0; j < p.size(); ++j) {
    double keep = p[j];
    p[j] = keep + h;
    double up = loglik_at(f, p, y, x);
    p[j] = keep - h;
    double down = loglik_at(f, p, y, x);
    p[j] = keep;
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

// asymptotic standard errors from the numeric Hessian of the score
std::vector<double> asymptotic_se(Family f, std::span<const double> params,
                                  std::span<const double> y,
                                  const DesignMatrix& x) {
  const std::size_t p = params.size();
  const double h = 1e-4;
  Matrix hess(p, p);
  std::vector<double> pt(params.begin(), params.end());
  for (std::size_t j = 0; j < p; ++j) {
    double keep = pt[j];
    pt[j] = keep + h;
    auto up = score_at(f, pt, y, x);
    pt[j] = keep - h;
    auto down = score_at(f, pt, y, x);
    pt[j] = keep;
    for (std::size_t i = 0; i < p; ++i)
      hess(i, j) = -(up[i] - down[i]) / (2.0 * h);  // observed information
  }
  // symmetrize, then invert column by column
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      double v = 0.5 * (hess(i, j) + hess(j, i));
      hess(i, j) = v;
      hess(j, i) = v;
    }
  std::vector<double> se(p);
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> e(p, 0.0);
    e[j] = 1.0;
    auto col = cholesky_solve(hess, e);
    se[j] = std::sqrt(col[j]);
  }
  return se;
}

}  // namespace

TEST_CASE("intercept-only closed forms") {
  {
    std::vector<double> y = {1, 1, 1, 0};
    auto m = fit(Family::Logistic, y, intercept_only(4));
    CHECK(std::fabs(m.coef[0] - std::log(3.0)) < 1e-6);
    CHECK(m.grad_norm < 1e-6);
  }
  {
    std::vector<double> y = {2, 4};
    auto m = fit(Family::Poisson, y, intercept_only(2));
    CHECK(std::fabs(m.coef[0] - std::log(3.0)) < 1e-6);
    CHECK(m.grad_norm < 1e-6);
  }
}

TEST_CASE("gaussian linear cdf is centered at the fitted mean") {
  std::vector<double> z = {0, 0, 1, 1};
  std::vector<double> y = {1.0, 3.0, 5.0, 7.0};
  auto m = fit(Family::GaussianLinear, y, with_z(z));
  // x = alpha + beta z -> PIT 0.5
  double alpha = m.coef[0], beta = m.coef[1];
  std::vector<double> row = {1.0, 1.0};
  CHECK(m.conditional_cdf(alpha + beta, row) == doctest::Approx(0.5));
}

TEST_CASE("linear residual ecdf evaluates counting residuals") {
  std::vector<double> y = {9.0, 10.0, 11.0};  // residuals {-1, 0, 1}
  auto m = fit(Family::LinearResidualEcdf, y, intercept_only(3));
  std::vector<double> row = {1.0};
  CHECK(m.conditional_cdf(10.0, row) == doctest::Approx(2.0 / 3.0));
  CHECK(m.residual_dist.sample_size() == 3);
}

TEST_CASE("poisson cdf and discrete pairs") {
  // intercept-only poisson with MLE mean 2
  std::vector<double> y = {1, 2, 3, 2};
  auto m = fit(Family::Poisson, y, intercept_only(4));
  std::vector<double> row = {1.0};
  double e2 = std::exp(-2.0);
  CHECK(m.conditional_cdf(0.0, row) == doctest::Approx(e2));
  auto pair = m.discrete_cdf_pair(1.0, row);
  CHECK(pair.lower == doctest::Approx(e2));
  CHECK(pair.upper == doctest::Approx(3.0 * e2));

  // upper - lower equals the pmf
  for (double x : {0.0, 1.0, 2.0, 5.0, 9.0}) {
    auto pr = m.discrete_cdf_pair(x, row);
    double pmf = std::exp(-2.0 + x * std::log(2.0) - std::lgamma(x + 1.0));
    CHECK(pr.upper - pr.lower == doctest::Approx(pmf).epsilon(1e-12));
  }

  CHECK_THROWS_AS(m.discrete_cdf_pair(1.5, row), ValidationError);
  CHECK_THROWS_AS(m.discrete_cdf_pair(-1.0, row), ValidationError);
}

TEST_CASE("logistic pairs") {
  // p = 0.7: response with mean 0.7 over 10 observations
  std::vector<double> y = {1, 1, 1, 1, 1, 1, 1, 0, 0, 0};
  auto m = fit(Family::Logistic, y, intercept_only(10));
  std::vector<double> row = {1.0};
  auto p0 = m.discrete_cdf_pair(0.0, row);
  CHECK(p0.lower == doctest::Approx(0.0));
  CHECK(p0.upper == doctest::Approx(0.3));
  auto p1 = m.discrete_cdf_pair(1.0, row);
  CHECK(p1.lower == doctest::Approx(0.3));
  CHECK(p1.upper == doctest::Approx(1.0));
}

TEST_CASE("zip mixture cdf at zero") {
  Rng rng(31);
  std::vector<double> y;
  for (int i = 0; i < 4000; ++i)
    y.push_back(rng.uniform01() < 0.4 ? 0.0 : synth::poisson_draw(rng, 6.0));
  auto m = fit(Family::Zip, y, intercept_only(y.size()));
  std::vector<double> row = {1.0};
  double pi = sigmoid(m.zero_coef[0]);
  double lambda = std::exp(m.coef[0]);
  auto pair = m.discrete_cdf_pair(0.0, row);
  CHECK(pair.lower == 0.0);
  CHECK(pair.upper ==
        doctest::Approx(pi + (1.0 - pi) * std::exp(-lambda)).epsilon(1e-10));
}

TEST_CASE("conditional cdf is monotone with limits 0 and 1") {
  Rng rng(33);
  std::vector<double> z(500), y(500);
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = synth::bernoulli_draw(rng, 0.5);
    y[i] = synth::poisson_draw(rng, std::exp(0.3 + 0.5 * z[i]));
  }
  for (Family f : {Family::Poisson, Family::NegBin, Family::Zip}) {
    ConditionalModel m;
    try {
      m = fit(f, y, with_z(z));
    } catch (const FitError&) {
      continue;  // zip needs zeros; fine either way on this draw
    }
    std::vector<double> row = {1.0, 1.0};
    double prev = 0.0;
    for (double x = 0; x <= 40; x += 1.0) {
      double c = m.conditional_cdf(x, row);
      CHECK(c >= prev - 1e-12);
      prev = c;
    }
    CHECK(m.conditional_cdf(-1.0, row) == 0.0);
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("analytic score matches finite differences away from the optimum") {
  Rng rng(101);
  const std::size_t n = 400;
  std::vector<double> z(n);
  for (auto& v : z) v = rng.uniform(-1.0, 1.0);
  DesignMatrix x = with_z(z);

  auto check_family = [&](Family f, std::vector<double> y,
                          std::vector<double> params) {
    auto analytic = score_at(f, params, y, x);
    auto numeric = fd_score(f, params, y, x);
    for (std::size_t j = 0; j < params.size(); ++j) {
      double denom = std::max({1.0, std::fabs(analytic[j]),
                               std::fabs(numeric[j])});
      CHECK(std::fabs(analytic[j] - numeric[j]) / denom < 1e-6);
    }
  };

  {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = synth::bernoulli_draw(rng, sigmoid(0.3 + 0.8 * z[i]));
    check_family(Family::Logistic, y, {0.1, 0.5});
  }
  {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = synth::poisson_draw(rng, std::exp(0.4 + 0.6 * z[i]));
    check_family(Family::Poisson, y, {0.2, 0.4});
    check_family(Family::NegBin, y, {0.2, 0.4, std::log(1.7)});
  }
  {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = 0.5 + 0.9 * z[i] + rng.normal();
    check_family(Family::GaussianLinear, y, {0.3, 0.7, std::log(1.2)});
  }
  {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = rng.uniform01() < 0.3 ? 0.0
                                   : synth::poisson_draw(
                                         rng, std::exp(1.0 + 0.5 * z[i]));
    check_family(Family::Zip, y, {0.8, 0.4, -0.7, 0.3});
    check_family(Family::Zinb, y, {0.8, 0.4, std::log(2.2), -0.7, 0.3});
  }
}

TEST_CASE("iteration traces are monotone") {
  Rng rng(55);
  const std::size_t n = 2000;
  std::vector<double> z(n), yc(n), yz(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = synth::bernoulli_draw(rng, 0.5);
    yc[i] = synth::negbin_draw(rng, std::exp(0.5 + 0.5 * z[i]), 1.2);
    yz[i] = rng.uniform01() < 0.35
                ? 0.0
                : synth::poisson_draw(rng, std::exp(1.2 + 0.4 * z[i]));
  }
  DesignMatrix x = with_z(z);
  for (Family f : {Family::NegBin, Family::Zip, Family::Zinb}) {
    auto m = fit(f, f == Family::NegBin ? yc : yz, x);
    for (std::size_t t = 1; t < m.fit_trace.size(); ++t)
      CHECK(m.fit_trace[t] >=
            m.fit_trace[t - 1] - 1e-8 * (1.0 + std::fabs(m.fit_trace[t - 1])));
  }
}

TEST_CASE("zip recovers a known zero-inflation weight") {
  Rng rng(77);
  std::vector<double> y;
  for (int i = 0; i < 10000; ++i)
    y.push_back(rng.uniform01() < 0.5 ? 0.0 : synth::poisson_draw(rng, 5.0));
  auto m = fit(Family::Zip, y, intercept_only(y.size()));
  double pi = 1.0 / (1.0 + std::exp(-m.zero_coef[0]));
  CHECK(std::fabs(pi - 0.5) < 0.03);
  CHECK(std::fabs(std::exp(m.coef[0]) - 5.0) < 0.15);
}

TEST_CASE("aic selection among count families") {
  Rng rng(88);
  const std::size_t n = 10000;
  {
    std::vector<double> y(n);
    for (auto& v : y) v = synth::poisson_draw(rng, 3.0);
    auto m = select_count_model(y, intercept_only(n));
    CHECK(m.family == Family::Poisson);
    CHECK(m.candidates.size() == 4);
  }
  {
    std::vector<double> y(n);
    for (auto& v : y) v = synth::negbin_draw(rng, 3.0, 0.5);
    auto m = select_count_model(y, intercept_only(n));
    CHECK(m.family == Family::NegBin);
  }
  {
    std::vector<double> y(n);
    for (auto& v : y)
      v = rng.uniform01() < 0.4 ? 0.0 : synth::poisson_draw(rng, 6.0);
    auto m = select_count_model(y, intercept_only(n));
    CHECK((m.family == Family::Zip || m.family == Family::Zinb));
  }
}

TEST_CASE("coefficient recovery within 3 asymptotic standard errors") {
  struct Case {
    Family family;
    std::vector<double> truth;  // packed layout
  };
  const std::vector<Case> cases = {
      {Family::GaussianLinear, {0.5, 0.8, std::log(1.3)}},
      {Family::Logistic, {-0.3, 0.9}},
      {Family::Poisson, {0.4, 0.6}},
      {Family::NegBin, {0.4, 0.6, std::log(1.5)}},
      {Family::Zip, {1.1, 0.4, -0.6, 0.5}},
      {Family::Zinb, {1.1, 0.4, std::log(2.0), -0.6, 0.5}},
  };
  const std::size_t n = 10000;

  for (const auto& c : cases) {
    // marginal calibration: each estimate within 3 SE of the truth with
    // the nominal ~99.7% frequency, tallied over replicates
    long within = 0, total = 0;
    for (int rep = 0; rep < 100; ++rep) {
      Rng rng(derive_stream({900, static_cast<std::uint64_t>(c.family),
                             static_cast<std::uint64_t>(rep)}));
      std::vector<double> z(n), y(n);
      for (auto& v : z) v = rng.uniform(-1.0, 1.0);
      DesignMatrix x = with_z(z);
      for (std::size_t i = 0; i < n; ++i) {
        double eta = c.truth[0] + c.truth[1] * z[i];
        switch (c.family) {
          case Family::GaussianLinear:
            y[i] = eta + std::exp(c.truth[2]) * rng.normal();
            break;
          case Family::Logistic:
            y[i] = synth::bernoulli_draw(rng, 1.0 / (1.0 + std::exp(-eta)));
            break;
          case Family::Poisson:
            y[i] = synth::poisson_draw(rng, std::exp(eta));
            break;
          case Family::NegBin:
            y[i] = synth::negbin_draw(rng, std::exp(eta),
                                      std::exp(c.truth[2]));
            break;
          case Family::Zip:
          case Family::Zinb: {
            std::size_t g0 = c.family == Family::Zip ? 2 : 3;
            double pi = 1.0 / (1.0 + std::exp(-(c.truth[g0] +
                                                c.truth[g0 + 1] * z[i])));
            if (rng.uniform01() < pi) {
              y[i] = 0.0;
            } else if (c.family == Family::Zip) {
              y[i] = synth::poisson_draw(rng, std::exp(eta));
            } else {
              y[i] = synth::negbin_draw(rng, std::exp(eta),
                                        std::exp(c.truth[2]));
            }
            break;
          }
          default:
            break;
        }
      }
      ConditionalModel m;
      try {
        m = fit(c.family, y, x);
      } catch (const FitError&) {
        continue;
      }
      auto est = pack_params(m);
      auto se = asymptotic_se(c.family, est, y, x);
      for (std::size_t j = 0; j < est.size(); ++j) {
        ++total;
        if (std::fabs(est[j] - c.truth[j]) <= 3.0 * se[j]) ++within;
      }
    }
    INFO("family ", std::string(family_name(c.family)), " within=", within,
         "/", total);
    CHECK(total >= 99);
    CHECK(within * 100 >= total * 99);
  }
}

TEST_CASE("fit errors") {
  // rank-deficient: duplicated column
  std::vector<double> z = {0, 1, 0, 1, 1, 0};
  DesignMatrix x(6);
  x.add_column("z", z);
  x.add_column("z_copy", z);
  std::vector<double> y = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  CHECK_THROWS_AS(fit(Family::GaussianLinear, y, x), RankDeficientError);

  // complete separation: z < 0 -> 0, z > 0 -> 1
  std::vector<double> zs(40), ys(40);
  for (int i = 0; i < 40; ++i) {
    zs[i] = i < 20 ? -1.0 - i * 0.05 : 1.0 + i * 0.05;
    ys[i] = i < 20 ? 0.0 : 1.0;
  }
  CHECK_THROWS_AS(fit(Family::Logistic, ys, with_z(zs)), SeparationError);

  // kind mismatches
  std::vector<double> frac = {0.5, 0.25, 1.0, 0.0};
  CHECK_THROWS_AS(fit(Family::Logistic, frac, intercept_only(4)),
                  ValidationError);
  std::vector<double> negative = {1, 2, -1, 3};
  CHECK_THROWS_AS(fit(Family::Poisson, negative, intercept_only(4)),
                  ValidationError);

  // zero-inflated families need both zeros and positives
  std::vector<double> all_pos = {1, 2, 3, 4};
  CHECK_THROWS_AS(fit(Family::Zip, all_pos, intercept_only(4)), FitError);
  std::vector<double> all_zero = {0, 0, 0, 0};
  CHECK_THROWS_AS(fit(Family::Zip, all_zero, intercept_only(4)), FitError);

  // response length mismatch
  CHECK_THROWS_AS(fit(Family::Poisson, std::vector<double>{1, 2},
                      intercept_only(3)),
                  ValidationError);
}

TEST_CASE("model json round trip preserves the transform") {
  Rng rng(404);
  const std::size_t n = 600;
  std::vector<double> z(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = synth::bernoulli_draw(rng, 0.5);
    y[i] = 2.0 * z[i] + rng.normal();
  }
  DesignMatrix x = with_z(z);
  for (Family f : {Family::LinearResidualEcdf, Family::GaussianLinear}) {
    auto m = fit(f, y, x);
    auto m2 = ConditionalModel::from_json(m.to_json());
    std::vector<double> row = {1.0, 1.0};
    for (double v : {-1.0, 0.5, 2.0, 3.5})
      CHECK(m.conditional_cdf(v, row) == m2.conditional_cdf(v, row));
  }
  {
    std::vector<double> yc(n);
    for (std::size_t i = 0; i < n; ++i)
      yc[i] = synth::poisson_draw(rng, std::exp(0.4 + 0.3 * z[i]));
    auto m = select_count_model(yc, x);
    auto m2 = ConditionalModel::from_json(m.to_json());
    CHECK(m.family == m2.family);
    CHECK(m.candidates.size() == m2.candidates.size());
    std::vector<double> row = {1.0, 0.0};
    for (double v : {0.0, 1.0, 2.0, 3.0}) {
      auto a = m.discrete_cdf_pair(v, row);
      auto b = m2.discrete_cdf_pair(v, row);
      CHECK(a.lower == b.lower);
      CHECK(a.upper == b.upper);
    }
  }
}
