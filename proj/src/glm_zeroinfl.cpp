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

#include <algorithm>
#include <cmath>

#include "fairchain/error.hpp"
#include "fairchain/mathfn.hpp"
#include "glm_internal.hpp"

namespace fairchain {

namespace {

// observed-data log-likelihood of the zero-inflated mixture
double zi_loglik(bool nb, std::span<const double> y,
                 std::span<const double> eta_count,
                 std::span<const double> eta_zero, double theta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double pi = sigmoid(eta_zero[i]);
    double mu = std::exp(eta_count[i]);
    if (y[i] == 0.0) {
      double p0 = nb ? std::exp(theta * (std::log(theta) - std::log(theta + mu)))
                     : std::exp(-mu);
      ll += std::log(std::max(pi + (1.0 - pi) * p0, 1e-300));
    } else {
      double lp = nb ? detail::log_pmf_negbin(y[i], mu, theta)
                     : detail::log_pmf_poisson(y[i], mu);
      ll += std::log1p(-pi) + lp;
    }
  }
  return ll;
}

}  // namespace

// EM: the zero component is a logistic regression on the same design,
// initialized from the observed zero fraction; the count component is
// initialized from positive-value moments. Each M step is a warm-started
// weighted fit run to convergence, so the observed-data log-likelihood
// never decreases.
ConditionalModel fit_zero_inflated(Family family,
                                   std::span<const double> y,
                                   const DesignMatrix& x,
                                   const FitOptions& opts) {
  const bool nb = family == Family::Zinb;
  const std::size_t n = x.n_rows();
  const std::size_t p = x.n_cols();

  std::size_t n_zero = 0;
  double pos_sum = 0.0, pos_sq = 0.0;
  std::size_t n_pos = 0;
  for (double v : y) {
    if (v == 0.0) {
      ++n_zero;
    } else {
      ++n_pos;
      pos_sum += v;
      pos_sq += v * v;
    }
  }
  if (n_zero == 0)
    throw FitError("zero-inflated fit requires zeros in the response");
  if (n_pos == 0)
    throw FitError("zero-inflated fit requires positive counts");

  const double f0 = std::clamp(static_cast<double>(n_zero) / n, 0.02, 0.98);
  std::vector<double> gamma(p, 0.0);
  gamma[0] = std::log(f0 / (1.0 - f0));

  const double mean_pos = pos_sum / n_pos;
  std::vector<double> beta(p, 0.0);
  beta[0] = std::log(std::max(mean_pos, 0.05));
  double theta = 0.0;
  if (nb) {
    double var_pos = pos_sq / n_pos - mean_pos * mean_pos;
    theta = var_pos > mean_pos
                ? std::clamp(mean_pos * mean_pos / (var_pos - mean_pos), 0.05,
                             1e6)
                : 10.0;
  }

  FitOptions inner = opts;
  inner.max_iter = 100;
  inner.loglik_rtol = 1e-10;
  inner.grad_tol = 1e-8;

  // EM trades off the zero weight against overdispersion and converges
  // only linearly; it needs far more sweeps than the Newton-type fits
  const int max_outer = std::max(opts.max_iter, 500);

  ConditionalModel m;
  m.family = family;

  std::vector<double> r(n), cw(n);
  auto eta_count = detail::linear_predictor(x, beta);
  auto eta_zero = detail::linear_predictor(x, gamma);
  double ll = zi_loglik(nb, y, eta_count, eta_zero, theta);
  m.fit_trace.push_back(ll);

  for (int iter = 0; iter < max_outer; ++iter) {
    // E step: responsibility of the zero component
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] == 0.0) {
        double pi = sigmoid(eta_zero[i]);
        double mu = std::exp(eta_count[i]);
        double p0 =
            nb ? std::exp(theta * (std::log(theta) - std::log(theta + mu)))
               : std::exp(-mu);
        double denom = std::max(pi + (1.0 - pi) * p0, 1e-300);
        r[i] = pi / denom;
      } else {
        r[i] = 0.0;
      }
      cw[i] = 1.0 - r[i];
    }

    // M steps, warm started
    auto zfit = detail::irls_logistic(x, r, nullptr, gamma, inner, false);
    gamma = std::move(zfit.beta);
    if (nb) {
      auto cfit = detail::fit_negbin_inner(x, y, cw.data(), beta, theta, inner);
      beta = std::move(cfit.beta);
      theta = cfit.theta;
    } else {
      auto cfit = detail::irls_poisson(x, y, cw.data(), beta, inner);
      beta = std::move(cfit.beta);
    }

    eta_count = detail::linear_predictor(x, beta);
    eta_zero = detail::linear_predictor(x, gamma);
    double ll_next = zi_loglik(nb, y, eta_count, eta_zero, theta);
    m.fit_trace.push_back(ll_next);
    if (ll_next < ll - 1e-7 * (1.0 + std::fabs(ll)))
      throw FitError("EM log-likelihood decreased; fit aborted");

    bool converged =
        std::fabs(ll_next - ll) <= opts.loglik_rtol * (1.0 + std::fabs(ll_next));
    ll = ll_next;
    if (converged && iter > 0) break;
    if (iter + 1 == max_outer)
      throw ConvergenceError(nb ? "zinb EM did not converge"
                                : "zip EM did not converge");
  }

  m.coef = std::move(beta);
  m.zero_coef = std::move(gamma);
  m.theta = theta;
  m.loglik = ll;
  m.n_params = static_cast<int>(2 * p) + (nb ? 1 : 0);
  m.aic = -2.0 * ll + 2.0 * m.n_params;

  std::vector<double> packed = pack_params(m);
  std::vector<double> score = score_at(family, packed, y, x);
  double g = 0.0;
  for (double v : score) g = std::max(g, std::fabs(v));
  m.grad_norm = g;
  return m;
}

}  // namespace fairchain
