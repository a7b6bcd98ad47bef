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

#include "fairchain/glm.hpp"

#include <algorithm>
#include <cmath>

#include "fairchain/error.hpp"
#include "fairchain/kernels.hpp"
#include "fairchain/mathfn.hpp"
#include "glm_internal.hpp"

namespace fairchain {

const char* family_name(Family f) {
  switch (f) {
    case Family::LinearResidualEcdf: return "linear_residual_ecdf";
    case Family::GaussianLinear: return "gaussian_linear";
    case Family::Logistic: return "logistic";
    case Family::Poisson: return "poisson";
    case Family::NegBin: return "negbin";
    case Family::Zip: return "zip";
    case Family::Zinb: return "zinb";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::LinearResidualEcdf, Family::GaussianLinear,
                   Family::Logistic, Family::Poisson, Family::NegBin,
                   Family::Zip, Family::Zinb})
    if (name == family_name(f)) return f;
  throw ValidationError("unknown model family: '" + name + "'");
}

bool family_is_discrete(Family f) {
  return f != Family::LinearResidualEcdf && f != Family::GaussianLinear;
}

DesignMatrix::DesignMatrix(std::size_t n_rows) : n_(n_rows) {
  names_.push_back("(intercept)");
  cols_.emplace_back(n_rows, 1.0);
}

void DesignMatrix::add_column(std::string name, std::vector<double> values) {
  if (values.size() != n_)
    throw Error("design column length mismatch: " + name);
  names_.push_back(std::move(name));
  cols_.push_back(std::move(values));
}

std::vector<double> DesignMatrix::row(std::size_t i) const {
  std::vector<double> r(cols_.size());
  for (std::size_t j = 0; j < cols_.size(); ++j) r[j] = cols_[j][i];
  return r;
}

namespace detail {

std::vector<double> linear_predictor(const DesignMatrix& x,
                                     std::span<const double> beta) {
  std::vector<double> eta(x.n_rows(), 0.0);
  for (std::size_t j = 0; j < x.n_cols(); ++j)
    kernels::axpy(beta[j], x.col(j), eta);
  return eta;
}

Matrix cross_products(const DesignMatrix& x, const double* w) {
  const std::size_t p = x.n_cols();
  const std::size_t n = x.n_rows();
  Matrix m(p, p);
  const auto& ops = kernels::active_ops();
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      double v = w ? ops.wdot(w, x.col(a).data(), x.col(b).data(), n)
                   : ops.dot(x.col(a).data(), x.col(b).data(), n);
      m(a, b) = v;
      m(b, a) = v;
    }
  }
  return m;
}

std::vector<double> cross_vector(const DesignMatrix& x, const double* w,
                                 std::span<const double> z) {
  const std::size_t p = x.n_cols();
  const std::size_t n = x.n_rows();
  std::vector<double> v(p);
  const auto& ops = kernels::active_ops();
  for (std::size_t a = 0; a < p; ++a)
    v[a] = w ? ops.wdot(w, x.col(a).data(), z.data(), n)
             : ops.dot(x.col(a).data(), z.data(), n);
  return v;
}

void check_full_rank(const DesignMatrix& x) {
  std::vector<double> rhs(x.n_cols(), 0.0);
  cholesky_solve(cross_products(x, nullptr), rhs);  // throws if deficient
}

double ll_logistic(std::span<const double> y, std::span<const double> eta,
                   const double* pw) {
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double t = y[i] * eta[i] - log1pexp(eta[i]);
    ll += pw ? pw[i] * t : t;
  }
  return ll;
}

double ll_poisson(std::span<const double> y, std::span<const double> eta,
                  const double* pw) {
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double t = y[i] * eta[i] - std::exp(eta[i]) - std::lgamma(y[i] + 1.0);
    ll += pw ? pw[i] * t : t;
  }
  return ll;
}

double ll_negbin(std::span<const double> y, std::span<const double> eta,
                 double theta, const double* pw) {
  double ll = 0.0;
  const double lg_theta = std::lgamma(theta);
  const double theta_log_theta = theta * std::log(theta);
  for (std::size_t i = 0; i < y.size(); ++i) {
    double mu = std::exp(eta[i]);
    double t = std::lgamma(y[i] + theta) - lg_theta - std::lgamma(y[i] + 1.0) +
               theta_log_theta + y[i] * eta[i] -
               (theta + y[i]) * std::log(theta + mu);
    ll += pw ? pw[i] * t : t;
  }
  return ll;
}

double log_pmf_poisson(double k, double mu) {
  return -mu + k * std::log(mu) - std::lgamma(k + 1.0);
}

double log_pmf_negbin(double k, double mu, double theta) {
  return std::lgamma(k + theta) - std::lgamma(theta) - std::lgamma(k + 1.0) +
         theta * (std::log(theta) - std::log(theta + mu)) +
         k * (std::log(mu) - std::log(theta + mu));
}

void check_binary_response(std::span<const double> y) {
  for (double v : y)
    if (v != 0.0 && v != 1.0)
      throw ValidationError("logistic family requires a 0/1 response");
}

void check_count_response(std::span<const double> y) {
  for (double v : y)
    if (!(v >= 0.0) || v != std::floor(v))
      throw ValidationError(
          "count families require non-negative integer responses");
}

namespace {

struct WlsStep {
  std::vector<double> irls_w;  // total IRLS weights
  std::vector<double> z;       // working response
};

// One step-halving line search on the given objective; returns the
// accepted beta and objective. If no step improves, keeps the start.
template <typename LogLik>
std::pair<std::vector<double>, double> halving_step(
    std::vector<double> beta, const std::vector<double>& proposal,
    double current_ll, const LogLik& loglik) {
  std::vector<double> dir(beta.size());
  for (std::size_t j = 0; j < beta.size(); ++j)
    dir[j] = proposal[j] - beta[j];
  double t = 1.0;
  for (int h = 0; h < 12; ++h) {
    std::vector<double> cand(beta.size());
    for (std::size_t j = 0; j < beta.size(); ++j)
      cand[j] = beta[j] + t * dir[j];
    double ll = loglik(cand);
    if (std::isfinite(ll) && ll >= current_ll) return {std::move(cand), ll};
    t *= 0.5;
  }
  return {std::move(beta), current_ll};
}

}  // namespace

IterFit irls_logistic(const DesignMatrix& x, std::span<const double> y,
                      const double* prior_w, std::vector<double> beta,
                      const FitOptions& opts, bool check_separation) {
  const std::size_t n = x.n_rows();
  if (beta.empty()) beta.assign(x.n_cols(), 0.0);

  auto loglik = [&](const std::vector<double>& b) {
    auto eta = linear_predictor(x, b);
    return ll_logistic(y, eta, prior_w);
  };

  // all-aligned signs certify a (weakly) separating direction; the
  // magnitude guard only rules out the near-zero starting point
  auto assert_not_separated = [&](const std::vector<double>& eta) {
    if (!check_separation) return;
    double max_eta = 0.0;
    for (double e : eta) max_eta = std::max(max_eta, std::fabs(e));
    if (max_eta <= 10.0) return;
    for (std::size_t i = 0; i < n; ++i)
      if ((2.0 * y[i] - 1.0) * eta[i] < -1e-8) return;
    throw SeparationError("complete separation: logistic MLE does not exist");
  };

  IterFit fit;
  double ll = loglik(beta);
  std::vector<double> w(n), z(n), resid(n);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    auto eta = linear_predictor(x, beta);
    assert_not_separated(eta);
    for (std::size_t i = 0; i < n; ++i) {
      double p = sigmoid(eta[i]);
      double v = std::max(p * (1.0 - p), 1e-10);
      double pw = prior_w ? prior_w[i] : 1.0;
      w[i] = std::max(pw * v, 1e-12);
      z[i] = eta[i] + (y[i] - p) / v;
      resid[i] = pw * (y[i] - p);
    }
    double grad = 0.0;
    for (std::size_t j = 0; j < x.n_cols(); ++j)
      grad = std::max(grad,
                      std::fabs(kernels::dot(x.col(j), resid)));

    std::vector<double> proposal =
        cholesky_solve(cross_products(x, w.data()), cross_vector(x, w.data(), z));
    auto [next, ll_next] = halving_step(std::move(beta), proposal, ll, loglik);
    beta = std::move(next);
    fit.trace.push_back(ll_next);

    bool ll_converged = std::fabs(ll_next - ll) <=
                        opts.loglik_rtol * (1.0 + std::fabs(ll_next));
    ll = ll_next;
    if (grad < opts.grad_tol || (ll_converged && iter > 0)) {
      assert_not_separated(linear_predictor(x, beta));
      fit.beta = std::move(beta);
      fit.loglik = ll;
      fit.grad_norm = grad;
      return fit;
    }
  }
  throw ConvergenceError("logistic fit did not converge");
}

IterFit irls_poisson(const DesignMatrix& x, std::span<const double> y,
                     const double* prior_w, std::vector<double> beta,
                     const FitOptions& opts) {
  const std::size_t n = x.n_rows();
  if (beta.empty()) {
    beta.assign(x.n_cols(), 0.0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double pw = prior_w ? prior_w[i] : 1.0;
      num += pw * y[i];
      den += pw;
    }
    beta[0] = std::log(std::max(num / std::max(den, 1e-12), 0.05));
  }

  auto loglik = [&](const std::vector<double>& b) {
    auto eta = linear_predictor(x, b);
    return ll_poisson(y, eta, prior_w);
  };

  IterFit fit;
  double ll = loglik(beta);
  std::vector<double> w(n), z(n), resid(n);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    auto eta = linear_predictor(x, beta);
    for (std::size_t i = 0; i < n; ++i) {
      double mu = std::exp(eta[i]);
      double pw = prior_w ? prior_w[i] : 1.0;
      w[i] = std::max(pw * mu, 1e-12);
      z[i] = eta[i] + (y[i] - mu) / std::max(mu, 1e-10);
      resid[i] = pw * (y[i] - mu);
    }
    double grad = 0.0;
    for (std::size_t j = 0; j < x.n_cols(); ++j)
      grad = std::max(grad, std::fabs(kernels::dot(x.col(j), resid)));

    std::vector<double> proposal =
        cholesky_solve(cross_products(x, w.data()), cross_vector(x, w.data(), z));
    auto [next, ll_next] = halving_step(std::move(beta), proposal, ll, loglik);
    beta = std::move(next);
    fit.trace.push_back(ll_next);

    bool ll_converged = std::fabs(ll_next - ll) <=
                        opts.loglik_rtol * (1.0 + std::fabs(ll_next));
    ll = ll_next;
    if (grad < opts.grad_tol || (ll_converged && iter > 0)) {
      fit.beta = std::move(beta);
      fit.loglik = ll;
      fit.grad_norm = grad;
      return fit;
    }
  }
  throw ConvergenceError("poisson fit did not converge");
}

namespace {

constexpr double kThetaMin = 1e-4;
constexpr double kThetaMax = 1e8;

// Newton iterations on log(theta) holding beta fixed.
double update_theta(std::span<const double> y, std::span<const double> eta,
                    const double* pw, double theta) {
  for (int it = 0; it < 50; ++it) {
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      double mu = std::exp(eta[i]);
      double w = pw ? pw[i] : 1.0;
      double g = digamma(y[i] + theta) - digamma(theta) + std::log(theta) +
                 1.0 - std::log(theta + mu) - (theta + y[i]) / (theta + mu);
      double h = trigamma(y[i] + theta) - trigamma(theta) + 1.0 / theta -
                 2.0 / (theta + mu) + (theta + y[i]) / ((theta + mu) * (theta + mu));
      d1 += w * g;
      d2 += w * h;
    }
    // derivatives in u = log(theta)
    double gu = theta * d1;
    double hu = theta * theta * d2 + gu;
    if (std::fabs(gu) < 1e-10) break;
    double step = hu < -1e-12 ? -gu / hu : (gu > 0 ? 0.5 : -0.5);
    step = std::clamp(step, -2.0, 2.0);

    double ll0 = ll_negbin(y, eta, theta, pw);
    double t = 1.0;
    double theta_new = theta;
    for (int h2 = 0; h2 < 12; ++h2) {
      double cand = std::clamp(theta * std::exp(t * step), kThetaMin, kThetaMax);
      if (ll_negbin(y, eta, cand, pw) >= ll0) {
        theta_new = cand;
        break;
      }
      t *= 0.5;
    }
    if (theta_new == theta) break;
    theta = theta_new;
  }
  return theta;
}

}  // namespace

IterFit fit_negbin_inner(const DesignMatrix& x, std::span<const double> y,
                         const double* prior_w, std::vector<double> beta,
                         double theta, const FitOptions& opts) {
  const std::size_t n = x.n_rows();
  if (beta.empty())
    beta = irls_poisson(x, y, prior_w, {}, opts).beta;

  auto eta0 = linear_predictor(x, beta);
  if (theta <= 0.0) {
    // moment start: theta = sum(mu^2) / sum((y-mu)^2 - mu)
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double mu = std::exp(eta0[i]);
      double pw = prior_w ? prior_w[i] : 1.0;
      num += pw * mu * mu;
      den += pw * ((y[i] - mu) * (y[i] - mu) - mu);
    }
    theta = den > 1e-8 ? std::clamp(num / den, 0.05, kThetaMax) : kThetaMax;
  }

  IterFit fit;
  double ll = ll_negbin(y, eta0, theta, prior_w);
  std::vector<double> w(n), z(n), resid(n);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    // IRLS sweep for beta at fixed theta
    auto loglik_beta = [&](const std::vector<double>& b) {
      auto eta = linear_predictor(x, b);
      return ll_negbin(y, eta, theta, prior_w);
    };
    auto eta = linear_predictor(x, beta);
    for (std::size_t i = 0; i < n; ++i) {
      double mu = std::exp(eta[i]);
      double pw = prior_w ? prior_w[i] : 1.0;
      w[i] = std::max(pw * mu * theta / (mu + theta), 1e-12);
      z[i] = eta[i] + (y[i] - mu) / std::max(mu, 1e-10);
      resid[i] = pw * (y[i] - mu) * theta / (theta + mu);
    }
    std::vector<double> proposal =
        cholesky_solve(cross_products(x, w.data()), cross_vector(x, w.data(), z));
    auto [next, ll_beta] = halving_step(std::move(beta), proposal, ll, loglik_beta);
    beta = std::move(next);

    eta = linear_predictor(x, beta);
    theta = update_theta(y, eta, prior_w, theta);
    double ll_next = ll_negbin(y, eta, theta, prior_w);
    fit.trace.push_back(ll_next);

    // score sup-norm over beta and log(theta)
    double grad = 0.0;
    {
      for (std::size_t i = 0; i < n; ++i) {
        double mu = std::exp(eta[i]);
        double pw = prior_w ? prior_w[i] : 1.0;
        resid[i] = pw * (y[i] - mu) * theta / (theta + mu);
      }
      for (std::size_t j = 0; j < x.n_cols(); ++j)
        grad = std::max(grad, std::fabs(kernels::dot(x.col(j), resid)));
      double d1 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double mu = std::exp(eta[i]);
        double pw = prior_w ? prior_w[i] : 1.0;
        d1 += pw * (digamma(y[i] + theta) - digamma(theta) + std::log(theta) +
                    1.0 - std::log(theta + mu) - (theta + y[i]) / (theta + mu));
      }
      if (theta < kThetaMax * 0.99)  // score in log(theta), skip at the cap
        grad = std::max(grad, std::fabs(theta * d1));
    }

    bool ll_converged = std::fabs(ll_next - ll) <=
                        opts.loglik_rtol * (1.0 + std::fabs(ll_next));
    ll = ll_next;
    if (grad < opts.grad_tol || (ll_converged && iter > 0)) {
      fit.beta = std::move(beta);
      fit.theta = theta;
      fit.loglik = ll;
      fit.grad_norm = grad;
      return fit;
    }
  }
  throw ConvergenceError("negative binomial fit did not converge");
}

}  // namespace detail

namespace {

ConditionalModel finish_linear(Family family, std::span<const double> y,
                               const DesignMatrix& x) {
  const std::size_t n = x.n_rows();
  const std::size_t p = x.n_cols();
  std::vector<double> beta = cholesky_solve(
      detail::cross_products(x, nullptr), detail::cross_vector(x, nullptr, y));
  std::vector<double> eta = detail::linear_predictor(x, beta);
  std::vector<double> resid(n);
  kernels::sub(y, eta, resid);
  double rss = kernels::dot(resid, resid);
  double sigma2 = rss / static_cast<double>(n);
  double sigma = std::sqrt(sigma2);

  ConditionalModel m;
  m.family = family;
  m.coef = std::move(beta);
  m.sigma = sigma;
  double sigma2_safe = std::max(sigma2, 1e-300);
  m.loglik = -0.5 * static_cast<double>(n) *
             (std::log(2.0 * 3.14159265358979323846 * sigma2_safe) + 1.0);
  m.n_params = static_cast<int>(p) + 1;
  m.aic = -2.0 * m.loglik + 2.0 * m.n_params;
  if (family == Family::LinearResidualEcdf)
    m.residual_dist = EmpiricalDistribution::from_sample(resid);
  return m;
}

}  // namespace

ConditionalModel fit(Family family, std::span<const double> response,
                     const DesignMatrix& design, const FitOptions& opts) {
  if (response.size() != design.n_rows())
    throw ValidationError("response length does not match design rows");
  if (design.n_rows() == 0) throw ValidationError("empty response");
  for (double v : response)
    if (!std::isfinite(v))
      throw ValidationError("response contains a non-finite value");
  detail::check_full_rank(design);

  switch (family) {
    case Family::LinearResidualEcdf:
    case Family::GaussianLinear:
      return finish_linear(family, response, design);

    case Family::Logistic: {
      detail::check_binary_response(response);
      double mean = kernels::sum(response) / response.size();
      std::vector<double> beta(design.n_cols(), 0.0);
      beta[0] = std::log(std::clamp(mean, 0.02, 0.98) /
                         (1.0 - std::clamp(mean, 0.02, 0.98)));
      auto r = detail::irls_logistic(design, response, nullptr,
                                     std::move(beta), opts, true);
      ConditionalModel m;
      m.family = family;
      m.coef = std::move(r.beta);
      m.loglik = r.loglik;
      m.grad_norm = r.grad_norm;
      m.fit_trace = std::move(r.trace);
      m.n_params = static_cast<int>(design.n_cols());
      m.aic = -2.0 * m.loglik + 2.0 * m.n_params;
      return m;
    }

    case Family::Poisson: {
      detail::check_count_response(response);
      auto r = detail::irls_poisson(design, response, nullptr, {}, opts);
      ConditionalModel m;
      m.family = family;
      m.coef = std::move(r.beta);
      m.loglik = r.loglik;
      m.grad_norm = r.grad_norm;
      m.fit_trace = std::move(r.trace);
      m.n_params = static_cast<int>(design.n_cols());
      m.aic = -2.0 * m.loglik + 2.0 * m.n_params;
      return m;
    }

    case Family::NegBin: {
      detail::check_count_response(response);
      auto r = detail::fit_negbin_inner(design, response, nullptr, {}, 0.0, opts);
      ConditionalModel m;
      m.family = family;
      m.coef = std::move(r.beta);
      m.theta = r.theta;
      m.loglik = r.loglik;
      m.grad_norm = r.grad_norm;
      m.fit_trace = std::move(r.trace);
      m.n_params = static_cast<int>(design.n_cols()) + 1;
      m.aic = -2.0 * m.loglik + 2.0 * m.n_params;
      return m;
    }

    case Family::Zip:
    case Family::Zinb:
      return fit_zero_inflated(family, response, design, opts);
  }
  throw Error("unreachable family");
}

ConditionalModel select_count_model(std::span<const double> response,
                                    const DesignMatrix& design,
                                    const FitOptions& opts) {
  detail::check_count_response(response);
  ConditionalModel best;
  bool have_best = false;
  std::vector<CandidateFit> record;
  for (Family f : {Family::Poisson, Family::NegBin, Family::Zip, Family::Zinb}) {
    CandidateFit c;
    c.family = f;
    try {
      ConditionalModel m = fit(f, response, design, opts);
      c.ok = true;
      c.aic = m.aic;
      if (!have_best || m.aic < best.aic) {
        best = std::move(m);
        have_best = true;
      }
    } catch (const Error& e) {
      c.ok = false;
      c.error = e.what();
    }
    record.push_back(std::move(c));
  }
  if (!have_best)
    throw FitError("all count-model candidates failed to fit");
  best.candidates = std::move(record);
  return best;
}

double ConditionalModel::linear_predictor(
    std::span<const double> covariates) const {
  if (covariates.size() != coef.size())
    throw ValidationError("covariate layout mismatch");
  return kernels::dot(covariates, coef);
}

namespace {

// pmf of the count component at integer k, including zero inflation
double count_pmf(const ConditionalModel& m, double k, double mu, double pi) {
  double base;
  switch (m.family) {
    case Family::Poisson:
      base = std::exp(detail::log_pmf_poisson(k, mu));
      return base;
    case Family::NegBin:
      base = std::exp(detail::log_pmf_negbin(k, mu, m.theta));
      return base;
    case Family::Zip:
      base = std::exp(detail::log_pmf_poisson(k, mu));
      return k == 0.0 ? pi + (1.0 - pi) * base : (1.0 - pi) * base;
    case Family::Zinb:
      base = std::exp(detail::log_pmf_negbin(k, mu, m.theta));
      return k == 0.0 ? pi + (1.0 - pi) * base : (1.0 - pi) * base;
    default:
      throw Error("count_pmf: not a count family");
  }
}

}  // namespace

double ConditionalModel::conditional_cdf(
    double x, std::span<const double> covariates) const {
  const double eta = linear_predictor(covariates);
  switch (family) {
    case Family::LinearResidualEcdf:
      return residual_dist.cdf(x - eta);
    case Family::GaussianLinear:
      return sigma > 0.0 ? normal_cdf((x - eta) / sigma)
                         : (x < eta ? 0.0 : 1.0);
    case Family::Logistic: {
      if (x < 0.0) return 0.0;
      if (x < 1.0) return 1.0 - sigmoid(eta);
      return 1.0;
    }
    case Family::Poisson:
    case Family::NegBin:
    case Family::Zip:
    case Family::Zinb: {
      if (x < 0.0) return 0.0;
      double pi = 0.0;
      if (family == Family::Zip || family == Family::Zinb) {
        if (covariates.size() != zero_coef.size())
          throw ValidationError("covariate layout mismatch");
        pi = sigmoid(kernels::dot(covariates, zero_coef));
      }
      const double mu = std::exp(eta);
      const double kmax = std::floor(x);
      double cum = 0.0;
      for (double k = 0.0; k <= kmax; k += 1.0) {
        cum += count_pmf(*this, k, mu, pi);
        if (cum > 1.0 - 1e-12) return 1.0;  // remaining mass is negligible
      }
      return std::min(cum, 1.0);
    }
  }
  throw Error("unreachable family");
}

DiscreteCdfPair ConditionalModel::discrete_cdf_pair(
    double x, std::span<const double> covariates) const {
  if (!is_discrete())
    throw ValidationError(
        "discrete_cdf_pair is undefined for continuous families");
  const double eta = linear_predictor(covariates);

  if (family == Family::Logistic) {
    double p1 = sigmoid(eta);
    if (x == 0.0) return {0.0, 1.0 - p1};
    if (x == 1.0) return {1.0 - p1, 1.0};
    throw ValidationError("binary observation outside {0,1}");
  }

  if (!(x >= 0.0) || x != std::floor(x))
    throw ValidationError("count observation outside the support");
  double pi = 0.0;
  if (family == Family::Zip || family == Family::Zinb) {
    if (covariates.size() != zero_coef.size())
      throw ValidationError("covariate layout mismatch");
    pi = sigmoid(kernels::dot(covariates, zero_coef));
  }
  const double mu = std::exp(eta);
  double lower = 0.0;
  for (double k = 0.0; k < x; k += 1.0) {
    lower += count_pmf(*this, k, mu, pi);
    if (lower > 1.0) {
      lower = 1.0;
      break;
    }
  }
  lower = std::min(lower, 1.0);
  double upper = std::min(lower + count_pmf(*this, x, mu, pi), 1.0);
  return {lower, upper};
}

}  // namespace fairchain
