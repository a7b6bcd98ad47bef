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

#include <cmath>

#include "fairchain/error.hpp"
#include "fairchain/mathfn.hpp"
#include "glm_internal.hpp"

namespace fairchain {

std::vector<double> pack_params(const ConditionalModel& m) {
  std::vector<double> v = m.coef;
  switch (m.family) {
    case Family::GaussianLinear:
      v.push_back(std::log(std::max(m.sigma, 1e-300)));
      break;
    case Family::NegBin:
      v.push_back(std::log(m.theta));
      break;
    case Family::Zinb:
      v.push_back(std::log(m.theta));
      v.insert(v.end(), m.zero_coef.begin(), m.zero_coef.end());
      break;
    case Family::Zip:
      v.insert(v.end(), m.zero_coef.begin(), m.zero_coef.end());
      break;
    default:
      break;
  }
  return v;
}

namespace {

struct Unpacked {
  std::span<const double> beta;
  std::span<const double> gamma;  // zero component
  double sigma = 0.0;
  double theta = 0.0;
};

Unpacked unpack(Family f, std::span<const double> params, std::size_t p) {
  Unpacked u;
  switch (f) {
    case Family::GaussianLinear:
      if (params.size() != p + 1) throw Error("bad parameter vector");
      u.beta = params.subspan(0, p);
      u.sigma = std::exp(params[p]);
      return u;
    case Family::Logistic:
    case Family::Poisson:
      if (params.size() != p) throw Error("bad parameter vector");
      u.beta = params.subspan(0, p);
      return u;
    case Family::NegBin:
      if (params.size() != p + 1) throw Error("bad parameter vector");
      u.beta = params.subspan(0, p);
      u.theta = std::exp(params[p]);
      return u;
    case Family::Zip:
      if (params.size() != 2 * p) throw Error("bad parameter vector");
      u.beta = params.subspan(0, p);
      u.gamma = params.subspan(p, p);
      return u;
    case Family::Zinb:
      if (params.size() != 2 * p + 1) throw Error("bad parameter vector");
      u.beta = params.subspan(0, p);
      u.theta = std::exp(params[p]);
      u.gamma = params.subspan(p + 1, p);
      return u;
    case Family::LinearResidualEcdf:
      break;
  }
  throw Error("linear_residual_ecdf has no smooth likelihood");
}

}  // namespace

double loglik_at(Family f, std::span<const double> params,
                 std::span<const double> y, const DesignMatrix& x) {
  const std::size_t p = x.n_cols();
  Unpacked u = unpack(f, params, p);
  auto eta = detail::linear_predictor(x, u.beta);

  switch (f) {
    case Family::GaussianLinear: {
      double ll = 0.0;
      double s2 = u.sigma * u.sigma;
      for (std::size_t i = 0; i < y.size(); ++i) {
        double r = y[i] - eta[i];
        ll += -0.5 * std::log(2.0 * 3.14159265358979323846 * s2) -
              r * r / (2.0 * s2);
      }
      return ll;
    }
    case Family::Logistic:
      return detail::ll_logistic(y, eta, nullptr);
    case Family::Poisson:
      return detail::ll_poisson(y, eta, nullptr);
    case Family::NegBin:
      return detail::ll_negbin(y, eta, u.theta, nullptr);
    case Family::Zip:
    case Family::Zinb: {
      auto eta_zero = detail::linear_predictor(x, u.gamma);
      const bool nb = f == Family::Zinb;
      double ll = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        double pi = sigmoid(eta_zero[i]);
        double mu = std::exp(eta[i]);
        if (y[i] == 0.0) {
          double p0 =
              nb ? std::exp(u.theta * (std::log(u.theta) -
                                       std::log(u.theta + mu)))
                 : std::exp(-mu);
          ll += std::log(std::max(pi + (1.0 - pi) * p0, 1e-300));
        } else {
          double lp = nb ? detail::log_pmf_negbin(y[i], mu, u.theta)
                         : detail::log_pmf_poisson(y[i], mu);
          ll += std::log1p(-pi) + lp;
        }
      }
      return ll;
    }
    case Family::LinearResidualEcdf:
      break;
  }
  throw Error("linear_residual_ecdf has no smooth likelihood");
}

std::vector<double> score_at(Family f, std::span<const double> params,
                             std::span<const double> y,
                             const DesignMatrix& x) {
  const std::size_t p = x.n_cols();
  const std::size_t n = x.n_rows();
  Unpacked u = unpack(f, params, p);
  auto eta = detail::linear_predictor(x, u.beta);
  std::vector<double> g(params.size(), 0.0);

  auto add_beta = [&](std::size_t i, double w) {
    for (std::size_t j = 0; j < p; ++j) g[j] += w * x.col(j)[i];
  };

  switch (f) {
    case Family::GaussianLinear: {
      double s2 = u.sigma * u.sigma;
      for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - eta[i];
        add_beta(i, r / s2);
        g[p] += r * r / s2 - 1.0;  // d/d log sigma
      }
      return g;
    }
    case Family::Logistic: {
      for (std::size_t i = 0; i < n; ++i)
        add_beta(i, y[i] - sigmoid(eta[i]));
      return g;
    }
    case Family::Poisson: {
      for (std::size_t i = 0; i < n; ++i)
        add_beta(i, y[i] - std::exp(eta[i]));
      return g;
    }
    case Family::NegBin: {
      double dtheta = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double mu = std::exp(eta[i]);
        add_beta(i, (y[i] - mu) * u.theta / (u.theta + mu));
        dtheta += digamma(y[i] + u.theta) - digamma(u.theta) +
                  std::log(u.theta) + 1.0 - std::log(u.theta + mu) -
                  (u.theta + y[i]) / (u.theta + mu);
      }
      g[p] = u.theta * dtheta;  // d/d log theta
      return g;
    }
    case Family::Zip:
    case Family::Zinb: {
      const bool nb = f == Family::Zinb;
      auto eta_zero = detail::linear_predictor(x, u.gamma);
      const std::size_t gamma_off = nb ? p + 1 : p;
      auto add_gamma = [&](std::size_t i, double w) {
        for (std::size_t j = 0; j < p; ++j)
          g[gamma_off + j] += w * x.col(j)[i];
      };
      for (std::size_t i = 0; i < n; ++i) {
        double pi = sigmoid(eta_zero[i]);
        double mu = std::exp(eta[i]);
        if (y[i] == 0.0) {
          double p0, dp0_deta, dlogp0_dtheta = 0.0;
          if (nb) {
            p0 = std::exp(u.theta *
                          (std::log(u.theta) - std::log(u.theta + mu)));
            dp0_deta = -p0 * u.theta * mu / (u.theta + mu);
            dlogp0_dtheta = std::log(u.theta) - std::log(u.theta + mu) + 1.0 -
                            u.theta / (u.theta + mu);
          } else {
            p0 = std::exp(-mu);
            dp0_deta = -p0 * mu;
          }
          double a = std::max(pi + (1.0 - pi) * p0, 1e-300);
          add_gamma(i, pi * (1.0 - pi) * (1.0 - p0) / a);
          add_beta(i, (1.0 - pi) * dp0_deta / a);
          if (nb)
            g[p] += u.theta * (1.0 - pi) * p0 * dlogp0_dtheta / a;
        } else {
          add_gamma(i, -pi);
          if (nb) {
            add_beta(i, (y[i] - mu) * u.theta / (u.theta + mu));
            g[p] += u.theta * (digamma(y[i] + u.theta) - digamma(u.theta) +
                               std::log(u.theta) + 1.0 -
                               std::log(u.theta + mu) -
                               (u.theta + y[i]) / (u.theta + mu));
          } else {
            add_beta(i, y[i] - mu);
          }
        }
      }
      return g;
    }
    case Family::LinearResidualEcdf:
      break;
  }
  throw Error("linear_residual_ecdf has no smooth likelihood");
}

ConditionalModel ConditionalModel::from_json(const nlohmann::json& j) {
  try {
    ConditionalModel m;
    m.family = family_from_name(j.at("family").get<std::string>());
    m.coef = j.at("coef").get<std::vector<double>>();
    if (j.contains("zero_coef"))
      m.zero_coef = j["zero_coef"].get<std::vector<double>>();
    m.sigma = j.value("sigma", 0.0);
    m.theta = j.value("theta", 0.0);
    m.loglik = j.at("loglik").get<double>();
    m.aic = j.at("aic").get<double>();
    m.n_params = j.at("n_params").get<int>();
    if (j.contains("residual_support")) {
      m.residual_dist = EmpiricalDistribution::from_parts(
          j["residual_support"].get<std::vector<double>>(),
          j["residual_steps"].get<std::vector<double>>(),
          j.value("residual_n", std::size_t{0}));
    }
    if (j.contains("candidates")) {
      for (const auto& c : j["candidates"]) {
        CandidateFit cf;
        cf.family = family_from_name(c.at("family").get<std::string>());
        cf.ok = c.at("ok").get<bool>();
        cf.aic = c.value("aic", 0.0);
        cf.error = c.value("error", std::string());
        m.candidates.push_back(std::move(cf));
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  }
}

nlohmann::json ConditionalModel::to_json() const {
  nlohmann::json j;
  j["family"] = family_name(family);
  j["coef"] = coef;
  if (!zero_coef.empty()) j["zero_coef"] = zero_coef;
  if (sigma != 0.0) j["sigma"] = sigma;
  if (theta != 0.0) j["theta"] = theta;
  j["loglik"] = loglik;
  j["aic"] = aic;
  j["n_params"] = n_params;
  if (!residual_dist.empty()) {
    j["residual_support"] = residual_dist.support();
    j["residual_steps"] = residual_dist.steps();
    j["residual_n"] = residual_dist.sample_size();
  }
  if (!candidates.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : candidates) {
      nlohmann::json e;
      e["family"] = family_name(c.family);
      e["ok"] = c.ok;
      if (c.ok) e["aic"] = c.aic;
      else e["error"] = c.error;
      arr.push_back(std::move(e));
    }
    j["candidates"] = arr;
  }
  return j;
}

}  // namespace fairchain
