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

#ifndef FAIRCHAIN_GLM_HPP_
#define FAIRCHAIN_GLM_HPP_

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairchain/empirical.hpp"

namespace fairchain {

// Conditional model families for one adjusted variable given its design.
//
// LinearResidualEcdf is the default continuous family: a least-squares
// mean with the error distribution estimated by the empirical CDF of the
// raw residuals. GaussianLinear is the fully parametric counterpart.
// The count families are fitted by IRLS (Poisson), profiled Newton on
// theta (NegBin), and EM with a logistic zero component (Zip, Zinb).
enum class Family {
  LinearResidualEcdf,
  GaussianLinear,
  Logistic,
  Poisson,
  NegBin,
  Zip,
  Zinb,
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);
bool family_is_discrete(Family f);

// Column-major design: an intercept plus dummy-coded protected levels
// plus previously adjusted variables.
class DesignMatrix {
 public:
  explicit DesignMatrix(std::size_t n_rows);

  void add_column(std::string name, std::vector<double> values);

  std::size_t n_rows() const { return n_; }
  std::size_t n_cols() const { return cols_.size(); }
  std::span<const double> col(std::size_t j) const { return cols_[j]; }
  const std::string& name(std::size_t j) const { return names_[j]; }
  std::vector<double> row(std::size_t i) const;

 private:
  std::size_t n_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> cols_;
};

struct FitOptions {
  int max_iter = 100;
  double loglik_rtol = 1e-8;
  double grad_tol = 1e-6;
};

struct CandidateFit {
  Family family = Family::Poisson;
  double aic = 0.0;
  bool ok = false;
  std::string error;
};

struct ConditionalModel {
  Family family = Family::GaussianLinear;
  std::vector<double> coef;       // mean / count component, intercept first
  std::vector<double> zero_coef;  // logistic zero component (zip/zinb)
  double sigma = 0.0;             // residual scale (gaussian / linear)
  double theta = 0.0;             // negbin size
  EmpiricalDistribution residual_dist;  // linear_residual_ecdf only
  double loglik = 0.0;
  double aic = 0.0;
  int n_params = 0;
  double grad_norm = 0.0;           // sup-norm of the score at convergence
  std::vector<double> fit_trace;    // objective per outer iteration
  std::vector<CandidateFit> candidates;  // AIC selection record

  bool is_discrete() const { return family_is_discrete(family); }

  // eta = covariates . coef; covariates must be a full design row
  // (intercept included). Throws ValidationError on layout mismatch.
  double linear_predictor(std::span<const double> covariates) const;

  // F_{x|z}(x | covariates); monotone non-decreasing in x.
  double conditional_cdf(double x, std::span<const double> covariates) const;

  // (F(x-), F(x)) for a discrete observation; upper - lower is exactly
  // the conditional pmf at x. Throws for continuous families and for x
  // outside the support.
  DiscreteCdfPair discrete_cdf_pair(double x,
                                    std::span<const double> covariates) const;

  nlohmann::json to_json() const;
  static ConditionalModel from_json(const nlohmann::json& j);
};

// Maximum-likelihood (or least-squares + residual ECDF) fit.
ConditionalModel fit(Family family, std::span<const double> response,
                     const DesignMatrix& design, const FitOptions& opts = {});

// Fits poisson, negbin, zip and zinb and keeps the minimum-AIC model;
// per-candidate outcomes are recorded in the returned model.
ConditionalModel select_count_model(std::span<const double> response,
                                    const DesignMatrix& design,
                                    const FitOptions& opts = {});

// Packed parameter vector per family, used by the optimizer checks:
//   GaussianLinear  [beta, log sigma]
//   Logistic        [beta]
//   Poisson         [beta]
//   NegBin          [beta, log theta]
//   Zip             [beta, gamma]
//   Zinb            [beta, log theta, gamma]
std::vector<double> pack_params(const ConditionalModel& m);
double loglik_at(Family f, std::span<const double> params,
                 std::span<const double> response, const DesignMatrix& design);
std::vector<double> score_at(Family f, std::span<const double> params,
                             std::span<const double> response,
                             const DesignMatrix& design);

}  // namespace fairchain

#endif  // FAIRCHAIN_GLM_HPP_
