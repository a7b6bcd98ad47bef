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

#ifndef FAIRCHAIN_SRC_GLM_INTERNAL_HPP_
#define FAIRCHAIN_SRC_GLM_INTERNAL_HPP_

#include <span>
#include <vector>

#include "fairchain/glm.hpp"
#include "fairchain/linalg.hpp"

namespace fairchain::detail {

// eta = X beta, accumulated column-wise through the kernels
std::vector<double> linear_predictor(const DesignMatrix& x,
                                     std::span<const double> beta);

// X' diag(w) X  (w == nullptr means unweighted)
Matrix cross_products(const DesignMatrix& x, const double* w);
// X' diag(w) z
std::vector<double> cross_vector(const DesignMatrix& x, const double* w,
                                 std::span<const double> z);

// throws RankDeficientError when X'X has a collapsing pivot
void check_full_rank(const DesignMatrix& x);

struct IterFit {
  std::vector<double> beta;
  double theta = 0.0;  // negbin only
  double loglik = 0.0;
  double grad_norm = 0.0;
  std::vector<double> trace;
};

// IRLS with step halving. prior_w may be null. Fractional responses in
// [0,1] are allowed for the logistic EM zero component; separation is
// only diagnosed for hard 0/1 responses.
IterFit irls_logistic(const DesignMatrix& x, std::span<const double> y,
                      const double* prior_w, std::vector<double> beta,
                      const FitOptions& opts, bool check_separation);

IterFit irls_poisson(const DesignMatrix& x, std::span<const double> y,
                     const double* prior_w, std::vector<double> beta,
                     const FitOptions& opts);

// Alternates IRLS on beta with Newton steps on log(theta).
IterFit fit_negbin_inner(const DesignMatrix& x, std::span<const double> y,
                         const double* prior_w, std::vector<double> beta,
                         double theta, const FitOptions& opts);

double ll_logistic(std::span<const double> y, std::span<const double> eta,
                   const double* pw);
double ll_poisson(std::span<const double> y, std::span<const double> eta,
                  const double* pw);
double ll_negbin(std::span<const double> y, std::span<const double> eta,
                 double theta, const double* pw);

double log_pmf_poisson(double k, double mu);
double log_pmf_negbin(double k, double mu, double theta);

void check_binary_response(std::span<const double> y);
void check_count_response(std::span<const double> y);

}  // namespace fairchain::detail

namespace fairchain {

// defined in glm_zeroinfl.cpp
ConditionalModel fit_zero_inflated(Family family, std::span<const double> y,
                                   const DesignMatrix& x,
                                   const FitOptions& opts);

}  // namespace fairchain

#endif  // FAIRCHAIN_SRC_GLM_INTERNAL_HPP_
