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

#include "fairchain/linalg.hpp"

#include <cmath>

#include "fairchain/error.hpp"

namespace fairchain {

std::vector<double> cholesky_solve(Matrix a, std::vector<double> b) {
  const std::size_t p = a.rows();
  if (a.cols() != p || b.size() != p) throw Error("cholesky: shape mismatch");

  double max_diag = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    double d = a(k, k);
    if (d > max_diag) max_diag = d;
  }
  const double tol = (max_diag > 0.0 ? max_diag : 1.0) * 1e-12;

  // in-place lower Cholesky
  for (std::size_t j = 0; j < p; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > tol)) {
      throw RankDeficientError(
          "design matrix is rank deficient (collinear or constant column)");
    }
    d = std::sqrt(d);
    a(j, j) = d;
    for (std::size_t i = j + 1; i < p; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / d;
    }
  }

  // forward then backward substitution
  for (std::size_t i = 0; i < p; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * b[k];
    b[i] = s / a(i, i);
  }
  for (std::size_t ir = p; ir-- > 0;) {
    double s = b[ir];
    for (std::size_t k = ir + 1; k < p; ++k) s -= a(k, ir) * b[k];
    b[ir] = s / a(ir, ir);
  }
  return b;
}

}  // namespace fairchain
