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

#ifndef FAIRCHAIN_LINALG_HPP_
#define FAIRCHAIN_LINALG_HPP_

#include <cstddef>
#include <vector>

namespace fairchain {

// Dense column-major matrix. Design matrices are a handful of columns,
// so this stays deliberately small; the length-n work runs through the
// kernels layer, not here.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[j * rows_ + i];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  double* col(std::size_t j) { return data_.data() + j * rows_; }
  const double* col(std::size_t j) const { return data_.data() + j * rows_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

// Solves A x = b for symmetric positive definite A by Cholesky.
// Throws RankDeficientError when a pivot collapses relative to the
// largest diagonal entry.
std::vector<double> cholesky_solve(Matrix a, std::vector<double> b);

}  // namespace fairchain

#endif  // FAIRCHAIN_LINALG_HPP_
