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

#ifndef FAIRCHAIN_ERROR_HPP_
#define FAIRCHAIN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fairchain {

// Base of everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: malformed files, inconsistent specs, out-of-domain
// arguments. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Numerical failure during model fitting. Maps to exit code 1.
class FitError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public FitError {
 public:
  using FitError::FitError;
};

class ConvergenceError : public FitError {
 public:
  using FitError::FitError;
};

// Complete separation in a logistic fit is reported distinctly: the MLE
// does not exist and a transform built on it would be meaningless.
class SeparationError : public FitError {
 public:
  using FitError::FitError;
};

}  // namespace fairchain

#endif  // FAIRCHAIN_ERROR_HPP_
