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

#ifndef FAIRCHAIN_LEAKAGE_HPP_
#define FAIRCHAIN_LEAKAGE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fairchain/forest.hpp"
#include "fairchain/table.hpp"

namespace fairchain {

struct LeakageParams {
  int folds = 5;
  ForestParams forest{100, 0, 5, 0};  // lighter forests than evaluation
};

struct LeakageLevel {
  std::string level;
  double auc = 0.0;
};

// Cross-validated random-forest audit: how well can the protected
// attribute be recovered from the features? One one-vs-rest AUC per
// protected level (a binary protected column audits level "1").
// AUC near 0.5 means no recoverable protected information.
std::vector<LeakageLevel> leakage_audit(const FeatureMatrix& features,
                                        const Column& protected_column,
                                        int folds, std::uint64_t seed,
                                        const ForestParams& forest_params);

inline std::vector<LeakageLevel> leakage_audit(const FeatureMatrix& features,
                                               const Column& protected_column,
                                               int folds, std::uint64_t seed) {
  return leakage_audit(features, protected_column, folds, seed,
                       LeakageParams{}.forest);
}

}  // namespace fairchain

#endif  // FAIRCHAIN_LEAKAGE_HPP_
