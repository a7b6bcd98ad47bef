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

#ifndef FAIRCHAIN_ROC_HPP_
#define FAIRCHAIN_ROC_HPP_

#include <span>
#include <vector>

namespace fairchain {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // scores >= threshold predict positive
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0,0) to (1,1), threshold descending
  double auc = 0.0;
};

// Sweeps all distinct score thresholds (ties grouped into one step) and
// integrates by the trapezoid rule. Counts are accumulated as integers,
// so the AUC equals the pairwise concordance probability (ties counted
// half) exactly.
RocCurve roc_and_auc(std::span<const double> scores,
                     std::span<const double> labels);

// Element-wise mean across the M replicate score vectors.
std::vector<double> average_over_replicates(
    const std::vector<std::vector<double>>& per_replicate_scores);

}  // namespace fairchain

#endif  // FAIRCHAIN_ROC_HPP_
