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

#include "fairchain/roc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "fairchain/error.hpp"
#include "fairchain/kernels.hpp"

namespace fairchain {

RocCurve roc_and_auc(std::span<const double> scores,
                     std::span<const double> labels) {
  if (scores.size() != labels.size())
    throw ValidationError("roc: scores and labels differ in length");
  if (scores.empty()) throw ValidationError("roc: empty input");

  std::uint64_t total_pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i]))
      throw ValidationError("roc: non-finite score");
    if (labels[i] != 0.0 && labels[i] != 1.0)
      throw ValidationError("roc: labels must be 0/1");
    if (labels[i] == 1.0) ++total_pos;
  }
  const std::uint64_t total_neg = scores.size() - total_pos;
  if (total_pos == 0 || total_neg == 0)
    throw ValidationError("roc: both classes are required");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});

  std::uint64_t tp = 0, fp = 0;
  std::uint64_t area2 = 0;  // 2 * P * N * AUC, exact in integers
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    std::uint64_t tp_prev = tp, fp_prev = fp;
    while (i < order.size() && scores[order[i]] == threshold) {
      if (labels[order[i]] == 1.0) ++tp;
      else ++fp;
      ++i;
    }
    area2 += (fp - fp_prev) * (tp + tp_prev);
    curve.points.push_back({static_cast<double>(fp) / total_neg,
                            static_cast<double>(tp) / total_pos, threshold});
  }
  curve.auc = static_cast<double>(area2) /
              (2.0 * static_cast<double>(total_pos) *
               static_cast<double>(total_neg));
  return curve;
}

std::vector<double> average_over_replicates(
    const std::vector<std::vector<double>>& per_replicate_scores) {
  if (per_replicate_scores.empty())
    throw ValidationError("average_over_replicates: no replicates");
  const std::size_t n = per_replicate_scores.front().size();
  for (const auto& s : per_replicate_scores)
    if (s.size() != n)
      throw ValidationError("average_over_replicates: length mismatch");
  std::vector<double> mean(n, 0.0);
  for (const auto& s : per_replicate_scores) kernels::axpy(1.0, s, mean);
  const double inv = 1.0 / static_cast<double>(per_replicate_scores.size());
  for (double& v : mean) v *= inv;
  return mean;
}

}  // namespace fairchain
