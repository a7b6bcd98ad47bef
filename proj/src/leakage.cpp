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

#include "fairchain/leakage.hpp"

#include <algorithm>
#include <numeric>

#include "fairchain/error.hpp"
#include "fairchain/rng.hpp"
#include "fairchain/roc.hpp"

namespace fairchain {

namespace {

FeatureMatrix gather_rows(const FeatureMatrix& x,
                          const std::vector<std::size_t>& rows) {
  FeatureMatrix out;
  for (std::size_t f = 0; f < x.columns.size(); ++f) {
    std::vector<double> col;
    col.reserve(rows.size());
    for (std::size_t r : rows) col.push_back(x.columns[f][r]);
    out.add(x.names[f], std::move(col));
  }
  return out;
}

}  // namespace

std::vector<LeakageLevel> leakage_audit(const FeatureMatrix& features,
                                        const Column& protected_column,
                                        int folds, std::uint64_t seed,
                                        const ForestParams& forest_params) {
  if (folds < 2) throw ValidationError("leakage audit requires folds >= 2");
  if (protected_column.values.size() != features.n_rows)
    throw ValidationError("protected column length does not match features");

  std::vector<std::pair<std::string, double>> level_codes;
  switch (protected_column.kind) {
    case ColumnKind::Binary:
      level_codes.emplace_back("1", 1.0);
      break;
    case ColumnKind::Categorical:
      for (std::size_t l = 0; l < protected_column.levels.size(); ++l)
        level_codes.emplace_back(protected_column.levels[l],
                                 static_cast<double>(l));
      break;
    default:
      throw ValidationError(
          "leakage audit requires a binary or categorical protected column");
  }

  const std::size_t n = features.n_rows;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng shuffle_rng(derive_stream({seed, 0x5eedf01dULL}));
  for (std::size_t i = n; i > 1; --i)
    std::swap(perm[i - 1],
              perm[static_cast<std::size_t>(shuffle_rng.below(i))]);
  std::vector<int> fold_of(n);
  for (std::size_t i = 0; i < n; ++i)
    fold_of[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));

  std::vector<LeakageLevel> result;
  for (std::size_t li = 0; li < level_codes.size(); ++li) {
    const auto& [level_name, level_code] = level_codes[li];
    std::vector<double> labels(n);
    for (std::size_t i = 0; i < n; ++i)
      labels[i] = protected_column.values[i] == level_code ? 1.0 : 0.0;

    std::vector<double> scores(n, 0.0);
    for (int fold = 0; fold < folds; ++fold) {
      std::vector<std::size_t> train_rows, test_rows;
      for (std::size_t i = 0; i < n; ++i)
        (fold_of[i] == fold ? test_rows : train_rows).push_back(i);
      if (test_rows.empty())
        throw ValidationError("leakage audit: empty fold");

      std::vector<double> train_labels;
      train_labels.reserve(train_rows.size());
      double pos = 0.0;
      for (std::size_t r : train_rows) {
        train_labels.push_back(labels[r]);
        pos += labels[r];
      }
      if (pos == 0.0 || pos == static_cast<double>(train_rows.size()))
        throw ValidationError("leakage audit: fold " + std::to_string(fold) +
                              " has a single class for level '" + level_name +
                              "'");

      Forest forest = fit_forest(
          gather_rows(features, train_rows), train_labels, forest_params,
          derive_stream({seed, static_cast<std::uint64_t>(li + 1),
                         static_cast<std::uint64_t>(fold + 1)}));
      std::vector<double> fold_scores =
          forest.predict_proba(gather_rows(features, test_rows));
      for (std::size_t k = 0; k < test_rows.size(); ++k)
        scores[test_rows[k]] = fold_scores[k];
    }

    result.push_back({level_name, roc_and_auc(scores, labels).auc});
  }
  return result;
}

}  // namespace fairchain
