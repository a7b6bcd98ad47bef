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

#ifndef FAIRCHAIN_FOREST_HPP_
#define FAIRCHAIN_FOREST_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fairchain {

struct FeatureMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;  // column-major
  std::size_t n_rows = 0;

  void add(std::string name, std::vector<double> values);
};

struct ForestParams {
  int n_trees = 500;
  int mtry = 0;       // 0 means floor(sqrt(d)), at least 1
  int min_leaf = 5;
  int max_depth = 0;  // 0 means unlimited
};

// CART node; feature < 0 marks a leaf carrying the class-1 frequency
// (the leaf's class-frequency pair is (1 - p1, p1)).
struct TreeNode {
  std::int32_t feature = -1;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double threshold = 0.0;
  double p1 = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;
  std::vector<std::uint8_t> in_bag;  // per training row
};

// Random forest of Gini-split CART trees on bootstrap resamples with a
// random feature subset per node. Training and prediction are
// deterministic given (data, params, seed) for any worker count:
// per-tree streams derive from (seed, tree index).
class Forest {
 public:
  Forest() = default;

  static Forest fit(const FeatureMatrix& features,
                    std::span<const double> labels, const ForestParams& params,
                    std::uint64_t seed);

  // Per row: mean over trees of leaf class-1 frequencies.
  std::vector<double> predict_proba(const FeatureMatrix& rows) const;

  // Out-of-bag scores over the training matrix; a row that is in-bag in
  // every tree falls back to the all-trees mean.
  std::vector<double> oob_scores(const FeatureMatrix& training) const;

  const ForestParams& params() const { return params_; }
  const std::vector<Tree>& trees() const { return trees_; }

 private:
  ForestParams params_;
  std::size_t n_features_ = 0;
  std::vector<std::string> feature_names_;
  std::vector<Tree> trees_;
};

Forest fit_forest(const FeatureMatrix& features, std::span<const double> labels,
                  const ForestParams& params = {}, std::uint64_t seed = 0);

}  // namespace fairchain

#endif  // FAIRCHAIN_FOREST_HPP_
