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

#include "fairchain/forest.hpp"

#include <algorithm>
#include <cmath>

#include "fairchain/error.hpp"
#include "fairchain/parallel.hpp"
#include "fairchain/rng.hpp"

namespace fairchain {

void FeatureMatrix::add(std::string name, std::vector<double> values) {
  if (!columns.empty() && values.size() != n_rows)
    throw Error("feature column length mismatch: " + name);
  n_rows = values.size();
  names.push_back(std::move(name));
  columns.push_back(std::move(values));
}

namespace {

struct Frame {
  std::int32_t node;
  std::size_t lo, hi;
  int depth;
};

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;  // maximized
};

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, std::span<const double> y,
              const ForestParams& params, std::uint64_t tree_seed)
      : x_(x), y_(y), params_(params), rng_(tree_seed) {}

  Tree build() {
    const std::size_t n = x_.n_rows;
    Tree tree;
    tree.in_bag.assign(n, 0);
    sample_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = static_cast<std::size_t>(rng_.below(n));
      sample_[i] = r;
      tree.in_bag[r] = 1;
    }
    scratch_.resize(n);
    feature_pool_.resize(x_.columns.size());
    for (std::size_t f = 0; f < feature_pool_.size(); ++f)
      feature_pool_[f] = f;

    nodes_ = &tree.nodes;
    nodes_->push_back(TreeNode{});
    std::vector<Frame> stack;
    stack.push_back({0, 0, n, 0});
    while (!stack.empty()) {
      Frame fr = stack.back();
      stack.pop_back();
      grow(fr, stack);
    }
    return tree;
  }

 private:
  void make_leaf(std::int32_t node, std::size_t lo, std::size_t hi) {
    double pos = 0.0;
    for (std::size_t k = lo; k < hi; ++k) pos += y_[sample_[k]];
    (*nodes_)[static_cast<std::size_t>(node)].feature = -1;
    (*nodes_)[static_cast<std::size_t>(node)].p1 =
        pos / static_cast<double>(hi - lo);
  }

  Split best_split(std::size_t lo, std::size_t hi, double pos_total) {
    const std::size_t size = hi - lo;
    const std::size_t d = x_.columns.size();
    std::size_t mtry = params_.mtry > 0
                           ? static_cast<std::size_t>(params_.mtry)
                           : static_cast<std::size_t>(
                                 std::floor(std::sqrt(static_cast<double>(d))));
    mtry = std::clamp<std::size_t>(mtry, 1, d);

    // partial Fisher-Yates, then ascending order for deterministic ties
    for (std::size_t k = 0; k < mtry; ++k) {
      std::size_t swap_with =
          k + static_cast<std::size_t>(rng_.below(d - k));
      std::swap(feature_pool_[k], feature_pool_[swap_with]);
    }
    std::sort(feature_pool_.begin(),
              feature_pool_.begin() + static_cast<std::ptrdiff_t>(mtry));

    const std::size_t min_leaf = static_cast<std::size_t>(params_.min_leaf);
    Split best;
    pairs_.resize(size);
    for (std::size_t fi = 0; fi < mtry; ++fi) {
      const std::size_t f = feature_pool_[fi];
      const std::vector<double>& col = x_.columns[f];
      for (std::size_t k = 0; k < size; ++k) {
        std::size_t row = sample_[lo + k];
        pairs_[k] = {col[row], y_[row]};
      }
      std::sort(pairs_.begin(), pairs_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double pos_left = 0.0;
      for (std::size_t k = 0; k + 1 < size; ++k) {
        pos_left += pairs_[k].second;
        if (pairs_[k].first == pairs_[k + 1].first) continue;
        std::size_t nl = k + 1;
        std::size_t nr = size - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        double neg_left = static_cast<double>(nl) - pos_left;
        double pos_right = pos_total - pos_left;
        double neg_right = static_cast<double>(nr) - pos_right;
        double score =
            (pos_left * pos_left + neg_left * neg_left) /
                static_cast<double>(nl) +
            (pos_right * pos_right + neg_right * neg_right) /
                static_cast<double>(nr);
        if (!best.found || score > best.score) {
          best.found = true;
          best.score = score;
          best.feature = f;
          best.threshold = (pairs_[k].first + pairs_[k + 1].first) * 0.5;
        }
      }
    }
    return best;
  }

  void grow(const Frame& fr, std::vector<Frame>& stack) {
    const std::size_t size = fr.hi - fr.lo;
    double pos = 0.0;
    for (std::size_t k = fr.lo; k < fr.hi; ++k) pos += y_[sample_[k]];

    bool stop = size < 2 * static_cast<std::size_t>(params_.min_leaf) ||
                pos == 0.0 || pos == static_cast<double>(size) ||
                (params_.max_depth > 0 && fr.depth >= params_.max_depth);
    Split split;
    if (!stop) split = best_split(fr.lo, fr.hi, pos);
    if (stop || !split.found) {
      make_leaf(fr.node, fr.lo, fr.hi);
      return;
    }

    // stable partition through the scratch buffer
    const std::vector<double>& col = x_.columns[split.feature];
    std::size_t left_count = 0;
    for (std::size_t k = fr.lo; k < fr.hi; ++k)
      if (col[sample_[k]] <= split.threshold)
        scratch_[fr.lo + left_count++] = sample_[k];
    std::size_t right_at = fr.lo + left_count;
    for (std::size_t k = fr.lo; k < fr.hi; ++k)
      if (col[sample_[k]] > split.threshold) scratch_[right_at++] = sample_[k];
    std::copy(scratch_.begin() + static_cast<std::ptrdiff_t>(fr.lo),
              scratch_.begin() + static_cast<std::ptrdiff_t>(fr.hi),
              sample_.begin() + static_cast<std::ptrdiff_t>(fr.lo));

    std::int32_t left = static_cast<std::int32_t>(nodes_->size());
    nodes_->push_back(TreeNode{});
    std::int32_t right = static_cast<std::int32_t>(nodes_->size());
    nodes_->push_back(TreeNode{});
    TreeNode& node = (*nodes_)[static_cast<std::size_t>(fr.node)];
    node.feature = static_cast<std::int32_t>(split.feature);
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;

    stack.push_back({right, fr.lo + left_count, fr.hi, fr.depth + 1});
    stack.push_back({left, fr.lo, fr.lo + left_count, fr.depth + 1});
  }

  const FeatureMatrix& x_;
  std::span<const double> y_;
  const ForestParams& params_;
  Rng rng_;
  std::vector<std::size_t> sample_;
  std::vector<std::size_t> scratch_;
  std::vector<std::size_t> feature_pool_;
  std::vector<TreeNode>* nodes_ = nullptr;
  std::vector<std::pair<double, double>> pairs_;
};

double score_row(const Tree& tree, const FeatureMatrix& x, std::size_t row) {
  std::int32_t node = 0;
  for (;;) {
    const TreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
    if (nd.feature < 0) return nd.p1;
    node = x.columns[static_cast<std::size_t>(nd.feature)][row] <= nd.threshold
               ? nd.left
               : nd.right;
  }
}

void check_schema(const std::vector<std::string>& trained,
                  const std::vector<std::string>& names,
                  std::size_t n_features, std::size_t expected) {
  if (n_features != expected)
    throw ValidationError("feature schema mismatch: forest was trained on " +
                          std::to_string(expected) + " features, got " +
                          std::to_string(n_features));
  for (std::size_t j = 0; j < trained.size() && j < names.size(); ++j)
    if (trained[j] != names[j])
      throw ValidationError("feature schema mismatch: expected column '" +
                            trained[j] + "', got '" + names[j] + "'");
}

}  // namespace

Forest Forest::fit(const FeatureMatrix& features, std::span<const double> labels,
                   const ForestParams& params, std::uint64_t seed) {
  if (features.columns.empty()) throw ValidationError("no features");
  if (features.n_rows < 2) throw ValidationError("need at least 2 rows");
  if (labels.size() != features.n_rows)
    throw ValidationError("label length does not match feature rows");
  double pos = 0.0;
  for (double v : labels) {
    if (v != 0.0 && v != 1.0)
      throw ValidationError("labels must be 0/1");
    pos += v;
  }
  if (pos == 0.0 || pos == static_cast<double>(labels.size()))
    throw ValidationError("single-class labels: both classes are required");
  if (params.n_trees < 1) throw ValidationError("need at least one tree");
  if (params.min_leaf < 1) throw ValidationError("min_leaf must be positive");

  Forest forest;
  forest.params_ = params;
  forest.n_features_ = features.columns.size();
  forest.feature_names_ = features.names;
  forest.trees_.resize(static_cast<std::size_t>(params.n_trees));
  parallel_for(forest.trees_.size(), [&](std::size_t t) {
    TreeBuilder builder(features, labels, params,
                        derive_stream({seed, static_cast<std::uint64_t>(t + 1)}));
    forest.trees_[t] = builder.build();
  });
  return forest;
}

std::vector<double> Forest::predict_proba(const FeatureMatrix& rows) const {
  check_schema(feature_names_, rows.names, rows.columns.size(), n_features_);
  std::vector<double> scores(rows.n_rows, 0.0);
  const double inv = 1.0 / static_cast<double>(trees_.size());
  parallel_for(rows.n_rows, [&](std::size_t i) {
    double acc = 0.0;
    for (const Tree& tree : trees_) acc += score_row(tree, rows, i);
    scores[i] = acc * inv;
  });
  return scores;
}

std::vector<double> Forest::oob_scores(const FeatureMatrix& training) const {
  check_schema(feature_names_, training.names, training.columns.size(), n_features_);
  if (!trees_.empty() && trees_[0].in_bag.size() != training.n_rows)
    throw ValidationError("oob_scores: not the training matrix");
  std::vector<double> scores(training.n_rows, 0.0);
  parallel_for(training.n_rows, [&](std::size_t i) {
    double acc = 0.0;
    std::size_t count = 0;
    for (const Tree& tree : trees_) {
      if (tree.in_bag[i]) continue;
      acc += score_row(tree, training, i);
      ++count;
    }
    if (count == 0) {
      for (const Tree& tree : trees_) acc += score_row(tree, training, i);
      count = trees_.size();
    }
    scores[i] = acc / static_cast<double>(count);
  });
  return scores;
}

Forest fit_forest(const FeatureMatrix& features, std::span<const double> labels,
                  const ForestParams& params, std::uint64_t seed) {
  return Forest::fit(features, labels, params, seed);
}

}  // namespace fairchain
