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

#ifndef FAIRCHAIN_CHAIN_HPP_
#define FAIRCHAIN_CHAIN_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairchain/glm.hpp"
#include "fairchain/table.hpp"

namespace fairchain {

// One fitted link of the chain: the conditional model of x_j given
// (z, adjusted x_1..x_{j-1}), the frozen marginal ECDF of the original
// column, and the realized probability-integral values per training row.
struct ChainVariable {
  std::string name;
  ModelChoice planned = ModelChoice::Auto;
  ConditionalModel model;
  EmpiricalDistribution marginal;
  std::vector<double> pit;
};

struct SchemaColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  PreTransform pre = PreTransform::None;
  Role role = Role::Adjust;
  std::vector<std::string> levels;
};

class FittedChain {
 public:
  FittedChain() = default;
  FittedChain(ChainPlan plan, std::vector<SchemaColumn> schema,
              std::vector<ChainVariable> variables)
      : plan_(std::move(plan)),
        schema_(std::move(schema)),
        variables_(std::move(variables)) {}

  const ChainPlan& plan() const { return plan_; }
  const std::vector<SchemaColumn>& schema() const { return schema_; }
  const std::vector<ChainVariable>& variables() const { return variables_; }

  nlohmann::json to_json() const;
  static FittedChain from_json(const nlohmann::json& j);

 private:
  ChainPlan plan_;
  std::vector<SchemaColumn> schema_;
  std::vector<ChainVariable> variables_;
};

// One fair replicate: adjusted columns substituted, protected columns
// removed, outcome retained, rows in source order.
struct AdjustedDataset {
  int replicate_index = 1;
  Table table;
};

struct TransformResult {
  AdjustedDataset dataset;
  std::vector<std::vector<double>> pit;  // per chain variable, per row
};

// Fits the chain on `table` and transforms it in the same pass. All
// discrete randomness is drawn from streams keyed by
// (plan.seed, replicate_index, variable, row).
std::pair<FittedChain, AdjustedDataset> fit_and_transform(
    const Table& table, const ChainPlan& plan, int replicate_index);

// M replicates, each independently refit (discrete draws change the
// conditioning columns between replicates). Ordered by replicate index;
// `first_chain`, when non-null, receives replicate 1's fitted chain.
std::vector<AdjustedDataset> adjust_many(const Table& table,
                                         const ChainPlan& plan,
                                         FittedChain* first_chain = nullptr);

// Applies a frozen chain to new rows. The schema must match fit time;
// unseen categorical levels are rejected. stream_key takes the role of
// the replicate index in the random-stream derivation, so
// apply_chain(chain, training_table, k) reproduces replicate k of the
// chain it was fitted as.
TransformResult apply_chain(const FittedChain& chain, const Table& rows,
                            std::uint64_t stream_key);

AdjustedDataset transform_new(const FittedChain& chain, const Table& rows,
                              std::uint64_t stream_key);

nlohmann::json plan_to_json(const ChainPlan& plan);
ChainPlan plan_from_json(const nlohmann::json& j);

}  // namespace fairchain

#endif  // FAIRCHAIN_CHAIN_HPP_
