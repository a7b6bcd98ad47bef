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

#ifndef FAIRCHAIN_TABLE_HPP_
#define FAIRCHAIN_TABLE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fairchain {

enum class ColumnKind { Continuous, Binary, Count, Categorical };
enum class Role { Protected, Adjust, Outcome, Drop };
enum class PreTransform { None, Log };
enum class ModelChoice {
  Auto,
  LinearResidualEcdf,
  Logistic,
  Poisson,
  NegBin,
  Zip,
  Zinb,
};

const char* to_string(ColumnKind k);
const char* to_string(Role r);
const char* to_string(PreTransform p);
const char* to_string(ModelChoice m);

// Typed column. Values are stored as doubles on the modeling scale
// (log already applied when pre == Log); categorical cells hold the
// index of the level in `levels`, which is the sorted distinct set seen
// at load time.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  PreTransform pre = PreTransform::None;
  std::vector<double> values;
  std::vector<std::string> levels;  // categorical only
};

class Table {
 public:
  Table() = default;

  std::size_t n_rows() const { return n_rows_; }
  const std::vector<Column>& columns() const { return columns_; }

  const Column* find(const std::string& name) const;
  // throws ValidationError when absent
  const Column& at(const std::string& name) const;

  void add_column(Column col);  // enforces equal lengths

 private:
  std::size_t n_rows_ = 0;
  std::vector<Column> columns_;
};

struct VariableSpec {
  std::string name;
  Role role = Role::Adjust;
  ColumnKind kind = ColumnKind::Continuous;
  PreTransform pre_transform = PreTransform::None;
  ModelChoice model = ModelChoice::Auto;
};

// Validated adjustment plan: the protected set z, the chain order
// x_1..x_d, a resolved model family per adjusted variable (Auto on a
// count column means AIC selection at fit time), the replicate count M
// and the master seed.
struct ChainPlan {
  std::vector<std::string> protected_names;
  std::vector<std::string> order;
  std::map<std::string, ModelChoice> model_per_variable;
  std::string outcome;
  int m_replicates = 10;
  std::uint64_t seed = 0;
};

// Reads a comma-separated UTF-8 file with a header row. Every spec name
// must appear in the header; columns not named by any spec are ignored.
// Cells must parse under the declared kind, missing values are
// rejected, log pre-transforms are applied, and drop-role columns are
// removed. Column order follows the spec declaration order.
Table load_csv(const std::string& path,
               const std::vector<VariableSpec>& specs);

// Same contract as load_csv, applied to an in-memory document.
Table parse_csv(const std::string& text,
                const std::vector<VariableSpec>& specs,
                const std::string& origin = "<memory>");

// Serializes on the original scale: log columns are exponentiated back,
// binary/count columns print as integers, categorical cells print their
// level string.
std::string csv_to_string(const Table& table);
void write_csv(const Table& table, const std::string& path);

ChainPlan validate_plan(const std::vector<VariableSpec>& specs,
                        const std::optional<std::vector<std::string>>& order,
                        int m_replicates, std::uint64_t seed);

// JSON spec document: {"variables":[{name,role,kind,pre_transform,model}],
// "order":[...], "m":int, "seed":int} with order/model/m/seed optional.
struct SpecFile {
  std::vector<VariableSpec> variables;
  std::optional<std::vector<std::string>> order;
  std::optional<int> m;
  std::optional<std::uint64_t> seed;
};

SpecFile parse_spec_json(const std::string& text);
SpecFile load_spec_json(const std::string& path);

}  // namespace fairchain

#endif  // FAIRCHAIN_TABLE_HPP_
