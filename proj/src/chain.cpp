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

#include "fairchain/chain.hpp"

#include <algorithm>
#include <cmath>

#include "fairchain/error.hpp"
#include "fairchain/parallel.hpp"
#include "fairchain/rng.hpp"

namespace fairchain {

namespace {

Family family_of(ModelChoice c) {
  switch (c) {
    case ModelChoice::LinearResidualEcdf: return Family::LinearResidualEcdf;
    case ModelChoice::Logistic: return Family::Logistic;
    case ModelChoice::Poisson: return Family::Poisson;
    case ModelChoice::NegBin: return Family::NegBin;
    case ModelChoice::Zip: return Family::Zip;
    case ModelChoice::Zinb: return Family::Zinb;
    case ModelChoice::Auto: break;
  }
  throw Error("family_of: unresolved model choice");
}

Role role_in_plan(const ChainPlan& plan, const std::string& name) {
  for (const auto& p : plan.protected_names)
    if (p == name) return Role::Protected;
  for (const auto& a : plan.order)
    if (a == name) return Role::Adjust;
  if (name == plan.outcome) return Role::Outcome;
  return Role::Drop;
}

std::vector<SchemaColumn> schema_of(const Table& table, const ChainPlan& plan) {
  for (const auto& name : plan.protected_names) table.at(name);
  for (const auto& name : plan.order) table.at(name);
  if (!plan.outcome.empty()) table.at(plan.outcome);

  std::vector<SchemaColumn> schema;
  for (const Column& c : table.columns()) {
    Role role = role_in_plan(plan, c.name);
    if (role == Role::Drop) continue;  // columns outside the plan are ignored
    schema.push_back({c.name, c.kind, c.pre, role, c.levels});
  }
  return schema;
}

// Protected columns enter designs as-is when numeric, dummy-coded
// against the first sorted level when categorical.
void add_protected_column(DesignMatrix& design, const SchemaColumn& sc,
                          const Column& col) {
  if (sc.kind != ColumnKind::Categorical) {
    design.add_column(sc.name, col.values);
    return;
  }
  // map this table's level codes onto the fit-time level set
  std::vector<std::size_t> recode(col.levels.size());
  for (std::size_t l = 0; l < col.levels.size(); ++l) {
    auto it = std::find(sc.levels.begin(), sc.levels.end(), col.levels[l]);
    if (it == sc.levels.end())
      throw ValidationError("unseen level '" + col.levels[l] +
                            "' in column '" + sc.name + "'");
    recode[l] = static_cast<std::size_t>(it - sc.levels.begin());
  }
  for (std::size_t level = 1; level < sc.levels.size(); ++level) {
    std::vector<double> dummy(col.values.size(), 0.0);
    for (std::size_t i = 0; i < col.values.size(); ++i)
      if (recode[static_cast<std::size_t>(col.values[i])] == level)
        dummy[i] = 1.0;
    design.add_column(sc.name + "=" + sc.levels[level], std::move(dummy));
  }
}

const SchemaColumn& schema_at(const std::vector<SchemaColumn>& schema,
                              const std::string& name) {
  for (const auto& sc : schema)
    if (sc.name == name) return sc;
  throw ValidationError("column missing from chain schema: " + name);
}

// Validates `rows` against the fit-time schema and returns the column
// for `name`, kind-checked.
const Column& checked_column(const Table& rows, const SchemaColumn& sc) {
  const Column* col = rows.find(sc.name);
  if (col == nullptr)
    throw ValidationError("rows are missing column '" + sc.name + "'");
  if (col->kind != sc.kind)
    throw ValidationError("column '" + sc.name + "' has kind " +
                          to_string(col->kind) + ", chain expects " +
                          to_string(sc.kind));
  if (col->pre != sc.pre)
    throw ValidationError("column '" + sc.name + "' is on the wrong scale: "
                          "chain expects pre_transform " + to_string(sc.pre));
  return *col;
}

DesignMatrix build_design(const Table& rows,
                          const std::vector<SchemaColumn>& schema,
                          const ChainPlan& plan,
                          const std::vector<std::vector<double>>& adjusted,
                          std::size_t j) {
  DesignMatrix design(rows.n_rows());
  for (const auto& name : plan.protected_names) {
    const SchemaColumn& sc = schema_at(schema, name);
    add_protected_column(design, sc, checked_column(rows, sc));
  }
  for (std::size_t k = 0; k < j; ++k)
    design.add_column(plan.order[k], adjusted[k]);
  return design;
}

std::vector<double> transform_column(const ConditionalModel& model,
                                     const EmpiricalDistribution& marginal,
                                     const DesignMatrix& design,
                                     std::span<const double> x,
                                     std::uint64_t seed, std::uint64_t rep,
                                     std::size_t var_index,
                                     std::vector<double>* pit_out) {
  const std::size_t n = design.n_rows();
  const std::size_t p = design.n_cols();
  std::vector<double> u(n), out(n), row(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < p; ++c) row[c] = design.col(c)[i];
    if (model.is_discrete()) {
      DiscreteCdfPair pair = model.discrete_cdf_pair(x[i], row);
      Rng rng(derive_stream({seed, rep, static_cast<std::uint64_t>(var_index + 1),
                             static_cast<std::uint64_t>(i + 1)}));
      u[i] = randomized_pit(pair, rng);
    } else {
      u[i] = model.conditional_cdf(x[i], row);
    }
    out[i] = marginal.quantile(u[i]);
  }
  if (pit_out != nullptr) *pit_out = std::move(u);
  return out;
}

Table assemble_adjusted(const Table& rows,
                        const std::vector<SchemaColumn>& schema,
                        const ChainPlan& plan,
                        const std::vector<std::vector<double>>& adjusted) {
  Table out;
  for (const SchemaColumn& sc : schema) {
    if (sc.role == Role::Protected) continue;
    if (sc.role == Role::Outcome && rows.find(sc.name) == nullptr)
      continue;  // prediction-time rows may omit the outcome
    const Column& src = checked_column(rows, sc);
    Column col;
    col.name = sc.name;
    col.kind = sc.kind;
    col.pre = sc.pre;
    col.levels = src.levels;
    if (sc.role == Role::Adjust) {
      auto it = std::find(plan.order.begin(), plan.order.end(), sc.name);
      col.values = adjusted[static_cast<std::size_t>(it - plan.order.begin())];
    } else {
      col.values = src.values;
    }
    out.add_column(std::move(col));
  }
  return out;
}

}  // namespace

std::pair<FittedChain, AdjustedDataset> fit_and_transform(
    const Table& table, const ChainPlan& plan, int replicate_index) {
  if (replicate_index < 1)
    throw ValidationError("replicate index must be at least 1");
  std::vector<SchemaColumn> schema = schema_of(table, plan);

  std::vector<std::vector<double>> adjusted(plan.order.size());
  std::vector<ChainVariable> vars;
  vars.reserve(plan.order.size());

  for (std::size_t j = 0; j < plan.order.size(); ++j) {
    const std::string& name = plan.order[j];
    const Column& src = table.at(name);
    DesignMatrix design = build_design(table, schema, plan, adjusted, j);

    ChainVariable var;
    var.name = name;
    var.planned = plan.model_per_variable.at(name);
    try {
      var.model = var.planned == ModelChoice::Auto
                      ? select_count_model(src.values, design)
                      : fit(family_of(var.planned), src.values, design);
    } catch (const FitError& e) {
      throw FitError("variable '" + name + "': " + e.what());
    }
    var.marginal = EmpiricalDistribution::from_sample(src.values);
    adjusted[j] = transform_column(
        var.model, var.marginal, design, src.values, plan.seed,
        static_cast<std::uint64_t>(replicate_index), j, &var.pit);
    vars.push_back(std::move(var));
  }

  Table out = assemble_adjusted(table, schema, plan, adjusted);
  return {FittedChain(plan, std::move(schema), std::move(vars)),
          AdjustedDataset{replicate_index, std::move(out)}};
}

std::vector<AdjustedDataset> adjust_many(const Table& table,
                                         const ChainPlan& plan,
                                         FittedChain* first_chain) {
  const std::size_t m = static_cast<std::size_t>(plan.m_replicates);
  std::vector<AdjustedDataset> out(m);
  parallel_for(m, [&](std::size_t k) {
    auto [chain, dataset] = fit_and_transform(table, plan,
                                              static_cast<int>(k) + 1);
    out[k] = std::move(dataset);
    if (k == 0 && first_chain != nullptr) *first_chain = std::move(chain);
  });
  return out;
}

TransformResult apply_chain(const FittedChain& chain, const Table& rows,
                            std::uint64_t stream_key) {
  const ChainPlan& plan = chain.plan();
  std::vector<std::vector<double>> adjusted(plan.order.size());
  TransformResult result;
  result.pit.resize(plan.order.size());

  for (std::size_t j = 0; j < plan.order.size(); ++j) {
    const ChainVariable& var = chain.variables()[j];
    const SchemaColumn& sc = schema_at(chain.schema(), var.name);
    const Column& src = checked_column(rows, sc);
    DesignMatrix design = build_design(rows, chain.schema(), plan, adjusted, j);
    adjusted[j] =
        transform_column(var.model, var.marginal, design, src.values,
                         plan.seed, stream_key, j, &result.pit[j]);
  }

  result.dataset.replicate_index = static_cast<int>(stream_key);
  result.dataset.table = assemble_adjusted(rows, chain.schema(), plan, adjusted);
  return result;
}

AdjustedDataset transform_new(const FittedChain& chain, const Table& rows,
                              std::uint64_t stream_key) {
  return apply_chain(chain, rows, stream_key).dataset;
}

nlohmann::json plan_to_json(const ChainPlan& plan) {
  nlohmann::json j;
  j["protected"] = plan.protected_names;
  j["order"] = plan.order;
  nlohmann::json models;
  for (const auto& [name, choice] : plan.model_per_variable)
    models[name] = to_string(choice);
  j["models"] = models;
  j["outcome"] = plan.outcome;
  j["m"] = plan.m_replicates;
  j["seed"] = plan.seed;
  return j;
}

ChainPlan plan_from_json(const nlohmann::json& j) {
  try {
    ChainPlan plan;
    plan.protected_names = j.at("protected").get<std::vector<std::string>>();
    plan.order = j.at("order").get<std::vector<std::string>>();
    for (const auto& [name, value] : j.at("models").items()) {
      std::string s = value.get<std::string>();
      ModelChoice choice = ModelChoice::Auto;
      for (ModelChoice c : {ModelChoice::Auto, ModelChoice::LinearResidualEcdf,
                            ModelChoice::Logistic, ModelChoice::Poisson,
                            ModelChoice::NegBin, ModelChoice::Zip,
                            ModelChoice::Zinb})
        if (s == to_string(c)) choice = c;
      plan.model_per_variable[name] = choice;
    }
    plan.outcome = j.value("outcome", std::string());
    plan.m_replicates = j.at("m").get<int>();
    plan.seed = j.at("seed").get<std::uint64_t>();
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed plan JSON: ") + e.what());
  }
}

namespace {

nlohmann::json schema_to_json(const std::vector<SchemaColumn>& schema) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& sc : schema) {
    nlohmann::json e;
    e["name"] = sc.name;
    e["kind"] = to_string(sc.kind);
    e["pre"] = to_string(sc.pre);
    e["role"] = to_string(sc.role);
    if (!sc.levels.empty()) e["levels"] = sc.levels;
    arr.push_back(std::move(e));
  }
  return arr;
}

ColumnKind kind_from_string(const std::string& s) {
  for (ColumnKind k : {ColumnKind::Continuous, ColumnKind::Binary,
                       ColumnKind::Count, ColumnKind::Categorical})
    if (s == to_string(k)) return k;
  throw ValidationError("unknown kind: '" + s + "'");
}

Role role_from_string(const std::string& s) {
  for (Role r : {Role::Protected, Role::Adjust, Role::Outcome, Role::Drop})
    if (s == to_string(r)) return r;
  throw ValidationError("unknown role: '" + s + "'");
}

}  // namespace

nlohmann::json FittedChain::to_json() const {
  nlohmann::json j;
  j["format"] = 1;
  j["plan"] = plan_to_json(plan_);
  j["schema"] = schema_to_json(schema_);
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : variables_) {
    nlohmann::json e;
    e["name"] = v.name;
    e["planned"] = to_string(v.planned);
    e["model"] = v.model.to_json();
    e["marginal_support"] = v.marginal.support();
    e["marginal_steps"] = v.marginal.steps();
    e["marginal_n"] = v.marginal.sample_size();
    vars.push_back(std::move(e));
  }
  j["variables"] = vars;
  return j;
}

FittedChain FittedChain::from_json(const nlohmann::json& j) {
  try {
    ChainPlan plan = plan_from_json(j.at("plan"));
    std::vector<SchemaColumn> schema;
    for (const auto& e : j.at("schema")) {
      SchemaColumn sc;
      sc.name = e.at("name").get<std::string>();
      sc.kind = kind_from_string(e.at("kind").get<std::string>());
      sc.pre = e.value("pre", std::string("none")) == "log" ? PreTransform::Log
                                                            : PreTransform::None;
      sc.role = role_from_string(e.at("role").get<std::string>());
      if (e.contains("levels"))
        sc.levels = e["levels"].get<std::vector<std::string>>();
      schema.push_back(std::move(sc));
    }
    std::vector<ChainVariable> vars;
    for (const auto& e : j.at("variables")) {
      ChainVariable v;
      v.name = e.at("name").get<std::string>();
      std::string planned = e.value("planned", std::string("auto"));
      v.planned = ModelChoice::Auto;
      for (ModelChoice c : {ModelChoice::LinearResidualEcdf,
                            ModelChoice::Logistic, ModelChoice::Poisson,
                            ModelChoice::NegBin, ModelChoice::Zip,
                            ModelChoice::Zinb})
        if (planned == to_string(c)) v.planned = c;
      v.model = ConditionalModel::from_json(e.at("model"));
      v.marginal = EmpiricalDistribution::from_parts(
          e.at("marginal_support").get<std::vector<double>>(),
          e.at("marginal_steps").get<std::vector<double>>(),
          e.at("marginal_n").get<std::size_t>());
      vars.push_back(std::move(v));
    }
    return FittedChain(std::move(plan), std::move(schema), std::move(vars));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed chain JSON: ") + e.what());
  }
}

}  // namespace fairchain
