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

#include "fairchain/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "fairchain/error.hpp"
#include "fairchain/io.hpp"

namespace fairchain {

const char* to_string(ColumnKind k) {
  switch (k) {
    case ColumnKind::Continuous: return "continuous";
    case ColumnKind::Binary: return "binary";
    case ColumnKind::Count: return "count";
    case ColumnKind::Categorical: return "categorical";
  }
  return "?";
}

const char* to_string(Role r) {
  switch (r) {
    case Role::Protected: return "protected";
    case Role::Adjust: return "adjust";
    case Role::Outcome: return "outcome";
    case Role::Drop: return "drop";
  }
  return "?";
}

const char* to_string(PreTransform p) {
  return p == PreTransform::Log ? "log" : "none";
}

const char* to_string(ModelChoice m) {
  switch (m) {
    case ModelChoice::Auto: return "auto";
    case ModelChoice::LinearResidualEcdf: return "linear_residual_ecdf";
    case ModelChoice::Logistic: return "logistic";
    case ModelChoice::Poisson: return "poisson";
    case ModelChoice::NegBin: return "negbin";
    case ModelChoice::Zip: return "zip";
    case ModelChoice::Zinb: return "zinb";
  }
  return "?";
}

const Column* Table::find(const std::string& name) const {
  for (const Column& c : columns_)
    if (c.name == name) return &c;
  return nullptr;
}

const Column& Table::at(const std::string& name) const {
  const Column* c = find(name);
  if (c == nullptr) throw ValidationError("no such column: " + name);
  return *c;
}

void Table::add_column(Column col) {
  if (!columns_.empty() && col.values.size() != n_rows_)
    throw Error("column length mismatch: " + col.name);
  n_rows_ = col.values.size();
  columns_.push_back(std::move(col));
}

namespace {

// Splits one CSV record. Fields may be double-quoted (embedded commas,
// "" escapes); numerics are expected unquoted but quotes are tolerated.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void cell_error(const std::string& origin, std::size_t data_row,
                             const std::string& column,
                             const std::string& what) {
  std::ostringstream ss;
  ss << origin << ": row " << data_row << ", column '" << column << "': "
     << what;
  throw ValidationError(ss.str());
}

double parse_number(const std::string& tok, bool* ok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  *ok = end == begin + tok.size() && !tok.empty() && std::isfinite(v);
  return v;
}

bool parse_integer(const std::string& tok, long long* out) {
  if (tok.empty()) return false;
  std::size_t i = tok[0] == '-' ? 1 : 0;
  if (i == tok.size()) return false;
  for (std::size_t k = i; k < tok.size(); ++k)
    if (tok[k] < '0' || tok[k] > '9') return false;
  *out = std::strtoll(tok.c_str(), nullptr, 10);
  return true;
}

}  // namespace

Table parse_csv(const std::string& text, const std::vector<VariableSpec>& specs,
                const std::string& origin) {
  if (specs.empty()) throw ValidationError("no variables specified");
  {
    std::set<std::string> seen;
    for (const auto& s : specs)
      if (!seen.insert(s.name).second)
        throw ValidationError("duplicate variable name: " + s.name);
  }

  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError(origin + ": empty file");
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  std::unordered_map<std::string, std::size_t> col_of;
  for (std::size_t i = 0; i < header.size(); ++i) {
    auto [it, fresh] = col_of.emplace(header[i], i);
    (void)it;
    if (!fresh) {
      for (const auto& s : specs)
        if (s.name == header[i])
          throw ValidationError(origin + ": duplicate header column '" +
                                header[i] + "'");
    }
  }
  for (const auto& s : specs)
    if (col_of.find(s.name) == col_of.end())
      throw ValidationError(origin + ": missing column '" + s.name + "'");

  // raw string cells per spec column
  std::vector<std::vector<std::string>> cells(specs.size());
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++data_row;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      std::ostringstream ss;
      ss << origin << ": row " << data_row << ": expected " << header.size()
         << " fields, found " << fields.size();
      throw ValidationError(ss.str());
    }
    for (std::size_t s = 0; s < specs.size(); ++s)
      cells[s].push_back(trim(fields[col_of[specs[s].name]]));
  }
  if (data_row == 0) throw ValidationError(origin + ": no data rows");

  Table table;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const VariableSpec& spec = specs[s];
    if (spec.role == Role::Drop) continue;

    Column col;
    col.name = spec.name;
    col.kind = spec.kind;
    col.pre = spec.pre_transform;
    col.values.reserve(data_row);

    if (spec.kind == ColumnKind::Categorical) {
      std::set<std::string> level_set;
      for (std::size_t r = 0; r < data_row; ++r) {
        if (cells[s][r].empty())
          cell_error(origin, r + 1, spec.name, "missing value");
        level_set.insert(cells[s][r]);
      }
      col.levels.assign(level_set.begin(), level_set.end());
      for (std::size_t r = 0; r < data_row; ++r) {
        auto it = std::lower_bound(col.levels.begin(), col.levels.end(),
                                   cells[s][r]);
        col.values.push_back(
            static_cast<double>(it - col.levels.begin()));
      }
    } else {
      for (std::size_t r = 0; r < data_row; ++r) {
        const std::string& tok = cells[s][r];
        if (tok.empty()) cell_error(origin, r + 1, spec.name, "missing value");
        double v = 0.0;
        if (spec.kind == ColumnKind::Binary ||
            spec.kind == ColumnKind::Count) {
          long long iv = 0;
          if (!parse_integer(tok, &iv))
            cell_error(origin, r + 1, spec.name,
                       "not an integer: '" + tok + "'");
          if (spec.kind == ColumnKind::Binary && iv != 0 && iv != 1)
            cell_error(origin, r + 1, spec.name,
                       "binary value must be 0 or 1, got '" + tok + "'");
          if (spec.kind == ColumnKind::Count && iv < 0)
            cell_error(origin, r + 1, spec.name,
                       "count value must be non-negative, got '" + tok + "'");
          v = static_cast<double>(iv);
        } else {
          bool ok = false;
          v = parse_number(tok, &ok);
          if (!ok)
            cell_error(origin, r + 1, spec.name,
                       "not a finite number: '" + tok + "'");
        }
        if (spec.pre_transform == PreTransform::Log) {
          if (!(v > 0.0))
            cell_error(origin, r + 1, spec.name,
                       "log pre-transform requires a strictly positive value, "
                       "got '" + tok + "'");
          v = std::log(v);
        }
        col.values.push_back(v);
      }
    }
    table.add_column(std::move(col));
  }
  return table;
}

Table load_csv(const std::string& path, const std::vector<VariableSpec>& specs) {
  return parse_csv(read_text_file(path), specs, path);
}

namespace {

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n") != std::string::npos;
}

std::string quote_field(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

std::string csv_to_string(const Table& table) {
  std::ostringstream out;
  const auto& cols = table.columns();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (j) out << ',';
    out << quote_field(cols[j].name);
  }
  out << '\n';
  for (std::size_t i = 0; i < table.n_rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (j) out << ',';
      const Column& c = cols[j];
      double v = c.values[i];
      switch (c.kind) {
        case ColumnKind::Binary:
        case ColumnKind::Count:
          out << static_cast<long long>(v);
          break;
        case ColumnKind::Categorical:
          out << quote_field(c.levels[static_cast<std::size_t>(v)]);
          break;
        case ColumnKind::Continuous:
          out << format_double(c.pre == PreTransform::Log ? std::exp(v) : v);
          break;
      }
    }
    out << '\n';
  }
  return out.str();
}

void write_csv(const Table& table, const std::string& path) {
  write_text_atomic(path, csv_to_string(table));
}

ChainPlan validate_plan(const std::vector<VariableSpec>& specs,
                        const std::optional<std::vector<std::string>>& order,
                        int m_replicates, std::uint64_t seed) {
  if (specs.empty()) throw ValidationError("no variables specified");
  {
    std::set<std::string> seen;
    for (const auto& s : specs)
      if (!seen.insert(s.name).second)
        throw ValidationError("duplicate variable name: " + s.name);
  }

  ChainPlan plan;
  std::vector<std::string> adjust_names;
  for (const auto& s : specs) {
    switch (s.role) {
      case Role::Protected:
        plan.protected_names.push_back(s.name);
        break;
      case Role::Adjust:
        adjust_names.push_back(s.name);
        break;
      case Role::Outcome:
        if (!plan.outcome.empty())
          throw ValidationError("more than one outcome variable");
        plan.outcome = s.name;
        break;
      case Role::Drop:
        break;
    }
    if (s.pre_transform == PreTransform::Log &&
        s.kind != ColumnKind::Continuous)
      throw ValidationError("log pre-transform only applies to continuous "
                            "columns: " + s.name);
    if (s.role == Role::Adjust) {
      if (s.kind == ColumnKind::Categorical)
        throw ValidationError(
            "categorical columns can be protected but not adjusted: " +
            s.name);
      bool ok = true;
      switch (s.model) {
        case ModelChoice::Auto: ok = true; break;
        case ModelChoice::LinearResidualEcdf:
          ok = s.kind == ColumnKind::Continuous;
          break;
        case ModelChoice::Logistic: ok = s.kind == ColumnKind::Binary; break;
        case ModelChoice::Poisson:
        case ModelChoice::NegBin:
        case ModelChoice::Zip:
        case ModelChoice::Zinb:
          ok = s.kind == ColumnKind::Count;
          break;
      }
      if (!ok)
        throw ValidationError("model '" + std::string(to_string(s.model)) +
                              "' is incompatible with " +
                              to_string(s.kind) + " column '" + s.name + "'");
    }
  }
  if (plan.outcome.empty()) throw ValidationError("no outcome variable");
  if (plan.protected_names.empty())
    throw ValidationError("no protected variable");
  if (adjust_names.empty()) throw ValidationError("no adjustable variables");
  if (m_replicates < 1)
    throw ValidationError("m_replicates must be at least 1");

  if (order.has_value()) {
    std::set<std::string> in_order;
    std::set<std::string> adjustable(adjust_names.begin(), adjust_names.end());
    for (const auto& name : *order) {
      if (!in_order.insert(name).second)
        throw ValidationError("duplicate name in order: " + name);
      if (adjustable.find(name) == adjustable.end())
        throw ValidationError("'" + name + "' in order is not an adjustable "
                              "variable");
    }
    for (const auto& name : adjust_names)
      if (in_order.find(name) == in_order.end())
        throw ValidationError("order omits adjustable variable: " + name);
    plan.order = *order;
  } else {
    plan.order = adjust_names;  // declaration order
  }

  for (const auto& s : specs) {
    if (s.role != Role::Adjust) continue;
    ModelChoice resolved = s.model;
    if (resolved == ModelChoice::Auto) {
      switch (s.kind) {
        case ColumnKind::Continuous:
          resolved = ModelChoice::LinearResidualEcdf;
          break;
        case ColumnKind::Binary:
          resolved = ModelChoice::Logistic;
          break;
        case ColumnKind::Count:
          resolved = ModelChoice::Auto;  // AIC selection at fit time
          break;
        case ColumnKind::Categorical:
          break;  // unreachable, rejected above
      }
    }
    plan.model_per_variable[s.name] = resolved;
  }

  plan.m_replicates = m_replicates;
  plan.seed = seed;
  return plan;
}

namespace {

template <typename E>
E parse_enum(const std::string& s, const char* what,
             std::initializer_list<std::pair<const char*, E>> table) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw ValidationError(std::string("unknown ") + what + ": '" + s + "'");
}

}  // namespace

SpecFile parse_spec_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("spec file is not valid JSON: ") +
                          e.what());
  }
  try {
    SpecFile spec;
    if (!doc.contains("variables") || !doc["variables"].is_array())
      throw ValidationError("spec file needs a 'variables' array");
    for (const auto& v : doc["variables"]) {
      VariableSpec s;
      s.name = v.at("name").get<std::string>();
      s.role = parse_enum<Role>(v.at("role").get<std::string>(), "role",
                                {{"protected", Role::Protected},
                                 {"adjust", Role::Adjust},
                                 {"outcome", Role::Outcome},
                                 {"drop", Role::Drop}});
      s.kind = parse_enum<ColumnKind>(
          v.at("kind").get<std::string>(), "kind",
          {{"continuous", ColumnKind::Continuous},
           {"binary", ColumnKind::Binary},
           {"count", ColumnKind::Count},
           {"categorical", ColumnKind::Categorical}});
      if (v.contains("pre_transform"))
        s.pre_transform = parse_enum<PreTransform>(
            v["pre_transform"].get<std::string>(), "pre_transform",
            {{"none", PreTransform::None}, {"log", PreTransform::Log}});
      if (v.contains("model"))
        s.model = parse_enum<ModelChoice>(
            v["model"].get<std::string>(), "model",
            {{"auto", ModelChoice::Auto},
             {"linear_residual_ecdf", ModelChoice::LinearResidualEcdf},
             {"logistic", ModelChoice::Logistic},
             {"poisson", ModelChoice::Poisson},
             {"negbin", ModelChoice::NegBin},
             {"zip", ModelChoice::Zip},
             {"zinb", ModelChoice::Zinb}});
      spec.variables.push_back(std::move(s));
    }
    if (doc.contains("order")) {
      std::vector<std::string> order;
      for (const auto& n : doc["order"]) order.push_back(n.get<std::string>());
      spec.order = std::move(order);
    }
    if (doc.contains("m")) spec.m = doc["m"].get<int>();
    if (doc.contains("seed"))
      spec.seed = static_cast<std::uint64_t>(doc["seed"].get<std::int64_t>());
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed spec file: ") + e.what());
  }
}

SpecFile load_spec_json(const std::string& path) {
  return parse_spec_json(read_text_file(path));
}

}  // namespace fairchain
