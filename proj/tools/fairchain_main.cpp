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
//
// fairchain CLI: adjust -> diagnose -> evaluate over CSV/JSON files.
//
// Exit codes: 0 success, 1 internal error, 2 input/validation error,
// 3 fairness flag raised by diagnose.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairchain/chain.hpp"
#include "fairchain/error.hpp"
#include "fairchain/forest.hpp"
#include "fairchain/io.hpp"
#include "fairchain/ks.hpp"
#include "fairchain/leakage.hpp"
#include "fairchain/roc.hpp"
#include "fairchain/rng.hpp"
#include "fairchain/table.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fairchain;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::uint64_t kForestSalt = 0xf04e57ULL;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ManifestWriter {
  json doc;
  fs::path out_dir;

  ManifestWriter(const std::string& command, const fs::path& out)
      : out_dir(out) {
    doc["command"] = command;
    doc["out"] = out.string();
    doc["timestamps"]["started"] = iso_timestamp();
    doc["versions"]["fairchain"] = kVersion;
    doc["versions"]["chain_format"] = 1;
    doc["versions"]["diagnostics_format"] = 1;
    doc["versions"]["evaluation_format"] = 1;
    doc["files"] = json::array();
  }

  void input(const std::string& key, const std::string& path) {
    doc[key] = path;
  }

  void wrote(const std::string& name, const std::string& content) {
    write_text_atomic((out_dir / name).string(), content);
    doc["files"].push_back(name);
  }

  void finish() {
    doc["timestamps"]["finished"] = iso_timestamp();
    write_text_atomic((out_dir / "manifest.json").string(), doc.dump(2) + "\n");
  }
};

struct CommonArgs {
  std::string data_path;
  std::string spec_path;
  std::string out_dir;
};

// Variables for reading back an adjusted CSV (protected columns are
// absent there by construction).
std::vector<VariableSpec> adjusted_specs(const std::vector<VariableSpec>& specs) {
  std::vector<VariableSpec> out;
  for (const auto& s : specs)
    if (s.role == Role::Adjust || s.role == Role::Outcome) out.push_back(s);
  return out;
}

FeatureMatrix features_of(const Table& table, const ChainPlan& plan) {
  FeatureMatrix features;
  for (const auto& name : plan.order)
    features.add(name, table.at(name).values);
  return features;
}

// group label -> row membership for a binary or categorical column
std::vector<std::pair<std::string, std::vector<bool>>> group_masks(
    const Column& col) {
  std::vector<std::pair<std::string, std::vector<bool>>> out;
  if (col.kind == ColumnKind::Binary) {
    for (const char* name : {"0", "1"}) {
      std::vector<bool> mask(col.values.size());
      double code = name[0] == '1' ? 1.0 : 0.0;
      for (std::size_t i = 0; i < col.values.size(); ++i)
        mask[i] = col.values[i] == code;
      out.emplace_back(name, std::move(mask));
    }
  } else if (col.kind == ColumnKind::Categorical) {
    for (std::size_t l = 0; l < col.levels.size(); ++l) {
      std::vector<bool> mask(col.values.size());
      for (std::size_t i = 0; i < col.values.size(); ++i)
        mask[i] = col.values[i] == static_cast<double>(l);
      out.emplace_back(col.levels[l], std::move(mask));
    }
  }
  return out;
}

std::vector<double> masked(const std::vector<double>& values,
                           const std::vector<bool>& mask, bool in) {
  std::vector<double> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (mask[i] == in) out.push_back(values[i]);
  return out;
}

json ks_to_json(const KsReport& r) {
  json j;
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["n"] = r.n;
  if (r.variant == KsVariant::TwoSample) j["n2"] = r.n2;
  return j;
}

ChainPlan make_plan(const SpecFile& spec, std::optional<int> m_flag,
                    std::optional<std::int64_t> seed_flag) {
  int m = m_flag.value_or(spec.m.value_or(10));
  std::uint64_t seed = seed_flag.has_value()
                           ? static_cast<std::uint64_t>(*seed_flag)
                           : spec.seed.value_or(0);
  return validate_plan(spec.variables, spec.order, m, seed);
}

int cmd_adjust(const CommonArgs& args, std::optional<int> m_flag,
               std::optional<std::int64_t> seed_flag) {
  SpecFile spec = load_spec_json(args.spec_path);
  ChainPlan plan = make_plan(spec, m_flag, seed_flag);
  Table table = load_csv(args.data_path, spec.variables);

  fs::create_directories(args.out_dir);
  ManifestWriter manifest("adjust", args.out_dir);
  manifest.input("data", args.data_path);
  manifest.input("spec", args.spec_path);
  manifest.doc["m"] = plan.m_replicates;
  manifest.doc["seed"] = plan.seed;

  FittedChain chain;
  std::vector<AdjustedDataset> replicates = adjust_many(table, plan, &chain);
  for (const auto& rep : replicates)
    manifest.wrote("adjusted_" + std::to_string(rep.replicate_index) + ".csv",
                   csv_to_string(rep.table));
  manifest.wrote("chain.json", chain.to_json().dump(2) + "\n");
  manifest.finish();
  return 0;
}

int cmd_diagnose(const CommonArgs& args, const std::string& adjusted_dir,
                 double alpha, int folds, int trees) {
  SpecFile spec = load_spec_json(args.spec_path);
  Table table = load_csv(args.data_path, spec.variables);

  fs::path adj(adjusted_dir);
  FittedChain chain = FittedChain::from_json(
      json::parse(read_text_file((adj / "chain.json").string())));
  const ChainPlan& plan = chain.plan();

  fs::path adjusted_1 = adj / "adjusted_1.csv";
  if (!fs::exists(adjusted_1))
    throw ValidationError("missing adjusted file: " + adjusted_1.string());
  Table adjusted = load_csv(adjusted_1.string(), adjusted_specs(spec.variables));
  if (adjusted.n_rows() != table.n_rows())
    throw ValidationError("adjusted data has a different row count than the "
                          "input data");

  fs::create_directories(args.out_dir);
  ManifestWriter manifest("diagnose", args.out_dir);
  manifest.input("data", args.data_path);
  manifest.input("spec", args.spec_path);
  manifest.input("adjusted", adjusted_dir);
  manifest.doc["m"] = plan.m_replicates;
  manifest.doc["seed"] = plan.seed;

  json report;
  report["format"] = 1;
  report["alpha"] = alpha;
  report["replicate"] = 1;

  // model-fit checks: the realized PIT values of replicate 1 must look
  // Uniform(0,1) when the conditional models fit well
  TransformResult replay = apply_chain(chain, table, 1);
  json fit_tests = json::array();
  for (std::size_t j = 0; j < plan.order.size(); ++j) {
    json e = ks_to_json(ks_uniform(replay.pit[j]));
    e["variable"] = plan.order[j];
    fit_tests.push_back(std::move(e));
  }
  report["fit_tests"] = fit_tests;

  // group parity before/after, one-vs-rest per protected level
  bool flagged = false;
  json parity = json::array();
  for (const auto& pname : plan.protected_names) {
    const Column& pcol = table.at(pname);
    auto masks = group_masks(pcol);
    if (masks.empty()) continue;  // continuous protected: no group test
    for (const auto& vname : plan.order) {
      const Column& before = table.at(vname);
      const auto& after_col = adjusted.at(vname).values;
      for (const auto& [level, mask] : masks) {
        json e;
        e["protected"] = pname;
        e["level"] = level;
        e["variable"] = vname;
        e["before"] = ks_to_json(ks_two_sample(
            masked(before.values, mask, true), masked(before.values, mask, false)));
        KsReport after = ks_two_sample(masked(after_col, mask, true),
                                       masked(after_col, mask, false));
        e["after"] = ks_to_json(after);
        if (before.kind != ColumnKind::Continuous)
          e["p_note"] = "p-values are conservative on discrete data";
        if (after.p_value < alpha) {
          e["rejected"] = true;
          flagged = true;
        }
        parity.push_back(std::move(e));
      }
    }
  }
  report["parity"] = parity;
  report["flagged"] = flagged;

  // leakage audit on raw vs adjusted features
  ForestParams fp;
  fp.n_trees = trees;
  json leakage;
  for (const auto& pname : plan.protected_names) {
    const Column& pcol = table.at(pname);
    if (pcol.kind != ColumnKind::Binary &&
        pcol.kind != ColumnKind::Categorical)
      continue;
    json raw_arr = json::array(), adj_arr = json::array();
    for (const auto& [level, auc] :
         leakage_audit(features_of(table, plan), pcol, folds, plan.seed, fp)) {
      raw_arr.push_back({{"level", level}, {"auc", auc}});
    }
    for (const auto& [level, auc] : leakage_audit(
             features_of(adjusted, plan), pcol, folds, plan.seed, fp)) {
      adj_arr.push_back({{"level", level}, {"auc", auc}});
    }
    leakage[pname] = {{"raw", raw_arr},
                      {"adjusted", adj_arr},
                      {"folds", folds},
                      {"trees", trees}};
  }
  report["leakage"] = leakage;

  manifest.wrote("diagnostics.json", report.dump(2) + "\n");
  manifest.finish();
  if (flagged)
    std::cerr << "warning: a group-parity test rejected at alpha=" << alpha
              << " on adjusted data\n";
  return flagged ? 3 : 0;
}

int cmd_evaluate(const CommonArgs& args, const std::string& adjusted_dir,
                 int trees) {
  SpecFile spec = load_spec_json(args.spec_path);
  Table table = load_csv(args.data_path, spec.variables);

  fs::path adj(adjusted_dir);
  FittedChain chain = FittedChain::from_json(
      json::parse(read_text_file((adj / "chain.json").string())));
  const ChainPlan& plan = chain.plan();

  const Column& outcome = table.at(plan.outcome);
  if (outcome.kind != ColumnKind::Binary)
    throw ValidationError("evaluation requires a binary outcome column");
  {
    double pos = 0.0;
    for (double v : outcome.values) pos += v;
    if (pos == 0.0 || pos == static_cast<double>(outcome.values.size()))
      throw ValidationError("outcome column has a single class");
  }

  ForestParams fp;
  fp.n_trees = trees;

  // unadjusted run: raw covariates, protected omitted
  FeatureMatrix raw_features = features_of(table, plan);
  Forest raw_forest = fit_forest(raw_features, outcome.values, fp,
                                 derive_stream({plan.seed, kForestSalt, 0}));
  std::vector<double> raw_scores = raw_forest.oob_scores(raw_features);

  // adjusted runs: one forest per replicate, probabilities averaged
  std::vector<std::vector<double>> replicate_scores;
  auto adjusted_vars = adjusted_specs(spec.variables);
  for (int k = 1; k <= plan.m_replicates; ++k) {
    fs::path file = adj / ("adjusted_" + std::to_string(k) + ".csv");
    if (!fs::exists(file))
      throw ValidationError("missing adjusted file: " + file.string());
    Table rep = load_csv(file.string(), adjusted_vars);
    if (rep.n_rows() != table.n_rows())
      throw ValidationError("adjusted replicate " + std::to_string(k) +
                            " has a different row count than the input data");
    FeatureMatrix features = features_of(rep, plan);
    Forest forest =
        fit_forest(features, outcome.values, fp,
                   derive_stream({plan.seed, kForestSalt,
                                  static_cast<std::uint64_t>(k)}));
    replicate_scores.push_back(forest.oob_scores(features));
  }
  std::vector<double> adj_scores = average_over_replicates(replicate_scores);

  RocCurve roc_raw = roc_and_auc(raw_scores, outcome.values);
  RocCurve roc_adj = roc_and_auc(adj_scores, outcome.values);

  fs::create_directories(args.out_dir);
  ManifestWriter manifest("evaluate", args.out_dir);
  manifest.input("data", args.data_path);
  manifest.input("spec", args.spec_path);
  manifest.input("adjusted", adjusted_dir);
  manifest.doc["m"] = plan.m_replicates;
  manifest.doc["seed"] = plan.seed;

  auto roc_csv = [](const RocCurve& curve) {
    std::string out = "fpr,tpr,threshold\n";
    for (const auto& p : curve.points) {
      out += format_double(p.fpr);
      out += ',';
      out += format_double(p.tpr);
      out += ',';
      out += std::isinf(p.threshold) ? "inf" : format_double(p.threshold);
      out += '\n';
    }
    return out;
  };
  manifest.wrote("roc_unadjusted.csv", roc_csv(roc_raw));
  manifest.wrote("roc_adjusted.csv", roc_csv(roc_adj));

  // per-group score distributions, plot-ready
  std::string scores_csv = "group,score\n";
  for (const auto& pname : plan.protected_names) {
    auto masks = group_masks(table.at(pname));
    for (const auto& [level, mask] : masks) {
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        scores_csv += "unadjusted:" + level + "," +
                      format_double(raw_scores[i]) + "\n";
      }
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        scores_csv += "adjusted:" + level + "," +
                      format_double(adj_scores[i]) + "\n";
      }
    }
  }
  manifest.wrote("scores_by_group.csv", scores_csv);

  json report;
  report["format"] = 1;
  report["auc_unadjusted"] = roc_raw.auc;
  report["auc_adjusted"] = roc_adj.auc;
  report["m"] = plan.m_replicates;
  report["trees"] = trees;
  report["score_method"] =
      "out-of-bag probabilities, one forest per replicate, averaged";
  manifest.wrote("evaluation.json", report.dump(2) + "\n");
  manifest.finish();

  std::cout << "AUC unadjusted: " << roc_raw.auc
            << "\nAUC adjusted:   " << roc_adj.auc << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairchain: chained conditional-CDF adjustment of tabular "
               "data for fair prediction"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  std::optional<int> m_flag;
  std::optional<std::int64_t> seed_flag;
  std::string adjusted_dir;
  double alpha = 0.05;
  int folds = 5;
  int diag_trees = 100;
  int eval_trees = 500;

  CLI::App* adjust = app.add_subcommand(
      "adjust", "fit the chain and write M fair replicates");
  adjust->add_option("--data", args.data_path, "input CSV")->required();
  adjust->add_option("--spec", args.spec_path, "variable spec JSON")->required();
  adjust->add_option("--out", args.out_dir, "output directory")->required();
  adjust->add_option("--m", m_flag, "number of fair replicates")
      ->check(CLI::PositiveNumber);
  adjust->add_option("--seed", seed_flag, "master seed");

  CLI::App* diagnose = app.add_subcommand(
      "diagnose", "KS fit tests, group parity and leakage audit");
  diagnose->add_option("--data", args.data_path, "input CSV")->required();
  diagnose->add_option("--adjusted", adjusted_dir, "adjust output directory")
      ->required();
  diagnose->add_option("--spec", args.spec_path, "variable spec JSON")
      ->required();
  diagnose->add_option("--out", args.out_dir, "output directory")->required();
  diagnose->add_option("--alpha", alpha, "parity rejection level")
      ->check(CLI::Range(0.0, 1.0));
  diagnose->add_option("--folds", folds, "leakage audit CV folds")
      ->check(CLI::Range(2, 1000));
  diagnose->add_option("--trees", diag_trees, "leakage audit forest size")
      ->check(CLI::PositiveNumber);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "random-forest accuracy and score distributions");
  evaluate->add_option("--data", args.data_path, "input CSV")->required();
  evaluate->add_option("--adjusted", adjusted_dir, "adjust output directory")
      ->required();
  evaluate->add_option("--spec", args.spec_path, "variable spec JSON")
      ->required();
  evaluate->add_option("--out", args.out_dir, "output directory")->required();
  evaluate->add_option("--trees", eval_trees, "trees per forest")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (adjust->parsed()) return cmd_adjust(args, m_flag, seed_flag);
    if (diagnose->parsed())
      return cmd_diagnose(args, adjusted_dir, alpha, folds, diag_trees);
    if (evaluate->parsed()) return cmd_evaluate(args, adjusted_dir, eval_trees);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
