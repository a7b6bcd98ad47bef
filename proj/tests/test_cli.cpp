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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "fairchain/io.hpp"
#include "fairchain/table.hpp"
#include "synth.hpp"

namespace fs = std::filesystem;
using namespace fairchain;

namespace {

const char* kSpecJson = R"({
  "variables": [
    {"name": "z",  "role": "protected", "kind": "binary"},
    {"name": "x1", "role": "adjust",    "kind": "continuous"},
    {"name": "x2", "role": "adjust",    "kind": "binary"},
    {"name": "x3", "role": "adjust",    "kind": "count"},
    {"name": "y",  "role": "outcome",   "kind": "binary"}
  ],
  "m": 3,
  "seed": 2026
})";

struct Workspace {
  fs::path dir;

  Workspace() {
    dir = fs::temp_directory_path() /
          ("fairchain_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    fs::create_directories(dir);
    auto data = synth::make_biased_dataset(600, 11);
    write_csv(data.table, (dir / "data.csv").string());
    write_text_atomic((dir / "spec.json").string(), kSpecJson);
  }
  ~Workspace() { fs::remove_all(dir); }

  static int& counter() {
    static int c = 0;
    return c;
  }

  std::string data() const { return (dir / "data.csv").string(); }
  std::string spec() const { return (dir / "spec.json").string(); }
  std::string sub(const std::string& name) const {
    return (dir / name).string();
  }
};

int run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " \"" FAIRCHAIN_CLI_PATH "\" " + args +
                    " >/dev/null 2>/tmp/fairchain_cli_stderr.txt";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string last_stderr() {
  std::ifstream in("/tmp/fairchain_cli_stderr.txt");
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

}  // namespace

TEST_CASE("adjust writes replicates, chain and manifest") {
  Workspace ws;
  int code = run("adjust --data " + ws.data() + " --spec " + ws.spec() +
                 " --out " + ws.sub("out"));
  CHECK(code == 0);
  for (int k = 1; k <= 3; ++k)
    CHECK(fs::exists(ws.sub("out/adjusted_" + std::to_string(k) + ".csv")));
  CHECK(fs::exists(ws.sub("out/chain.json")));
  CHECK(fs::exists(ws.sub("out/manifest.json")));

  auto manifest = nlohmann::json::parse(read_text_file(ws.sub("out/manifest.json")));
  CHECK(manifest["command"] == "adjust");
  for (const auto& f : manifest["files"])
    CHECK(fs::exists(ws.dir / "out" / f.get<std::string>()));

  // protected column must be gone from the adjusted outputs
  std::string adjusted = read_text_file(ws.sub("out/adjusted_1.csv"));
  CHECK(adjusted.rfind("x1,", 0) == 0);
}

TEST_CASE("adjust is byte-identical across reruns and worker counts") {
  Workspace ws;
  CHECK(run("adjust --data " + ws.data() + " --spec " + ws.spec() +
            " --out " + ws.sub("a"),
            "FAIRCHAIN_THREADS=1") == 0);
  CHECK(run("adjust --data " + ws.data() + " --spec " + ws.spec() +
            " --out " + ws.sub("b"),
            "FAIRCHAIN_THREADS=2") == 0);
  for (const char* name :
       {"adjusted_1.csv", "adjusted_2.csv", "adjusted_3.csv", "chain.json"}) {
    CHECK(read_text_file(ws.sub(std::string("a/") + name)) ==
          read_text_file(ws.sub(std::string("b/") + name)));
  }

  // a different seed changes the discrete draws
  CHECK(run("adjust --data " + ws.data() + " --spec " + ws.spec() +
            " --out " + ws.sub("c") + " --seed 999") == 0);
  CHECK(read_text_file(ws.sub("a/adjusted_1.csv")) !=
        read_text_file(ws.sub("c/adjusted_1.csv")));
}

TEST_CASE("adjust reports missing columns with exit 2") {
  Workspace ws;
  write_text_atomic(ws.sub("bad_spec.json"), R"({
    "variables": [
      {"name": "z", "role": "protected", "kind": "binary"},
      {"name": "nope", "role": "adjust", "kind": "continuous"},
      {"name": "y", "role": "outcome", "kind": "binary"}
    ]})");
  int code = run("adjust --data " + ws.data() + " --spec " +
                 ws.sub("bad_spec.json") + " --out " + ws.sub("out"));
  CHECK(code == 2);
  CHECK(last_stderr().find("nope") != std::string::npos);
}

TEST_CASE("diagnose passes on a proper adjustment and flags raw data") {
  Workspace ws;
  REQUIRE(run("adjust --data " + ws.data() + " --spec " + ws.spec() +
              " --out " + ws.sub("out")) == 0);
  int code = run("diagnose --data " + ws.data() + " --spec " + ws.spec() +
                 " --adjusted " + ws.sub("out") + " --out " + ws.sub("diag") +
                 " --trees 40");
  CHECK(code == 0);
  auto report =
      nlohmann::json::parse(read_text_file(ws.sub("diag/diagnostics.json")));
  CHECK(report["fit_tests"].size() == 3);
  CHECK(report["flagged"] == false);
  CHECK(report["leakage"].contains("z"));

  // point diagnose at a directory whose "adjusted" file is the raw data:
  // group parity must reject and the exit code flips to 3
  fs::create_directories(ws.sub("fake"));
  fs::copy_file(ws.sub("out/chain.json"), ws.sub("fake/chain.json"));
  {
    SpecFile spec = load_spec_json(ws.spec());
    Table raw = load_csv(ws.data(), spec.variables);
    Table stripped;
    for (const Column& c : raw.columns())
      if (c.name != "z") stripped.add_column(c);
    write_csv(stripped, ws.sub("fake/adjusted_1.csv"));
  }
  int flagged = run("diagnose --data " + ws.data() + " --spec " + ws.spec() +
                    " --adjusted " + ws.sub("fake") + " --out " +
                    ws.sub("diag2") + " --trees 40");
  CHECK(flagged == 3);
}

TEST_CASE("diagnose needs the adjusted artifacts") {
  Workspace ws;
  fs::create_directories(ws.sub("empty"));
  int code = run("diagnose --data " + ws.data() + " --spec " + ws.spec() +
                 " --adjusted " + ws.sub("empty") + " --out " + ws.sub("d"));
  CHECK(code == 2);
}

TEST_CASE("evaluate reports both aucs and the plot files") {
  Workspace ws;
  REQUIRE(run("adjust --data " + ws.data() + " --spec " + ws.spec() +
              " --out " + ws.sub("out")) == 0);
  int code = run("evaluate --data " + ws.data() + " --spec " + ws.spec() +
                 " --adjusted " + ws.sub("out") + " --out " + ws.sub("eval") +
                 " --trees 40");
  CHECK(code == 0);
  auto report =
      nlohmann::json::parse(read_text_file(ws.sub("eval/evaluation.json")));
  double raw_auc = report["auc_unadjusted"].get<double>();
  double adj_auc = report["auc_adjusted"].get<double>();
  CHECK(raw_auc > 0.5);
  CHECK(adj_auc > 0.4);
  CHECK(fs::exists(ws.sub("eval/roc_adjusted.csv")));
  CHECK(fs::exists(ws.sub("eval/roc_unadjusted.csv")));
  std::string scores = read_text_file(ws.sub("eval/scores_by_group.csv"));
  CHECK(scores.rfind("group,score\n", 0) == 0);
  CHECK(scores.find("adjusted:1") != std::string::npos);
  CHECK(scores.find("unadjusted:0") != std::string::npos);

  // a single tree still runs end to end
  CHECK(run("evaluate --data " + ws.data() + " --spec " + ws.spec() +
            " --adjusted " + ws.sub("out") + " --out " + ws.sub("eval1") +
            " --trees 1") == 0);
}

TEST_CASE("evaluate rejects a single-class outcome") {
  Workspace ws;
  // rewrite the outcome to all zeros
  SpecFile spec = load_spec_json(ws.spec());
  Table t = load_csv(ws.data(), spec.variables);
  Table zeroed;
  for (Column c : t.columns()) {
    if (c.name == "y") std::fill(c.values.begin(), c.values.end(), 0.0);
    zeroed.add_column(c);
  }
  write_csv(zeroed, ws.sub("zeroed.csv"));
  REQUIRE(run("adjust --data " + ws.sub("zeroed.csv") + " --spec " + ws.spec() +
              " --out " + ws.sub("out0")) == 0);
  int code = run("evaluate --data " + ws.sub("zeroed.csv") + " --spec " +
                 ws.spec() + " --adjusted " + ws.sub("out0") + " --out " +
                 ws.sub("eval0"));
  CHECK(code == 2);
}

TEST_CASE("diagnose and evaluate are idempotent given identical inputs") {
  Workspace ws;
  REQUIRE(run("adjust --data " + ws.data() + " --spec " + ws.spec() +
              " --out " + ws.sub("out")) == 0);
  for (const char* d : {"d1", "d2"})
    REQUIRE(run("diagnose --data " + ws.data() + " --spec " + ws.spec() +
                " --adjusted " + ws.sub("out") + " --out " + ws.sub(d) +
                " --trees 25") == 0);
  CHECK(read_text_file(ws.sub("d1/diagnostics.json")) ==
        read_text_file(ws.sub("d2/diagnostics.json")));

  for (const char* d : {"e1", "e2"})
    REQUIRE(run("evaluate --data " + ws.data() + " --spec " + ws.spec() +
                " --adjusted " + ws.sub("out") + " --out " + ws.sub(d) +
                " --trees 25") == 0);
  for (const char* f : {"evaluation.json", "roc_adjusted.csv",
                        "roc_unadjusted.csv", "scores_by_group.csv"}) {
    CHECK(read_text_file(ws.sub(std::string("e1/") + f)) ==
          read_text_file(ws.sub(std::string("e2/") + f)));
  }
}

TEST_CASE("categorical protected attribute end to end") {
  Workspace ws;
  // three-level protected group with group-shifted covariates
  Rng rng(404);
  const std::size_t n = 500;
  std::vector<std::string> levels = {"alpha", "beta", "gamma"};
  std::vector<double> g(n), x1(n), x3(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = static_cast<double>(rng.below(3));
    x1[i] = 0.8 * g[i] + rng.normal();
    x3[i] = synth::poisson_draw(rng, std::exp(0.3 + 0.4 * g[i]));
    y[i] = synth::bernoulli_draw(rng, 0.3 + 0.1 * g[i]);
  }
  Table t;
  t.add_column(synth::categorical_column("group", levels, g));
  t.add_column(synth::continuous_column("x1", x1));
  t.add_column(synth::count_column("x3", x3));
  t.add_column(synth::binary_column("y", y));
  write_csv(t, ws.sub("cat.csv"));
  write_text_atomic(ws.sub("cat_spec.json"), R"({
    "variables": [
      {"name": "group", "role": "protected", "kind": "categorical"},
      {"name": "x1", "role": "adjust", "kind": "continuous"},
      {"name": "x3", "role": "adjust", "kind": "count"},
      {"name": "y", "role": "outcome", "kind": "binary"}
    ], "m": 2, "seed": 5
  })");
  REQUIRE(run("adjust --data " + ws.sub("cat.csv") + " --spec " +
              ws.sub("cat_spec.json") + " --out " + ws.sub("cat_out")) == 0);
  int code = run("diagnose --data " + ws.sub("cat.csv") + " --spec " +
                 ws.sub("cat_spec.json") + " --adjusted " + ws.sub("cat_out") +
                 " --out " + ws.sub("cat_diag") + " --trees 25");
  CHECK(code == 0);
  auto report = nlohmann::json::parse(
      read_text_file(ws.sub("cat_diag/diagnostics.json")));
  // one-vs-rest parity entries per level per variable
  CHECK(report["parity"].size() == 6);
  CHECK(report["leakage"]["group"]["raw"].size() == 3);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("adjust --data /nonexistent.csv") == 2);  // missing required flags
  CHECK(run("no_such_command") == 2);
}
