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

#include <cmath>
#include <filesystem>

#include "compas_prep.hpp"
#include "fairchain/chain.hpp"
#include "fairchain/io.hpp"

namespace fs = std::filesystem;
using namespace fairchain;

namespace {

// header in the published column order (subset plus extras, to mirror
// that the real file carries many unrelated columns)
const char* kFixture =
    "id,sex,age,race,juv_fel_count,juv_misd_count,juv_other_count,"
    "priors_count,days_b_screening_arrest,c_charge_degree,c_charge_desc,"
    "is_recid,two_year_recid\n"
    "1,Male,34,African-American,0,1,0,3,-1,F,\"Battery, simple\",1,1\n"
    "2,Female,25,Caucasian,0,0,0,0,0,M,Theft,0,0\n"
    "3,Male,41,Hispanic,1,0,2,7,12,F,Assault,1,0\n"
    "4,Male,29,Caucasian,0,0,0,1,45,F,OutOfWindow,1,1\n"       // days > 30
    "5,Female,33,African-American,0,0,0,2,,F,NoScreening,0,0\n"  // missing
    "6,Male,52,Other,0,0,0,0,3,O,Traffic,0,0\n"                 // ordinary
    "7,Male,23,African-American,2,1,1,5,-8,M,Petit theft,-1,0\n"  // is_recid -1
    "8,Female,37,Caucasian,0,0,0,4,20,M,Fraud,1,1\n";

struct FixtureFile {
  fs::path path;
  FixtureFile() {
    path = fs::temp_directory_path() /
           ("compas_fixture_" + std::to_string(::getpid()) + ".csv");
    write_text_atomic(path.string(), kFixture);
  }
  ~FixtureFile() { fs::remove(path); }
};

}  // namespace

TEST_CASE("the published-analysis filter keeps the right rows") {
  FixtureFile f;
  std::string message;
  auto data = compas::load(f.path.string(), message, 1);
  REQUIRE(data.has_value());
  // rows 1, 2, 3, 8 survive; 4 (days), 5 (missing), 6 (charge O),
  // 7 (is_recid -1) are filtered out
  CHECK(data->table.n_rows() == 4);

  const Column& sex = data->table.at("sex");
  CHECK(sex.values == std::vector<double>{1, 0, 1, 0});

  const Column& age = data->table.at("age");
  CHECK(age.pre == PreTransform::Log);
  CHECK(age.values[0] == doctest::Approx(std::log(34.0)));

  const Column& race = data->table.at("race");
  CHECK(race.levels ==
        std::vector<std::string>{"African-American", "Caucasian", "Hispanic"});

  CHECK(data->table.at("two_year_recid").values ==
        std::vector<double>{1, 0, 0, 1});
  CHECK(data->table.at("priors_count").values ==
        std::vector<double>{3, 0, 7, 4});
}

TEST_CASE("missing columns are reported, not guessed") {
  FixtureFile f;
  write_text_atomic(f.path.string(), "sex,age\nMale,30\n");
  std::string message;
  auto data = compas::load(f.path.string(), message, 1);
  CHECK(!data.has_value());
  CHECK(message.find("race") != std::string::npos);
}

TEST_CASE("the minimum row guard rejects thin files") {
  FixtureFile f;
  std::string message;
  auto data = compas::load(f.path.string(), message, 1000);
  CHECK(!data.has_value());
  CHECK(message.find("rows survived") != std::string::npos);
}

TEST_CASE("prepared data drives the chain end to end") {
  // replicate the fixture rows enough times for stable fits, jittering
  // the counts so the models see variation
  FixtureFile f;
  std::string message;
  auto small = compas::load(f.path.string(), message, 1);
  REQUIRE(small.has_value());

  Rng rng(7);
  Table big;
  for (const Column& c : small->table.columns()) {
    Column col = c;
    col.values.clear();
    for (int copy = 0; copy < 150; ++copy) {
      for (double v : c.values) {
        if (c.kind == ColumnKind::Count)
          v = std::floor(v + 3.0 * rng.uniform01());
        if (c.kind == ColumnKind::Continuous) v += 0.05 * rng.normal();
        if (c.kind == ColumnKind::Binary && rng.uniform01() < 0.3)
          v = 1.0 - v;
        col.values.push_back(v);
      }
    }
    big.add_column(col);
  }

  ChainPlan plan = validate_plan(small->specs, std::nullopt, 2, 42);
  auto replicates = adjust_many(big, plan);
  REQUIRE(replicates.size() == 2);
  CHECK(replicates[0].table.find("race") == nullptr);
  CHECK(replicates[0].table.find("two_year_recid") != nullptr);
  CHECK(replicates[0].table.columns().size() == 7);
}
