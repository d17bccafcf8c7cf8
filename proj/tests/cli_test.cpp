// Copyright 2026 The g2x2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "g2x2/io.hpp"

namespace g2x2 {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(G2X2_TEST_WORKDIR) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  // Runs the CLI with `args`; stderr goes to err.txt in the work dir.
  int run(const std::string& args) {
    const std::string cmd = "cd '" + dir_.string() + "' && '" G2X2_CLI_PATH "' " + args + " 2> err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::string first_line(const std::string& name) const {
    const std::string s = read(name);
    return s.substr(0, s.find('\n'));
  }

  nlohmann::json error_record() const { return nlohmann::json::parse(read("err.txt")); }

  fs::path dir_;
};

TEST_F(CliTest, GenerateIsDeterministic) {
  ASSERT_EQ(run("generate --seed 7 -o a.json"), 0);
  ASSERT_EQ(run("generate --seed 7 -o b.json"), 0);
  ASSERT_EQ(run("generate --seed 8 -o c.json"), 0);
  EXPECT_EQ(read("a.json"), read("b.json"));
  EXPECT_NE(read("a.json"), read("c.json"));
  EXPECT_EQ(first_line("a.json").rfind("// g2x2 generate config=", 0), 0u);
  EXPECT_NE(first_line("a.json").find("seed=7"), std::string::npos);
  std::ifstream in(dir_ / "a.json");
  EXPECT_EQ(read_games(in).size(), 2416u);
}

TEST_F(CliTest, UsageErrors) {
  ASSERT_EQ(run("generate --quotas 1,1,1 --per-type -o g.json"), 0);
  ASSERT_EQ(run("simulate -g g.json -m L1+QR --frequencies --participants 20 -o r.csv"), 0);
  EXPECT_EQ(run("fit -r r.csv -m L9+QR"), 2);
  EXPECT_EQ(error_record().at("error"), "InvalidSpec");
  EXPECT_EQ(error_record().at("exit_code"), 2);
  EXPECT_EQ(run("fit -r r.csv"), 2);
  EXPECT_EQ(error_record().at("error"), "UsageError");
  EXPECT_EQ(run("no-such-command"), 2);
  EXPECT_EQ(run("--help > help.txt"), 0);
  EXPECT_NE(read("help.txt").find("psychometric"), std::string::npos);
}

TEST_F(CliTest, DataErrors) {
  ASSERT_EQ(run("generate --quotas 1,1,1 --per-type -o g.json"), 0);
  {
    std::ofstream bad(dir_ / "bad.csv");
    bad << "participant_id,game_id,role,swap_rows,swap_cols,choice,rt_ms\np1,g0001-r,row,0,0,first,0\n";
  }
  EXPECT_EQ(run("aggregate -t bad.csv -g g.json"), 3);
  EXPECT_EQ(error_record().at("error"), "RangeError");
  {
    std::ofstream bad(dir_ / "unknown.csv");
    bad << "participant_id,game_id,role,swap_rows,swap_cols,choice,rt_ms\np1,nope,row,0,0,first,10\n";
  }
  EXPECT_EQ(run("aggregate -t unknown.csv -g g.json"), 3);
  EXPECT_EQ(error_record().at("error"), "UnknownGame");
  EXPECT_EQ(run("classify -g missing.json"), 3);
  EXPECT_EQ(error_record().at("error"), "IoError");
}

TEST_F(CliTest, PipelineRunsEndToEnd) {
  ASSERT_EQ(run("generate --seed 3 --quotas 1,1,1 --per-type -o games.json"), 0);
  ASSERT_EQ(run("classify -g games.json -o classes.csv"), 0);
  ASSERT_EQ(run("solve -g games.json --qre-eta 0.3 -o solve.csv"), 0);
  ASSERT_EQ(run("features -g games.json -o features.csv"), 0);
  ASSERT_EQ(run("simulate -g games.json -m L1+QR+Risk --eta-self 0.15 --alpha 0.02 --participants 40 --rt-loading 0.3 "
                "--confidence --seed 5 -o trials.csv"),
            0);
  ASSERT_EQ(run("aggregate -t trials.csv -g games.json -o records.csv"), 0);
  ASSERT_EQ(run("fit -r records.csv -m L1+QR+Risk --seed 1 -o fit.json"), 0);
  ASSERT_EQ(run("cv -r records.csv --rounds 3 --seed 2 -o cv.csv"), 0);
  ASSERT_EQ(run("train -r records.csv -m L2+nQR+nBelief --hidden 8,8 --epochs 20 --eval-interval 5 --seed 4 "
                "--checkpoint ck.json -o metrics.json"),
            0);
  ASSERT_EQ(run("index --checkpoint ck.json -g games.json -o index.json"), 0);
  ASSERT_EQ(run("correlate -r records.csv --published -o corr.csv"), 0);
  ASSERT_EQ(run("psychometric -r records.csv --checkpoint ck.json --bins 6 -o psy.csv"), 0);

  for (const char* csv : {"classes.csv", "solve.csv", "features.csv", "trials.csv", "records.csv", "cv.csv",
                          "corr.csv", "psy.csv"}) {
    EXPECT_EQ(first_line(csv).rfind("# g2x2 ", 0), 0u) << csv;
    EXPECT_NE(first_line(csv).find(" config="), std::string::npos) << csv;
  }
  for (const char* js : {"fit.json", "metrics.json", "ck.json", "index.json"}) {
    EXPECT_EQ(first_line(js).rfind("// g2x2 ", 0), 0u) << js;
  }

  const std::string cv = read("cv.csv");
  EXPECT_NE(cv.find("\nmodel,mse,se_mse,r2,se_r2,completeness\n"), std::string::npos);
  for (const char* row : {"\nRandom,", "\nNash,", "\nL1+QR,", "\nL1+QR+Risk,"}) EXPECT_NE(cv.find(row), std::string::npos) << row;

  std::ifstream fit_in(dir_ / "fit.json");
  const auto fit = read_json(fit_in, "fit");
  EXPECT_NEAR(fit.at("params").at("eta_self").get<double>(), 0.15, 0.03);

  std::ifstream rec_in(dir_ / "records.csv");
  const Dataset records = read_records(rec_in);
  EXPECT_EQ(records.size(), 144u * 2u);
  for (const GameRecord& r : records) {
    EXPECT_EQ(r.n, 40);
    EXPECT_TRUE(r.conf_norm.has_value());
  }
}

TEST_F(CliTest, ConfigHashTracksOptions) {
  ASSERT_EQ(run("features -g x.json --seed 1 -o a.csv"), 3);
  ASSERT_EQ(run("generate --quotas 1,1,1 --per-type -o g.json"), 0);
  ASSERT_EQ(run("features -g g.json -o a.csv"), 0);
  ASSERT_EQ(run("features -g g.json -o b.csv"), 0);
  ASSERT_EQ(run("features -g g.json --seed 9 -o c.csv"), 0);
  EXPECT_EQ(first_line("a.csv"), first_line("b.csv"));
  EXPECT_NE(first_line("a.csv"), first_line("c.csv"));
}

}  // namespace
}  // namespace g2x2
