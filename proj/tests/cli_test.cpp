// Copyright 2026 The flexsched Authors
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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flexsched/io.hpp"
#include "flexsched/mps.hpp"
#include "flexsched/solver.hpp"

namespace flexsched {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("flexsched-cli-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Exit status of the CLI; stderr goes to err.txt in the scratch directory.
  int Run(const std::string& args) {
    const std::string cmd = std::string("\"") + FLEXSCHED_CLI + "\" " + args + " >" +
                            (dir_ / "out.txt").string() + " 2>" +
                            (dir_ / "err.txt").string();
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }
  std::string Stderr() const { return ReadFile(dir_ / "err.txt"); }
  std::string Stdout() const { return ReadFile(dir_ / "out.txt"); }

  std::string Config() const { return (testing::SourceDir() / "config" / "default_plant.json").string(); }
  std::string Prices() const {
    return (testing::SourceDir() / "fixtures" / "synthetic_trial_prices.csv").string();
  }
  std::string Solve(const std::string& out, const std::string& extra = "") {
    return "solve --config " + Config() + " --prices " + Prices() + " --out " +
           (dir_ / out).string() + " " + extra;
  }

  fs::path dir_;
};

TEST_F(Cli, SolvesTheDefaultPlant) {
  ASSERT_EQ(Run(Solve("a", "--export-mps")), 0) << Stderr();
  for (const char* f : {"schedule.json", "schedule.csv", "recommendations.json",
                        "solve.json", "instance.mps"}) {
    EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  }
  const Schedule s = ParseSchedule(ReadFile(dir_ / "a" / "schedule.json"));
  EXPECT_EQ(s.horizon.steps, 80);
  const Json meta = Json::parse(ReadFile(dir_ / "a" / "solve.json"));
  EXPECT_EQ(meta["status"], "optimal-within-gap");
  EXPECT_EQ(meta["binaries"], 6 * 80);
  EXPECT_NE(Stdout().find("optimal-within-gap"), std::string::npos);
  EXPECT_EQ(ReadFile(dir_ / "a" / "schedule.csv").substr(0, 9), "timestamp");

  // The exported model solves to the same cost.
  const MilpSolution again =
      SolveMilp(ParseMps(ReadFile(dir_ / "a" / "instance.mps")), {.gap = 1e-3});
  ASSERT_TRUE(again.HasIncumbent());
  EXPECT_NEAR(again.objective, s.total_cost, 1e-3 * std::abs(s.total_cost) + 1e-6);
}

TEST_F(Cli, ByteIdenticalAcrossRuns) {
  ASSERT_EQ(Run(Solve("a", "--export-mps --steps 40")), 0) << Stderr();
  ASSERT_EQ(Run(Solve("b", "--export-mps --steps 40")), 0) << Stderr();
  for (const char* f : {"schedule.json", "schedule.csv", "recommendations.json",
                        "instance.mps"}) {
    EXPECT_EQ(ReadFile(dir_ / "a" / f), ReadFile(dir_ / "b" / f)) << f;
  }
}

TEST_F(Cli, InfeasibleExitsTwoWithDiagnostics) {
  Json doc = Json::parse(ReadFile(Config()));
  doc["storages"][0]["terminal_target"]["value"] = 100;
  WriteFile(dir_ / "plant.json", doc.dump(2));
  const std::string cmd = "solve --config " + (dir_ / "plant.json").string() + " --prices " +
                          Prices() + " --out " + (dir_ / "x").string() + " --steps 10";
  EXPECT_EQ(Run(cmd), 2);
  EXPECT_NE(Stderr().find("infeasible"), std::string::npos);
  EXPECT_NE(Stderr().find("sludge_pocket"), std::string::npos) << Stderr();
  EXPECT_FALSE(fs::exists(dir_ / "x" / "schedule.json"));
}

TEST_F(Cli, NodeLimitExitsThree) {
  EXPECT_EQ(Run(Solve("n", "--node-limit 1 --gap 1e-9")), 3) << Stderr();
  EXPECT_NE(Stderr().find("gap not reached"), std::string::npos);
  const Json meta = Json::parse(ReadFile(dir_ / "n" / "solve.json"));
  EXPECT_EQ(meta["status"], "gap-not-reached");
}

TEST_F(Cli, BadInputExitsOne) {
  EXPECT_EQ(Run("solve --config /nonexistent.json --prices " + Prices() + " --out " +
                (dir_ / "z").string()),
            1);
  WriteFile(dir_ / "bad.csv", "timestamp,price_eur_mwh\n2024-03-12T11:30:00+01:00,x\n");
  EXPECT_EQ(Run("solve --config " + Config() + " --prices " + (dir_ / "bad.csv").string() +
                " --out " + (dir_ / "z").string()),
            1);
  EXPECT_NE(Stderr().find("line 2"), std::string::npos) << Stderr();
  EXPECT_EQ(Run(Solve("z", "--gap 0")), 1);
  EXPECT_EQ(Run(Solve("z", "--steps 2000")), 1);
  EXPECT_EQ(Run("solve --config " + Config()), 1);
  EXPECT_EQ(Run("frobnicate"), 1);
  EXPECT_EQ(Run("--help"), 0);
}

TEST_F(Cli, EvaluateWritesReportAndPlot) {
  ASSERT_EQ(Run(Solve("a", "--steps 40")), 0) << Stderr();
  const Schedule s = ParseSchedule(ReadFile(dir_ / "a" / "schedule.json"));
  std::string csv = "timestamp,variable,value,unit\n";
  for (int t = 0; t < s.horizon.steps; ++t) {
    csv += FormatTimestamp(s.horizon.StepStart(t)) + ",p_system," +
           std::to_string(1.06 * s.p_system[t]) + ",kW\n";
  }
  csv += FormatTimestamp(s.horizon.StepStart(10)) + ",soc[sludge_pocket]," +
         std::to_string(s.Storage("sludge_pocket").soc[10]) + ",m3\n";
  WriteFile(dir_ / "m.csv", csv);
  ASSERT_EQ(Run("evaluate --schedule " + (dir_ / "a" / "schedule.json").string() +
                " --measurements " + (dir_ / "m.csv").string() + " --out " +
                (dir_ / "e").string()),
            0)
      << Stderr();
  const Json report = Json::parse(ReadFile(dir_ / "e" / "report.json"));
  ASSERT_EQ(report["variables"].size(), 2u);
  EXPECT_NEAR(report["variables"][0]["terminal_deviation_percent"].get<double>(), 6.0, 1e-4);
  EXPECT_TRUE(report["variables"][1]["sparse"].get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / "e" / "plot.csv"));
  EXPECT_NE(Stdout().find("savings"), std::string::npos);

  EXPECT_EQ(Run("evaluate --schedule " + (dir_ / "m.csv").string() + " --measurements " +
                (dir_ / "m.csv").string() + " --out " + (dir_ / "e").string()),
            1);
}

}  // namespace
}  // namespace flexsched
