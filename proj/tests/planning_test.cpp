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

#include <algorithm>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flexsched/errors.hpp"
#include "flexsched/planning.hpp"

namespace flexsched {
namespace {

using std::chrono::minutes;
using testing::Rng;
using testing::TinyParams;

bool HasCode(const ValidationReport& r, const std::string& code) {
  return std::any_of(r.begin(), r.end(), [&](const auto& v) { return v.code == code; });
}

Schedule Track(std::vector<std::string> states) {
  Schedule s;
  const int T = static_cast<int>(states.size());
  s.horizon = Horizon{testing::TrialStart(), minutes(3), T};
  s.resources = {{"decanter1", states, std::vector<double>(T, 0.0), {}, {}, {}}};
  s.storages = {{"sludge_pocket", StorageUnit::kCubicMetre, std::vector<double>(T, 0.0)}};
  for (int t = 0; t < T; ++t) s.storages[0].soc[t] = 300 + t;
  return s;
}

TEST(SnapshotAt, DwellCountsStepsBeforeK) {
  const Schedule s = Track({"Off", "Off", "Start", "Start", "Run", "Run", "Run"});
  const Snapshot a = SnapshotAt(s, 5);
  EXPECT_EQ(a.time, testing::TrialStart() + minutes(15));
  EXPECT_EQ(a.resources.at("decanter1").state, "Run");
  EXPECT_EQ(a.resources.at("decanter1").elapsed_dwell, minutes(3));
  EXPECT_EQ(a.socs.at("sludge_pocket"), 305);
  const Snapshot b = SnapshotAt(s, 4);
  EXPECT_EQ(b.resources.at("decanter1").elapsed_dwell, minutes(0));
}

TEST(SnapshotAt, RunReachingStepZero) {
  const Schedule s = Track({"Off", "Off", "Off", "Start"});
  EXPECT_FALSE(SnapshotAt(s, 2).resources.at("decanter1").elapsed_dwell);
  EXPECT_EQ(SnapshotAt(s, 2, {{"decanter1", minutes(30)}}).resources.at("decanter1").elapsed_dwell,
            minutes(36));
  EXPECT_THROW(SnapshotAt(s, 4), ContractError);
  EXPECT_THROW(SnapshotAt(s, -1), ContractError);
}

TEST(ValidateSnapshot, Codes) {
  const Topology topo = testing::LoadTrial(10).config.topology;
  Snapshot s{testing::TrialStart(),
             {{"decanter1", {"Start", minutes(9)}},
              {"decanter2", {"Hover", std::nullopt}},
              {"decanter3", {"Off", std::nullopt}}},
             {{"sludge_pocket", 99.0}, {"silo", 1.0}}};
  const ValidationReport r = ValidateSnapshot(topo, s);
  EXPECT_TRUE(HasCode(r, "dwell-exceeds-hold"));
  EXPECT_TRUE(HasCode(r, "unknown-state"));
  EXPECT_TRUE(HasCode(r, "unknown-resource"));
  EXPECT_TRUE(HasCode(r, "soc-out-of-bounds"));
  EXPECT_TRUE(HasCode(r, "unknown-storage"));
  s.resources = {{"decanter1", {"Run", minutes(-3)}}};
  s.socs = {{"sludge_pocket", 100.0 - 1e-9}};
  const ValidationReport n = ValidateSnapshot(topo, s);
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n[0].code, "negative-dwell");
}

TEST(ApplySnapshot, CopiesStateLevelAndDwell) {
  const Topology topo = testing::LoadTrial(10).config.topology;
  BuildOptions build;
  build.elapsed_dwell["decanter2"] = minutes(99);
  const Snapshot s{testing::TrialStart(),
                   {{"decanter1", {"Run", minutes(12)}}, {"decanter2", {"Off", std::nullopt}}},
                   {{"sludge_pocket", 410.5}}};
  const Topology applied = ApplySnapshot(topo, s, build);
  EXPECT_EQ(applied.FindResource("decanter1")->initial_state, "Run");
  EXPECT_EQ(applied.FindStorage("sludge_pocket")->soc_init, 410.5);
  EXPECT_EQ(applied.FindStorage("containers1")->soc_init, 0.0);
  EXPECT_EQ(build.elapsed_dwell.at("decanter1"), minutes(12));
  EXPECT_FALSE(build.elapsed_dwell.count("decanter2"));
  EXPECT_EQ(topo.FindResource("decanter1")->initial_state, "Off");

  const Snapshot bad{testing::TrialStart(), {}, {{"sludge_pocket", 600.0}}};
  try {
    ApplySnapshot(topo, bad, build);
    FAIL();
  } catch (const SnapshotError& e) {
    EXPECT_EQ(e.report()[0].code, "soc-out-of-bounds");
  }
}

// Cost of steps k.. of a schedule.
double TailCost(const Schedule& s, int k) {
  double c = 0;
  for (int t = k; t < s.horizon.steps; ++t) {
    c += s.p_system[t] * s.horizon.StepHours() * s.prices[t] / 1000;
  }
  return c;
}

// Re-solving from any snapshot k of an optimal plan reproduces the plan's
// cost after k: that tail is feasible for the sub-problem, and nothing
// cheaper can exist without contradicting the optimality of the whole. Step
// k itself only matches in state, since the snapshot step carries no
// balance row and its operating point is free.
TEST(RollingProperty, TinyTailIsOptimalForTheSubproblem) {
  Rng rng(4242);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    TinyParams p;
    p.steps = rng.Int(5, 10);
    p.prices.clear();
    for (int t = 0; t < p.steps; ++t) p.prices.push_back(rng.Uniform(0, 100));
    p.off_min = rng.Int(1, 3);
    p.run_min = rng.Int(1, 3);
    p.start_len = rng.Int(1, 2);
    const Topology topo = testing::TinyTopology(p);
    const Horizon h = testing::TinyHorizon(p);
    const PlanResult first = SolvePlan(topo, h, p.prices, testing::TinyForecasts(p), {},
                                       {.gap = 1e-9});
    if (!first.schedule) continue;
    const int k = rng.Int(1, p.steps - 1);
    const Snapshot snap = SnapshotAt(*first.schedule, k);
    TinyParams q = p;
    q.steps = p.steps - k;
    q.prices.assign(p.prices.begin() + k, p.prices.end());
    const Horizon tail{h.StepStart(k), h.step, q.steps};
    const PlanResult second = ReoptimizeFromSnapshot(topo, snap, tail, q.prices,
                                                     testing::TinyForecasts(q), {},
                                                     {.gap = 1e-9});
    SCOPED_TRACE(::testing::Message() << "trial " << trial << " k=" << k);
    ASSERT_TRUE(second.schedule);
    const Schedule& b = *second.schedule;
    EXPECT_NEAR(b.total_cost - TailCost(b, 0) + TailCost(b, 1),
                TailCost(*first.schedule, k + 1), 1e-6);
    EXPECT_LE(b.total_cost, TailCost(*first.schedule, k) + 1e-6);
    EXPECT_EQ(second.schedule->Resource("unit").state[0],
              first.schedule->Resource("unit").state[k]);
    EXPECT_EQ(second.schedule->Storage("pocket").soc[0],
              first.schedule->Storage("pocket").soc[k]);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(Rolling, TrialPlanSnapshotAndReplan) {
  const testing::TrialCase first = testing::LoadTrial(80);
  const PlantConfig& c = first.config;
  const PlanResult a =
      SolvePlan(c.topology, c.horizon, first.prices, first.forecasts, c.build, c.solve);
  ASSERT_TRUE(a.schedule);
  const int k = 40;
  const Snapshot snap = SnapshotAt(*a.schedule, k);
  const testing::TrialCase second = testing::LoadTrial(40, c.horizon.StepStart(k));
  const PlanResult b = ReoptimizeFromSnapshot(c.topology, snap, second.config.horizon,
                                              second.prices, second.forecasts, c.build, c.solve);
  ASSERT_TRUE(b.schedule);
  for (const StorageTrack& s : a.schedule->storages) {
    EXPECT_EQ(b.schedule->Storage(s.name).soc[0], s.soc[k]) << s.name;
  }
  for (const ResourceTrack& r : a.schedule->resources) {
    EXPECT_EQ(b.schedule->Resource(r.name).state[0], r.state[k]) << r.name;
  }
  // The first plan's tail is feasible for the re-plan.
  EXPECT_LE(b.schedule->total_cost,
            TailCost(*a.schedule, k) + c.solve.gap * std::abs(b.schedule->total_cost) + 1e-6);
}

}  // namespace
}  // namespace flexsched
