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
#include <stdexcept>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flexsched/defaults.hpp"
#include "flexsched/errors.hpp"
#include "flexsched/model.hpp"

namespace flexsched {
namespace {

using std::chrono::minutes;

bool HasCode(const ValidationReport& r, const std::string& code) {
  return std::any_of(r.begin(), r.end(), [&](const auto& v) { return v.code == code; });
}

Horizon Grid(int steps = 80) {
  return defaults::TrialHorizon(testing::TrialStart(), steps);
}

TEST(PowerMap, RunAtFullLoadAndThirtyGramsPerLitre) {
  // 22.356 + 8.464 * 1 + 0.0182 * 30 = 31.366
  const ResourceSpec d = defaults::Decanter("decanter1");
  EXPECT_NEAR(PowerAt(d, "Run", 1.0, 30.0), 31.366, 1e-9);
}

TEST(PowerMap, StartIgnoresDensity) {
  const ResourceSpec d = defaults::Decanter("decanter1");
  EXPECT_NEAR(PowerAt(d, "Start", 0.0, 30.0), 21.366, 1e-9);
  EXPECT_NEAR(PowerAt(d, "Start", 0.0, 0.0), 21.366, 1e-9);
  EXPECT_NEAR(PowerAt(d, "Start", 0.0, 55.0), 21.366, 1e-9);
}

TEST(PowerMap, OffDrawsNothing) {
  const ResourceSpec d = defaults::Decanter("decanter1");
  EXPECT_EQ(PowerAt(d, "Off", 0.0, 30.0), 0.0);
}

TEST(PowerMap, RejectsOperatingPointOutsideStateBounds) {
  const ResourceSpec d = defaults::Decanter("decanter1");
  EXPECT_THROW(PowerAt(d, "Off", 0.5, 30.0), DomainError);
  EXPECT_THROW(PowerAt(d, "Run", 1.5, 30.0), DomainError);
  EXPECT_THROW(PowerAt(d, "Idle", 0.0, 30.0), DomainError);
}

TEST(PowerMap, RunIsAffineInOperatingPoint) {
  const ResourceSpec d = defaults::Decanter("decanter1");
  testing::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double op = rng.Uniform(0, 1), rho = rng.Uniform(0, 80);
    const double expected = 22.356 + 8.464 * op + 0.0182 * rho;
    EXPECT_NEAR(PowerAt(d, "Run", op, rho), expected, 1e-9);
  }
}

TEST(Flows, ThinAndDrySludge) {
  const ResourceSpec d = defaults::Decanter("decanter1");
  EXPECT_DOUBLE_EQ(ThinSludgeRate(d, 1.0), 12.0);
  EXPECT_DOUBLE_EQ(ThinSludgeRate(d, 0.25), 3.0);
  // 12 m3/h at 30 g/l = 360 kg/h
  EXPECT_DOUBLE_EQ(DrySludgeRate(12.0, 30.0), 360.0);
  EXPECT_THROW(ThinSludgeRate(d, -0.1), DomainError);
  EXPECT_THROW(DrySludgeRate(-1.0, 30.0), DomainError);
}

TEST(Flows, StorageStepIsLossless) {
  // 3 minutes of 10 m3/h in and 12 m3/h out: -0.1 m3.
  EXPECT_NEAR(StorageStep(350.0, 10.0, 12.0, 0.05), 349.9, 1e-12);
  testing::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double soc = rng.Uniform(0, 500), in = rng.Uniform(0, 50), h = rng.Uniform(0.01, 2);
    EXPECT_NEAR(StorageStep(StorageStep(soc, in, 0, h), 0, in, h), soc, 1e-9);
  }
}

TEST(Defaults, DecanterMatchesTheMeasuredParameters) {
  const ResourceSpec d = defaults::Decanter("d");
  EXPECT_EQ(d.coeff_a, 22.356);
  EXPECT_EQ(d.coeff_b, 8.464);
  EXPECT_EQ(d.coeff_c, 0.0182);
  EXPECT_EQ(d.coeff_d, 21.366);
  EXPECT_EQ(d.coeff_e, 12.0);
  EXPECT_EQ(d.State("Off").hold_min, minutes(60));
  EXPECT_FALSE(d.State("Off").hold_max);
  EXPECT_EQ(d.State("Start").hold_min, minutes(6));
  EXPECT_EQ(d.State("Start").hold_max, minutes(6));
  EXPECT_EQ(d.State("Run").hold_min, minutes(60));
  EXPECT_EQ(d.State("Off").successors, std::vector<std::string>{"Start"});
  EXPECT_EQ(d.State("Start").successors, std::vector<std::string>{"Run"});
  EXPECT_EQ(d.State("Run").successors, std::vector<std::string>{"Off"});
}

TEST(Defaults, PlantValidatesCleanly) {
  EXPECT_TRUE(ValidateTopology(defaults::DecanterPlant(), Grid()).empty());
}

TEST(Validation, HoldNotMultipleOfStep) {
  Topology t = defaults::DecanterPlant();
  t.resources[0].states[1].hold_min = minutes(7);
  t.resources[0].states[1].hold_max = minutes(7);
  const ValidationReport r = ValidateTopology(t, Grid());
  EXPECT_TRUE(HasCode(r, "hold-not-multiple"));
  EXPECT_TRUE(HasStructuralViolations(r));
}

TEST(Validation, UnknownSuccessorAndInitialState) {
  Topology t = defaults::DecanterPlant();
  t.resources[0].states[0].successors = {"Warmup"};
  t.resources[1].initial_state = "Idle";
  const ValidationReport r = ValidateTopology(t, Grid());
  EXPECT_TRUE(HasCode(r, "unknown-successor"));
  EXPECT_TRUE(HasCode(r, "unknown-initial-state"));
}

TEST(Validation, MinAboveMaxHold) {
  Topology t = defaults::DecanterPlant();
  t.resources[0].states[2].hold_max = minutes(30);
  EXPECT_TRUE(HasCode(ValidateTopology(t, Grid()), "invalid-hold-order"));
}

TEST(Validation, StorageIssues) {
  Topology t = defaults::DecanterPlant();
  StorageSpec* pocket = t.FindStorage("sludge_pocket");
  ASSERT_NE(pocket, nullptr);
  pocket->soc_init = 600;
  pocket->terminal_target->value = 50;
  const ValidationReport r = ValidateTopology(t, Grid());
  EXPECT_TRUE(HasCode(r, "soc-init-out-of-bounds"));
  EXPECT_TRUE(HasCode(r, "terminal-target-out-of-bounds"));
  EXPECT_FALSE(HasStructuralViolations(r));
}

TEST(Validation, LinkProblems) {
  Topology t = defaults::DecanterPlant();
  t.links[0].from = "nowhere";
  EXPECT_TRUE(HasCode(ValidateTopology(t, Grid()), "unresolved-link"));

  Topology u = defaults::DecanterPlant();
  for (FlowLink& l : u.links) {
    if (l.kind == StreamKind::kDrySludge) l.to = "sludge_pocket";
  }
  EXPECT_TRUE(HasCode(ValidateTopology(u, Grid()), "link-unit-mismatch"));
}

TEST(Validation, DuplicateNamesAndExclusionMembers) {
  Topology t = defaults::DecanterPlant();
  t.resources[1].name = t.resources[0].name;
  EXPECT_TRUE(HasCode(ValidateTopology(t, Grid()), "duplicate-name"));

  Topology u = defaults::DecanterPlant();
  u.mutual_exclusions.push_back({"Start", {"decanter1", "decanter9"}});
  EXPECT_TRUE(HasCode(ValidateTopology(u, Grid()), "unknown-exclusion-member"));
}

TEST(Validation, HorizonMustBePositive) {
  EXPECT_TRUE(HasCode(ValidateTopology(defaults::DecanterPlant(), Grid(0)), "invalid-horizon"));
}

TEST(Resample, QuarterHourPricesOntoThreeMinuteGrid) {
  const Timestamp t0 = testing::TrialStart();
  PriceSeries p{{{t0, 10.0}, {t0 + minutes(15), 20.0}, {t0 + minutes(30), 30.0}}, minutes(15)};
  const std::vector<double> v = Resample(p, Grid(15));
  ASSERT_EQ(v.size(), 15u);
  for (int t = 0; t < 15; ++t) EXPECT_EQ(v[t], 10.0 * (1 + t / 5)) << t;
}

TEST(Resample, UncoveredStepThrowsWithItsIndex) {
  const Timestamp t0 = testing::TrialStart();
  PriceSeries p{{{t0, 10.0}}, minutes(15)};
  try {
    Resample(p, Grid(6));
    FAIL();
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.timestep(), 5);
  }
  PriceSeries late{{{t0 + minutes(3), 1.0}}, minutes(60)};
  try {
    Resample(late, Grid(2));
    FAIL();
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.timestep(), 0);
  }
}

TEST(Resample, ForecastWithoutResolutionHoldsForever) {
  const std::vector<double> v = Resample(ConstantForecast(30.0, "g/l"), Grid(500));
  EXPECT_EQ(v.size(), 500u);
  EXPECT_TRUE(std::all_of(v.begin(), v.end(), [](double x) { return x == 30.0; }));
  EXPECT_THROW(Resample(ConstantForecast(-1.0, "g/l"), Grid(2)), DomainError);
}

TEST(Resample, PropertyEveryStepTakesTheContainingInterval) {
  testing::Rng rng(42);
  const Timestamp t0 = testing::TrialStart();
  for (int trial = 0; trial < 50; ++trial) {
    const int res = 15 * rng.Int(1, 4);
    PriceSeries p{{}, minutes(res)};
    const Timestamp first = t0 - minutes(res * rng.Int(0, 3));
    const int step = 3 * rng.Int(1, 5);
    const Horizon h{t0, minutes(step), rng.Int(1, 60)};
    const int n = (step * h.steps + 3 * res) / res + 1;
    for (int i = 0; i < n; ++i) p.samples.push_back({first + minutes(res * i), rng.Uniform(-50, 300)});
    const std::vector<double> v = Resample(p, h);
    for (int t = 0; t < h.steps; ++t) {
      const long offset = (h.StepStart(t) - first).count() / 60;
      EXPECT_EQ(v[t], p.samples[offset / res].value);
    }
  }
}

TEST(Time, ParseAndFormatKeepTheOffset) {
  const Timestamp t = ParseTimestamp("2024-03-12T11:30:00+01:00");
  EXPECT_EQ(FormatTimestamp(t), "2024-03-12T11:30:00+01:00");
  EXPECT_EQ(t, ParseTimestamp("2024-03-12T10:30:00Z"));
  EXPECT_EQ(FormatTimestamp(ParseTimestamp("2024-03-12 10:30")), "2024-03-12T10:30:00+00:00");
  EXPECT_THROW(ParseTimestamp("12.03.2024 11:30"), std::invalid_argument);
  EXPECT_THROW(ParseTimestamp("2024-02-30T00:00:00Z"), std::invalid_argument);
}

}  // namespace
}  // namespace flexsched
