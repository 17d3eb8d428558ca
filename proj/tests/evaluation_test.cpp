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

#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flexsched/errors.hpp"
#include "flexsched/evaluation.hpp"

namespace flexsched {
namespace {

using std::chrono::minutes;
using testing::Rng;

TEST(Nrmse, IdentityIsZero) {
  const std::vector<double> p{1, 5, 2, 8, 3};
  EXPECT_EQ(Nrmse(p, p), 0.0);
}

TEST(Nrmse, HandComputed) {
  // Errors (1, 0, -1): RMSE sqrt(2/3), range 4.
  EXPECT_NEAR(Nrmse(std::vector<double>{0, 2, 4}, std::vector<double>{1, 2, 3}),
              100 * std::sqrt(2.0 / 3.0) / 4, 1e-12);
}

TEST(Nrmse, Errors) {
  const std::vector<double> flat{3, 3, 3}, other{1, 2, 3};
  EXPECT_THROW(Nrmse(flat, other), MetricError);
  EXPECT_THROW(Nrmse(other, std::vector<double>{1, 2}), ContractError);
  EXPECT_THROW(Nrmse(std::vector<double>{}, std::vector<double>{}), ContractError);
}

TEST(NrmseProperty, InvariantUnderCommonShiftAndScale) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.Int(2, 100);
    std::vector<double> p(n), m(n);
    for (int i = 0; i < n; ++i) {
      p[i] = rng.Uniform(-50, 50);
      m[i] = rng.Uniform(-50, 50);
    }
    const double base = Nrmse(p, m);
    EXPECT_GE(base, 0.0);
    const double k = rng.Uniform(0.1, 10), c = rng.Uniform(-100, 100);
    std::vector<double> ps(n), ms(n);
    for (int i = 0; i < n; ++i) {
      ps[i] = k * p[i] + c;
      ms[i] = k * m[i] + c;
    }
    EXPECT_NEAR(Nrmse(ps, ms), base, 1e-9 * std::max(1.0, base));
  }
}

TEST(StrategyEvaluation, SixPercentAbovePlan) {
  const std::vector<double> plan{10, 12, 0, 7.5, 3};
  std::vector<double> m;
  for (double v : plan) m.push_back(1.06 * v);
  const DeviationTrajectory d = StrategyEvaluation(plan, m);
  ASSERT_TRUE(d.terminal);
  EXPECT_NEAR(*d.terminal, 6.0, 1e-9);
  for (double v : d.deviation) EXPECT_NEAR(v, 6.0, 1e-9);
}

TEST(StrategyEvaluation, HandComputedCumulative) {
  // Integrals P = 1, 3, 6 and M = 2, 4, 6.
  const DeviationTrajectory d =
      StrategyEvaluation(std::vector<double>{1, 2, 3}, std::vector<double>{2, 2, 2});
  ASSERT_EQ(d.deviation.size(), 3u);
  EXPECT_NEAR(d.deviation[0], 100.0, 1e-12);
  EXPECT_NEAR(d.deviation[1], 100.0 / 3.0, 1e-12);
  EXPECT_NEAR(d.deviation[2], 0.0, 1e-12);
}

TEST(StrategyEvaluation, ZeroPlanIntegral) {
  const DeviationTrajectory both =
      StrategyEvaluation(std::vector<double>{0, 0}, std::vector<double>{0, 0});
  EXPECT_EQ(both.deviation, (std::vector<double>{0, 0}));
  EXPECT_EQ(both.terminal, 0.0);
  const DeviationTrajectory d =
      StrategyEvaluation(std::vector<double>{0, 0, 4}, std::vector<double>{1, 0, 3});
  EXPECT_TRUE(std::isnan(d.deviation[0]));
  EXPECT_TRUE(std::isnan(d.deviation[1]));
  EXPECT_NEAR(*d.terminal, 0.0, 1e-12);
  const DeviationTrajectory open =
      StrategyEvaluation(std::vector<double>{1, -1}, std::vector<double>{1, 0});
  EXPECT_FALSE(open.terminal);
}

TEST(StrategyEvaluationProperty, ProportionalMeasurementGivesConstantDeviation) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.Int(1, 200);
    std::vector<double> p(n), m(n);
    const double k = rng.Uniform(0.5, 1.5);
    for (int i = 0; i < n; ++i) {
      p[i] = rng.Uniform(0.1, 100);
      m[i] = k * p[i];
    }
    const DeviationTrajectory d = StrategyEvaluation(p, m);
    for (double v : d.deviation) EXPECT_NEAR(v, 100 * (k - 1), 1e-9);
  }
}

TEST(StrategyEvaluationProperty, BalancedNoiseEndsAtZero) {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 * rng.Int(1, 50);
    std::vector<double> p(n), m(n);
    for (int i = 0; i < n; i += 2) {
      p[i] = rng.Uniform(1, 50);
      p[i + 1] = rng.Uniform(1, 50);
      const double e = rng.Uniform(-1, 1);
      m[i] = p[i] + e;
      m[i + 1] = p[i + 1] - e;
    }
    EXPECT_NEAR(*StrategyEvaluation(p, m).terminal, 0.0, 1e-9);
  }
}

Schedule TwoLevel(int steps, std::vector<double> p_system, std::vector<double> prices) {
  Schedule s;
  s.horizon = Horizon{testing::TrialStart(), minutes(3), steps};
  s.p_system = std::move(p_system);
  s.prices = std::move(prices);
  return s;
}

TEST(Baseline, LoadShiftedIntoCheapHalfSaves) {
  // 20 steps at 10 EUR/MWh then 20 at 90; 60 kW in the cheap half only.
  std::vector<double> price(40, 10.0), p(40, 0.0);
  for (int t = 20; t < 40; ++t) price[t] = 90.0;
  for (int t = 0; t < 20; ++t) p[t] = 60.0;
  const BaselineComparison b = StaticBaseline(TwoLevel(40, p, price), price);
  EXPECT_NEAR(b.baseline_power_kw, 30.0, 1e-12);
  EXPECT_NEAR(b.cost_flexible, 20 * 60 * 0.05 * 10 / 1000.0, 1e-12);
  EXPECT_NEAR(b.cost_baseline, 30 * 0.05 * (20 * 10 + 20 * 90) / 1000.0, 1e-12);
  EXPECT_NEAR(b.savings_percent, 100 * (1 - 0.6 / 3.0), 1e-9);
  EXPECT_TRUE(b.savings_defined);
}

TEST(BaselineProperty, ConstantPriceGivesZeroSavings) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.Int(1, 300);
    std::vector<double> p(n);
    for (double& v : p) v = rng.Uniform(0, 70);
    const std::vector<double> price(n, rng.Uniform(1, 200));
    const BaselineComparison b = StaticBaseline(TwoLevel(n, p, price), price);
    EXPECT_NEAR(b.savings_percent, 0.0, 1e-6);
  }
}

TEST(Baseline, ZeroBaselineCost) {
  const std::vector<double> zero(4, 0.0), price(4, 50.0);
  const BaselineComparison b = StaticBaseline(TwoLevel(4, zero, price), price);
  EXPECT_FALSE(b.savings_defined);
  EXPECT_EQ(b.savings_percent, 0.0);
}

Schedule Small() {
  Schedule s;
  s.horizon = Horizon{testing::TrialStart(), minutes(3), 10};
  s.resources = {{"d", std::vector<std::string>(10, "Run"), std::vector<double>(10, 0.5),
                  std::vector<double>(10, 30.0), std::vector<double>(10, 6.0),
                  std::vector<double>(10, 180.0)}};
  s.storages = {{"pocket", StorageUnit::kCubicMetre, std::vector<double>(10, 350.0)}};
  for (int t = 0; t < 10; ++t) s.storages[0].soc[t] += t;
  s.p_system = s.resources[0].p_el;
  s.prices.assign(10, 40.0);
  return s;
}

TEST(Align, LastObservationCarriedForwardAndBackFilled) {
  const Schedule s = Small();
  const Timestamp t0 = s.horizon.start;
  MeasurementSeries m{"soc[pocket]", {{t0 + minutes(4), 1}, {t0 + minutes(9), 2}, {t0 + minutes(20), 3}}, "m3"};
  EXPECT_EQ(AlignLocf(m, s.horizon), (std::vector<double>{1, 1, 1, 2, 2, 2, 2, 3, 3, 3}));
  m.samples.clear();
  EXPECT_THROW(AlignLocf(m, s.horizon), MetricError);
}

TEST(Align, SparseThreshold) {
  const Schedule s = Small();
  MeasurementSeries m{"p_system", {}, "kW"};
  for (int i = 0; i < 4; ++i) m.samples.push_back({s.horizon.StepStart(i), 1});
  EXPECT_TRUE(IsSparse(m, s.horizon));
  m.samples.push_back({s.horizon.StepStart(4), 1});
  EXPECT_FALSE(IsSparse(m, s.horizon));
}

TEST(Evaluate, DenseSparseUnknownAndMismatched) {
  const Schedule s = Small();
  std::vector<MeasurementSeries> ms;
  MeasurementSeries dense{"p_el[d]", {}, "kW"};
  for (int t = 0; t < 10; ++t) dense.samples.push_back({s.horizon.StepStart(t), 31.8});
  ms.push_back(dense);
  ms.push_back({"soc[pocket]", {{s.horizon.StepStart(2) + minutes(1), 351.5}}, "m3"});
  ms.push_back({"p_el[other]", {{s.horizon.start, 1}}, "kW"});
  ms.push_back({"p_ds[d]", {{s.horizon.start, 1}}, "kg/h"});
  const EvaluationReport r = Evaluate(s, ms);
  ASSERT_EQ(r.variables.size(), 2u);
  const VariableEvaluation& a = r.variables[0];
  EXPECT_FALSE(a.sparse);
  EXPECT_FALSE(a.nrmse);  // the flat plan has no range
  EXPECT_NEAR(*a.terminal_deviation, 6.0, 1e-9);
  const VariableEvaluation& b = r.variables[1];
  EXPECT_TRUE(b.sparse);
  ASSERT_EQ(b.points.size(), 1u);
  EXPECT_EQ(b.points[0].step, 2);
  EXPECT_NEAR(b.points[0].difference, -0.5, 1e-12);
  EXPECT_EQ(r.warnings.size(), 3u);  // flat NRMSE, unknown label, unit mismatch
  EXPECT_EQ(SeriesUnit(s, "op[d]"), "1");
  EXPECT_EQ(SeriesUnit(s, "p_ts[d]"), "kg/h");
  EXPECT_EQ(SeriesUnit(s, "soc[pocket]"), "m3");
  EXPECT_EQ(SeriesUnit(s, "soc[x]"), "");
}

}  // namespace
}  // namespace flexsched
