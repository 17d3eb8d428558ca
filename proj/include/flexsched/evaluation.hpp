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

// Plan-versus-measurement metrics and the constant-power cost baseline.

#ifndef FLEXSCHED_EVALUATION_HPP_
#define FLEXSCHED_EVALUATION_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexsched/model.hpp"
#include "flexsched/schedule.hpp"

namespace flexsched {

struct MeasurementSeries {
  std::string variable;  // a Schedule series label, e.g. "p_el[decanter1]"
  std::vector<TimedValue> samples;
  std::string unit;

  friend bool operator==(const MeasurementSeries&, const MeasurementSeries&) = default;
};

// 100 * RMSE / (max(plan) - min(plan)). Throws MetricError for a flat plan,
// ContractError for unequal or zero lengths.
double Nrmse(std::span<const double> plan, std::span<const double> measured);

struct DeviationTrajectory {
  // Percent per step; NaN where the plan integral is 0 but the measured one
  // is not.
  std::vector<double> deviation;
  std::optional<double> terminal;  // nullopt if the last entry is NaN
};

// Cumulative left-rectangle integrals: dev[t] = 100 * (M_t - P_t) / P_t with
// M_t, P_t the sums over steps 0..t. Both zero gives 0.
DeviationTrajectory StrategyEvaluation(std::span<const double> plan,
                                       std::span<const double> measured);

struct BaselineComparison {
  double baseline_power_kw = 0.0;
  double cost_baseline = 0.0;  // EUR
  double cost_flexible = 0.0;  // EUR
  double savings_percent = 0.0;
  bool savings_defined = true;  // false when the baseline cost is 0
};

BaselineComparison StaticBaseline(const Schedule& schedule,
                                  std::span<const double> prices);

// Expected unit of a schedule series label ("kW", "m3/h", "kg/h", "m3", "kg",
// "1" for operating points); empty if the label is unknown.
std::string SeriesUnit(const Schedule& schedule, const std::string& label);

// Value in force at each step start: the last sample at or before it, or the
// first sample for steps before any sample. Throws MetricError if empty.
std::vector<double> AlignLocf(const MeasurementSeries& series,
                              const Horizon& horizon);

// Fewer samples than half the plan steps.
bool IsSparse(const MeasurementSeries& series, const Horizon& horizon);

struct PointComparison {
  Timestamp time;
  int step = 0;
  double planned = 0.0;
  double measured = 0.0;
  double difference = 0.0;  // measured - planned
};

struct VariableEvaluation {
  std::string variable;
  std::string unit;
  bool sparse = false;
  std::optional<double> nrmse;
  std::vector<double> measured;  // aligned per step; empty when sparse
  std::vector<double> deviation;
  std::optional<double> terminal_deviation;
  std::vector<PointComparison> points;  // sparse series only
};

struct EvaluationReport {
  std::vector<VariableEvaluation> variables;
  BaselineComparison baseline;
  std::vector<std::string> warnings;
};

// Unknown labels, unit mismatches and undefined metrics become warnings.
EvaluationReport Evaluate(const Schedule& schedule,
                          const std::vector<MeasurementSeries>& measurements);

}  // namespace flexsched

#endif  // FLEXSCHED_EVALUATION_HPP_
