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

#include "flexsched/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "flexsched/errors.hpp"

namespace flexsched {
namespace {

void CheckLengths(std::span<const double> plan, std::span<const double> measured) {
  if (plan.size() != measured.size()) {
    throw ContractError(fmt::format("plan has {} steps, measurement {}",
                                    plan.size(), measured.size()));
  }
  if (plan.empty()) throw ContractError("empty series");
}

}  // namespace

double Nrmse(std::span<const double> plan, std::span<const double> measured) {
  CheckLengths(plan, measured);
  const auto [lo, hi] = std::minmax_element(plan.begin(), plan.end());
  const double range = *hi - *lo;
  if (range == 0.0) throw MetricError("plan series has zero range");
  double sq = 0.0;
  for (std::size_t t = 0; t < plan.size(); ++t) {
    const double d = measured[t] - plan[t];
    sq += d * d;
  }
  return 100.0 * std::sqrt(sq / static_cast<double>(plan.size())) / range;
}

DeviationTrajectory StrategyEvaluation(std::span<const double> plan,
                                       std::span<const double> measured) {
  CheckLengths(plan, measured);
  double scale = 0.0;
  for (std::size_t t = 0; t < plan.size(); ++t) {
    scale = std::max({scale, std::abs(plan[t]), std::abs(measured[t])});
  }
  const double zero = 1e-12 * std::max(scale, 1.0);

  DeviationTrajectory out;
  double p = 0.0;
  double m = 0.0;
  for (std::size_t t = 0; t < plan.size(); ++t) {
    p += plan[t];
    m += measured[t];
    const double tol = zero * static_cast<double>(t + 1);
    if (std::abs(p) <= tol) {
      out.deviation.push_back(std::abs(m) <= tol
                                  ? 0.0
                                  : std::numeric_limits<double>::quiet_NaN());
    } else {
      out.deviation.push_back(100.0 * (m - p) / p);
    }
  }
  if (!std::isnan(out.deviation.back())) out.terminal = out.deviation.back();
  return out;
}

BaselineComparison StaticBaseline(const Schedule& schedule,
                                  std::span<const double> prices) {
  const std::vector<double>& p = schedule.p_system;
  if (p.empty()) throw ContractError("schedule has no steps");
  const double hours = schedule.horizon.StepHours();
  BaselineComparison out;
  out.baseline_power_kw =
      std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
  const std::vector<double> flat(p.size(), out.baseline_power_kw);
  out.cost_baseline = ScheduleCost(flat, prices, hours);
  out.cost_flexible = ScheduleCost(p, prices, hours);
  if (out.cost_baseline == 0.0) {
    out.savings_defined = false;
    out.savings_percent = 0.0;
  } else {
    out.savings_percent = 100.0 * (1.0 - out.cost_flexible / out.cost_baseline);
  }
  return out;
}

std::string SeriesUnit(const Schedule& schedule, const std::string& label) {
  if (schedule.Series(label) == nullptr) return "";
  if (label == "p_system" || label.starts_with("p_el[")) return "kW";
  if (label.starts_with("p_ds[")) return "m3/h";
  if (label.starts_with("p_ts[")) return "kg/h";
  if (label.starts_with("op[")) return "1";
  const std::string name = label.substr(4, label.size() - 5);
  return schedule.Storage(name).unit == StorageUnit::kKilogram ? "kg" : "m3";
}

std::vector<double> AlignLocf(const MeasurementSeries& series,
                              const Horizon& horizon) {
  if (series.samples.empty()) {
    throw MetricError(fmt::format("measurement '{}' has no samples", series.variable));
  }
  std::vector<double> out;
  out.reserve(horizon.steps);
  std::size_t next = 0;
  double held = series.samples.front().value;
  for (int t = 0; t < horizon.steps; ++t) {
    const Timestamp at = horizon.StepStart(t);
    while (next < series.samples.size() && series.samples[next].time <= at) {
      held = series.samples[next].value;
      ++next;
    }
    out.push_back(held);
  }
  return out;
}

bool IsSparse(const MeasurementSeries& series, const Horizon& horizon) {
  return 2 * series.samples.size() < static_cast<std::size_t>(horizon.steps);
}

EvaluationReport Evaluate(const Schedule& schedule,
                          const std::vector<MeasurementSeries>& measurements) {
  EvaluationReport report;
  report.baseline = StaticBaseline(schedule, schedule.prices);
  if (!report.baseline.savings_defined) {
    report.warnings.push_back("baseline cost is zero; savings reported as 0");
  }
  const Horizon& h = schedule.horizon;
  for (const MeasurementSeries& m : measurements) {
    const std::vector<double>* plan = schedule.Series(m.variable);
    if (plan == nullptr) {
      report.warnings.push_back(
          fmt::format("measurement '{}' matches no schedule series; skipped", m.variable));
      continue;
    }
    const std::string unit = SeriesUnit(schedule, m.variable);
    if (m.unit != unit) {
      report.warnings.push_back(fmt::format(
          "measurement '{}' is in '{}', the plan uses '{}'; skipped", m.variable,
          m.unit, unit));
      continue;
    }
    if (m.samples.empty()) {
      report.warnings.push_back(fmt::format("measurement '{}' is empty; skipped", m.variable));
      continue;
    }
    VariableEvaluation v;
    v.variable = m.variable;
    v.unit = unit;
    v.sparse = IsSparse(m, h);
    if (v.sparse) {
      for (const TimedValue& s : m.samples) {
        const auto offset = s.time - h.start;
        const auto step = std::chrono::duration_cast<std::chrono::seconds>(h.step);
        if (offset.count() < 0 || s.time >= h.End()) {
          report.warnings.push_back(fmt::format("'{}' sample at {} lies outside the plan",
                                                m.variable, FormatTimestamp(s.time)));
          continue;
        }
        PointComparison pc;
        pc.time = s.time;
        pc.step = static_cast<int>(offset / step);
        pc.planned = (*plan)[pc.step];
        pc.measured = s.value;
        pc.difference = pc.measured - pc.planned;
        v.points.push_back(pc);
      }
      report.variables.push_back(std::move(v));
      continue;
    }
    v.measured = AlignLocf(m, h);
    try {
      v.nrmse = Nrmse(*plan, v.measured);
    } catch (const MetricError& e) {
      report.warnings.push_back(fmt::format("'{}': NRMSE undefined ({})", m.variable, e.what()));
    }
    DeviationTrajectory d = StrategyEvaluation(*plan, v.measured);
    v.deviation = std::move(d.deviation);
    v.terminal_deviation = d.terminal;
    if (!v.terminal_deviation) {
      report.warnings.push_back(fmt::format(
          "'{}': terminal deviation undefined (planned integral is zero)", m.variable));
    }
    report.variables.push_back(std::move(v));
  }
  return report;
}

}  // namespace flexsched
