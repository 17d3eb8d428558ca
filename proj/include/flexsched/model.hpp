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

// Plant domain model: resources with a discrete state machine, mass storages,
// the links between them, exogenous series, and the algebraic maps that tie
// operating point, power and throughput together.
//
// Units are fixed throughout: power kW, price EUR/MWh, volume m3, mass kg,
// density g/l (== kg/m3), durations in minutes unless stated otherwise.

#ifndef FLEXSCHED_MODEL_HPP_
#define FLEXSCHED_MODEL_HPP_

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flexsched/time.hpp"

namespace flexsched {

using Minutes = std::chrono::minutes;

// Equidistant planning grid. Step t covers [start + t*step, start + (t+1)*step).
struct Horizon {
  Timestamp start;
  Minutes step{3};
  int steps = 1;

  Timestamp StepStart(int t) const { return start + step * t; }
  Timestamp End() const { return StepStart(steps); }
  double StepHours() const { return step.count() / 60.0; }
};

// Which terms of the power map a state activates.
enum class StateRole { kIdle, kStart, kRun };

struct StateSpec {
  std::string name;
  StateRole role = StateRole::kIdle;
  double op_min = 0.0;
  double op_max = 0.0;
  Minutes hold_min{0};
  std::optional<Minutes> hold_max;  // nullopt == unbounded
  std::vector<std::string> successors;
};

struct ResourceSpec {
  std::string name;
  std::vector<StateSpec> states;
  std::string initial_state;
  double coeff_a = 0.0;  // kW, active in run states
  double coeff_b = 0.0;  // kW per unit operating point
  double coeff_c = 0.0;  // kW*l/g, times density, active in run states
  double coeff_d = 0.0;  // kW, active in start states
  double coeff_e = 0.0;  // m3/h thin sludge per unit operating point
  double op_min = 0.0;
  double op_max = 1.0;
  std::string density_forecast = "density";

  // Index into `states`, or -1.
  int StateIndex(const std::string& state) const;
  const StateSpec& State(const std::string& state) const;  // throws DomainError
};

enum class StorageUnit { kCubicMetre, kKilogram };

struct TerminalTarget {
  double value = 0.0;
  double tolerance = 0.0;
};

struct StorageSpec {
  std::string name;
  StorageUnit unit = StorageUnit::kCubicMetre;
  double soc_min = 0.0;
  double soc_max = 0.0;
  double soc_init = 0.0;
  std::optional<TerminalTarget> terminal_target;
  std::optional<std::string> inflow_forecast;  // key into the forecast set
};

enum class StreamKind { kThinSludge, kDrySludge };

// kThinSludge: `from` is a storage feeding the intake of resource `to`.
// kDrySludge: `from` is a resource whose product goes into storage `to`.
struct FlowLink {
  StreamKind kind = StreamKind::kThinSludge;
  std::string from;
  std::string to;
};

// At most one of `resources` may occupy `state` in any timestep.
struct MutualExclusion {
  std::string state;
  std::vector<std::string> resources;
};

struct Topology {
  std::vector<ResourceSpec> resources;
  std::vector<StorageSpec> storages;
  std::vector<FlowLink> links;
  std::vector<MutualExclusion> mutual_exclusions;

  const ResourceSpec* FindResource(const std::string& name) const;
  const StorageSpec* FindStorage(const std::string& name) const;
  ResourceSpec* FindResource(const std::string& name);
  StorageSpec* FindStorage(const std::string& name);
};

struct TimedValue {
  Timestamp time;
  double value = 0.0;

  friend bool operator==(const TimedValue&, const TimedValue&) = default;
};

// Market prices in EUR/MWh at a fixed native resolution; sample i is valid
// on [time_i, time_i + resolution).
struct PriceSeries {
  std::vector<TimedValue> samples;
  Minutes resolution{15};

  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;
};

// Exogenous forecast, held piecewise constant. With a resolution the series
// ends at last.time + resolution; without one the last sample holds forever.
struct ForecastSeries {
  std::vector<TimedValue> samples;
  std::string unit;
  std::optional<Minutes> resolution;
};

// Per-step forecast vectors keyed by the names resources and storages use.
using ForecastSet = std::map<std::string, std::vector<double>>;

enum class Severity {
  kStructural,  // the model cannot be built
  kInfeasible,  // the model can be built but has no feasible plan
};

struct TopologyViolation {
  std::string code;
  std::string message;
  Severity severity = Severity::kStructural;
};

using ValidationReport = std::vector<TopologyViolation>;

ValidationReport ValidateTopology(const Topology& topology,
                                  const Horizon& horizon);
bool HasStructuralViolations(const ValidationReport& report);

// Piecewise-constant hold onto the planning grid: every step takes the value
// of the native interval containing the step's start instant.
std::vector<double> Resample(const PriceSeries& series, const Horizon& horizon);
std::vector<double> Resample(const ForecastSeries& series,
                             const Horizon& horizon);

ForecastSeries ConstantForecast(double value, std::string unit);

// kW drawn by `resource` in `state` at operating point `op` and dry-sludge
// density `density` (g/l).
double PowerAt(const ResourceSpec& resource, const std::string& state,
               double op, double density);

// m3/h of thin sludge processed at operating point `op`.
double ThinSludgeRate(const ResourceSpec& resource, double op);

// kg/h of dry sludge from a thin-sludge rate (m3/h) and density (g/l).
double DrySludgeRate(double thin_rate, double density);

// Lossless storage balance over one step of `step_hours`.
double StorageStep(double soc_prev, double inflow, double outflow,
                   double step_hours);

std::string ToString(StateRole role);
std::string ToString(StorageUnit unit);
std::string ToString(StreamKind kind);

}  // namespace flexsched

#endif  // FLEXSCHED_MODEL_HPP_
