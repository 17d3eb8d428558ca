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

// Operator-facing view of a solved plan and the change-point
// recommendations derived from it.

#ifndef FLEXSCHED_SCHEDULE_HPP_
#define FLEXSCHED_SCHEDULE_HPP_

#include <span>
#include <string>
#include <vector>

#include "flexsched/milp.hpp"
#include "flexsched/model.hpp"
#include "flexsched/solver.hpp"

namespace flexsched {

struct ResourceTrack {
  std::string name;
  std::vector<std::string> state;
  std::vector<double> op;
  std::vector<double> p_el;  // kW
  std::vector<double> p_ds;  // m3/h
  std::vector<double> p_ts;  // kg/h

  friend bool operator==(const ResourceTrack&, const ResourceTrack&) = default;
};

struct StorageTrack {
  std::string name;
  StorageUnit unit = StorageUnit::kCubicMetre;
  std::vector<double> soc;

  friend bool operator==(const StorageTrack&, const StorageTrack&) = default;
};

struct Schedule {
  Horizon horizon;
  std::vector<ResourceTrack> resources;
  std::vector<StorageTrack> storages;
  std::vector<double> p_system;  // kW
  std::vector<double> prices;    // EUR/MWh
  double total_cost = 0.0;       // EUR

  const ResourceTrack& Resource(const std::string& name) const;  // throws
  const StorageTrack& Storage(const std::string& name) const;    // throws

  // Per-step values of a label such as "p_el[decanter1]", "soc[sludge_pocket]"
  // or "p_system"; nullptr if the label names nothing in this schedule.
  const std::vector<double>* Series(const std::string& label) const;
  std::vector<std::string> SeriesLabels() const;
};

bool operator==(const Horizon& a, const Horizon& b);
bool operator==(const Schedule& a, const Schedule& b);

// Decodes a solution through the instance's tags. Binaries are snapped to
// the nearest integer and operating points within 1e-7 of a state bound are
// snapped onto it. Throws ContractError for a missing tag or a solution
// without values, CorruptionError for a binary more than 1e-4 from an
// integer, a step without exactly one state, or a recomputed cost that
// differs from the solution objective by more than 1e-6.
Schedule ExtractSchedule(const MilpInstance& instance,
                         const MilpSolution& solution, const Topology& topology,
                         const Horizon& horizon, std::span<const double> prices);

enum class ActionKind { kEnterState, kSetOp };

struct Recommendation {
  Timestamp due_time;
  std::string resource;
  ActionKind action = ActionKind::kEnterState;
  std::string state;  // state held from due_time on
  double op = 0.0;    // operating point set at due_time
  std::string display_text;
  int step = 0;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

// One entry per resource at t = 0 and at every step whose state (enter-state)
// or, failing that, operating point (set-op) differs from the previous step.
// Sorted by due time, then resource name.
std::vector<Recommendation> ExtractRecommendations(const Schedule& schedule);

// EUR for per-step kW at EUR/MWh over steps of `step_hours`.
double ScheduleCost(std::span<const double> p_system,
                    std::span<const double> prices, double step_hours);

std::string ToString(ActionKind kind);

}  // namespace flexsched

#endif  // FLEXSCHED_SCHEDULE_HPP_
