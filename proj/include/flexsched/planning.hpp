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

// Build, solve and decode in one call, and rolling re-optimization from a
// plant snapshot.

#ifndef FLEXSCHED_PLANNING_HPP_
#define FLEXSCHED_PLANNING_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>

#include "flexsched/builder.hpp"
#include "flexsched/errors.hpp"
#include "flexsched/milp.hpp"
#include "flexsched/model.hpp"
#include "flexsched/schedule.hpp"
#include "flexsched/solver.hpp"

namespace flexsched {

struct ResourceSnapshot {
  std::string state;
  // Time already spent in `state`; nullopt means its minimum hold is met.
  std::optional<Minutes> elapsed_dwell;

  friend bool operator==(const ResourceSnapshot&, const ResourceSnapshot&) = default;
};

struct Snapshot {
  Timestamp time;
  std::map<std::string, ResourceSnapshot> resources;
  std::map<std::string, double> socs;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

// Plant state at step k of a schedule: each resource's state with the time
// it held that state over steps before k, and each storage level at k. A run
// reaching back to step 0 adds `initial_dwell` for that resource, or stays
// nullopt if the plan gave it none.
Snapshot SnapshotAt(const Schedule& schedule, int step,
                    const std::map<std::string, Minutes>& initial_dwell = {});

// Levels outside [soc_min, soc_max], unknown names, states a resource does
// not have, and negative dwell. Empty = valid.
ValidationReport ValidateSnapshot(const Topology& topology,
                                  const Snapshot& snapshot);

class SnapshotError : public Error {
 public:
  explicit SnapshotError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct PlanResult {
  MilpInstance instance;
  MilpSolution solution;
  std::optional<Schedule> schedule;  // present whenever an incumbent exists
};

PlanResult SolvePlan(const Topology& topology, const Horizon& horizon,
                     std::span<const double> prices, const ForecastSet& forecasts,
                     const BuildOptions& build = {}, const SolveOptions& solve = {});

// Copies `topology`, applies the snapshot (levels become soc_init, states
// become initial states, dwell is credited) and solves. Throws SnapshotError.
PlanResult ReoptimizeFromSnapshot(const Topology& topology,
                                  const Snapshot& snapshot,
                                  const Horizon& horizon,
                                  std::span<const double> prices,
                                  const ForecastSet& forecasts,
                                  const BuildOptions& build = {},
                                  const SolveOptions& solve = {});

Topology ApplySnapshot(const Topology& topology, const Snapshot& snapshot,
                       BuildOptions& build);

}  // namespace flexsched

#endif  // FLEXSCHED_PLANNING_HPP_
