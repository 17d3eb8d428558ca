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

#include "flexsched/planning.hpp"

#include <fmt/format.h>

namespace flexsched {
namespace {

constexpr double kSocSlack = 1e-7;

std::string Summarize(const ValidationReport& report) {
  std::string out = "snapshot rejected:";
  for (const TopologyViolation& v : report) out += " " + v.message + ";";
  if (!report.empty()) out.pop_back();
  return out;
}

}  // namespace

SnapshotError::SnapshotError(ValidationReport report)
    : Error(Summarize(report)), report_(std::move(report)) {}

Snapshot SnapshotAt(const Schedule& schedule, int step,
                    const std::map<std::string, Minutes>& initial_dwell) {
  if (step < 0 || step >= schedule.horizon.steps) {
    throw ContractError(fmt::format("snapshot step {} outside a {}-step plan",
                                    step, schedule.horizon.steps));
  }
  Snapshot out;
  out.time = schedule.horizon.StepStart(step);
  for (const ResourceTrack& r : schedule.resources) {
    const std::string& state = r.state[step];
    int held = 0;
    while (held < step && r.state[step - held - 1] == state) ++held;
    ResourceSnapshot rs{state, schedule.horizon.step * held};
    if (held == step) {
      auto it = initial_dwell.find(r.name);
      if (it == initial_dwell.end()) {
        rs.elapsed_dwell.reset();
      } else {
        *rs.elapsed_dwell += it->second;
      }
    }
    out.resources.emplace(r.name, std::move(rs));
  }
  for (const StorageTrack& s : schedule.storages) out.socs.emplace(s.name, s.soc[step]);
  return out;
}

ValidationReport ValidateSnapshot(const Topology& topology,
                                  const Snapshot& snapshot) {
  ValidationReport out;
  auto add = [&](std::string code, std::string message) {
    out.push_back({std::move(code), std::move(message), Severity::kStructural});
  };
  for (const auto& [name, rs] : snapshot.resources) {
    const ResourceSpec* r = topology.FindResource(name);
    if (r == nullptr) {
      add("unknown-resource", fmt::format("unknown resource '{}'", name));
      continue;
    }
    const int s = r->StateIndex(rs.state);
    if (s < 0) {
      add("unknown-state", fmt::format("{}: unknown state '{}'", name, rs.state));
      continue;
    }
    if (!rs.elapsed_dwell) continue;
    if (rs.elapsed_dwell->count() < 0) {
      add("negative-dwell", fmt::format("{}: negative elapsed dwell", name));
    } else if (r->states[s].hold_max && *rs.elapsed_dwell > *r->states[s].hold_max) {
      add("dwell-exceeds-hold",
          fmt::format("{}: elapsed dwell {} min exceeds the maximum hold {} min of {}",
                      name, rs.elapsed_dwell->count(),
                      r->states[s].hold_max->count(), rs.state));
    }
  }
  for (const auto& [name, soc] : snapshot.socs) {
    const StorageSpec* s = topology.FindStorage(name);
    if (s == nullptr) {
      add("unknown-storage", fmt::format("unknown storage '{}'", name));
    } else if (!(soc >= s->soc_min - kSocSlack && soc <= s->soc_max + kSocSlack)) {
      add("soc-out-of-bounds",
          fmt::format("{}: measured level {} {} outside [{}, {}]", name, soc,
                      ToString(s->unit), s->soc_min, s->soc_max));
    }
  }
  return out;
}

Topology ApplySnapshot(const Topology& topology, const Snapshot& snapshot,
                       BuildOptions& build) {
  ValidationReport report = ValidateSnapshot(topology, snapshot);
  if (!report.empty()) throw SnapshotError(std::move(report));
  Topology out = topology;
  for (const auto& [name, rs] : snapshot.resources) {
    out.FindResource(name)->initial_state = rs.state;
    if (rs.elapsed_dwell) {
      build.elapsed_dwell[name] = *rs.elapsed_dwell;
    } else {
      build.elapsed_dwell.erase(name);
    }
  }
  for (const auto& [name, soc] : snapshot.socs) out.FindStorage(name)->soc_init = soc;
  return out;
}

PlanResult SolvePlan(const Topology& topology, const Horizon& horizon,
                     std::span<const double> prices, const ForecastSet& forecasts,
                     const BuildOptions& build, const SolveOptions& solve) {
  PlanResult out;
  out.instance = BuildInstance(topology, horizon, prices, forecasts, build);
  out.solution = SolveMilp(out.instance, solve);
  if (out.solution.HasIncumbent()) {
    out.schedule =
        ExtractSchedule(out.instance, out.solution, topology, horizon, prices);
  }
  return out;
}

PlanResult ReoptimizeFromSnapshot(const Topology& topology,
                                  const Snapshot& snapshot,
                                  const Horizon& horizon,
                                  std::span<const double> prices,
                                  const ForecastSet& forecasts,
                                  const BuildOptions& build,
                                  const SolveOptions& solve) {
  BuildOptions options = build;
  const Topology applied = ApplySnapshot(topology, snapshot, options);
  return SolvePlan(applied, horizon, prices, forecasts, options, solve);
}

}  // namespace flexsched
