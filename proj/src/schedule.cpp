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

#include "flexsched/schedule.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "flexsched/builder.hpp"
#include "flexsched/errors.hpp"

namespace flexsched {
namespace {

constexpr double kIntegralTol = 1e-4;
constexpr double kSnapTol = 1e-7;
constexpr double kCostTol = 1e-6;

double Snap(double op, const StateSpec& state) {
  if (std::abs(op - state.op_min) <= kSnapTol) return state.op_min;
  if (std::abs(op - state.op_max) <= kSnapTol) return state.op_max;
  return op;
}

}  // namespace

bool operator==(const Horizon& a, const Horizon& b) {
  return a.start.utc == b.start.utc && a.start.offset == b.start.offset &&
         a.step == b.step && a.steps == b.steps;
}

bool operator==(const Schedule& a, const Schedule& b) {
  return a.horizon == b.horizon && a.resources == b.resources &&
         a.storages == b.storages && a.p_system == b.p_system &&
         a.prices == b.prices && a.total_cost == b.total_cost;
}

const ResourceTrack& Schedule::Resource(const std::string& name) const {
  for (const ResourceTrack& r : resources) {
    if (r.name == name) return r;
  }
  throw DomainError(fmt::format("schedule has no resource '{}'", name));
}

const StorageTrack& Schedule::Storage(const std::string& name) const {
  for (const StorageTrack& s : storages) {
    if (s.name == name) return s;
  }
  throw DomainError(fmt::format("schedule has no storage '{}'", name));
}

const std::vector<double>* Schedule::Series(const std::string& label) const {
  if (label == "p_system") return &p_system;
  const std::size_t open = label.find('[');
  if (open == std::string::npos || label.back() != ']') return nullptr;
  const std::string kind = label.substr(0, open);
  const std::string name = label.substr(open + 1, label.size() - open - 2);
  if (kind == "soc") {
    for (const StorageTrack& s : storages) {
      if (s.name == name) return &s.soc;
    }
    return nullptr;
  }
  for (const ResourceTrack& r : resources) {
    if (r.name != name) continue;
    if (kind == "op") return &r.op;
    if (kind == "p_el") return &r.p_el;
    if (kind == "p_ds") return &r.p_ds;
    if (kind == "p_ts") return &r.p_ts;
  }
  return nullptr;
}

std::vector<std::string> Schedule::SeriesLabels() const {
  std::vector<std::string> out;
  for (const ResourceTrack& r : resources) {
    for (const char* kind : {"op", "p_el", "p_ds", "p_ts"}) {
      out.push_back(fmt::format("{}[{}]", kind, r.name));
    }
  }
  for (const StorageTrack& s : storages) out.push_back(fmt::format("soc[{}]", s.name));
  out.push_back("p_system");
  return out;
}

Schedule ExtractSchedule(const MilpInstance& instance,
                         const MilpSolution& solution, const Topology& topology,
                         const Horizon& horizon, std::span<const double> prices) {
  if (!solution.HasIncumbent()) {
    throw ContractError("solution carries no values");
  }
  if (solution.values.size() != instance.variables.size()) {
    throw ContractError("solution length does not match the instance");
  }
  const int T = horizon.steps;
  if (static_cast<int>(prices.size()) != T) {
    throw ContractError("price vector length does not match the horizon");
  }
  auto value = [&](const std::string& tag) {
    return solution.values[instance.Index(tag)];
  };

  Schedule out;
  out.horizon = horizon;
  out.prices.assign(prices.begin(), prices.end());
  for (const ResourceSpec& spec : topology.resources) {
    ResourceTrack track;
    track.name = spec.name;
    for (int t = 0; t < T; ++t) {
      int chosen = -1;
      for (std::size_t s = 0; s < spec.states.size(); ++s) {
        const std::string tag = tags::State(spec.name, spec.states[s].name, t);
        const double x = value(tag);
        const double rounded = std::round(x);
        if (std::abs(x - rounded) > kIntegralTol) {
          throw CorruptionError(
              fmt::format("binary {} = {} is not integral", tag, x));
        }
        if (rounded == 1.0) {
          if (chosen >= 0) {
            throw CorruptionError(fmt::format("{} holds two states at t={}",
                                              spec.name, t));
          }
          chosen = static_cast<int>(s);
        }
      }
      if (chosen < 0) {
        throw CorruptionError(fmt::format("{} holds no state at t={}", spec.name, t));
      }
      const StateSpec& state = spec.states[chosen];
      track.state.push_back(state.name);
      track.op.push_back(Snap(value(tags::Op(spec.name, t)), state));
      track.p_el.push_back(value(tags::PowerEl(spec.name, t)));
      track.p_ds.push_back(value(tags::ThinSludge(spec.name, t)));
      track.p_ts.push_back(value(tags::DrySludge(spec.name, t)));
    }
    out.resources.push_back(std::move(track));
  }
  for (const StorageSpec& spec : topology.storages) {
    StorageTrack track{spec.name, spec.unit, {}};
    for (int t = 0; t < T; ++t) track.soc.push_back(value(tags::Soc(spec.name, t)));
    out.storages.push_back(std::move(track));
  }
  for (int t = 0; t < T; ++t) out.p_system.push_back(value(tags::PowerSystem(t)));
  out.total_cost = ScheduleCost(out.p_system, prices, horizon.StepHours());
  const double expected = solution.objective - instance.objective_constant;
  if (std::abs(out.total_cost - expected) > kCostTol) {
    throw CorruptionError(fmt::format(
        "recomputed cost {:.9f} EUR differs from the solver objective {:.9f}",
        out.total_cost, expected));
  }
  return out;
}

std::vector<Recommendation> ExtractRecommendations(const Schedule& schedule) {
  std::vector<Recommendation> out;
  for (const ResourceTrack& r : schedule.resources) {
    for (std::size_t t = 0; t < r.state.size(); ++t) {
      const bool entered = t == 0 || r.state[t] != r.state[t - 1];
      if (!entered && r.op[t] == r.op[t - 1]) continue;
      Recommendation rec;
      rec.step = static_cast<int>(t);
      rec.due_time = schedule.horizon.StepStart(rec.step);
      rec.resource = r.name;
      rec.action = entered ? ActionKind::kEnterState : ActionKind::kSetOp;
      rec.state = r.state[t];
      rec.op = r.op[t];
      const std::string when = FormatTimestamp(rec.due_time);
      rec.display_text =
          entered ? fmt::format("{} {}: switch to {} at OP {:.2f}", when, r.name,
                                rec.state, rec.op)
                  : fmt::format("{} {}: set OP to {:.2f}", when, r.name, rec.op);
      out.push_back(std::move(rec));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Recommendation& a, const Recommendation& b) {
                     if (a.step != b.step) return a.step < b.step;
                     return a.resource < b.resource;
                   });
  return out;
}

double ScheduleCost(std::span<const double> p_system,
                    std::span<const double> prices, double step_hours) {
  if (p_system.size() != prices.size()) {
    throw ContractError("power and price vectors differ in length");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < p_system.size(); ++t) {
    total += p_system[t] * step_hours * prices[t] / 1000.0;
  }
  return total;
}

std::string ToString(ActionKind kind) {
  return kind == ActionKind::kEnterState ? "enter-state" : "set-op";
}

}  // namespace flexsched
