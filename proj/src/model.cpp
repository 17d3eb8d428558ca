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

#include "flexsched/model.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "flexsched/errors.hpp"

namespace flexsched {

int ResourceSpec::StateIndex(const std::string& state) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].name == state) return static_cast<int>(i);
  }
  return -1;
}

const StateSpec& ResourceSpec::State(const std::string& state) const {
  const int i = StateIndex(state);
  if (i < 0) {
    throw DomainError(
        fmt::format("resource '{}' has no state '{}'", name, state));
  }
  return states[i];
}

const ResourceSpec* Topology::FindResource(const std::string& name) const {
  auto it = std::find_if(resources.begin(), resources.end(),
                         [&](const ResourceSpec& r) { return r.name == name; });
  return it == resources.end() ? nullptr : &*it;
}

const StorageSpec* Topology::FindStorage(const std::string& name) const {
  auto it = std::find_if(storages.begin(), storages.end(),
                         [&](const StorageSpec& s) { return s.name == name; });
  return it == storages.end() ? nullptr : &*it;
}

ResourceSpec* Topology::FindResource(const std::string& name) {
  return const_cast<ResourceSpec*>(std::as_const(*this).FindResource(name));
}

StorageSpec* Topology::FindStorage(const std::string& name) {
  return const_cast<StorageSpec*>(std::as_const(*this).FindStorage(name));
}

namespace {

class ReportBuilder {
 public:
  template <typename... Args>
  void Add(Severity severity, std::string code,
           fmt::format_string<Args...> format, Args&&... args) {
    report_.push_back({std::move(code),
                       fmt::format(format, std::forward<Args>(args)...),
                       severity});
  }
  ValidationReport Take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

constexpr Severity kStructural = Severity::kStructural;
constexpr Severity kInfeasible = Severity::kInfeasible;

void ValidateHold(ReportBuilder& out, const ResourceSpec& r,
                  const StateSpec& s, Minutes hold, const char* which,
                  const Horizon& horizon) {
  const long step = horizon.step.count();
  if (step <= 0) return;
  if (hold.count() < 0) {
    out.Add(kStructural, "negative-hold", "{}/{}: negative {} hold duration",
            r.name, s.name, which);
    return;
  }
  if (hold.count() % step != 0) {
    out.Add(kStructural, "hold-not-multiple",
            "{}/{}: {} hold duration {} min is not a multiple of the {} min "
            "time step",
            r.name, s.name, which, hold.count(), step);
  }
}

void ValidateResource(ReportBuilder& out, const ResourceSpec& r,
                      const Horizon& horizon) {
  if (!(r.op_min <= r.op_max)) {
    out.Add(kStructural, "invalid-op-bounds",
            "{}: op_min {} exceeds op_max {}", r.name, r.op_min, r.op_max);
  }
  if (r.states.empty()) {
    out.Add(kStructural, "no-states", "{}: resource has no states", r.name);
    return;
  }
  std::set<std::string> names;
  for (const StateSpec& s : r.states) {
    if (!names.insert(s.name).second) {
      out.Add(kStructural, "duplicate-state", "{}: duplicate state '{}'",
              r.name, s.name);
    }
  }
  if (r.StateIndex(r.initial_state) < 0) {
    out.Add(kStructural, "unknown-initial-state",
            "{}: unknown initial state '{}'", r.name, r.initial_state);
  }
  for (const StateSpec& s : r.states) {
    for (const std::string& f : s.successors) {
      if (r.StateIndex(f) < 0) {
        out.Add(kStructural, "unknown-successor",
                "{}/{}: unknown successor state '{}'", r.name, s.name, f);
      }
    }
    if (!(0.0 <= s.op_min && s.op_min <= s.op_max)) {
      out.Add(kStructural, "invalid-state-op-bounds",
              "{}/{}: state operating-point bounds [{}, {}] are invalid",
              r.name, s.name, s.op_min, s.op_max);
    } else if (s.op_min < r.op_min || s.op_max > r.op_max) {
      out.Add(kStructural, "state-op-outside-global",
              "{}/{}: state bounds [{}, {}] exceed resource bounds [{}, {}]",
              r.name, s.name, s.op_min, s.op_max, r.op_min, r.op_max);
    }
    ValidateHold(out, r, s, s.hold_min, "minimum", horizon);
    if (s.hold_max) {
      ValidateHold(out, r, s, *s.hold_max, "maximum", horizon);
      if (s.hold_min > *s.hold_max) {
        out.Add(kStructural, "invalid-hold-order",
                "{}/{}: minimum hold {} min exceeds maximum hold {} min",
                r.name, s.name, s.hold_min.count(), s.hold_max->count());
      }
      if (*s.hold_max < horizon.step) {
        out.Add(kStructural, "hold-below-step",
                "{}/{}: maximum hold {} min is shorter than one time step",
                r.name, s.name, s.hold_max->count());
      }
    }
  }
}

void ValidateStorage(ReportBuilder& out, const StorageSpec& s) {
  if (!(s.soc_min <= s.soc_max)) {
    out.Add(kStructural, "invalid-storage-bounds",
            "{}: soc_min {} exceeds soc_max {}", s.name, s.soc_min, s.soc_max);
    return;
  }
  if (s.soc_init < s.soc_min || s.soc_init > s.soc_max) {
    out.Add(kInfeasible, "soc-init-out-of-bounds",
            "storage '{}': initial level {} outside [{}, {}]", s.name,
            s.soc_init, s.soc_min, s.soc_max);
  }
  if (s.terminal_target) {
    if (s.terminal_target->tolerance < 0) {
      out.Add(kStructural, "negative-tolerance",
              "storage '{}': negative terminal tolerance", s.name);
    }
    const double v = s.terminal_target->value;
    if (v < s.soc_min || v > s.soc_max) {
      out.Add(kInfeasible, "terminal-target-out-of-bounds",
              "storage '{}': terminal target {} outside [{}, {}]", s.name, v,
              s.soc_min, s.soc_max);
    }
  }
}

void ValidateLinks(ReportBuilder& out, const Topology& topo) {
  std::map<std::string, int> thin_sources;
  std::map<std::string, int> dry_sinks;
  for (const FlowLink& link : topo.links) {
    const bool thin = link.kind == StreamKind::kThinSludge;
    const std::string& storage_name = thin ? link.from : link.to;
    const std::string& resource_name = thin ? link.to : link.from;
    const StorageSpec* storage = topo.FindStorage(storage_name);
    const ResourceSpec* resource = topo.FindResource(resource_name);
    if (storage == nullptr || resource == nullptr) {
      out.Add(kStructural, "unresolved-link",
              "{} link {} -> {}: endpoint does not resolve to a {}",
              ToString(link.kind), link.from, link.to,
              storage == nullptr ? "storage" : "resource");
      continue;
    }
    const StorageUnit expected =
        thin ? StorageUnit::kCubicMetre : StorageUnit::kKilogram;
    if (storage->unit != expected) {
      out.Add(kStructural, "link-unit-mismatch",
              "{} link {} -> {}: storage '{}' holds {} but the stream is {}",
              ToString(link.kind), link.from, link.to, storage->name,
              ToString(storage->unit), ToString(expected));
    }
    ++(thin ? thin_sources : dry_sinks)[resource_name];
  }
  for (const ResourceSpec& r : topo.resources) {
    if (thin_sources[r.name] != 1) {
      out.Add(kStructural, "thin-source-count",
              "{}: expected exactly one thin-sludge source, found {}", r.name,
              thin_sources[r.name]);
    }
    if (dry_sinks[r.name] != 1) {
      out.Add(kStructural, "dry-sink-count",
              "{}: expected exactly one dry-sludge sink, found {}", r.name,
              dry_sinks[r.name]);
    }
  }

  // Every dry-sludge sink must be reachable from an exogenous inflow.
  std::set<std::string> reached;
  for (const StorageSpec& s : topo.storages) {
    if (s.inflow_forecast) reached.insert(s.name);
  }
  for (bool grew = true; grew;) {
    grew = false;
    for (const FlowLink& link : topo.links) {
      if (reached.count(link.from) && !reached.count(link.to)) {
        reached.insert(link.to);
        grew = true;
      }
    }
  }
  std::set<std::string> reported;
  for (const FlowLink& link : topo.links) {
    if (link.kind == StreamKind::kDrySludge && !reached.count(link.to) &&
        reported.insert(link.to).second) {
      out.Add(kStructural, "unreachable-sink",
              "storage '{}' is not reachable from any exogenous inflow",
              link.to);
    }
  }
}

}  // namespace

ValidationReport ValidateTopology(const Topology& topology,
                                  const Horizon& horizon) {
  ReportBuilder out;
  if (horizon.step.count() <= 0 || horizon.steps < 1) {
    out.Add(kStructural, "invalid-horizon",
            "horizon needs a positive step and at least one step (got {} min, "
            "{} steps)",
            horizon.step.count(), horizon.steps);
  }
  std::set<std::string> names;
  for (const ResourceSpec& r : topology.resources) {
    if (!names.insert(r.name).second) {
      out.Add(kStructural, "duplicate-name", "duplicate name '{}'", r.name);
    }
    ValidateResource(out, r, horizon);
  }
  for (const StorageSpec& s : topology.storages) {
    if (!names.insert(s.name).second) {
      out.Add(kStructural, "duplicate-name", "duplicate name '{}'", s.name);
    }
    ValidateStorage(out, s);
  }
  ValidateLinks(out, topology);
  for (const MutualExclusion& ex : topology.mutual_exclusions) {
    for (const std::string& rn : ex.resources) {
      const ResourceSpec* r = topology.FindResource(rn);
      if (r == nullptr) {
        out.Add(kStructural, "unknown-exclusion-member",
                "mutual exclusion on '{}': unknown resource '{}'", ex.state,
                rn);
      } else if (r->StateIndex(ex.state) < 0) {
        out.Add(kStructural, "unknown-exclusion-member",
                "mutual exclusion: resource '{}' has no state '{}'", rn,
                ex.state);
      }
    }
  }
  return out.Take();
}

bool HasStructuralViolations(const ValidationReport& report) {
  return std::any_of(report.begin(), report.end(),
                     [](const TopologyViolation& v) {
                       return v.severity == Severity::kStructural;
                     });
}

namespace {

std::vector<double> ResampleSamples(const std::vector<TimedValue>& samples,
                                    std::optional<Minutes> resolution,
                                    const Horizon& horizon) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i - 1].time < samples[i].time)) {
      throw ContractError("series timestamps must be strictly increasing");
    }
  }
  std::vector<double> out;
  out.reserve(horizon.steps);
  for (int t = 0; t < horizon.steps; ++t) {
    const Timestamp at = horizon.StepStart(t);
    auto it = std::upper_bound(
        samples.begin(), samples.end(), at,
        [](const Timestamp& a, const TimedValue& s) { return a < s.time; });
    const bool covered =
        it != samples.begin() &&
        (!resolution || at < std::prev(it)->time + *resolution);
    if (!covered) {
      throw CoverageError(fmt::format("uncovered timestep t = {} ({})", t,
                                      FormatTimestamp(at)),
                          t);
    }
    out.push_back(std::prev(it)->value);
  }
  return out;
}

}  // namespace

std::vector<double> Resample(const PriceSeries& series,
                             const Horizon& horizon) {
  return ResampleSamples(series.samples, series.resolution, horizon);
}

std::vector<double> Resample(const ForecastSeries& series,
                             const Horizon& horizon) {
  for (const TimedValue& s : series.samples) {
    if (s.value < 0) {
      throw DomainError(fmt::format("forecast value {} at {} is negative",
                                    s.value, FormatTimestamp(s.time)));
    }
  }
  return ResampleSamples(series.samples, series.resolution, horizon);
}

ForecastSeries ConstantForecast(double value, std::string unit) {
  // The epoch is before any plausible horizon start.
  return ForecastSeries{{TimedValue{Timestamp{}, value}}, std::move(unit),
                        std::nullopt};
}

double PowerAt(const ResourceSpec& resource, const std::string& state,
               double op, double density) {
  const StateSpec& s = resource.State(state);
  if (!(op >= s.op_min && op <= s.op_max)) {
    throw DomainError(fmt::format(
        "operating point {} outside [{}, {}] of state {}/{}", op, s.op_min,
        s.op_max, resource.name, s.name));
  }
  const double run = s.role == StateRole::kRun ? 1.0 : 0.0;
  const double start = s.role == StateRole::kStart ? 1.0 : 0.0;
  return resource.coeff_a * run + resource.coeff_b * op +
         resource.coeff_c * density * run + resource.coeff_d * start;
}

double ThinSludgeRate(const ResourceSpec& resource, double op) {
  if (!(op >= 0.0 && op <= resource.op_max)) {
    throw DomainError(fmt::format("operating point {} outside [0, {}] of {}",
                                  op, resource.op_max, resource.name));
  }
  return resource.coeff_e * op;
}

double DrySludgeRate(double thin_rate, double density) {
  if (!(thin_rate >= 0.0) || !(density >= 0.0)) {
    throw DomainError(fmt::format(
        "dry sludge rate needs non-negative inputs (got {} m3/h, {} g/l)",
        thin_rate, density));
  }
  return thin_rate * density;
}

double StorageStep(double soc_prev, double inflow, double outflow,
                   double step_hours) {
  return soc_prev + (inflow - outflow) * step_hours;
}

std::string ToString(StateRole role) {
  switch (role) {
    case StateRole::kIdle:
      return "idle";
    case StateRole::kStart:
      return "start";
    case StateRole::kRun:
      return "run";
  }
  return "?";
}

std::string ToString(StorageUnit unit) {
  return unit == StorageUnit::kCubicMetre ? "m3" : "kg";
}

std::string ToString(StreamKind kind) {
  return kind == StreamKind::kThinSludge ? "thin_sludge" : "dry_sludge";
}

}  // namespace flexsched
