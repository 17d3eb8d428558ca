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

#include "flexsched/builder.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include <fmt/format.h>

namespace flexsched {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Summarize(const ValidationReport& report) {
  std::string out = "invalid topology:";
  for (const TopologyViolation& v : report) {
    if (v.severity == Severity::kStructural) {
      out += fmt::format(" [{}] {};", v.code, v.message);
    }
  }
  return out;
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string Label(RowFamily family, const std::string& entity, int t) {
  if (entity.empty()) return fmt::format("{} @ t={}", FamilyName(family), t);
  return fmt::format("{}[{}] @ t={}", FamilyName(family), entity, t);
}

struct ResourceVars {
  std::vector<int> op, p_el, p_ds, p_ts;
  std::vector<std::vector<int>> x;  // [state][t]
};

class Builder {
 public:
  Builder(const Topology& topology, const Horizon& horizon,
          std::span<const double> prices, const ForecastSet& forecasts,
          const BuildOptions& options)
      : topo_(topology),
        horizon_(horizon),
        prices_(prices),
        forecasts_(forecasts),
        options_(options),
        T_(horizon.steps),
        dt_(horizon.StepHours()) {}

  MilpInstance Build() {
    CheckInputs();
    AddVariables();
    for (std::size_t r = 0; r < topo_.resources.size(); ++r) {
      AddResourceRows(topo_.resources[r], res_[r]);
    }
    AddExclusionRows();
    AddStorageRows();
    AddSystemRows();
    CheckReachability();
    return std::move(inst_);
  }

 private:
  const std::vector<double>& Forecast(const std::string& key) const {
    auto it = forecasts_.find(key);
    if (it == forecasts_.end()) {
      throw ContractError(fmt::format("missing forecast '{}'", key));
    }
    if (static_cast<int>(it->second.size()) != T_) {
      throw ContractError(fmt::format("forecast '{}' has {} values for {} steps",
                                      key, it->second.size(), T_));
    }
    return it->second;
  }

  void CheckInputs() {
    ValidationReport report = ValidateTopology(topo_, horizon_);
    if (HasStructuralViolations(report)) {
      throw InvalidTopologyError(std::move(report));
    }
    for (const TopologyViolation& v : report) inst_.warnings.push_back(v.message);
    if (static_cast<int>(prices_.size()) != T_) {
      throw ContractError(fmt::format("price vector has {} values for {} steps",
                                      prices_.size(), T_));
    }
    for (const ResourceSpec& r : topo_.resources) Forecast(r.density_forecast);
    for (const StorageSpec& s : topo_.storages) {
      if (s.inflow_forecast) Forecast(*s.inflow_forecast);
    }
    for (const auto& [name, dwell] : options_.elapsed_dwell) {
      if (topo_.FindResource(name) == nullptr) {
        throw ContractError(
            fmt::format("elapsed dwell given for unknown resource '{}'", name));
      }
      if (dwell.count() < 0) {
        throw ContractError(fmt::format("negative elapsed dwell for '{}'", name));
      }
    }
  }

  void AddVariables() {
    res_.resize(topo_.resources.size());
    soc_.resize(topo_.storages.size());
    for (std::size_t r = 0; r < topo_.resources.size(); ++r) {
      res_[r].x.resize(topo_.resources[r].states.size());
    }
    for (int t = 0; t < T_; ++t) {
      for (std::size_t r = 0; r < topo_.resources.size(); ++r) {
        const ResourceSpec& spec = topo_.resources[r];
        ResourceVars& v = res_[r];
        v.op.push_back(inst_.AddVariable(tags::Op(spec.name, t),
                                         VarKind::kContinuous, spec.op_min,
                                         spec.op_max));
        for (std::size_t s = 0; s < spec.states.size(); ++s) {
          v.x[s].push_back(
              inst_.AddVariable(tags::State(spec.name, spec.states[s].name, t),
                                VarKind::kBinary, 0.0, 1.0));
        }
        v.p_el.push_back(inst_.AddVariable(tags::PowerEl(spec.name, t),
                                           VarKind::kContinuous, -kInf, kInf));
        v.p_ds.push_back(inst_.AddVariable(tags::ThinSludge(spec.name, t),
                                           VarKind::kContinuous, -kInf, kInf));
        v.p_ts.push_back(inst_.AddVariable(tags::DrySludge(spec.name, t),
                                           VarKind::kContinuous, -kInf, kInf));
      }
      for (std::size_t s = 0; s < topo_.storages.size(); ++s) {
        const StorageSpec& spec = topo_.storages[s];
        soc_[s].push_back(inst_.AddVariable(tags::Soc(spec.name, t),
                                            VarKind::kContinuous, spec.soc_min,
                                            spec.soc_max));
      }
      p_system_.push_back(inst_.AddVariable(tags::PowerSystem(t),
                                            VarKind::kContinuous, -kInf, kInf));
    }
  }

  int Steps(Minutes d) const {
    return static_cast<int>(d.count() / horizon_.step.count());
  }

  void AddResourceRows(const ResourceSpec& spec, const ResourceVars& v) {
    const std::vector<double>& density = Forecast(spec.density_forecast);
    const std::string& name = spec.name;
    for (int t = 0; t < T_; ++t) {
      inst_.AddConstraint({{v.op[t], 1.0}}, Sense::kGreaterEqual, spec.op_min,
                          Label(RowFamily::kOpBounds, name + "/min", t),
                          RowFamily::kOpBounds);
      inst_.AddConstraint({{v.op[t], 1.0}}, Sense::kLessEqual, spec.op_max,
                          Label(RowFamily::kOpBounds, name + "/max", t),
                          RowFamily::kOpBounds);

      std::vector<Term> power{{v.p_el[t], 1.0}, {v.op[t], -spec.coeff_b}};
      for (std::size_t s = 0; s < spec.states.size(); ++s) {
        switch (spec.states[s].role) {
          case StateRole::kRun:
            power.push_back(
                {v.x[s][t], -(spec.coeff_a + spec.coeff_c * density[t])});
            break;
          case StateRole::kStart:
            power.push_back({v.x[s][t], -spec.coeff_d});
            break;
          case StateRole::kIdle:
            break;
        }
      }
      inst_.AddConstraint(std::move(power), Sense::kEqual, 0.0,
                          Label(RowFamily::kPowerMap, name, t),
                          RowFamily::kPowerMap);
      inst_.AddConstraint({{v.p_ds[t], 1.0}, {v.op[t], -spec.coeff_e}},
                          Sense::kEqual, 0.0,
                          Label(RowFamily::kThinSludgeRate, name, t),
                          RowFamily::kThinSludgeRate);
      inst_.AddConstraint({{v.p_ts[t], 1.0}, {v.p_ds[t], -density[t]}},
                          Sense::kEqual, 0.0,
                          Label(RowFamily::kDrySludgeRate, name, t),
                          RowFamily::kDrySludgeRate);

      std::vector<Term> lower{{v.op[t], 1.0}};
      std::vector<Term> upper{{v.op[t], 1.0}};
      std::vector<Term> exclusive;
      for (std::size_t s = 0; s < spec.states.size(); ++s) {
        lower.push_back({v.x[s][t], -spec.states[s].op_min});
        upper.push_back({v.x[s][t], -spec.states[s].op_max});
        exclusive.push_back({v.x[s][t], 1.0});
      }
      inst_.AddConstraint(std::move(lower), Sense::kGreaterEqual, 0.0,
                          Label(RowFamily::kStateOpLower, name, t),
                          RowFamily::kStateOpLower);
      inst_.AddConstraint(std::move(upper), Sense::kLessEqual, 0.0,
                          Label(RowFamily::kStateOpUpper, name, t),
                          RowFamily::kStateOpUpper);
      inst_.AddConstraint(std::move(exclusive), Sense::kEqual, 1.0,
                          Label(RowFamily::kStateExclusive, name, t),
                          RowFamily::kStateExclusive);
    }

    for (std::size_t s = 0; s < spec.states.size(); ++s) {
      const StateSpec& state = spec.states[s];
      const std::string entity = name + "/" + state.name;
      const std::vector<int>& x = v.x[s];
      for (int t = 1; t < T_; ++t) {
        std::vector<Term> terms{{x[t - 1], 1.0}, {x[t], -1.0}};
        for (const std::string& f : state.successors) {
          terms.push_back({v.x[spec.StateIndex(f)][t], -1.0});
        }
        inst_.AddConstraint(std::move(terms), Sense::kLessEqual, 0.0,
                            Label(RowFamily::kSuccessor, entity, t),
                            RowFamily::kSuccessor);
      }
      const int n_min = Steps(state.hold_min);
      for (int t = 1; t < T_ && n_min >= 2; ++t) {
        // Windows running past the horizon only require persistence up to
        // the last step.
        const int len = std::min(n_min, T_ - t);
        if (len < 2) continue;
        std::vector<Term> terms{{x[t], double(len)}, {x[t - 1], -double(len)}};
        for (int tau = t; tau < t + len; ++tau) terms.push_back({x[tau], -1.0});
        inst_.AddConstraint(std::move(terms), Sense::kLessEqual, 0.0,
                            Label(RowFamily::kMinHold, entity, t),
                            RowFamily::kMinHold);
      }
      if (options_.tighten_holds && n_min >= 2 && T_ >= 2) {
        std::vector<int> entry(T_, -1);
        for (int t = 1; t < T_; ++t) {
          entry[t] = inst_.AddVariable(tags::Entry(name, state.name, t),
                                       VarKind::kContinuous, 0.0, 1.0);
          inst_.AddConstraint({{entry[t], 1.0}, {x[t], -1.0}, {x[t - 1], 1.0}},
                              Sense::kGreaterEqual, 0.0,
                              Label(RowFamily::kHoldEntry, entity, t),
                              RowFamily::kHoldEntry);
        }
        for (int t = 1; t < T_; ++t) {
          std::vector<Term> terms{{x[t], -1.0}};
          for (int i = std::max(1, t - n_min + 1); i <= t; ++i) {
            terms.push_back({entry[i], 1.0});
          }
          inst_.AddConstraint(std::move(terms), Sense::kLessEqual, 0.0,
                              Label(RowFamily::kHoldWindow, entity, t),
                              RowFamily::kHoldWindow);
        }
      }
      if (state.hold_max) {
        const int n_max = Steps(*state.hold_max);
        for (int t = 0; t + n_max < T_; ++t) {
          std::vector<Term> terms;
          for (int tau = t; tau <= t + n_max; ++tau) terms.push_back({x[tau], 1.0});
          inst_.AddConstraint(std::move(terms), Sense::kLessEqual, double(n_max),
                              Label(RowFamily::kMaxHold, entity, t),
                              RowFamily::kMaxHold);
        }
      }
    }

    const int init = spec.StateIndex(spec.initial_state);
    const std::vector<int>& x0 = v.x[init];
    inst_.AddConstraint({{x0[0], 1.0}}, Sense::kEqual, 1.0,
                        Label(RowFamily::kInitialState, name, 0),
                        RowFamily::kInitialState);
    auto dwell_it = options_.elapsed_dwell.find(name);
    if (dwell_it != options_.elapsed_dwell.end()) {
      const StateSpec& state = spec.states[init];
      const int dwell = Steps(dwell_it->second);
      const int remaining = std::max(0, Steps(state.hold_min) - dwell);
      for (int t = 1; t < std::min(remaining, T_); ++t) {
        inst_.AddConstraint({{x0[t], 1.0}}, Sense::kEqual, 1.0,
                            Label(RowFamily::kInitialDwell, name, t),
                            RowFamily::kInitialDwell);
      }
      if (state.hold_max) {
        const int left = Steps(*state.hold_max) - dwell;
        if (left < 0) {
          inst_.warnings.push_back(fmt::format(
              "{}: elapsed dwell {} min already exceeds the maximum hold of "
              "state {}",
              name, dwell_it->second.count(), state.name));
        }
        if (left + 1 <= T_) {
          std::vector<Term> terms;
          for (int t = 0; t <= std::max(left, 0); ++t) terms.push_back({x0[t], 1.0});
          inst_.AddConstraint(std::move(terms), Sense::kLessEqual, double(left),
                              Label(RowFamily::kInitialDwell, name + "/max", 0),
                              RowFamily::kInitialDwell);
        }
      }
    }
  }

  void AddExclusionRows() {
    std::map<std::string, int> seen;
    for (const MutualExclusion& ex : topo_.mutual_exclusions) {
      const int k = seen[ex.state]++;
      const std::string family =
          "no-simultaneous-" + Lower(ex.state) + (k > 0 ? fmt::format("#{}", k) : "");
      for (int t = 0; t < T_; ++t) {
        std::vector<Term> terms;
        for (const std::string& rn : ex.resources) {
          const auto r = static_cast<std::size_t>(
              topo_.FindResource(rn) - topo_.resources.data());
          terms.push_back({res_[r].x[topo_.resources[r].StateIndex(ex.state)][t], 1.0});
        }
        inst_.AddConstraint(std::move(terms), Sense::kLessEqual, 1.0,
                            fmt::format("{} @ t={}", family, t),
                            RowFamily::kMutualExclusion);
      }
    }
  }

  std::size_t ResourcePos(const std::string& name) const {
    return static_cast<std::size_t>(topo_.FindResource(name) -
                                    topo_.resources.data());
  }

  void AddStorageRows() {
    for (std::size_t s = 0; s < topo_.storages.size(); ++s) {
      const StorageSpec& spec = topo_.storages[s];
      const std::vector<int>& soc = soc_[s];
      const std::vector<double>* inflow =
          spec.inflow_forecast ? &Forecast(*spec.inflow_forecast) : nullptr;
      for (int t = 0; t < T_; ++t) {
        inst_.AddConstraint({{soc[t], 1.0}}, Sense::kGreaterEqual, spec.soc_min,
                            Label(RowFamily::kStorageBounds, spec.name + "/min", t),
                            RowFamily::kStorageBounds);
        inst_.AddConstraint({{soc[t], 1.0}}, Sense::kLessEqual, spec.soc_max,
                            Label(RowFamily::kStorageBounds, spec.name + "/max", t),
                            RowFamily::kStorageBounds);
      }
      inst_.AddConstraint({{soc[0], 1.0}}, Sense::kEqual, spec.soc_init,
                          Label(RowFamily::kStorageInitial, spec.name, 0),
                          RowFamily::kStorageInitial);
      for (int t = 1; t < T_; ++t) {
        std::vector<Term> terms{{soc[t], 1.0}, {soc[t - 1], -1.0}};
        for (const FlowLink& link : topo_.links) {
          if (link.kind == StreamKind::kThinSludge && link.from == spec.name) {
            terms.push_back({res_[ResourcePos(link.to)].p_ds[t], dt_});
          } else if (link.kind == StreamKind::kDrySludge && link.to == spec.name) {
            terms.push_back({res_[ResourcePos(link.from)].p_ts[t], -dt_});
          }
        }
        const double rhs = inflow ? (*inflow)[t] * dt_ : 0.0;
        inst_.AddConstraint(std::move(terms), Sense::kEqual, rhs,
                            Label(RowFamily::kStorageBalance, spec.name, t),
                            RowFamily::kStorageBalance);
      }
      if (spec.terminal_target) {
        const TerminalTarget& target = *spec.terminal_target;
        const std::string label =
            Label(RowFamily::kStorageTerminal, spec.name, T_ - 1);
        if (target.tolerance == 0.0) {
          inst_.AddConstraint({{soc[T_ - 1], 1.0}}, Sense::kEqual, target.value,
                              label, RowFamily::kStorageTerminal);
        } else {
          inst_.AddConstraint({{soc[T_ - 1], 1.0}}, Sense::kGreaterEqual,
                              target.value - target.tolerance, label,
                              RowFamily::kStorageTerminal);
          inst_.AddConstraint({{soc[T_ - 1], 1.0}}, Sense::kLessEqual,
                              target.value + target.tolerance, label,
                              RowFamily::kStorageTerminal);
        }
      }
    }
  }

  void AddSystemRows() {
    for (int t = 0; t < T_; ++t) {
      std::vector<Term> terms{{p_system_[t], 1.0}};
      for (const ResourceVars& v : res_) terms.push_back({v.p_el[t], -1.0});
      inst_.AddConstraint(std::move(terms), Sense::kEqual, 0.0,
                          Label(RowFamily::kSystemPower, "", t),
                          RowFamily::kSystemPower);
      // EUR = kW * h * EUR/MWh / 1000
      inst_.objective.push_back({p_system_[t], dt_ * prices_[t] / 1000.0});
    }
  }

  // Cheap necessary condition: can the terminal target be reached at all if
  // every connected resource ran flat out (or not at all) from step 1 on?
  void CheckReachability() {
    for (std::size_t s = 0; s < topo_.storages.size(); ++s) {
      const StorageSpec& spec = topo_.storages[s];
      if (!spec.terminal_target) continue;
      double lo = spec.soc_init;
      double hi = spec.soc_init;
      const std::vector<double>* inflow =
          spec.inflow_forecast ? &Forecast(*spec.inflow_forecast) : nullptr;
      for (int t = 1; t < T_; ++t) {
        const double in = inflow ? (*inflow)[t] * dt_ : 0.0;
        lo += in;
        hi += in;
        for (const FlowLink& link : topo_.links) {
          if (link.kind == StreamKind::kThinSludge && link.from == spec.name) {
            const ResourceSpec& r = topo_.resources[ResourcePos(link.to)];
            lo -= r.coeff_e * r.op_max * dt_;
          } else if (link.kind == StreamKind::kDrySludge && link.to == spec.name) {
            const ResourceSpec& r = topo_.resources[ResourcePos(link.from)];
            hi += r.coeff_e * r.op_max * Forecast(r.density_forecast)[t] * dt_;
          }
        }
      }
      const TerminalTarget& target = *spec.terminal_target;
      if (target.value + target.tolerance < lo ||
          target.value - target.tolerance > hi) {
        inst_.warnings.push_back(fmt::format(
            "storage '{}': terminal target {} is outside the reachable range "
            "[{:.6g}, {:.6g}]",
            spec.name, target.value, lo, hi));
      }
    }
  }

  const Topology& topo_;
  const Horizon& horizon_;
  std::span<const double> prices_;
  const ForecastSet& forecasts_;
  const BuildOptions& options_;
  const int T_;
  const double dt_;

  MilpInstance inst_;
  std::vector<ResourceVars> res_;
  std::vector<std::vector<int>> soc_;
  std::vector<int> p_system_;
};

}  // namespace

InvalidTopologyError::InvalidTopologyError(ValidationReport report)
    : Error(Summarize(report)), report_(std::move(report)) {}

MilpInstance BuildInstance(const Topology& topology, const Horizon& horizon,
                           std::span<const double> prices,
                           const ForecastSet& forecasts,
                           const BuildOptions& options) {
  return Builder(topology, horizon, prices, forecasts, options).Build();
}

namespace tags {

std::string Op(const std::string& resource, int t) {
  return fmt::format("op[{}][{}]", resource, t);
}
std::string State(const std::string& resource, const std::string& state,
                  int t) {
  return fmt::format("x[{}][{}][{}]", resource, state, t);
}
std::string PowerEl(const std::string& resource, int t) {
  return fmt::format("p_el[{}][{}]", resource, t);
}
std::string ThinSludge(const std::string& resource, int t) {
  return fmt::format("p_ds[{}][{}]", resource, t);
}
std::string DrySludge(const std::string& resource, int t) {
  return fmt::format("p_ts[{}][{}]", resource, t);
}
std::string Entry(const std::string& resource, const std::string& state,
                  int t) {
  return fmt::format("u[{}][{}][{}]", resource, state, t);
}
std::string Soc(const std::string& storage, int t) {
  return fmt::format("soc[{}][{}]", storage, t);
}
std::string PowerSystem(int t) { return fmt::format("p_system[{}]", t); }

}  // namespace tags
}  // namespace flexsched
