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
#include <initializer_list>
#include <set>

#include <fmt/format.h>

#include "flexsched/errors.hpp"
#include "flexsched/io.hpp"

namespace flexsched {
namespace {

std::string Escape(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string Child(const std::string& ptr, std::string_view key) {
  return ptr + "/" + Escape(key);
}

std::string Child(const std::string& ptr, std::size_t index) {
  return fmt::format("{}/{}", ptr, index);
}

// Object with a closed key set.
void CheckObject(const Json& j, const std::string& ptr,
                 std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional) {
  if (!j.is_object()) throw ConfigError(ptr, "expected an object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!j.contains(k)) throw ConfigError(Child(ptr, k), "required field is missing");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError(Child(ptr, key), "unknown field");
  }
}

double Number(const Json& j, const std::string& ptr) {
  if (!j.is_number()) throw ConfigError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(ptr, "expected a finite number");
  return v;
}

double NonNegative(const Json& j, const std::string& ptr) {
  const double v = Number(j, ptr);
  if (v < 0) throw ConfigError(ptr, "must be >= 0");
  return v;
}

long Integer(const Json& j, const std::string& ptr, long min) {
  if (!j.is_number_integer()) throw ConfigError(ptr, "expected an integer");
  const long v = j.get<long>();
  if (v < min) throw ConfigError(ptr, fmt::format("must be >= {}", min));
  return v;
}

std::string String(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected a string");
  std::string v = j.get<std::string>();
  if (v.empty()) throw ConfigError(ptr, "must not be empty");
  return v;
}

const Json& Array(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array");
  return j;
}

template <typename E>
E Enum(const Json& j, const std::string& ptr,
       std::initializer_list<std::pair<const char*, E>> choices) {
  const std::string v = String(j, ptr);
  std::string names;
  for (const auto& [name, value] : choices) {
    if (v == name) return value;
    names += names.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(ptr, fmt::format("'{}' is not one of {}", v, names));
}

Timestamp Time(const Json& j, const std::string& ptr) {
  try {
    return ParseTimestamp(String(j, ptr));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ptr, e.what());
  }
}

std::vector<std::string> Names(const Json& j, const std::string& ptr) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < Array(j, ptr).size(); ++i) {
    out.push_back(String(j[i], Child(ptr, i)));
  }
  return out;
}

StateSpec ReadState(const Json& j, const std::string& ptr) {
  CheckObject(j, ptr, {"name", "role", "op_min", "op_max", "hold_min_minutes", "successors"},
              {"hold_max_minutes"});
  StateSpec s;
  s.name = String(j["name"], Child(ptr, "name"));
  s.role = Enum<StateRole>(j["role"], Child(ptr, "role"),
                           {{"idle", StateRole::kIdle},
                            {"start", StateRole::kStart},
                            {"run", StateRole::kRun}});
  s.op_min = Number(j["op_min"], Child(ptr, "op_min"));
  s.op_max = Number(j["op_max"], Child(ptr, "op_max"));
  s.hold_min = Minutes(Integer(j["hold_min_minutes"], Child(ptr, "hold_min_minutes"), 0));
  if (j.contains("hold_max_minutes") && !j["hold_max_minutes"].is_null()) {
    s.hold_max =
        Minutes(Integer(j["hold_max_minutes"], Child(ptr, "hold_max_minutes"), 0));
  }
  s.successors = Names(j["successors"], Child(ptr, "successors"));
  return s;
}

ResourceSpec ReadResource(const Json& j, const std::string& ptr) {
  CheckObject(j, ptr,
              {"name", "initial_state", "coeff_a", "coeff_b", "coeff_c", "coeff_d",
               "coeff_e", "op_min", "op_max", "states"},
              {"density_forecast"});
  ResourceSpec r;
  r.name = String(j["name"], Child(ptr, "name"));
  r.initial_state = String(j["initial_state"], Child(ptr, "initial_state"));
  r.coeff_a = Number(j["coeff_a"], Child(ptr, "coeff_a"));
  r.coeff_b = Number(j["coeff_b"], Child(ptr, "coeff_b"));
  r.coeff_c = Number(j["coeff_c"], Child(ptr, "coeff_c"));
  r.coeff_d = Number(j["coeff_d"], Child(ptr, "coeff_d"));
  r.coeff_e = Number(j["coeff_e"], Child(ptr, "coeff_e"));
  r.op_min = Number(j["op_min"], Child(ptr, "op_min"));
  r.op_max = Number(j["op_max"], Child(ptr, "op_max"));
  if (j.contains("density_forecast")) {
    r.density_forecast = String(j["density_forecast"], Child(ptr, "density_forecast"));
  }
  const std::string states = Child(ptr, "states");
  for (std::size_t i = 0; i < Array(j["states"], states).size(); ++i) {
    r.states.push_back(ReadState(j["states"][i], Child(states, i)));
  }
  if (r.states.empty()) throw ConfigError(states, "needs at least one state");
  return r;
}

StorageSpec ReadStorage(const Json& j, const std::string& ptr) {
  CheckObject(j, ptr, {"name", "unit", "soc_min", "soc_max", "soc_init"},
              {"terminal_target", "inflow_forecast"});
  StorageSpec s;
  s.name = String(j["name"], Child(ptr, "name"));
  s.unit = Enum<StorageUnit>(j["unit"], Child(ptr, "unit"),
                             {{"m3", StorageUnit::kCubicMetre},
                              {"kg", StorageUnit::kKilogram}});
  s.soc_min = Number(j["soc_min"], Child(ptr, "soc_min"));
  s.soc_max = Number(j["soc_max"], Child(ptr, "soc_max"));
  s.soc_init = Number(j["soc_init"], Child(ptr, "soc_init"));
  if (j.contains("terminal_target") && !j["terminal_target"].is_null()) {
    const std::string tp = Child(ptr, "terminal_target");
    const Json& t = j["terminal_target"];
    CheckObject(t, tp, {"value"}, {"tolerance"});
    TerminalTarget target;
    target.value = Number(t["value"], Child(tp, "value"));
    if (t.contains("tolerance")) target.tolerance = NonNegative(t["tolerance"], Child(tp, "tolerance"));
    s.terminal_target = target;
  }
  if (j.contains("inflow_forecast") && !j["inflow_forecast"].is_null()) {
    s.inflow_forecast = String(j["inflow_forecast"], Child(ptr, "inflow_forecast"));
  }
  return s;
}

ForecastSeries ReadForecast(const Json& j, const std::string& ptr,
                            const std::filesystem::path& base_dir) {
  CheckObject(j, ptr, {"unit"}, {"constant", "csv", "samples", "resolution_minutes"});
  const std::string unit = String(j["unit"], Child(ptr, "unit"));
  const int sources = int(j.contains("constant")) + int(j.contains("csv")) +
                      int(j.contains("samples"));
  if (sources != 1) {
    throw ConfigError(ptr, "exactly one of constant, csv, samples is required");
  }
  ForecastSeries out;
  if (j.contains("constant")) {
    out = ConstantForecast(NonNegative(j["constant"], Child(ptr, "constant")), unit);
  } else if (j.contains("csv")) {
    const std::filesystem::path path = base_dir / String(j["csv"], Child(ptr, "csv"));
    try {
      out = ParseForecastCsv(ReadFile(path), unit);
    } catch (const ParseError& e) {
      throw ConfigError(Child(ptr, "csv"),
                        fmt::format("{} line {}: {}", path.string(), e.line(), e.what()));
    } catch (const Error& e) {
      throw ConfigError(Child(ptr, "csv"), e.what());
    }
  } else {
    out.unit = unit;
    const std::string sp = Child(ptr, "samples");
    for (std::size_t i = 0; i < Array(j["samples"], sp).size(); ++i) {
      const std::string ip = Child(sp, i);
      const Json& s = j["samples"][i];
      CheckObject(s, ip, {"timestamp", "value"}, {});
      TimedValue v{Time(s["timestamp"], Child(ip, "timestamp")),
                   NonNegative(s["value"], Child(ip, "value"))};
      if (!out.samples.empty() && v.time <= out.samples.back().time) {
        throw ConfigError(Child(ip, "timestamp"), "timestamps must increase");
      }
      out.samples.push_back(v);
    }
    if (out.samples.empty()) throw ConfigError(sp, "needs at least one sample");
  }
  if (j.contains("resolution_minutes")) {
    out.resolution =
        Minutes(Integer(j["resolution_minutes"], Child(ptr, "resolution_minutes"), 1));
  }
  return out;
}

void ReadSolve(const Json& j, const std::string& ptr, PlantConfig& config) {
  CheckObject(j, ptr, {},
              {"gap", "time_limit_seconds", "node_limit", "node_selection",
               "tighten_holds", "elapsed_dwell_minutes"});
  if (j.contains("gap")) {
    config.solve.gap = Number(j["gap"], Child(ptr, "gap"));
    if (config.solve.gap <= 0) throw ConfigError(Child(ptr, "gap"), "must be > 0");
  }
  if (j.contains("time_limit_seconds")) {
    const double v = Number(j["time_limit_seconds"], Child(ptr, "time_limit_seconds"));
    if (v <= 0) throw ConfigError(Child(ptr, "time_limit_seconds"), "must be > 0");
    config.solve.time_limit = v;
  }
  if (j.contains("node_limit")) {
    config.solve.node_limit = Integer(j["node_limit"], Child(ptr, "node_limit"), 1);
  }
  if (j.contains("node_selection")) {
    config.solve.node_selection = Enum<NodeSelection>(
        j["node_selection"], Child(ptr, "node_selection"),
        {{"best-bound", NodeSelection::kBestBound},
         {"depth-first-until-incumbent", NodeSelection::kDepthFirstUntilIncumbent}});
  }
  if (j.contains("tighten_holds")) {
    if (!j["tighten_holds"].is_boolean()) {
      throw ConfigError(Child(ptr, "tighten_holds"), "expected a boolean");
    }
    config.build.tighten_holds = j["tighten_holds"].get<bool>();
  }
  if (j.contains("elapsed_dwell_minutes")) {
    const std::string dp = Child(ptr, "elapsed_dwell_minutes");
    const Json& d = j["elapsed_dwell_minutes"];
    if (!d.is_object()) throw ConfigError(dp, "expected an object");
    for (const auto& [name, value] : d.items()) {
      config.build.elapsed_dwell[name] = Minutes(Integer(value, Child(dp, name), 0));
    }
  }
}

void CheckForecastRefs(const PlantConfig& config) {
  auto check = [&](const std::string& key, const std::string& unit,
                   const std::string& ptr) {
    auto it = config.forecasts.find(key);
    if (it == config.forecasts.end()) {
      throw ConfigError(ptr, fmt::format("no forecast named '{}'", key));
    }
    if (it->second.unit != unit) {
      throw ConfigError(Child(Child("/forecasts", key), "unit"),
                        fmt::format("expected '{}', got '{}'", unit, it->second.unit));
    }
  };
  for (std::size_t i = 0; i < config.topology.resources.size(); ++i) {
    check(config.topology.resources[i].density_forecast, "g/l",
          Child(Child("/resources", i), "density_forecast"));
  }
  for (std::size_t i = 0; i < config.topology.storages.size(); ++i) {
    const StorageSpec& s = config.topology.storages[i];
    if (s.inflow_forecast) {
      check(*s.inflow_forecast, ToString(s.unit) + "/h",
            Child(Child("/storages", i), "inflow_forecast"));
    }
  }
}

Json StateToJson(const StateSpec& s) {
  Json j;
  j["name"] = s.name;
  j["role"] = ToString(s.role);
  j["op_min"] = s.op_min;
  j["op_max"] = s.op_max;
  j["hold_min_minutes"] = s.hold_min.count();
  j["hold_max_minutes"] = s.hold_max ? Json(s.hold_max->count()) : Json(nullptr);
  j["successors"] = s.successors;
  return j;
}

}  // namespace

Json HorizonToJson(const Horizon& horizon) {
  Json j;
  j["start"] = FormatTimestamp(horizon.start);
  j["step_minutes"] = horizon.step.count();
  j["steps"] = horizon.steps;
  return j;
}

Horizon HorizonFromJson(const Json& j) {
  CheckObject(j, "/horizon", {"start", "step_minutes", "steps"}, {});
  Horizon h;
  h.start = Time(j["start"], "/horizon/start");
  h.step = Minutes(Integer(j["step_minutes"], "/horizon/step_minutes", 1));
  h.steps = static_cast<int>(Integer(j["steps"], "/horizon/steps", 1));
  return h;
}

ForecastSet PlantConfig::ResolveForecasts(const Horizon& h) const {
  ForecastSet out;
  for (const auto& [key, series] : forecasts) out[key] = Resample(series, h);
  return out;
}

PlantConfig ParseConfig(const Json& document, const std::filesystem::path& base_dir) {
  CheckObject(document, "",
              {"horizon", "resources", "storages", "links"},
              {"description", "mutual_exclusions", "forecasts", "solve"});
  PlantConfig config;
  if (document.contains("description")) String(document["description"], "/description");
  config.horizon = HorizonFromJson(document["horizon"]);

  for (std::size_t i = 0; i < Array(document["resources"], "/resources").size(); ++i) {
    config.topology.resources.push_back(
        ReadResource(document["resources"][i], Child("/resources", i)));
  }
  for (std::size_t i = 0; i < Array(document["storages"], "/storages").size(); ++i) {
    config.topology.storages.push_back(
        ReadStorage(document["storages"][i], Child("/storages", i)));
  }
  for (std::size_t i = 0; i < Array(document["links"], "/links").size(); ++i) {
    const std::string ptr = Child("/links", i);
    const Json& l = document["links"][i];
    CheckObject(l, ptr, {"kind", "from", "to"}, {});
    config.topology.links.push_back(
        {Enum<StreamKind>(l["kind"], Child(ptr, "kind"),
                          {{"thin_sludge", StreamKind::kThinSludge},
                           {"dry_sludge", StreamKind::kDrySludge}}),
         String(l["from"], Child(ptr, "from")), String(l["to"], Child(ptr, "to"))});
  }
  if (document.contains("mutual_exclusions")) {
    const Json& m = Array(document["mutual_exclusions"], "/mutual_exclusions");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string ptr = Child("/mutual_exclusions", i);
      CheckObject(m[i], ptr, {"state", "resources"}, {});
      config.topology.mutual_exclusions.push_back(
          {String(m[i]["state"], Child(ptr, "state")),
           Names(m[i]["resources"], Child(ptr, "resources"))});
    }
  }
  if (document.contains("forecasts")) {
    const Json& f = document["forecasts"];
    if (!f.is_object()) throw ConfigError("/forecasts", "expected an object");
    for (const auto& [key, value] : f.items()) {
      config.forecasts[key] = ReadForecast(value, Child("/forecasts", key), base_dir);
    }
  }
  if (document.contains("solve")) ReadSolve(document["solve"], "/solve", config);
  CheckForecastRefs(config);

  ValidationReport report = ValidateTopology(config.topology, config.horizon);
  if (HasStructuralViolations(report)) throw InvalidTopologyError(std::move(report));
  for (const TopologyViolation& v : report) config.warnings.push_back(v.message);
  return config;
}

PlantConfig LoadConfig(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  Json document;
  try {
    document = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  return ParseConfig(document, path.parent_path());
}

Json ConfigToJson(const PlantConfig& config) {
  Json j;
  j["horizon"] = HorizonToJson(config.horizon);
  j["resources"] = Json::array();
  for (const ResourceSpec& r : config.topology.resources) {
    Json rj;
    rj["name"] = r.name;
    rj["initial_state"] = r.initial_state;
    rj["coeff_a"] = r.coeff_a;
    rj["coeff_b"] = r.coeff_b;
    rj["coeff_c"] = r.coeff_c;
    rj["coeff_d"] = r.coeff_d;
    rj["coeff_e"] = r.coeff_e;
    rj["op_min"] = r.op_min;
    rj["op_max"] = r.op_max;
    rj["density_forecast"] = r.density_forecast;
    rj["states"] = Json::array();
    for (const StateSpec& s : r.states) rj["states"].push_back(StateToJson(s));
    j["resources"].push_back(std::move(rj));
  }
  j["storages"] = Json::array();
  for (const StorageSpec& s : config.topology.storages) {
    Json sj;
    sj["name"] = s.name;
    sj["unit"] = ToString(s.unit);
    sj["soc_min"] = s.soc_min;
    sj["soc_max"] = s.soc_max;
    sj["soc_init"] = s.soc_init;
    if (s.terminal_target) {
      sj["terminal_target"] = {{"value", s.terminal_target->value},
                               {"tolerance", s.terminal_target->tolerance}};
    }
    if (s.inflow_forecast) sj["inflow_forecast"] = *s.inflow_forecast;
    j["storages"].push_back(std::move(sj));
  }
  j["links"] = Json::array();
  for (const FlowLink& l : config.topology.links) {
    j["links"].push_back({{"kind", ToString(l.kind)}, {"from", l.from}, {"to", l.to}});
  }
  j["mutual_exclusions"] = Json::array();
  for (const MutualExclusion& m : config.topology.mutual_exclusions) {
    j["mutual_exclusions"].push_back({{"state", m.state}, {"resources", m.resources}});
  }
  j["forecasts"] = Json::object();
  for (const auto& [key, f] : config.forecasts) {
    Json fj;
    fj["unit"] = f.unit;
    if (f.samples.size() == 1 && f.samples[0].time == Timestamp{} && !f.resolution) {
      fj["constant"] = f.samples[0].value;
    } else {
      fj["samples"] = Json::array();
      for (const TimedValue& v : f.samples) {
        fj["samples"].push_back(
            {{"timestamp", FormatTimestamp(v.time)}, {"value", v.value}});
      }
      if (f.resolution) fj["resolution_minutes"] = f.resolution->count();
    }
    j["forecasts"][key] = std::move(fj);
  }
  Json solve;
  solve["gap"] = config.solve.gap;
  if (config.solve.time_limit) solve["time_limit_seconds"] = *config.solve.time_limit;
  if (config.solve.node_limit) solve["node_limit"] = *config.solve.node_limit;
  solve["node_selection"] = ToString(config.solve.node_selection);
  solve["tighten_holds"] = config.build.tighten_holds;
  if (!config.build.elapsed_dwell.empty()) {
    solve["elapsed_dwell_minutes"] = Json::object();
    for (const auto& [name, d] : config.build.elapsed_dwell) {
      solve["elapsed_dwell_minutes"][name] = d.count();
    }
  }
  j["solve"] = std::move(solve);
  return j;
}

std::string ToString(NodeSelection selection) {
  return selection == NodeSelection::kBestBound ? "best-bound"
                                                : "depth-first-until-incumbent";
}

NodeSelection ParseNodeSelection(std::string_view text) {
  if (text == "best-bound") return NodeSelection::kBestBound;
  if (text == "depth-first-until-incumbent" || text == "dive") {
    return NodeSelection::kDepthFirstUntilIncumbent;
  }
  throw DomainError(fmt::format("unknown node selection '{}'", text));
}

}  // namespace flexsched
