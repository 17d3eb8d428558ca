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

#include <fmt/format.h>

#include "flexsched/errors.hpp"
#include "flexsched/io.hpp"

namespace flexsched {
namespace {

Json Nullable(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

Json Nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string Cell(double v) { return std::isnan(v) ? "" : fmt::format("{}", v); }

std::vector<double> Doubles(const Json& j, std::size_t length, const char* what) {
  std::vector<double> out = j.get<std::vector<double>>();
  if (out.size() != length) {
    throw ParseError(fmt::format("'{}' has {} values, expected {}", what, out.size(),
                                 length),
                     0);
  }
  return out;
}

template <typename F>
auto Guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

}  // namespace

Json ScheduleToJson(const Schedule& s) {
  Json j;
  j["horizon"] = HorizonToJson(s.horizon);
  j["total_cost_eur"] = s.total_cost;
  j["prices_eur_mwh"] = s.prices;
  j["p_system_kw"] = s.p_system;
  j["resources"] = Json::array();
  for (const ResourceTrack& r : s.resources) {
    Json rj;
    rj["name"] = r.name;
    rj["state"] = r.state;
    rj["op"] = r.op;
    rj["p_el_kw"] = r.p_el;
    rj["p_ds_m3h"] = r.p_ds;
    rj["p_ts_kgh"] = r.p_ts;
    j["resources"].push_back(std::move(rj));
  }
  j["storages"] = Json::array();
  for (const StorageTrack& st : s.storages) {
    j["storages"].push_back(
        {{"name", st.name}, {"unit", ToString(st.unit)}, {"soc", st.soc}});
  }
  return j;
}

Schedule ScheduleFromJson(const Json& j) {
  return Guarded([&] {
    Schedule s;
    const Json& h = j.at("horizon");
    s.horizon.start = ParseTimestamp(h.at("start").get<std::string>());
    s.horizon.step = Minutes(h.at("step_minutes").get<int>());
    s.horizon.steps = h.at("steps").get<int>();
    if (s.horizon.steps < 1 || s.horizon.step.count() < 1) {
      throw ParseError("invalid horizon", 0);
    }
    const std::size_t T = s.horizon.steps;
    s.total_cost = j.at("total_cost_eur").get<double>();
    s.prices = Doubles(j.at("prices_eur_mwh"), T, "prices_eur_mwh");
    s.p_system = Doubles(j.at("p_system_kw"), T, "p_system_kw");
    for (const Json& rj : j.at("resources")) {
      ResourceTrack r;
      r.name = rj.at("name").get<std::string>();
      r.state = rj.at("state").get<std::vector<std::string>>();
      if (r.state.size() != T) throw ParseError("'state' length mismatch", 0);
      r.op = Doubles(rj.at("op"), T, "op");
      r.p_el = Doubles(rj.at("p_el_kw"), T, "p_el_kw");
      r.p_ds = Doubles(rj.at("p_ds_m3h"), T, "p_ds_m3h");
      r.p_ts = Doubles(rj.at("p_ts_kgh"), T, "p_ts_kgh");
      s.resources.push_back(std::move(r));
    }
    for (const Json& sj : j.at("storages")) {
      StorageTrack st;
      st.name = sj.at("name").get<std::string>();
      const std::string unit = sj.at("unit").get<std::string>();
      if (unit != "m3" && unit != "kg") {
        throw ParseError(fmt::format("unknown storage unit '{}'", unit), 0);
      }
      st.unit = unit == "m3" ? StorageUnit::kCubicMetre : StorageUnit::kKilogram;
      st.soc = Doubles(sj.at("soc"), T, "soc");
      s.storages.push_back(std::move(st));
    }
    return s;
  });
}

std::string SerializeSchedule(const Schedule& schedule) {
  return ScheduleToJson(schedule).dump(2) + "\n";
}

Schedule ParseSchedule(std::string_view text) {
  return Guarded([&] { return ScheduleFromJson(Json::parse(text)); });
}

std::string ScheduleCsv(const Schedule& s) {
  std::string out = "timestamp,price_eur_mwh,p_system";
  for (const ResourceTrack& r : s.resources) {
    for (const char* kind : {"state", "op", "p_el", "p_ds", "p_ts"}) {
      out += fmt::format(",{}[{}]", kind, r.name);
    }
  }
  for (const StorageTrack& st : s.storages) out += fmt::format(",soc[{}]", st.name);
  out += '\n';
  for (int t = 0; t < s.horizon.steps; ++t) {
    out += fmt::format("{},{},{}", FormatTimestamp(s.horizon.StepStart(t)),
                       s.prices[t], s.p_system[t]);
    for (const ResourceTrack& r : s.resources) {
      out += fmt::format(",{},{},{},{},{}", r.state[t], r.op[t], r.p_el[t], r.p_ds[t],
                         r.p_ts[t]);
    }
    for (const StorageTrack& st : s.storages) out += fmt::format(",{}", st.soc[t]);
    out += '\n';
  }
  return out;
}

Json PriceSeriesToJson(const PriceSeries& series) {
  Json j;
  j["resolution_minutes"] = series.resolution.count();
  j["samples"] = Json::array();
  for (const TimedValue& v : series.samples) {
    j["samples"].push_back({{"timestamp", FormatTimestamp(v.time)}, {"value", v.value}});
  }
  return j;
}

PriceSeries PriceSeriesFromJson(const Json& j) {
  return Guarded([&] {
    PriceSeries out;
    out.resolution = Minutes(j.at("resolution_minutes").get<int>());
    for (const Json& v : j.at("samples")) {
      out.samples.push_back({ParseTimestamp(v.at("timestamp").get<std::string>()),
                             v.at("value").get<double>()});
    }
    return out;
  });
}

Json MeasurementToJson(const MeasurementSeries& series) {
  Json j;
  j["variable"] = series.variable;
  j["unit"] = series.unit;
  j["samples"] = Json::array();
  for (const TimedValue& v : series.samples) {
    j["samples"].push_back({{"timestamp", FormatTimestamp(v.time)}, {"value", v.value}});
  }
  return j;
}

MeasurementSeries MeasurementFromJson(const Json& j) {
  return Guarded([&] {
    MeasurementSeries out;
    out.variable = j.at("variable").get<std::string>();
    out.unit = j.at("unit").get<std::string>();
    for (const Json& v : j.at("samples")) {
      out.samples.push_back({ParseTimestamp(v.at("timestamp").get<std::string>()),
                             v.at("value").get<double>()});
    }
    return out;
  });
}

Json RecommendationsToJson(const std::vector<Recommendation>& recs) {
  Json out = Json::array();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const Recommendation& r = recs[i];
    Json j;
    j["index"] = i;
    j["due_time"] = FormatTimestamp(r.due_time);
    j["step"] = r.step;
    j["resource"] = r.resource;
    j["action"] = ToString(r.action);
    j["state"] = r.state;
    j["op"] = r.op;
    j["display_text"] = r.display_text;
    out.push_back(std::move(j));
  }
  return out;
}

Json SnapshotToJson(const Snapshot& snapshot) {
  Json j;
  j["time"] = FormatTimestamp(snapshot.time);
  j["resources"] = Json::object();
  for (const auto& [name, rs] : snapshot.resources) {
    j["resources"][name] = {
        {"state", rs.state},
        {"elapsed_dwell_minutes",
         rs.elapsed_dwell ? Json(rs.elapsed_dwell->count()) : Json(nullptr)}};
  }
  j["socs"] = Json::object();
  for (const auto& [name, soc] : snapshot.socs) j["socs"][name] = soc;
  return j;
}

Snapshot SnapshotFromJson(const Json& j) {
  return Guarded([&] {
    Snapshot out;
    if (j.contains("time")) out.time = ParseTimestamp(j.at("time").get<std::string>());
    if (j.contains("resources")) {
      for (const auto& [name, rj] : j.at("resources").items()) {
        ResourceSnapshot rs;
        rs.state = rj.at("state").get<std::string>();
        if (rj.contains("elapsed_dwell_minutes") &&
            !rj.at("elapsed_dwell_minutes").is_null()) {
          rs.elapsed_dwell = Minutes(rj.at("elapsed_dwell_minutes").get<long>());
        }
        out.resources.emplace(name, std::move(rs));
      }
    }
    if (j.contains("socs")) {
      for (const auto& [name, v] : j.at("socs").items()) {
        out.socs.emplace(name, v.get<double>());
      }
    }
    return out;
  });
}

Json SolutionSummaryToJson(const MilpSolution& solution, double requested_gap) {
  Json j;
  j["status"] = ToString(solution.status);
  j["objective_eur"] = solution.HasIncumbent() ? Json(solution.objective) : Json(nullptr);
  j["best_bound_eur"] = solution.best_bound;
  j["gap"] = std::isfinite(solution.achieved_gap) ? Json(solution.achieved_gap)
                                                  : Json(nullptr);
  j["requested_gap"] = requested_gap;
  j["nodes"] = solution.nodes_explored;
  j["lp_iterations"] = solution.lp_iterations;
  return j;
}

Json ReportToJson(const EvaluationReport& report) {
  Json j;
  const BaselineComparison& b = report.baseline;
  j["baseline"] = {{"baseline_power_kw", b.baseline_power_kw},
                   {"cost_baseline_eur", b.cost_baseline},
                   {"cost_flexible_eur", b.cost_flexible},
                   {"savings_percent", b.savings_percent},
                   {"savings_defined", b.savings_defined}};
  j["variables"] = Json::array();
  for (const VariableEvaluation& v : report.variables) {
    Json vj;
    vj["variable"] = v.variable;
    vj["unit"] = v.unit;
    vj["sparse"] = v.sparse;
    vj["nrmse_percent"] = Nullable(v.nrmse);
    vj["terminal_deviation_percent"] = Nullable(v.terminal_deviation);
    Json dev = Json::array();
    for (double d : v.deviation) dev.push_back(Nullable(d));
    vj["cumulative_deviation_percent"] = std::move(dev);
    vj["points"] = Json::array();
    for (const PointComparison& p : v.points) {
      vj["points"].push_back({{"timestamp", FormatTimestamp(p.time)},
                              {"step", p.step},
                              {"planned", p.planned},
                              {"measured", p.measured},
                              {"difference", p.difference}});
    }
    j["variables"].push_back(std::move(vj));
  }
  j["warnings"] = report.warnings;
  return j;
}

std::string ReportPlotCsv(const EvaluationReport& report, const Schedule& schedule) {
  std::string out =
      "variable,timestamp,step,planned,measured,cumulative_deviation_percent\n";
  for (const VariableEvaluation& v : report.variables) {
    const std::vector<double>* plan = schedule.Series(v.variable);
    if (plan == nullptr) continue;
    if (v.sparse) {
      for (const PointComparison& p : v.points) {
        out += fmt::format("{},{},{},{},{},\n", v.variable, FormatTimestamp(p.time),
                           p.step, p.planned, p.measured);
      }
      continue;
    }
    for (std::size_t t = 0; t < v.measured.size(); ++t) {
      out += fmt::format("{},{},{},{},{},{}\n", v.variable,
                         FormatTimestamp(schedule.horizon.StepStart(static_cast<int>(t))),
                         t, (*plan)[t], v.measured[t], Cell(v.deviation[t]));
    }
  }
  return out;
}

}  // namespace flexsched
