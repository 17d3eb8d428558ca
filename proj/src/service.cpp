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

#include "flexsched/service.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>

#include <fmt/format.h>

#include "flexsched/errors.hpp"

namespace flexsched {
namespace {

namespace fs = std::filesystem;

std::string Now() {
  return FormatTimestamp(
      {std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()),
       Minutes(0)});
}

Json ReadJson(const fs::path& path) { return Json::parse(ReadFile(path)); }

Json Violations(const ValidationReport& report) {
  Json out = Json::array();
  for (const TopologyViolation& v : report) {
    out.push_back({{"code", v.code}, {"message", v.message}});
  }
  return out;
}

Json Messages(const std::vector<std::string>& messages) {
  Json out = Json::array();
  for (const std::string& m : messages) out.push_back({{"message", m}});
  return out;
}

// Maps model-layer exceptions onto structured error responses.
template <typename F>
Response Handle(F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    return ErrorResponse(422, "invalid-config", e.what(),
                         Json::array({{{"pointer", e.pointer()}}}));
  } catch (const InvalidTopologyError& e) {
    return ErrorResponse(422, "invalid-topology", e.what(), Violations(e.report()));
  } catch (const SnapshotError& e) {
    return ErrorResponse(422, "invalid-snapshot", e.what(), Violations(e.report()));
  } catch (const ParseError& e) {
    return ErrorResponse(422, "parse-error", e.what(),
                         Json::array({{{"line", e.line()}}}));
  } catch (const CoverageError& e) {
    return ErrorResponse(422, "coverage", e.what(),
                         Json::array({{{"timestep", e.timestep()}}}));
  } catch (const DomainError& e) {
    return ErrorResponse(422, "domain", e.what());
  } catch (const ContractError& e) {
    return ErrorResponse(422, "contract", e.what());
  } catch (const std::invalid_argument& e) {
    return ErrorResponse(422, "parse-error", e.what());
  } catch (const nlohmann::json::exception& e) {
    return ErrorResponse(400, "bad-request", e.what());
  } catch (const std::exception& e) {
    return ErrorResponse(500, "internal", e.what());
  }
}

Json MergeObject(Json base, const Json& patch, const char* what) {
  if (!patch.is_object()) {
    throw ConfigError(std::string("/") + what, "expected an object");
  }
  if (!base.is_object()) base = Json::object();
  for (const auto& [k, v] : patch.items()) base[k] = v;
  return base;
}

PriceSeries PricesFromBody(const Json& body) {
  if (body.contains("prices_csv")) {
    if (!body["prices_csv"].is_string()) {
      throw ConfigError("/prices_csv", "expected a string");
    }
    return ParsePriceCsv(body["prices_csv"].get<std::string>());
  }
  if (body.contains("prices")) {
    // Round trip through the CSV reader for its spacing checks.
    return ParsePriceCsv(PriceCsv(PriceSeriesFromJson(body["prices"])));
  }
  throw ConfigError("/prices", "request needs prices or prices_csv");
}

Json PlantIdentity(const PlantConfig& config) {
  Json j = ConfigToJson(config);
  j.erase("horizon");
  j.erase("forecasts");
  j.erase("solve");
  for (Json& r : j["resources"]) r.erase("initial_state");
  for (Json& s : j["storages"]) s.erase("soc_init");
  return j;
}

Json SolveMeta(const PlanResult& result, const SolveOptions& options) {
  Json j = SolutionSummaryToJson(result.solution, options.gap);
  j["seconds"] = result.solution.seconds;
  j["node_selection"] = ToString(options.node_selection);
  return j;
}

}  // namespace

Response ErrorResponse(int status, std::string code, std::string message,
                       Json details) {
  return {status,
          {{"error", {{"code", std::move(code)},
                      {"message", std::move(message)},
                      {"details", std::move(details)}}}}};
}

std::string ConfigHash(const Json& config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

Json PlanRecordToJson(const PlanRecord& r) {
  Json j;
  j["plan_id"] = r.plan_id;
  j["created_at"] = r.created_at;
  j["config_hash"] = r.config_hash;
  j["parent_plan_id"] = r.parent_plan_id ? Json(*r.parent_plan_id) : Json(nullptr);
  j["config"] = r.config;
  j["prices"] = PriceSeriesToJson(r.prices);
  j["solve"] = r.solve;
  j["schedule"] = ScheduleToJson(r.schedule);
  j["acknowledgements"] = Json::array();
  for (const Acknowledgement& a : r.acknowledgements) {
    j["acknowledgements"].push_back({{"index", a.index},
                                     {"operator", a.operator_name},
                                     {"timestamp", a.timestamp},
                                     {"recorded_at", a.recorded_at}});
  }
  return j;
}

PlanRecord PlanRecordFromJson(const Json& j) {
  PlanRecord r;
  r.plan_id = j.at("plan_id").get<std::string>();
  r.created_at = j.at("created_at").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  if (!j.at("parent_plan_id").is_null()) {
    r.parent_plan_id = j.at("parent_plan_id").get<std::string>();
  }
  r.config = j.at("config");
  r.prices = PriceSeriesFromJson(j.at("prices"));
  r.solve = j.at("solve");
  r.schedule = ScheduleFromJson(j.at("schedule"));
  for (const Json& a : j.at("acknowledgements")) {
    r.acknowledgements.push_back({a.at("index").get<int>(),
                                  a.at("operator").get<std::string>(),
                                  a.at("timestamp").get<std::string>(),
                                  a.at("recorded_at").get<std::string>()});
  }
  return r;
}

PlanStore::PlanStore(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_ / "plans");
}

fs::path PlanStore::PlanPath(const std::string& plan_id) const {
  return dir_ / "plans" / (plan_id + ".json");
}

std::vector<std::string> PlanStore::PlanIds() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir_ / "plans")) {
    if (entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string PlanStore::NextPlanId() const {
  return fmt::format("plan-{:06}", PlanIds().size() + 1);
}

std::optional<PlanRecord> PlanStore::Load(const std::string& plan_id) const {
  if (plan_id.find_first_of("/\\.") != std::string::npos) return std::nullopt;
  const fs::path path = PlanPath(plan_id);
  if (!fs::exists(path)) return std::nullopt;
  return PlanRecordFromJson(ReadJson(path));
}

void PlanStore::Save(const PlanRecord& record) const {
  WriteFile(PlanPath(record.plan_id), PlanRecordToJson(record).dump(2) + "\n");
}

std::map<std::string, std::string> PlanStore::ActivePlans() const {
  const fs::path path = dir_ / "active.json";
  if (!fs::exists(path)) return {};
  return ReadJson(path).get<std::map<std::string, std::string>>();
}

std::optional<std::string> PlanStore::Active(const std::string& config_hash) const {
  const auto active = ActivePlans();
  auto it = active.find(config_hash);
  if (it == active.end()) return std::nullopt;
  return it->second;
}

void PlanStore::Activate(const std::string& config_hash,
                         const std::string& plan_id) const {
  auto active = ActivePlans();
  active[config_hash] = plan_id;
  WriteFile(dir_ / "active.json", Json(active).dump(2) + "\n");
}

std::vector<Json> PlanStore::Measurements() const {
  const fs::path path = dir_ / "measurements.json";
  if (!fs::exists(path)) return {};
  return ReadJson(path).get<std::vector<Json>>();
}

void PlanStore::AppendMeasurement(const Json& measurement) const {
  std::vector<Json> all = Measurements();
  all.push_back(measurement);
  WriteFile(dir_ / "measurements.json", Json(all).dump(2) + "\n");
}

PlanService::PlanService(ServiceOptions options)
    : options_(std::move(options)), store_(options_.state_dir) {
  worker_ = std::thread([this] { Worker(); });
}

PlanService::~PlanService() {
  {
    std::lock_guard lock(job_mutex_);
    stopping_ = true;
    cancel_ = true;
  }
  job_cv_.notify_all();
  worker_.join();
}

void PlanService::Worker() {
  while (true) {
    std::function<void()> task;
    {
      std::unique_lock lock(job_mutex_);
      job_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      task = std::move(queue_.front());
      queue_.pop_front();
      busy_ = true;
    }
    task();
    {
      std::lock_guard lock(job_mutex_);
      busy_ = false;
    }
    idle_cv_.notify_all();
  }
}

void PlanService::Drain() {
  std::unique_lock lock(job_mutex_);
  idle_cv_.wait(lock, [&] { return stopping_ || (queue_.empty() && !busy_); });
}

Json PlanService::PlanView(const PlanRecord& record) const {
  Json j = PlanRecordToJson(record);
  const auto active = store_.Active(record.config_hash);
  j["status"] = active == record.plan_id ? "active" : "superseded";
  return j;
}

Json PlanService::ActiveConfig() const {
  const auto active = store_.ActivePlans();
  if (active.size() == 1) {
    if (auto rec = store_.Load(active.begin()->second)) return rec->config;
  }
  if (options_.default_config) return *options_.default_config;
  throw ConfigError("", "no active plan and no default configuration");
}

Response PlanService::CreatePlan(const Json& body) {
  return Handle([&]() -> Response {
    if (!body.is_object()) return ErrorResponse(400, "bad-request", "expected a JSON object");
    Json doc;
    if (body.contains("config")) {
      doc = body["config"];
    } else if (options_.default_config) {
      doc = *options_.default_config;
    } else {
      throw ConfigError("/config", "request needs a config");
    }
    if (body.contains("horizon")) doc["horizon"] = body["horizon"];
    if (body.contains("forecasts")) {
      doc["forecasts"] = MergeObject(doc.value("forecasts", Json::object()),
                                     body["forecasts"], "forecasts");
    }
    if (body.contains("options")) {
      doc["solve"] = MergeObject(doc.value("solve", Json::object()), body["options"],
                                 "options");
    }
    const PlantConfig config = ParseConfig(doc, options_.config_dir);
    const PriceSeries prices = PricesFromBody(body);
    const std::vector<double> per_step = Resample(prices, config.horizon);
    PlanResult result =
        SolvePlan(config.topology, config.horizon, per_step,
                  config.ResolveForecasts(config.horizon), config.build, config.solve);
    if (result.solution.status == MilpStatus::kInfeasible) {
      std::vector<std::string> why = config.warnings;
      for (const std::string& w : result.instance.warnings) why.push_back(w);
      return ErrorResponse(422, "infeasible", "the plan has no feasible schedule",
                           Messages(why));
    }
    if (!result.schedule) {
      return ErrorResponse(422, "no-incumbent",
                           "the solver stopped before finding a schedule");
    }
    PlanRecord record;
    record.created_at = Now();
    record.config_hash = ConfigHash(PlantIdentity(config));
    record.config = ConfigToJson(config);
    record.prices = prices;
    record.solve = SolveMeta(result, config.solve);
    record.schedule = std::move(*result.schedule);
    {
      std::lock_guard lock(store_mutex_);
      record.plan_id = store_.NextPlanId();
      store_.Save(record);
      store_.Activate(record.config_hash, record.plan_id);
    }
    return {201,
            {{"plan_id", record.plan_id},
             {"status", record.solve["status"]},
             {"gap", record.solve["gap"]},
             {"objective_eur", record.solve["objective_eur"]}}};
  });
}

Response PlanService::ListPlans() {
  return Handle([&]() -> Response {
    std::lock_guard lock(store_mutex_);
    Json out = Json::array();
    for (const std::string& id : store_.PlanIds()) {
      const auto rec = store_.Load(id);
      if (!rec) continue;
      out.push_back({{"plan_id", rec->plan_id},
                     {"status", store_.Active(rec->config_hash) == rec->plan_id
                                    ? "active"
                                    : "superseded"},
                     {"created_at", rec->created_at},
                     {"config_hash", rec->config_hash},
                     {"parent_plan_id", rec->parent_plan_id ? Json(*rec->parent_plan_id)
                                                            : Json(nullptr)}});
    }
    return {200, out};
  });
}

Response PlanService::GetActivePlan() {
  return Handle([&]() -> Response {
    std::lock_guard lock(store_mutex_);
    const auto active = store_.ActivePlans();
    if (active.empty()) return ErrorResponse(404, "no-active-plan", "no plan has been solved yet");
    // Most recent activation wins when several plants are served.
    std::string latest;
    for (const auto& [hash, id] : active) latest = std::max(latest, id);
    return {200, PlanView(*store_.Load(latest))};
  });
}

Response PlanService::GetPlan(const std::string& plan_id) {
  return Handle([&]() -> Response {
    std::lock_guard lock(store_mutex_);
    const auto rec = store_.Load(plan_id);
    if (!rec) return ErrorResponse(404, "not-found", fmt::format("no plan '{}'", plan_id));
    return {200, PlanView(*rec)};
  });
}

Response PlanService::GetRecommendations(const std::string& plan_id) {
  return Handle([&]() -> Response {
    std::lock_guard lock(store_mutex_);
    const auto rec = store_.Load(plan_id);
    if (!rec) return ErrorResponse(404, "not-found", fmt::format("no plan '{}'", plan_id));
    Json out = RecommendationsToJson(ExtractRecommendations(rec->schedule));
    for (Json& r : out) r["acknowledged"] = nullptr;
    for (const Acknowledgement& a : rec->acknowledgements) {
      out[a.index]["acknowledged"] = {{"operator", a.operator_name},
                                      {"timestamp", a.timestamp}};
    }
    return {200, out};
  });
}

Response PlanService::Acknowledge(const std::string& plan_id, int index,
                                  const Json& body) {
  return Handle([&]() -> Response {
    if (!body.is_object() || !body.contains("operator") || !body["operator"].is_string() ||
        body["operator"].get<std::string>().empty()) {
      return ErrorResponse(422, "invalid-ack", "body needs a non-empty 'operator'");
    }
    std::string stamp;
    if (body.contains("timestamp")) {
      stamp = FormatTimestamp(ParseTimestamp(body["timestamp"].get<std::string>()));
    }
    std::lock_guard lock(store_mutex_);
    auto rec = store_.Load(plan_id);
    if (!rec) return ErrorResponse(404, "not-found", fmt::format("no plan '{}'", plan_id));
    const auto recs = ExtractRecommendations(rec->schedule);
    if (index < 0 || index >= static_cast<int>(recs.size())) {
      return ErrorResponse(404, "not-found",
                           fmt::format("plan '{}' has no recommendation {}", plan_id, index));
    }
    if (store_.Active(rec->config_hash) != plan_id) {
      return ErrorResponse(409, "plan-superseded",
                           fmt::format("plan '{}' is no longer active", plan_id));
    }
    for (const Acknowledgement& a : rec->acknowledgements) {
      if (a.index == index) {
        return ErrorResponse(409, "already-acknowledged",
                             fmt::format("recommendation {} was acknowledged by {}",
                                         index, a.operator_name));
      }
    }
    rec->acknowledgements.push_back(
        {index, body["operator"].get<std::string>(), stamp, Now()});
    store_.Save(*rec);
    Json out = RecommendationsToJson({recs[index]})[0];
    out["index"] = index;
    out["acknowledged"] = {{"operator", body["operator"]}, {"timestamp", stamp}};
    return {200, out};
  });
}

Response PlanService::PostMeasurement(const Json& body) {
  return Handle([&]() -> Response {
    if (!body.is_object()) return ErrorResponse(400, "bad-request", "expected a JSON object");
    const bool storage = body.contains("storage");
    if (storage == body.contains("variable")) {
      return ErrorResponse(422, "invalid-measurement",
                           "exactly one of 'storage' and 'variable' is required");
    }
    for (const char* key : {"timestamp", "value", "unit"}) {
      if (!body.contains(key)) {
        return ErrorResponse(422, "invalid-measurement",
                             fmt::format("missing field '{}'", key));
      }
    }
    if (!body["value"].is_number()) {
      return ErrorResponse(422, "invalid-measurement", "'value' must be a number");
    }
    const Timestamp at = ParseTimestamp(body["timestamp"].get<std::string>());
    const double value = body["value"].get<double>();
    const std::string unit = body["unit"].get<std::string>();
    std::string variable;
    std::lock_guard lock(store_mutex_);
    if (storage) {
      const std::string name = body["storage"].get<std::string>();
      const PlantConfig config = ParseConfig(ActiveConfig(), options_.config_dir);
      const StorageSpec* spec = config.topology.FindStorage(name);
      if (spec == nullptr) {
        return ErrorResponse(422, "unknown-storage", fmt::format("no storage '{}'", name));
      }
      if (unit != ToString(spec->unit)) {
        return ErrorResponse(422, "unit-mismatch",
                             fmt::format("storage '{}' is measured in '{}', got '{}'",
                                         name, ToString(spec->unit), unit));
      }
      if (!(value >= spec->soc_min && value <= spec->soc_max)) {
        return ErrorResponse(
            422, "soc-out-of-bounds",
            fmt::format("{}: level {} {} outside [{}, {}]", name, value, unit,
                        spec->soc_min, spec->soc_max),
            Json::array({{{"code", "soc-out-of-bounds"},
                          {"storage", name},
                          {"value", value},
                          {"soc_min", spec->soc_min},
                          {"soc_max", spec->soc_max}}}));
      }
      variable = fmt::format("soc[{}]", name);
    } else {
      variable = body["variable"].get<std::string>();
      if (variable.empty()) return ErrorResponse(422, "invalid-measurement", "empty variable");
    }
    Json m = {{"variable", variable},
              {"timestamp", FormatTimestamp(at)},
              {"value", value},
              {"unit", unit}};
    store_.AppendMeasurement(m);
    return {201, {{"accepted", true}, {"measurement", m}}};
  });
}

Response PlanService::Reoptimize(const std::string& plan_id, const Json& body) {
  return Handle([&]() -> Response {
    if (!body.is_object()) return ErrorResponse(400, "bad-request", "expected a JSON object");
    std::optional<PlanRecord> base;
    {
      std::lock_guard lock(store_mutex_);
      base = store_.Load(plan_id);
      if (!base) return ErrorResponse(404, "not-found", fmt::format("no plan '{}'", plan_id));
      if (store_.Active(base->config_hash) != plan_id) {
        return ErrorResponse(409, "plan-superseded",
                             fmt::format("plan '{}' is no longer active", plan_id));
      }
    }
    std::string job_id;
    {
      std::lock_guard lock(job_mutex_);
      job_id = fmt::format("job-{:06}", ++job_counter_);
      jobs_[job_id] = Job{};
      queue_.push_back([this, job_id, rec = std::move(*base), body] {
        RunReoptimize(job_id, rec, body);
      });
    }
    job_cv_.notify_all();
    return {202, {{"job_id", job_id}}};
  });
}

void PlanService::RunReoptimize(const std::string& job_id, const PlanRecord& base,
                                const Json& body) {
  auto finish = [&](Job job) {
    std::lock_guard lock(job_mutex_);
    jobs_[job_id] = std::move(job);
  };
  Response r = Handle([&]() -> Response {
    PlantConfig config = ParseConfig(base.config, options_.config_dir);
    if (body.contains("options")) {
      Json doc = base.config;
      doc["solve"] = MergeObject(doc.value("solve", Json::object()), body["options"],
                                 "options");
      config = ParseConfig(doc, options_.config_dir);
    }
    const Schedule& plan = base.schedule;
    const Horizon& h = plan.horizon;
    std::vector<Json> stored;
    {
      std::lock_guard lock(store_mutex_);
      stored = store_.Measurements();
    }
    Timestamp at = h.start;
    if (body.contains("at")) {
      at = ParseTimestamp(body["at"].get<std::string>());
    } else {
      for (const Json& m : stored) {
        const std::string var = m["variable"].get<std::string>();
        if (!var.starts_with("soc[")) continue;
        at = std::max(at, ParseTimestamp(m["timestamp"].get<std::string>()));
      }
    }
    const auto step = std::chrono::duration_cast<std::chrono::seconds>(h.step);
    const long offset = (at - h.start) / step;
    const int k = static_cast<int>(std::clamp<long>(offset, 0, h.steps - 1));

    Snapshot snapshot = SnapshotAt(plan, k, config.build.elapsed_dwell);
    for (const Json& m : stored) {
      const std::string var = m["variable"].get<std::string>();
      if (!var.starts_with("soc[")) continue;
      const std::string name = var.substr(4, var.size() - 5);
      if (!snapshot.socs.contains(name)) continue;
      if (ParseTimestamp(m["timestamp"].get<std::string>()) > at) continue;
      snapshot.socs[name] = m["value"].get<double>();
    }
    if (body.contains("socs") || body.contains("resources")) {
      const Snapshot overrides = SnapshotFromJson(body);
      for (const auto& [name, soc] : overrides.socs) snapshot.socs[name] = soc;
      for (const auto& [name, rs] : overrides.resources) snapshot.resources[name] = rs;
    }
    Horizon next{h.StepStart(k), h.step, h.steps - k};
    if (body.contains("steps")) next.steps = body["steps"].get<int>();
    if (next.steps < 1) throw ContractError("the new horizon needs at least one step");

    BuildOptions build = config.build;
    const Topology applied = ApplySnapshot(config.topology, snapshot, build);
    const std::vector<double> prices = Resample(base.prices, next);
    PlanResult result = SolvePlan(applied, next, prices, config.ResolveForecasts(next),
                                  build, config.solve);
    if (!result.schedule) {
      return ErrorResponse(422, ToString(result.solution.status),
                           "re-optimization produced no schedule");
    }
    PlantConfig effective = config;
    effective.topology = applied;
    effective.horizon = next;
    effective.build = build;

    PlanRecord record;
    record.created_at = Now();
    record.config_hash = base.config_hash;
    record.parent_plan_id = base.plan_id;
    record.config = ConfigToJson(effective);
    record.prices = base.prices;
    record.solve = SolveMeta(result, config.solve);
    record.solve["snapshot"] = SnapshotToJson(snapshot);
    record.schedule = std::move(*result.schedule);
    std::lock_guard lock(store_mutex_);
    if (store_.Active(base.config_hash) != base.plan_id) {
      return ErrorResponse(409, "plan-superseded",
                           "the base plan was superseded while re-optimizing");
    }
    record.plan_id = store_.NextPlanId();
    store_.Save(record);
    store_.Activate(record.config_hash, record.plan_id);
    return {201, {{"plan_id", record.plan_id}}};
  });
  if (r.status == 201) {
    finish({"done", r.body["plan_id"].get<std::string>(), std::nullopt});
  } else {
    finish({"failed", std::nullopt, r.body["error"]["message"].get<std::string>()});
  }
}

Response PlanService::GetJob(const std::string& job_id) {
  std::lock_guard lock(job_mutex_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) return ErrorResponse(404, "not-found", fmt::format("no job '{}'", job_id));
  Json j = {{"job_id", job_id}, {"status", it->second.status}};
  if (it->second.plan_id) j["plan_id"] = *it->second.plan_id;
  if (it->second.reason) j["reason"] = *it->second.reason;
  return {200, j};
}

Response PlanService::GetEvaluation(const std::string& plan_id,
                                    const std::string& labels) {
  return Handle([&]() -> Response {
    std::optional<PlanRecord> rec;
    std::vector<Json> stored;
    {
      std::lock_guard lock(store_mutex_);
      rec = store_.Load(plan_id);
      stored = store_.Measurements();
    }
    if (!rec) return ErrorResponse(404, "not-found", fmt::format("no plan '{}'", plan_id));
    std::vector<std::string> wanted;
    for (std::size_t pos = 0; pos < labels.size();) {
      std::size_t comma = labels.find(',', pos);
      if (comma == std::string::npos) comma = labels.size();
      if (comma > pos) wanted.push_back(labels.substr(pos, comma - pos));
      pos = comma + 1;
    }
    std::vector<MeasurementSeries> series;
    std::map<std::string, std::size_t> slot;
    for (const Json& m : stored) {
      const std::string var = m["variable"].get<std::string>();
      if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), var) == wanted.end()) {
        continue;
      }
      auto [it, fresh] = slot.emplace(var, series.size());
      if (fresh) series.push_back({var, {}, m["unit"].get<std::string>()});
      series[it->second].samples.push_back(
          {ParseTimestamp(m["timestamp"].get<std::string>()), m["value"].get<double>()});
    }
    for (MeasurementSeries& s : series) {
      std::stable_sort(s.samples.begin(), s.samples.end(),
                       [](const TimedValue& a, const TimedValue& b) { return a.time < b.time; });
    }
    EvaluationReport report = Evaluate(rec->schedule, series);
    for (const std::string& w : wanted) {
      if (!slot.contains(w)) report.warnings.push_back(fmt::format("no measurements for '{}'", w));
    }
    Json out = ReportToJson(report);
    out["plan_id"] = plan_id;
    return {200, out};
  });
}

}  // namespace flexsched
