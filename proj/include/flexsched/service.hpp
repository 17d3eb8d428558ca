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

// Plan store and the transport-independent request handlers behind the
// HTTP service.
//
// State directory layout:
//   plans/<plan id>.json   one PlanRecord each, written once, acks appended
//   active.json            {config hash: plan id}
//   measurements.json      every accepted measurement, in arrival order

#ifndef FLEXSCHED_SERVICE_HPP_
#define FLEXSCHED_SERVICE_HPP_

#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "flexsched/io.hpp"

namespace flexsched {

struct Acknowledgement {
  int index = 0;
  std::string operator_name;
  std::string timestamp;  // as given by the operator
  std::string recorded_at;
};

struct PlanRecord {
  std::string plan_id;
  std::string created_at;
  std::string config_hash;  // plant identity, inherited by re-optimized plans
  std::optional<std::string> parent_plan_id;
  Json config;              // effective configuration document
  PriceSeries prices;
  Json solve;               // SolutionSummaryToJson plus wall time
  Schedule schedule;
  std::vector<Acknowledgement> acknowledgements;
};

Json PlanRecordToJson(const PlanRecord& record);
PlanRecord PlanRecordFromJson(const Json& j);

// FNV-1a over the compact dump, as 16 hex digits.
std::string ConfigHash(const Json& config);

class PlanStore {
 public:
  explicit PlanStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  std::string NextPlanId() const;
  std::optional<PlanRecord> Load(const std::string& plan_id) const;
  void Save(const PlanRecord& record) const;
  std::vector<std::string> PlanIds() const;

  std::map<std::string, std::string> ActivePlans() const;
  std::optional<std::string> Active(const std::string& config_hash) const;
  // Points `config_hash` at `plan_id` with one rename.
  void Activate(const std::string& config_hash, const std::string& plan_id) const;

  std::vector<Json> Measurements() const;
  void AppendMeasurement(const Json& measurement) const;

 private:
  std::filesystem::path PlanPath(const std::string& plan_id) const;

  std::filesystem::path dir_;
};

struct Response {
  int status = 200;
  Json body;
};

Response ErrorResponse(int status, std::string code, std::string message,
                       Json details = Json::array());

struct ServiceOptions {
  std::filesystem::path state_dir;
  std::optional<Json> default_config;  // used when a request has none
  std::filesystem::path config_dir;    // base for CSV forecast paths
};

// Thread-safe. Mutations of the store are serialized; solves run outside the
// lock, re-optimizations on one background worker.
class PlanService {
 public:
  explicit PlanService(ServiceOptions options);
  ~PlanService();
  PlanService(const PlanService&) = delete;
  PlanService& operator=(const PlanService&) = delete;

  Response CreatePlan(const Json& body);
  Response ListPlans();
  Response GetActivePlan();
  Response GetPlan(const std::string& plan_id);
  Response GetRecommendations(const std::string& plan_id);
  Response Acknowledge(const std::string& plan_id, int index, const Json& body);
  Response PostMeasurement(const Json& body);
  Response Reoptimize(const std::string& plan_id, const Json& body);
  Response GetJob(const std::string& job_id);
  // `labels`: empty for every stored measurement, else a comma-separated
  // list of series labels.
  Response GetEvaluation(const std::string& plan_id, const std::string& labels);

  // Blocks until the job queue is empty.
  void Drain();

 private:
  struct Job {
    std::string status = "pending";
    std::optional<std::string> plan_id;
    std::optional<std::string> reason;
  };

  Json PlanView(const PlanRecord& record) const;
  Json ActiveConfig() const;
  void RunReoptimize(const std::string& job_id, const PlanRecord& base,
                     const Json& body);
  void Worker();

  ServiceOptions options_;
  PlanStore store_;
  mutable std::mutex store_mutex_;

  std::mutex job_mutex_;
  std::condition_variable job_cv_;
  std::condition_variable idle_cv_;
  std::deque<std::function<void()>> queue_;
  std::map<std::string, Job> jobs_;
  int job_counter_ = 0;
  bool busy_ = false;
  bool stopping_ = false;
  std::atomic<bool> cancel_{false};
  std::thread worker_;
};

}  // namespace flexsched

#endif  // FLEXSCHED_SERVICE_HPP_
