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

// File formats: price and measurement CSV, the plant configuration document,
// schedule / report / snapshot JSON and CSV.
//
// CSV dialect everywhere: comma separated, UTF-8, LF line endings, decimal
// point, header row first.

#ifndef FLEXSCHED_IO_HPP_
#define FLEXSCHED_IO_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "flexsched/builder.hpp"
#include "flexsched/evaluation.hpp"
#include "flexsched/model.hpp"
#include "flexsched/planning.hpp"
#include "flexsched/schedule.hpp"
#include "flexsched/solver.hpp"

namespace flexsched {

using Json = nlohmann::ordered_json;

std::string ReadFile(const std::filesystem::path& path);  // throws Error
// Writes to a sibling temporary and renames over `path`.
void WriteFile(const std::filesystem::path& path, std::string_view content);

// Header "timestamp,price_eur_mwh". Resolution is the spacing of the first two
// rows. ParseError lines are file lines (header = 1).
PriceSeries ParsePriceCsv(std::string_view text);
std::string PriceCsv(const PriceSeries& series);

// Header "timestamp,variable,value,unit"; one series per variable in order of
// first appearance. No spacing requirement.
std::vector<MeasurementSeries> ParseMeasurementCsv(std::string_view text);
std::string MeasurementCsv(const std::vector<MeasurementSeries>& series);

// Header "timestamp,value".
ForecastSeries ParseForecastCsv(std::string_view text, std::string unit);

struct PlantConfig {
  Topology topology;
  Horizon horizon;
  std::map<std::string, ForecastSeries> forecasts;
  BuildOptions build;
  SolveOptions solve;
  std::vector<std::string> warnings;  // non-structural topology findings

  ForecastSet ResolveForecasts(const Horizon& horizon) const;
};

// Checks the document against the configuration schema (unknown fields are
// errors; ConfigError carries a JSON pointer), resolves CSV forecast paths
// against `base_dir`, then validates the topology and throws
// InvalidTopologyError on structural violations.
PlantConfig ParseConfig(const Json& document,
                        const std::filesystem::path& base_dir = {});
PlantConfig LoadConfig(const std::filesystem::path& path);
// CSV-backed forecasts are written inline.
Json ConfigToJson(const PlantConfig& config);

Json HorizonToJson(const Horizon& horizon);
Horizon HorizonFromJson(const Json& j);

Json ScheduleToJson(const Schedule& schedule);
Schedule ScheduleFromJson(const Json& j);
std::string SerializeSchedule(const Schedule& schedule);  // JSON text
Schedule ParseSchedule(std::string_view text);
// One row per step: timestamp, price, p_system, then per resource state, op,
// p_el, p_ds, p_ts, then per storage soc. Columns named by series label.
std::string ScheduleCsv(const Schedule& schedule);

Json PriceSeriesToJson(const PriceSeries& series);
PriceSeries PriceSeriesFromJson(const Json& j);
Json MeasurementToJson(const MeasurementSeries& series);
MeasurementSeries MeasurementFromJson(const Json& j);

Json RecommendationsToJson(const std::vector<Recommendation>& recs);

Json SnapshotToJson(const Snapshot& snapshot);
Snapshot SnapshotFromJson(const Json& j);

Json SolutionSummaryToJson(const MilpSolution& solution, double requested_gap);

Json ReportToJson(const EvaluationReport& report);
// variable,timestamp,step,planned,measured,cumulative_deviation_percent
std::string ReportPlotCsv(const EvaluationReport& report, const Schedule& schedule);

std::string ToString(NodeSelection selection);
NodeSelection ParseNodeSelection(std::string_view text);  // throws DomainError

}  // namespace flexsched

#endif  // FLEXSCHED_IO_HPP_
