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

// flexsched solve | evaluate | serve
//
// Exit codes: 0 optimal within gap (or success), 1 usage / input error,
// 2 infeasible, 3 gap not reached.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "flexsched/errors.hpp"
#include "flexsched/evaluation.hpp"
#include "flexsched/http.hpp"
#include "flexsched/io.hpp"
#include "flexsched/mps.hpp"
#include "flexsched/planning.hpp"

namespace fs = std::filesystem;
using namespace flexsched;

namespace {

constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitGapNotReached = 3;

struct SolveArgs {
  std::string config;
  std::string prices;
  std::string out;
  std::optional<double> gap;
  std::optional<double> time_limit;
  std::optional<long> node_limit;
  std::optional<std::string> node_selection;
  std::optional<std::string> start;
  std::optional<int> steps;
  bool export_mps = false;
  bool quiet = false;
};

int RunSolve(const SolveArgs& a) {
  PlantConfig config = LoadConfig(a.config);
  for (const std::string& w : config.warnings) fmt::print(stderr, "warning: {}\n", w);
  if (a.gap) config.solve.gap = *a.gap;
  if (a.time_limit) config.solve.time_limit = *a.time_limit;
  if (a.node_limit) config.solve.node_limit = *a.node_limit;
  if (a.node_selection) config.solve.node_selection = ParseNodeSelection(*a.node_selection);
  if (a.start) config.horizon.start = ParseTimestamp(*a.start);
  if (a.steps) config.horizon.steps = *a.steps;
  if (config.solve.gap <= 0) throw DomainError("--gap must be positive");

  const PriceSeries series = ParsePriceCsv(ReadFile(a.prices));
  const std::vector<double> prices = Resample(series, config.horizon);
  const ForecastSet forecasts = config.ResolveForecasts(config.horizon);

  const fs::path out(a.out);
  fs::create_directories(out);
  const MilpInstance instance =
      BuildInstance(config.topology, config.horizon, prices, forecasts, config.build);
  for (const std::string& w : instance.warnings) fmt::print(stderr, "warning: {}\n", w);
  if (a.export_mps) WriteFile(out / "instance.mps", ExportMps(instance));

  const MilpSolution solution = SolveMilp(instance, config.solve);
  Json meta = SolutionSummaryToJson(solution, config.solve.gap);
  meta["seconds"] = solution.seconds;
  meta["horizon"] = HorizonToJson(config.horizon);
  meta["binaries"] = instance.BinaryCount();
  meta["variables"] = instance.variables.size();
  meta["constraints"] = instance.constraints.size();
  WriteFile(out / "solve.json", meta.dump(2) + "\n");

  if (solution.status == MilpStatus::kInfeasible) {
    fmt::print(stderr, "infeasible: no schedule satisfies the model\n");
    for (const std::string& w : config.warnings) fmt::print(stderr, "  {}\n", w);
    for (const std::string& w : instance.warnings) fmt::print(stderr, "  {}\n", w);
    return kExitInfeasible;
  }
  if (solution.HasIncumbent()) {
    const Schedule schedule =
        ExtractSchedule(instance, solution, config.topology, config.horizon, prices);
    WriteFile(out / "schedule.json", SerializeSchedule(schedule));
    WriteFile(out / "schedule.csv", ScheduleCsv(schedule));
    WriteFile(out / "recommendations.json",
              RecommendationsToJson(ExtractRecommendations(schedule)).dump(2) + "\n");
    if (!a.quiet) {
      fmt::print("{}: cost {:.4f} EUR, gap {:.2e}, {} nodes, {:.2f} s\n",
                 ToString(solution.status), schedule.total_cost, solution.achieved_gap,
                 solution.nodes_explored, solution.seconds);
    }
  }
  if (solution.status == MilpStatus::kGapNotReached) {
    fmt::print(stderr, "gap not reached: achieved {} (requested {}){}\n",
               solution.achieved_gap, config.solve.gap,
               solution.HasIncumbent() ? "" : ", no schedule found");
    return kExitGapNotReached;
  }
  return 0;
}

int RunEvaluate(const std::string& schedule_path, const std::string& measurements_path,
                const std::string& out_dir) {
  const Schedule schedule = ParseSchedule(ReadFile(schedule_path));
  const std::vector<MeasurementSeries> measurements =
      ParseMeasurementCsv(ReadFile(measurements_path));
  const EvaluationReport report = Evaluate(schedule, measurements);
  for (const std::string& w : report.warnings) fmt::print(stderr, "warning: {}\n", w);
  const fs::path out(out_dir);
  fs::create_directories(out);
  WriteFile(out / "report.json", ReportToJson(report).dump(2) + "\n");
  WriteFile(out / "plot.csv", ReportPlotCsv(report, schedule));
  for (const VariableEvaluation& v : report.variables) {
    if (v.sparse) {
      fmt::print("{:<28} {} pointwise comparisons\n", v.variable, v.points.size());
      continue;
    }
    fmt::print("{:<28} NRMSE {:>8}  terminal deviation {:>8}\n", v.variable,
               v.nrmse ? fmt::format("{:.2f}%", *v.nrmse) : "n/a",
               v.terminal_deviation ? fmt::format("{:+.2f}%", *v.terminal_deviation)
                                    : "n/a");
  }
  const BaselineComparison& b = report.baseline;
  fmt::print("flexible {:.2f} EUR, static baseline {:.2f} EUR at {:.2f} kW, savings {:.1f}%\n",
             b.cost_flexible, b.cost_baseline, b.baseline_power_kw, b.savings_percent);
  return 0;
}

int RunServe(const std::string& config_path, std::string state_dir,
             const std::string& host, int port) {
  if (const char* env = std::getenv("FLEXSCHED_STATE_DIR"); env != nullptr && *env) {
    state_dir = env;
  }
  ServiceOptions options;
  options.state_dir = state_dir;
  if (!config_path.empty()) {
    LoadConfig(config_path);
    options.default_config = Json::parse(ReadFile(config_path));
    options.config_dir = fs::path(config_path).parent_path();
  }
  PlanService service(options);
  httplib::Server server;
  RegisterRoutes(server, service);
  if (!server.bind_to_port(host, port)) {
    fmt::print(stderr, "cannot listen on {}:{}\n", host, port);
    return kExitError;
  }
  fmt::print("serving on http://{}:{} (state in {})\n", host, port, state_dir);
  std::fflush(stdout);
  server.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal scheduling of a decanter plant against market prices"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* s = app.add_subcommand("solve", "Build and solve a plan");
  s->add_option("--config", solve.config, "Plant configuration JSON")->required();
  s->add_option("--prices", solve.prices, "Price CSV (timestamp,price_eur_mwh)")->required();
  s->add_option("--out", solve.out, "Output directory")->required();
  s->add_option("--gap", solve.gap, "Relative optimality gap");
  s->add_option("--time-limit", solve.time_limit, "Seconds");
  s->add_option("--node-limit", solve.node_limit, "Branch-and-bound nodes");
  s->add_option("--node-selection", solve.node_selection,
                "best-bound or depth-first-until-incumbent");
  s->add_option("--start", solve.start, "Override the horizon start (ISO-8601)");
  s->add_option("--steps", solve.steps, "Override the step count");
  s->add_flag("--export-mps", solve.export_mps, "Also write instance.mps");
  s->add_flag("--quiet", solve.quiet, "No summary line");

  std::string schedule_path, measurements_path, eval_out;
  CLI::App* e = app.add_subcommand("evaluate", "Compare a schedule with measurements");
  e->add_option("--schedule", schedule_path, "schedule.json")->required();
  e->add_option("--measurements", measurements_path,
                "Measurement CSV (timestamp,variable,value,unit)")
      ->required();
  e->add_option("--out", eval_out, "Output directory")->required();

  std::string serve_config, state_dir = "state", host = "127.0.0.1";
  int port = 8080;
  CLI::App* v = app.add_subcommand("serve", "Run the HTTP service");
  v->add_option("--config", serve_config, "Default plant configuration");
  v->add_option("--state-dir", state_dir, "Plan store (FLEXSCHED_STATE_DIR overrides)");
  v->add_option("--host", host);
  v->add_option("--port", port);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex) == 0 ? 0 : kExitError;
  }
  try {
    if (*s) return RunSolve(solve);
    if (*e) return RunEvaluate(schedule_path, measurements_path, eval_out);
    return RunServe(serve_config, state_dir, host, port);
  } catch (const ParseError& ex) {
    fmt::print(stderr, "error: line {}: {}\n", ex.line(), ex.what());
  } catch (const std::exception& ex) {
    fmt::print(stderr, "error: {}\n", ex.what());
  }
  return kExitError;
}
