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

// Shared test inputs, the brute-force oracle for the tiny plant, the LP
// battery and a seeded generator.

#ifndef FLEXSCHED_TESTS_FIXTURES_HPP_
#define FLEXSCHED_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flexsched/io.hpp"
#include "flexsched/milp.hpp"
#include "flexsched/model.hpp"
#include "flexsched/solver.hpp"

namespace flexsched::testing {

std::filesystem::path SourceDir();

Timestamp TrialStart();  // 2024-03-12T11:30:00+01:00

// The shipped plant configuration with the synthetic price fixture resampled
// onto `steps` steps from `start` (the configured start if absent).
struct TrialCase {
  PlantConfig config;
  std::vector<double> prices;
  ForecastSet forecasts;
};
TrialCase LoadTrial(int steps = 80, std::optional<Timestamp> start = std::nullopt);

// One Off/Start/Run resource on 60-minute steps, a pocket with 1 m3/h inflow
// and a draw of 2*op m3/h, and an ample container.
struct TinyParams {
  int steps = 10;
  std::vector<double> prices = {5, 5, 5, 5, 1, 1, 1, 1, 5, 5};
  int off_min = 2;    // steps
  int start_len = 1;  // steps, min = max
  int run_min = 2;    // steps
  int soc_min = 16;
  int soc_max = 24;
  int soc_init = 20;
  std::optional<int> target = 20;
};

Topology TinyTopology(const TinyParams& p);
Horizon TinyHorizon(const TinyParams& p);
ForecastSet TinyForecasts(const TinyParams& p);

struct OracleResult {
  bool feasible = false;
  double cost = 0.0;             // EUR
  std::vector<char> states;      // 'O', 'S', 'R'
  std::vector<double> op;
  long sequences = 0;            // state sequences passing the rules
};

// Exhaustive search over state sequences, then over op in {0, 1/2, 1} on
// every Run step. The op sub-problem has an interval (consecutive ones)
// matrix and half-integral right-hand sides, so its vertices are
// half-integral and the grid contains an optimum.
OracleResult EnumerateTiny(const TinyParams& p);

struct LpCase {
  std::string name;
  MilpInstance instance;
  LpStatus status = LpStatus::kOptimal;
  double objective = 0.0;
  std::vector<double> x;  // expected point where it is unique; else empty
};

std::vector<LpCase> LpBattery();

// SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next();
  double Uniform(double lo, double hi);
  int Int(int lo, int hi);  // inclusive
  bool Coin(double p = 0.5) { return Uniform(0, 1) < p; }

 private:
  std::uint64_t state_;
};

}  // namespace flexsched::testing

#endif  // FLEXSCHED_TESTS_FIXTURES_HPP_
