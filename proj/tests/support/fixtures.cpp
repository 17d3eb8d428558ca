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

#include "fixtures.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace flexsched::testing {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The plant coefficients, restated here so the oracle shares no code with the
// library.
constexpr double kA = 22.356;
constexpr double kB = 8.464;
constexpr double kC = 0.0182;
constexpr double kD = 21.366;
constexpr double kDensity = 30.0;

char Next(char s) { return s == 'O' ? 'S' : s == 'S' ? 'R' : 'O'; }

// Minimum op cost for a fixed state sequence by dynamic programming over the
// integral storage level; op in {0, 1/2, 1} changes the level by 1, 0, -1.
bool BestOps(const TinyParams& p, const std::vector<char>& states, double& cost,
             std::vector<double>& ops) {
  const int T = p.steps;
  const int levels = p.soc_max - p.soc_min + 1;
  std::vector<std::vector<double>> best(T, std::vector<double>(levels, kInf));
  std::vector<std::vector<int>> choice(T, std::vector<int>(levels, -1));
  if (p.soc_init < p.soc_min || p.soc_init > p.soc_max) return false;
  auto op_cost = [&](int t, int half) { return p.prices[t] / 1000.0 * kB * half / 2.0; };
  // Step 0 carries no balance row; its op only costs.
  double c0 = 0.0;
  int h0 = 0;
  if (states[0] == 'R' && op_cost(0, 2) < 0) {
    c0 = op_cost(0, 2);
    h0 = 2;
  }
  best[0][p.soc_init - p.soc_min] = c0;
  choice[0][p.soc_init - p.soc_min] = h0;
  for (int t = 1; t < T; ++t) {
    for (int l = 0; l < levels; ++l) {
      if (best[t - 1][l] == kInf) continue;
      const int max_half = states[t] == 'R' ? 2 : 0;
      for (int half = 0; half <= max_half; ++half) {
        const int next = l + 1 - half;
        if (next < 0 || next >= levels) continue;
        const double c = best[t - 1][l] + op_cost(t, half);
        if (c < best[t][next]) {
          best[t][next] = c;
          choice[t][next] = half;
        }
      }
    }
  }
  int end = -1;
  if (p.target) {
    end = *p.target - p.soc_min;
    if (end < 0 || end >= levels || best[T - 1][end] == kInf) return false;
  } else {
    for (int l = 0; l < levels; ++l) {
      if (best[T - 1][l] < kInf && (end < 0 || best[T - 1][l] < best[T - 1][end])) end = l;
    }
    if (end < 0) return false;
  }
  cost = best[T - 1][end];
  ops.assign(T, 0.0);
  int l = end;
  for (int t = T - 1; t >= 1; --t) {
    const int half = choice[t][l];
    ops[t] = half / 2.0;
    l = l - 1 + half;
  }
  ops[0] = h0 / 2.0;
  return true;
}

}  // namespace

std::filesystem::path SourceDir() { return FLEXSCHED_SOURCE_DIR; }

Timestamp TrialStart() { return ParseTimestamp("2024-03-12T11:30:00+01:00"); }

TrialCase LoadTrial(int steps, std::optional<Timestamp> start) {
  TrialCase out;
  out.config = LoadConfig(SourceDir() / "config" / "default_plant.json");
  out.config.horizon.steps = steps;
  if (start) out.config.horizon.start = *start;
  const PriceSeries prices =
      ParsePriceCsv(ReadFile(SourceDir() / "fixtures" / "synthetic_trial_prices.csv"));
  out.prices = Resample(prices, out.config.horizon);
  out.forecasts = out.config.ResolveForecasts(out.config.horizon);
  return out;
}

Topology TinyTopology(const TinyParams& p) {
  ResourceSpec r;
  r.name = "unit";
  r.coeff_a = kA;
  r.coeff_b = kB;
  r.coeff_c = kC;
  r.coeff_d = kD;
  r.coeff_e = 2.0;
  r.op_min = 0.0;
  r.op_max = 1.0;
  r.initial_state = "Off";
  r.states = {
      {"Off", StateRole::kIdle, 0, 0, Minutes(60 * p.off_min), std::nullopt, {"Start"}},
      {"Start", StateRole::kStart, 0, 0, Minutes(60 * p.start_len),
       Minutes(60 * p.start_len), {"Run"}},
      {"Run", StateRole::kRun, 0, 1, Minutes(60 * p.run_min), std::nullopt, {"Off"}},
  };
  StorageSpec pocket;
  pocket.name = "pocket";
  pocket.unit = StorageUnit::kCubicMetre;
  pocket.soc_min = p.soc_min;
  pocket.soc_max = p.soc_max;
  pocket.soc_init = p.soc_init;
  if (p.target) pocket.terminal_target = TerminalTarget{double(*p.target), 0.0};
  pocket.inflow_forecast = "inflow";
  StorageSpec bin;
  bin.name = "bin";
  bin.unit = StorageUnit::kKilogram;
  bin.soc_max = 1e6;
  Topology t;
  t.resources = {r};
  t.storages = {pocket, bin};
  t.links = {{StreamKind::kThinSludge, "pocket", "unit"},
             {StreamKind::kDrySludge, "unit", "bin"}};
  return t;
}

Horizon TinyHorizon(const TinyParams& p) {
  return Horizon{TrialStart(), Minutes(60), p.steps};
}

ForecastSet TinyForecasts(const TinyParams& p) {
  return {{"density", std::vector<double>(p.steps, kDensity)},
          {"inflow", std::vector<double>(p.steps, 1.0)}};
}

OracleResult EnumerateTiny(const TinyParams& p) {
  const int T = p.steps;
  OracleResult out;
  std::vector<char> seq(T);
  auto min_len = [&](char s) { return s == 'O' ? p.off_min : s == 'S' ? p.start_len : p.run_min; };
  auto max_len = [&](char s) { return s == 'S' ? p.start_len : T + 1; };

  // `first`: the episode holding step 0 is exempt from its minimum.
  std::function<void(int, int, bool)> extend = [&](int t, int run, bool first) {
    if (t == T) {
      ++out.sequences;
      double fixed = 0.0;
      for (int i = 0; i < T; ++i) {
        const double on = seq[i] == 'R' ? kA + kC * kDensity : seq[i] == 'S' ? kD : 0.0;
        fixed += p.prices[i] / 1000.0 * on;
      }
      double ops_cost = 0.0;
      std::vector<double> ops;
      if (!BestOps(p, seq, ops_cost, ops)) return;
      if (!out.feasible || fixed + ops_cost < out.cost - 1e-12) {
        out.feasible = true;
        out.cost = fixed + ops_cost;
        out.states = seq;
        out.op = ops;
      }
      return;
    }
    const char cur = seq[t - 1];
    if (run + 1 <= max_len(cur)) {
      seq[t] = cur;
      extend(t + 1, run + 1, first);
    }
    if (first || run >= min_len(cur)) {
      seq[t] = Next(cur);
      extend(t + 1, 1, false);
    }
  };
  seq[0] = 'O';
  extend(1, 1, true);
  return out;
}

std::vector<LpCase> LpBattery() {
  std::vector<LpCase> out;
  auto lp = [&](std::string name) -> LpCase& {
    out.push_back({});
    out.back().name = std::move(name);
    return out.back();
  };
  auto var = [](LpCase& c, const char* tag, double lo, double hi) {
    return c.instance.AddVariable(tag, VarKind::kContinuous, lo, hi);
  };
  auto row = [](LpCase& c, std::vector<Term> terms, Sense s, double rhs) {
    c.instance.AddConstraint(std::move(terms), s, rhs,
                             "r" + std::to_string(c.instance.constraints.size()),
                             RowFamily::kOther);
  };

  {
    // The optimum is every point of the facet x + y = 1.
    LpCase& c = lp("facet");
    const int x = var(c, "x", 0, 1), y = var(c, "y", 0, 1);
    row(c, {{x, 1}, {y, 1}}, Sense::kLessEqual, 1);
    c.instance.objective = {{x, -1}, {y, -1}};
    c.objective = -1;
  }
  {
    LpCase& c = lp("single-variable");
    const int x = var(c, "x", 0, 10);
    row(c, {{x, 1}}, Sense::kGreaterEqual, 3);
    c.instance.objective = {{x, 1}};
    c.objective = 3;
    c.x = {3};
  }
  {
    // max x + 2y, x + y <= 4, x <= 3, y <= 2: y at its bound, x = 2.
    LpCase& c = lp("bounded-variables");
    const int x = var(c, "x", 0, 3), y = var(c, "y", 0, 2);
    row(c, {{x, 1}, {y, 1}}, Sense::kLessEqual, 4);
    c.instance.objective = {{x, -1}, {y, -2}};
    c.objective = -6;
    c.x = {2, 2};
  }
  {
    // Three constraints meet at (1, 1).
    LpCase& c = lp("degenerate-vertex");
    const int x = var(c, "x", 0, kInf), y = var(c, "y", 0, kInf);
    row(c, {{x, 1}}, Sense::kLessEqual, 1);
    row(c, {{y, 1}}, Sense::kLessEqual, 1);
    row(c, {{x, 1}, {y, 1}}, Sense::kLessEqual, 2);
    c.instance.objective = {{x, -1}, {y, -1}};
    c.objective = -2;
    c.x = {1, 1};
  }
  {
    // Klee-Minty cube in three dimensions: optimum at (0, 0, 10^4).
    LpCase& c = lp("klee-minty-3");
    const int x1 = var(c, "x1", 0, kInf), x2 = var(c, "x2", 0, kInf),
              x3 = var(c, "x3", 0, kInf);
    row(c, {{x1, 1}}, Sense::kLessEqual, 1);
    row(c, {{x1, 20}, {x2, 1}}, Sense::kLessEqual, 100);
    row(c, {{x1, 200}, {x2, 20}, {x3, 1}}, Sense::kLessEqual, 10000);
    c.instance.objective = {{x1, -100}, {x2, -10}, {x3, -1}};
    c.objective = -10000;
    c.x = {0, 0, 10000};
  }
  {
    // x + y = 5, x - y = 1 pins (3, 2).
    LpCase& c = lp("equalities");
    const int x = var(c, "x", -10, 10), y = var(c, "y", -10, 10);
    row(c, {{x, 1}, {y, 1}}, Sense::kEqual, 5);
    row(c, {{x, 1}, {y, -1}}, Sense::kEqual, 1);
    c.instance.objective = {{x, 2}, {y, 3}};
    c.objective = 12;
    c.x = {3, 2};
  }
  {
    // x + 2y >= 4 and 3x + y >= 6 cross at (8/5, 6/5).
    LpCase& c = lp("covering");
    const int x = var(c, "x", 0, 100), y = var(c, "y", 0, 100);
    row(c, {{x, 1}, {y, 2}}, Sense::kGreaterEqual, 4);
    row(c, {{x, 3}, {y, 1}}, Sense::kGreaterEqual, 6);
    c.instance.objective = {{x, 1}, {y, 1}};
    c.objective = 2.8;
    c.x = {1.6, 1.2};
  }
  {
    LpCase& c = lp("infeasible");
    const int x = var(c, "x", 0, 1), y = var(c, "y", 0, 1);
    row(c, {{x, 1}, {y, 1}}, Sense::kGreaterEqual, 3);
    c.instance.objective = {{x, 1}};
    c.status = LpStatus::kInfeasible;
  }
  {
    LpCase& c = lp("unbounded");
    const int x = var(c, "x", 0, kInf), y = var(c, "y", 0, kInf);
    row(c, {{x, 1}, {y, -1}}, Sense::kLessEqual, 1);
    c.instance.objective = {{x, -1}};
    c.status = LpStatus::kUnbounded;
  }
  {
    // x >= -2 - y with y <= 1 gives x = -3.
    LpCase& c = lp("negative-bounds");
    const int x = var(c, "x", -5, 5), y = var(c, "y", 0, 1);
    row(c, {{x, 1}, {y, 1}}, Sense::kGreaterEqual, -2);
    c.instance.objective = {{x, 1}};
    c.objective = -3;
    c.x = {-3, 1};
  }
  {
    // Beale's cycling example; optimum -5/4 at x4 = x6 = 1.
    LpCase& c = lp("beale-cycling");
    const int x4 = var(c, "x4", 0, kInf), x5 = var(c, "x5", 0, kInf),
              x6 = var(c, "x6", 0, kInf), x7 = var(c, "x7", 0, kInf);
    row(c, {{x4, 0.25}, {x5, -8}, {x6, -1}, {x7, 9}}, Sense::kLessEqual, 0);
    row(c, {{x4, 0.5}, {x5, -12}, {x6, -0.5}, {x7, 3}}, Sense::kLessEqual, 0);
    row(c, {{x6, 1}}, Sense::kLessEqual, 1);
    c.instance.objective = {{x4, -0.75}, {x5, 20}, {x6, -0.5}, {x7, 6}};
    c.objective = -1.25;
    c.x = {1, 0, 1, 0};
  }
  {
    // x fixed at 2 by its bounds, so y >= 1.
    LpCase& c = lp("fixed-variable");
    const int x = var(c, "x", 2, 2), y = var(c, "y", 0, 10);
    row(c, {{y, 1}, {x, -1}}, Sense::kGreaterEqual, -1);
    c.instance.objective = {{x, 1}, {y, 1}};
    c.objective = 3;
    c.x = {2, 1};
  }
  {
    // The second row repeats the first.
    LpCase& c = lp("redundant-equalities");
    const int x = var(c, "x", 0, 2), y = var(c, "y", 0, 2);
    row(c, {{x, 1}, {y, 1}}, Sense::kEqual, 2);
    row(c, {{x, 2}, {y, 2}}, Sense::kEqual, 4);
    c.instance.objective = {{x, 1}, {y, -1}};
    c.objective = -2;
    c.x = {0, 2};
  }
  {
    // 1 <= x + y <= 3 with y >= 1/2: x = 5/2.
    LpCase& c = lp("two-sided-row");
    const int x = var(c, "x", 0, kInf), y = var(c, "y", 0.5, kInf);
    row(c, {{x, 1}, {y, 1}}, Sense::kGreaterEqual, 1);
    row(c, {{x, 1}, {y, 1}}, Sense::kLessEqual, 3);
    c.instance.objective = {{x, -1}};
    c.objective = -2.5;
    c.x = {2.5, 0.5};
  }
  {
    // Objective constant carried through: min x + 7 with x >= 1.
    LpCase& c = lp("objective-constant");
    const int x = var(c, "x", 1, 4);
    c.instance.objective = {{x, 1}};
    c.instance.objective_constant = 7;
    c.objective = 8;
    c.x = {1};
  }
  {
    // Transportation problem, two plants and two markets: supplies 3 and 2,
    // demands 2 and 3, costs [[1, 4], [2, 1]]. Ship 2 on (0,0), 1 on (0,1),
    // 2 on (1,1): cost 2 + 4 + 2 = 8.
    LpCase& c = lp("transportation");
    const int a = var(c, "a", 0, kInf), b = var(c, "b", 0, kInf),
              d = var(c, "d", 0, kInf), e = var(c, "e", 0, kInf);
    row(c, {{a, 1}, {b, 1}}, Sense::kLessEqual, 3);
    row(c, {{d, 1}, {e, 1}}, Sense::kLessEqual, 2);
    row(c, {{a, 1}, {d, 1}}, Sense::kEqual, 2);
    row(c, {{b, 1}, {e, 1}}, Sense::kEqual, 3);
    c.instance.objective = {{a, 1}, {b, 4}, {d, 2}, {e, 1}};
    c.objective = 8;
    c.x = {2, 1, 0, 2};
  }
  return out;
}

std::uint64_t Rng::Next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::Uniform(double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

int Rng::Int(int lo, int hi) {
  return lo + static_cast<int>(Next() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace flexsched::testing
