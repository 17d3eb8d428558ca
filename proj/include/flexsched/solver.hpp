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

// LP relaxation engine (bounded-variable primal simplex) and best-bound
// branch-and-bound over the binaries of a MilpInstance.

#ifndef FLEXSCHED_SOLVER_HPP_
#define FLEXSCHED_SOLVER_HPP_

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "flexsched/milp.hpp"

namespace flexsched {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;  // empty unless optimal
  double objective = 0.0;
  long iterations = 0;
};

enum class MilpStatus { kOptimalWithinGap, kInfeasible, kGapNotReached };

enum class Branching { kMostFractional };

enum class NodeSelection {
  kBestBound,
  // Dives depth-first until the first incumbent exists, then best bound.
  kDepthFirstUntilIncumbent,
};

struct SolveOptions {
  double gap = 1e-3;
  std::optional<double> time_limit;  // seconds
  std::optional<long> node_limit;
  Branching branching = Branching::kMostFractional;
  NodeSelection node_selection = NodeSelection::kBestBound;
  // Checked between nodes; a set flag ends the search as gap-not-reached.
  const std::atomic<bool>* cancel = nullptr;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  std::vector<double> values;  // incumbent; empty if none
  double objective = 0.0;      // incumbent objective, +inf if none
  double best_bound = 0.0;
  double achieved_gap = 0.0;   // +inf if no incumbent
  long nodes_explored = 0;
  long lp_iterations = 0;
  double seconds = 0.0;

  bool HasIncumbent() const { return !values.empty(); }
};

// Throws ContractError if the instance has binaries.
LpSolution SolveLp(const MilpInstance& instance, long iteration_limit = 1000000);

// Throws ContractError if options.gap <= 0.
MilpSolution SolveMilp(const MilpInstance& instance,
                       const SolveOptions& options = {});

// (objective - bound) / max(|objective|, 1e-9), floored at 0.
double RelativeGap(double objective, double bound);

std::string ToString(LpStatus status);
std::string ToString(MilpStatus status);

}  // namespace flexsched

#endif  // FLEXSCHED_SOLVER_HPP_
