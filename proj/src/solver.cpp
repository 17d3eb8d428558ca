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

#include "flexsched/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

#include "flexsched/errors.hpp"
#include "lp_engine.hpp"

namespace flexsched {
namespace {

using internal::BasisStatus;
using internal::EngineStatus;
using internal::LpModel;
using internal::SimplexEngine;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntegralityTol = 1e-6;

struct Fixing {
  int var;
  double value;
};

struct Node {
  double bound;
  int depth;
  long id;
  std::vector<Fixing> fixings;
  std::shared_ptr<const BasisStatus> basis;
  int branch_var;
  double branch_value;
};

struct NodeOrder {
  bool dive = false;
  // std heap functions keep the *largest* element on top, so "less" means
  // "explored later".
  bool operator()(const Node& a, const Node& b) const {
    if (dive && a.depth != b.depth) return a.depth < b.depth;
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

struct Evaluation {
  bool feasible = false;
  double objective = kInf;
  std::vector<double> values;
  std::shared_ptr<const BasisStatus> basis;
  int branch_var = -1;  // -1: integral
  double branch_value = 0.0;
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpInstance& instance, const SolveOptions& options)
      : instance_(instance),
        options_(options),
        lp_(internal::MakeLpModel(instance)),
        engine_(lp_),
        start_(std::chrono::steady_clock::now()) {
    for (const VarRef& v : instance.variables) {
      if (v.kind == VarKind::kBinary) binaries_.push_back(v.index);
    }
    iteration_limit_ = 50L * (lp_.rows + lp_.cols) + 10000;
  }

  MilpSolution Run() {
    MilpSolution out;
    Evaluation root = Evaluate({}, nullptr);
    nodes_ = 1;
    if (root.feasible) {
      if (root.branch_var < 0) {
        Accept(root);
      } else {
        Push({root.objective, 0, next_id_++, {}, root.basis, root.branch_var,
              root.branch_value});
      }
    }

    bool stopped = false;
    while (!open_.empty()) {
      const Node& top = open_.front();
      const double bound = order_.dive ? LowestOpenBound() : top.bound;
      if (std::isfinite(incumbent_) &&
          RelativeGap(incumbent_, std::min(bound, incumbent_)) <= options_.gap) {
        break;
      }
      if (LimitReached()) {
        stopped = true;
        break;
      }
      std::pop_heap(open_.begin(), open_.end(), order_);
      Node node = std::move(open_.back());
      open_.pop_back();
      if (node.bound >= incumbent_) continue;
      Branch(node);
    }

    out.nodes_explored = nodes_;
    out.lp_iterations = lp_iterations_;
    out.seconds = Elapsed();
    out.objective = incumbent_;
    out.best_bound = open_.empty() ? incumbent_
                                   : std::min(incumbent_, LowestOpenBound());
    if (!std::isfinite(incumbent_)) {
      out.status = open_.empty() && !stopped ? MilpStatus::kInfeasible
                                             : MilpStatus::kGapNotReached;
      out.achieved_gap = kInf;
      if (out.status == MilpStatus::kInfeasible) out.best_bound = kInf;
      return out;
    }
    out.values = incumbent_values_;
    out.achieved_gap = RelativeGap(incumbent_, out.best_bound);
    out.status = out.achieved_gap <= options_.gap ? MilpStatus::kOptimalWithinGap
                                                  : MilpStatus::kGapNotReached;
    return out;
  }

 private:
  double Elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  bool LimitReached() const {
    if (options_.cancel != nullptr && options_.cancel->load()) return true;
    if (options_.time_limit && Elapsed() >= *options_.time_limit) return true;
    if (options_.node_limit && nodes_ >= *options_.node_limit) return true;
    return false;
  }

  double LowestOpenBound() const {
    double low = kInf;
    for (const Node& n : open_) low = std::min(low, n.bound);
    return low;
  }

  void Push(Node node) {
    open_.push_back(std::move(node));
    std::push_heap(open_.begin(), open_.end(), order_);
  }

  void Branch(const Node& node) {
    for (const double value : {0.0, 1.0}) {
      std::vector<Fixing> fixings = node.fixings;
      fixings.push_back({node.branch_var, value});
      Evaluation child = Evaluate(fixings, node.basis.get());
      ++nodes_;
      if (!child.feasible || child.objective >= incumbent_) continue;
      if (child.branch_var < 0) {
        Accept(child);
        continue;
      }
      Push({std::max(child.objective, node.bound), node.depth + 1, next_id_++,
            std::move(fixings), child.basis, child.branch_var,
            child.branch_value});
    }
  }

  // Applies `fixings` on top of the model bounds, resetting previous ones.
  bool ApplyFixings(const std::vector<Fixing>& fixings) {
    for (const int j : dirty_) engine_.SetBounds(j, lp_.col_lower[j], lp_.col_upper[j]);
    dirty_.clear();
    bool consistent = true;
    for (const Fixing& f : fixings) {
      const double lo = std::max(engine_.Lower(f.var), f.value);
      const double hi = std::min(engine_.Upper(f.var), f.value);
      if (lo > hi) consistent = false;
      engine_.SetBounds(f.var, lo, hi);
      dirty_.push_back(f.var);
    }
    return consistent;
  }

  Evaluation Evaluate(const std::vector<Fixing>& fixings,
                      const BasisStatus* warm) {
    Evaluation ev;
    if (!ApplyFixings(fixings)) return ev;
    EngineStatus status = engine_.Solve(warm, iteration_limit_, incumbent_);
    lp_iterations_ += engine_.iterations();
    if (status == EngineStatus::kIterationLimit && warm != nullptr) {
      status = engine_.Solve(nullptr, iteration_limit_, incumbent_);
      lp_iterations_ += engine_.iterations();
    }
    if (status == EngineStatus::kUnbounded) {
      throw DomainError("LP relaxation is unbounded");
    }
    if (status != EngineStatus::kOptimal) return ev;
    ev.feasible = true;
    ev.objective = engine_.Objective();
    ev.values = engine_.Values();
    ev.basis = std::make_shared<const BasisStatus>(engine_.Basis());
    double most = kIntegralityTol;
    for (const int j : binaries_) {
      const double x = ev.values[j];
      const double frac = std::min(x - std::floor(x), std::ceil(x) - x);
      if (frac > most) {
        most = frac;
        ev.branch_var = j;
        ev.branch_value = x;
      }
    }
    return ev;
  }

  // Re-solves with every binary pinned to its rounded value so the stored
  // incumbent is exactly integral.
  void Accept(const Evaluation& ev) {
    std::vector<Fixing> fixings;
    for (const int j : binaries_) fixings.push_back({j, std::round(ev.values[j])});
    Evaluation polished = Evaluate(fixings, ev.basis.get());
    const Evaluation& use = polished.feasible ? polished : ev;
    if (use.objective >= incumbent_) return;
    incumbent_ = use.objective;
    incumbent_values_ = use.values;
    for (const int j : binaries_) {
      incumbent_values_[j] = std::round(incumbent_values_[j]);
    }
    if (order_.dive) {
      order_.dive = false;
      std::make_heap(open_.begin(), open_.end(), order_);
    }
  }

  const MilpInstance& instance_;
  const SolveOptions& options_;
  LpModel lp_;
  SimplexEngine engine_;
  std::chrono::steady_clock::time_point start_;
  std::vector<int> binaries_;
  std::vector<int> dirty_;
  long iteration_limit_ = 0;

  std::vector<Node> open_;
  NodeOrder order_{options_.node_selection ==
                   NodeSelection::kDepthFirstUntilIncumbent};
  long next_id_ = 0;
  long nodes_ = 0;
  long lp_iterations_ = 0;
  double incumbent_ = kInf;
  std::vector<double> incumbent_values_;
};

}  // namespace

double RelativeGap(double objective, double bound) {
  if (!std::isfinite(objective)) return kInf;
  return std::max(0.0, (objective - bound) / std::max(std::abs(objective), 1e-9));
}

LpSolution SolveLp(const MilpInstance& instance, long iteration_limit) {
  if (instance.BinaryCount() > 0) {
    throw ContractError("SolveLp requires an instance without binaries");
  }
  const LpModel lp = internal::MakeLpModel(instance);
  SimplexEngine engine(lp);
  LpSolution out;
  switch (engine.Solve(nullptr, iteration_limit)) {
    case EngineStatus::kOptimal:
      out.status = LpStatus::kOptimal;
      break;
    case EngineStatus::kInfeasible:
      out.status = LpStatus::kInfeasible;
      break;
    case EngineStatus::kUnbounded:
      out.status = LpStatus::kUnbounded;
      break;
    case EngineStatus::kIterationLimit:
    case EngineStatus::kCutoff:
      out.status = LpStatus::kIterationLimit;
      break;
  }
  out.iterations = engine.iterations();
  if (out.status == LpStatus::kOptimal) {
    out.values = engine.Values();
    out.objective = engine.Objective();
  }
  return out;
}

MilpSolution SolveMilp(const MilpInstance& instance,
                       const SolveOptions& options) {
  if (!(options.gap > 0.0)) throw ContractError("gap must be positive");
  return BranchAndBound(instance, options).Run();
}

std::string ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

std::string ToString(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimalWithinGap:
      return "optimal-within-gap";
    case MilpStatus::kInfeasible:
      return "infeasible";
    case MilpStatus::kGapNotReached:
      return "gap-not-reached";
  }
  return "unknown";
}

}  // namespace flexsched
