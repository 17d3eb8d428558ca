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

// Bounded-variable simplex on the computational form
//
//   min c'x   s.t.  A x - s = 0,  l <= x <= u,  L <= s <= U
//
// with one logical variable s_i per row. The basis is factorized with a
// sparse LU and updated in product form between refactorizations. A primal
// and a dual algorithm share the same basis representation.

#ifndef FLEXSCHED_LP_ENGINE_HPP_
#define FLEXSCHED_LP_ENGINE_HPP_

#include <cstdint>
#include <limits>
#include <vector>

#include "basis_lu.hpp"
#include "flexsched/milp.hpp"

namespace flexsched::internal {

// A free column eliminated through an equality row:
// pivot * x[col] + sum(rest) = rhs.
struct Substitution {
  int col = 0;
  double pivot = 1.0;
  double rhs = 0.0;
  std::vector<Term> rest;
};

// Presolved LP over the instance's column space. Singleton rows are folded
// into column bounds and free columns defined by short equality rows are
// substituted out; eliminated columns stay in place fixed at zero and are
// recovered by Postsolve.
struct LpModel {
  int rows = 0;
  int cols = 0;
  std::vector<int> col_start;  // CSC, size cols + 1
  std::vector<int> row_index;
  std::vector<double> value;
  std::vector<int> row_start;  // CSR copy, size rows + 1
  std::vector<int> col_index;
  std::vector<double> row_value;
  std::vector<double> col_lower, col_upper, cost;
  std::vector<double> row_lower, row_upper;
  double cost_offset = 0.0;
  std::vector<Substitution> substitutions;  // in elimination order
  bool infeasible = false;  // contradictory bounds found while presolving

  void Postsolve(std::vector<double>& values) const;
};

LpModel MakeLpModel(const MilpInstance& instance);

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kAtZero };

using BasisStatus = std::vector<VarStatus>;  // size cols + rows

enum class EngineStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kCutoff,  // dual objective exceeded the cutoff
};

class SimplexEngine {
 public:
  explicit SimplexEngine(const LpModel& model);

  // Overrides the bounds of structural column j.
  void SetBounds(int j, double lower, double upper);
  double Lower(int j) const { return lower_[j]; }
  double Upper(int j) const { return upper_[j]; }

  // Starts from `warm` if given (and nonsingular), else from the all-logical
  // basis. Dual feasible starts run the dual simplex, which stops early once
  // the objective provably exceeds `cutoff`; the primal simplex finishes.
  EngineStatus Solve(const BasisStatus* warm, long iteration_limit,
                     double cutoff = std::numeric_limits<double>::infinity());

  double Objective() const;
  std::vector<double> Values() const;  // all instance columns, postsolved
  BasisStatus Basis() const { return status_; }
  long iterations() const { return iterations_; }

 private:
  struct Eta {
    int row;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  void SlackBasis();
  bool LoadBasis(const BasisStatus& warm);
  void PlaceNonbasic(int j, VarStatus hint);
  // Returns false if even the repaired basis is singular. Sets `repaired`
  // when singular columns were swapped for logicals.
  bool Factorize(bool* repaired = nullptr);
  bool Refactor();
  void ComputeBasicValues();
  void ComputeDuals();
  bool DualFeasible() const;
  void Ftran(std::vector<double>& v) const;
  void Btran(std::vector<double>& v) const;
  void LoadColumn(int j, std::vector<double>& v) const;
  void AddColumn(int j, double scale, std::vector<double>& v) const;
  double DotColumn(int j, const std::vector<double>& y) const;
  void PivotRow(const std::vector<double>& rho, std::vector<double>& row) const;
  void PushEta(int r, const std::vector<double>& alpha);
  void Perturb();
  void Unperturb();
  EngineStatus Primal(long iteration_limit);
  EngineStatus Dual(long iteration_limit, double cutoff);

  const LpModel& model_;
  int m_;
  int n_;
  int total_;
  std::vector<double> lower_, upper_, cost_, x_, d_;
  BasisStatus status_;
  std::vector<int> head_;
  std::vector<double> weights_;  // dual steepest-edge reference weights
  BasisLu lu_;
  std::vector<Eta> etas_;
  long iterations_ = 0;
  std::vector<double> saved_lower_, saved_upper_;
  bool perturbed_ = false;
};

}  // namespace flexsched::internal

#endif  // FLEXSCHED_LP_ENGINE_HPP_
