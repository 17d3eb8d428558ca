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

// Solver-agnostic mixed-integer linear program. Every variable carries a
// semantic tag and every row a provenance label, so that an assignment can be
// verified and decoded without access to the model that produced it.

#ifndef FLEXSCHED_MILP_HPP_
#define FLEXSCHED_MILP_HPP_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace flexsched {

enum class VarKind { kContinuous, kBinary };

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

// Constraint families emitted by the builder. The first fourteen mirror the
// constraint set of the decanter model; the rest are boundary conditions.
enum class RowFamily {
  kOpBounds,
  kPowerMap,
  kThinSludgeRate,
  kDrySludgeRate,
  kSystemPower,
  kStateOpLower,
  kStateOpUpper,
  kStateExclusive,
  kSuccessor,
  kMinHold,
  kMaxHold,
  kMutualExclusion,
  kStorageBalance,
  kStorageBounds,
  kInitialState,
  kInitialDwell,
  kStorageInitial,
  kStorageTerminal,
  kHoldEntry,
  kHoldWindow,
  kOther,
};

inline constexpr int kCoreFamilyCount = 14;

std::string_view FamilyName(RowFamily family);

struct VarRef {
  int index = 0;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = 0.0;
  std::string tag;
};

struct Term {
  int var = 0;
  double coeff = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  std::string provenance;
  RowFamily family = RowFamily::kOther;
};

struct MilpInstance {
  std::vector<VarRef> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<Term> objective;  // minimized
  double objective_constant = 0.0;
  std::map<std::string, int> index_map;  // tag -> variable index
  std::vector<std::string> warnings;

  // Adds a variable; throws ContractError on a duplicate tag.
  int AddVariable(std::string tag, VarKind kind, double lower, double upper);
  // Merges duplicate indices, drops zero coefficients, throws on non-finite
  // coefficients or unknown variables.
  void AddConstraint(std::vector<Term> terms, Sense sense, double rhs,
                     std::string provenance, RowFamily family);

  int Index(const std::string& tag) const;  // throws ContractError
  const VarRef& Var(const std::string& tag) const;
  int BinaryCount() const;
  double ObjectiveValue(std::span<const double> values) const;
};

// Copy with every binary re-kinded continuous on [0, 1].
MilpInstance Relax(const MilpInstance& instance);

struct AssignmentViolation {
  std::string provenance;  // row label, or "bound[tag]" / "integrality[tag]"
  double amount = 0.0;     // how far beyond the tolerance-free limit
};

// Every row, bound and integrality requirement violated by more than `tol`.
// Throws ContractError on a length mismatch.
std::vector<AssignmentViolation> CheckAssignment(
    const MilpInstance& instance, std::span<const double> values,
    double tol);

// Canonical JSON: fixed field order, numbers rounded to 12 significant digits.
nlohmann::ordered_json InstanceToJson(const MilpInstance& instance);
std::string SerializeInstance(const MilpInstance& instance);

double RoundSignificant(double value, int digits = 12);

}  // namespace flexsched

#endif  // FLEXSCHED_MILP_HPP_
