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

#include "flexsched/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include <fmt/format.h>

#include "flexsched/errors.hpp"

namespace flexsched {

std::string_view FamilyName(RowFamily family) {
  switch (family) {
    case RowFamily::kOpBounds:
      return "op-bounds";
    case RowFamily::kPowerMap:
      return "power-map";
    case RowFamily::kThinSludgeRate:
      return "thin-sludge-rate";
    case RowFamily::kDrySludgeRate:
      return "dry-sludge-rate";
    case RowFamily::kSystemPower:
      return "system-power";
    case RowFamily::kStateOpLower:
      return "state-op-lower";
    case RowFamily::kStateOpUpper:
      return "state-op-upper";
    case RowFamily::kStateExclusive:
      return "state-exclusive";
    case RowFamily::kSuccessor:
      return "successor";
    case RowFamily::kMinHold:
      return "min-hold";
    case RowFamily::kMaxHold:
      return "max-hold";
    case RowFamily::kMutualExclusion:
      return "mutual-exclusion";
    case RowFamily::kStorageBalance:
      return "storage-balance";
    case RowFamily::kStorageBounds:
      return "storage-bounds";
    case RowFamily::kInitialState:
      return "initial-state";
    case RowFamily::kInitialDwell:
      return "initial-dwell";
    case RowFamily::kStorageInitial:
      return "storage-initial";
    case RowFamily::kStorageTerminal:
      return "storage-terminal";
    case RowFamily::kHoldEntry:
      return "hold-entry";
    case RowFamily::kHoldWindow:
      return "hold-window";
    case RowFamily::kOther:
      return "other";
  }
  return "other";
}

int MilpInstance::AddVariable(std::string tag, VarKind kind, double lower,
                              double upper) {
  if (kind == VarKind::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  const int index = static_cast<int>(variables.size());
  if (!index_map.emplace(tag, index).second) {
    throw ContractError(fmt::format("duplicate variable tag '{}'", tag));
  }
  variables.push_back({index, kind, lower, upper, std::move(tag)});
  return index;
}

void MilpInstance::AddConstraint(std::vector<Term> terms, Sense sense,
                                 double rhs, std::string provenance,
                                 RowFamily family) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= static_cast<int>(variables.size())) {
      throw ContractError(
          fmt::format("row '{}' references unknown variable {}", provenance,
                      t.var));
    }
    if (!std::isfinite(t.coeff)) {
      throw ContractError(
          fmt::format("row '{}' has a non-finite coefficient", provenance));
    }
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  if (!std::isfinite(rhs)) {
    throw ContractError(fmt::format("row '{}' has a non-finite rhs", provenance));
  }
  constraints.push_back(
      {std::move(merged), sense, rhs, std::move(provenance), family});
}

int MilpInstance::Index(const std::string& tag) const {
  auto it = index_map.find(tag);
  if (it == index_map.end()) {
    throw ContractError(fmt::format("no variable tagged '{}'", tag));
  }
  return it->second;
}

const VarRef& MilpInstance::Var(const std::string& tag) const {
  return variables[Index(tag)];
}

int MilpInstance::BinaryCount() const {
  return static_cast<int>(std::count_if(
      variables.begin(), variables.end(),
      [](const VarRef& v) { return v.kind == VarKind::kBinary; }));
}

double MilpInstance::ObjectiveValue(std::span<const double> values) const {
  double total = objective_constant;
  for (const Term& t : objective) total += t.coeff * values[t.var];
  return total;
}

MilpInstance Relax(const MilpInstance& instance) {
  MilpInstance relaxed = instance;
  for (VarRef& v : relaxed.variables) {
    if (v.kind == VarKind::kBinary) {
      v.kind = VarKind::kContinuous;
      v.lower = std::max(v.lower, 0.0);
      v.upper = std::min(v.upper, 1.0);
    }
  }
  return relaxed;
}

std::vector<AssignmentViolation> CheckAssignment(
    const MilpInstance& instance, std::span<const double> values,
    double tol) {
  if (values.size() != instance.variables.size()) {
    throw ContractError(fmt::format(
        "assignment has {} values for {} variables", values.size(),
        instance.variables.size()));
  }
  std::vector<AssignmentViolation> out;
  for (const VarRef& v : instance.variables) {
    const double x = values[v.index];
    if (!std::isfinite(x)) {
      out.push_back({fmt::format("bound[{}]", v.tag),
                     std::numeric_limits<double>::infinity()});
      continue;
    }
    const double excess = std::max(v.lower - x, x - v.upper);
    if (excess > tol) out.push_back({fmt::format("bound[{}]", v.tag), excess});
    if (v.kind == VarKind::kBinary) {
      const double frac = std::abs(x - std::round(x));
      if (frac > tol) {
        out.push_back({fmt::format("integrality[{}]", v.tag), frac});
      }
    }
  }
  for (const LinearConstraint& row : instance.constraints) {
    double activity = 0.0;
    for (const Term& t : row.terms) activity += t.coeff * values[t.var];
    double excess = 0.0;
    switch (row.sense) {
      case Sense::kLessEqual:
        excess = activity - row.rhs;
        break;
      case Sense::kGreaterEqual:
        excess = row.rhs - activity;
        break;
      case Sense::kEqual:
        excess = std::abs(activity - row.rhs);
        break;
    }
    if (excess > tol || std::isnan(excess)) {
      out.push_back({row.provenance, excess});
    }
  }
  return out;
}

double RoundSignificant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  return std::strtod(fmt::format("{:.{}g}", value, digits).c_str(), nullptr);
}

namespace {

nlohmann::ordered_json Bound(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return RoundSignificant(v);
}

const char* SenseName(Sense s) {
  switch (s) {
    case Sense::kLessEqual:
      return "<=";
    case Sense::kEqual:
      return "=";
    case Sense::kGreaterEqual:
      return ">=";
  }
  return "?";
}

nlohmann::ordered_json TermsToJson(const std::vector<Term>& terms) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const Term& t : terms) {
    out.push_back(nlohmann::ordered_json::array({t.var, RoundSignificant(t.coeff)}));
  }
  return out;
}

}  // namespace

nlohmann::ordered_json InstanceToJson(const MilpInstance& instance) {
  nlohmann::ordered_json vars = nlohmann::ordered_json::array();
  for (const VarRef& v : instance.variables) {
    nlohmann::ordered_json j;
    j["index"] = v.index;
    j["tag"] = v.tag;
    j["kind"] = v.kind == VarKind::kBinary ? "binary" : "continuous";
    j["lower"] = Bound(v.lower);
    j["upper"] = Bound(v.upper);
    vars.push_back(std::move(j));
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const LinearConstraint& c : instance.constraints) {
    nlohmann::ordered_json j;
    j["provenance"] = c.provenance;
    j["family"] = FamilyName(c.family);
    j["sense"] = SenseName(c.sense);
    j["rhs"] = RoundSignificant(c.rhs);
    j["terms"] = TermsToJson(c.terms);
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["sense"] = "minimize";
  out["objective"] = {{"constant", RoundSignificant(instance.objective_constant)},
                      {"terms", TermsToJson(instance.objective)}};
  out["variables"] = std::move(vars);
  out["constraints"] = std::move(rows);
  out["warnings"] = instance.warnings;
  return out;
}

std::string SerializeInstance(const MilpInstance& instance) {
  return InstanceToJson(instance).dump(1);
}

}  // namespace flexsched
