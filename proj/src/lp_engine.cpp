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

#include "lp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace flexsched::internal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPrimalTol = 1e-7;
constexpr double kDualTol = 1e-7;
constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-13;
constexpr int kRefactorInterval = 100;
constexpr int kBlandAfter = 1000;
constexpr int kPerturbAfter = 50;
constexpr double kPerturbation = 1e-6;

// Presolve limits for free-column substitution.
constexpr std::size_t kMaxSubstRow = 8;
constexpr std::size_t kMaxSubstColumn = 8;

struct WorkRow {
  std::vector<Term> terms;
  double lower = -kInf;
  double upper = kInf;
  bool alive = true;
};

double CoeffOf(const WorkRow& row, int j) {
  for (const Term& t : row.terms) {
    if (t.var == j) return t.coeff;
  }
  return 0.0;
}

class Presolver {
 public:
  explicit Presolver(const MilpInstance& instance) {
    n_ = static_cast<int>(instance.variables.size());
    lp_.cols = n_;
    lp_.cost.assign(n_, 0.0);
    for (const VarRef& v : instance.variables) {
      lp_.col_lower.push_back(v.lower);
      lp_.col_upper.push_back(v.upper);
    }
    for (const Term& t : instance.objective) lp_.cost[t.var] += t.coeff;
    lp_.cost_offset = instance.objective_constant;
    occurrences_.resize(n_);
    for (const LinearConstraint& c : instance.constraints) {
      WorkRow row;
      row.terms = c.terms;
      if (c.sense != Sense::kLessEqual) row.lower = c.rhs;
      if (c.sense != Sense::kGreaterEqual) row.upper = c.rhs;
      const int i = static_cast<int>(rows_.size());
      for (const Term& t : row.terms) occurrences_[t.var].push_back(i);
      rows_.push_back(std::move(row));
    }
    eliminated_.assign(n_, false);
  }

  LpModel Run() {
    for (std::size_t i = 0; i < rows_.size(); ++i) Fold(static_cast<int>(i));
    bool changed = true;
    while (changed) {
      changed = false;
      for (int j = 0; j < n_; ++j) {
        if (!eliminated_[j] && std::isinf(lp_.col_lower[j]) &&
            std::isinf(lp_.col_upper[j]) && Substitute(j)) {
          changed = true;
        }
      }
    }
    for (int j = 0; j < n_; ++j) {
      if (lp_.col_lower[j] > lp_.col_upper[j]) {
        if (lp_.col_lower[j] - lp_.col_upper[j] > kPrimalTol) {
          lp_.infeasible = true;
        } else {
          lp_.col_upper[j] = lp_.col_lower[j];
        }
      }
    }
    Assemble();
    return std::move(lp_);
  }

 private:
  // Removes rows with fewer than two terms, tightening column bounds.
  void Fold(int i) {
    WorkRow& row = rows_[i];
    if (!row.alive || row.terms.size() > 1) return;
    row.alive = false;
    if (row.terms.empty()) {
      if (row.lower > kPrimalTol || row.upper < -kPrimalTol) lp_.infeasible = true;
      return;
    }
    const Term& t = row.terms.front();
    double lo = row.lower / t.coeff;
    double hi = row.upper / t.coeff;
    if (t.coeff < 0.0) std::swap(lo, hi);
    lp_.col_lower[t.var] = std::max(lp_.col_lower[t.var], lo);
    lp_.col_upper[t.var] = std::min(lp_.col_upper[t.var], hi);
  }

  std::vector<int> LiveRows(int j) {
    std::vector<int>& occ = occurrences_[j];
    std::sort(occ.begin(), occ.end());
    occ.erase(std::unique(occ.begin(), occ.end()), occ.end());
    std::erase_if(occ, [&](int i) {
      return !rows_[i].alive || CoeffOf(rows_[i], j) == 0.0;
    });
    return occ;
  }

  bool Substitute(int j) {
    const std::vector<int> live = LiveRows(j);
    if (live.size() > kMaxSubstColumn) return false;
    int pivot_row = -1;
    for (const int i : live) {
      const WorkRow& row = rows_[i];
      if (row.lower != row.upper || row.terms.size() > kMaxSubstRow) continue;
      double biggest = 0.0;
      for (const Term& t : row.terms) biggest = std::max(biggest, std::abs(t.coeff));
      if (std::abs(CoeffOf(row, j)) < 1e-3 * biggest) continue;
      if (pivot_row < 0 || row.terms.size() < rows_[pivot_row].terms.size()) {
        pivot_row = i;
      }
    }
    if (pivot_row < 0) return false;

    WorkRow& def = rows_[pivot_row];
    Substitution sub;
    sub.col = j;
    sub.pivot = CoeffOf(def, j);
    sub.rhs = def.lower;
    for (const Term& t : def.terms) {
      if (t.var != j) sub.rest.push_back(t);
    }
    def.alive = false;

    for (const int k : live) {
      if (k == pivot_row) continue;
      WorkRow& row = rows_[k];
      const double b = CoeffOf(row, j);
      const double scale = b / sub.pivot;
      std::erase_if(row.terms, [&](const Term& t) { return t.var == j; });
      for (const Term& t : sub.rest) {
        auto it = std::find_if(row.terms.begin(), row.terms.end(),
                               [&](const Term& u) { return u.var == t.var; });
        if (it == row.terms.end()) {
          row.terms.push_back({t.var, -scale * t.coeff});
          occurrences_[t.var].push_back(k);
        } else {
          it->coeff -= scale * t.coeff;
        }
      }
      std::erase_if(row.terms, [](const Term& t) { return std::abs(t.coeff) < 1e-12; });
      std::sort(row.terms.begin(), row.terms.end(),
                [](const Term& a, const Term& c) { return a.var < c.var; });
      row.lower -= scale * sub.rhs;
      row.upper -= scale * sub.rhs;
      Fold(k);
    }
    const double c = lp_.cost[j];
    if (c != 0.0) {
      for (const Term& t : sub.rest) lp_.cost[t.var] -= c * t.coeff / sub.pivot;
      lp_.cost_offset += c * sub.rhs / sub.pivot;
      lp_.cost[j] = 0.0;
    }
    eliminated_[j] = true;
    lp_.col_lower[j] = 0.0;
    lp_.col_upper[j] = 0.0;
    lp_.substitutions.push_back(std::move(sub));
    return true;
  }

  void Assemble() {
    std::vector<const WorkRow*> kept;
    for (const WorkRow& row : rows_) {
      if (row.alive) kept.push_back(&row);
    }
    lp_.rows = static_cast<int>(kept.size());
    lp_.row_start.assign(lp_.rows + 1, 0);
    std::vector<int> count(n_ + 1, 0);
    for (int i = 0; i < lp_.rows; ++i) {
      const WorkRow& row = *kept[i];
      lp_.row_start[i + 1] = lp_.row_start[i] + static_cast<int>(row.terms.size());
      for (const Term& t : row.terms) {
        ++count[t.var + 1];
        lp_.col_index.push_back(t.var);
        lp_.row_value.push_back(t.coeff);
      }
      lp_.row_lower.push_back(row.lower);
      lp_.row_upper.push_back(row.upper);
    }
    lp_.col_start.assign(n_ + 1, 0);
    for (int j = 0; j < n_; ++j) lp_.col_start[j + 1] = lp_.col_start[j] + count[j + 1];
    lp_.row_index.resize(lp_.col_start.back());
    lp_.value.resize(lp_.col_start.back());
    std::vector<int> fill(lp_.col_start.begin(), lp_.col_start.end() - 1);
    for (int i = 0; i < lp_.rows; ++i) {
      for (int k = lp_.row_start[i]; k < lp_.row_start[i + 1]; ++k) {
        const int j = lp_.col_index[k];
        lp_.row_index[fill[j]] = i;
        lp_.value[fill[j]++] = lp_.row_value[k];
      }
    }
  }

  int n_ = 0;
  LpModel lp_;
  std::vector<WorkRow> rows_;
  std::vector<std::vector<int>> occurrences_;
  std::vector<bool> eliminated_;
};

}  // namespace

LpModel MakeLpModel(const MilpInstance& instance) {
  return Presolver(instance).Run();
}

void LpModel::Postsolve(std::vector<double>& values) const {
  for (auto it = substitutions.rbegin(); it != substitutions.rend(); ++it) {
    double sum = it->rhs;
    for (const Term& t : it->rest) sum -= t.coeff * values[t.var];
    values[it->col] = sum / it->pivot;
  }
}

SimplexEngine::SimplexEngine(const LpModel& model)
    : model_(model),
      m_(model.rows),
      n_(model.cols),
      total_(model.rows + model.cols) {
  lower_ = model.col_lower;
  upper_ = model.col_upper;
  lower_.insert(lower_.end(), model.row_lower.begin(), model.row_lower.end());
  upper_.insert(upper_.end(), model.row_upper.begin(), model.row_upper.end());
  cost_ = model.cost;
  cost_.resize(total_, 0.0);
  x_.assign(total_, 0.0);
  d_.assign(total_, 0.0);
  status_.assign(total_, VarStatus::kAtLower);
  head_.assign(m_, 0);
  weights_.assign(m_, 1.0);
}

void SimplexEngine::SetBounds(int j, double lower, double upper) {
  lower_[j] = lower;
  upper_[j] = upper;
}

void SimplexEngine::PlaceNonbasic(int j, VarStatus hint) {
  const bool has_lower = std::isfinite(lower_[j]);
  const bool has_upper = std::isfinite(upper_[j]);
  if (!has_lower && !has_upper) {
    status_[j] = VarStatus::kAtZero;
    x_[j] = 0.0;
  } else if ((hint == VarStatus::kAtUpper && has_upper) || !has_lower) {
    status_[j] = VarStatus::kAtUpper;
    x_[j] = upper_[j];
  } else {
    status_[j] = VarStatus::kAtLower;
    x_[j] = lower_[j];
  }
}

// All-logical basis with each structural at the bound its cost prefers, which
// is dual feasible whenever every costed column has that bound.
void SimplexEngine::SlackBasis() {
  for (int j = 0; j < n_; ++j) {
    PlaceNonbasic(j, cost_[j] < 0.0 ? VarStatus::kAtUpper : VarStatus::kAtLower);
  }
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    status_[n_ + i] = VarStatus::kBasic;
  }
}

bool SimplexEngine::LoadBasis(const BasisStatus& warm) {
  if (static_cast<int>(warm.size()) != total_) return false;
  int k = 0;
  for (int j = 0; j < total_; ++j) {
    if (warm[j] == VarStatus::kBasic) {
      if (k == m_) return false;
      head_[k++] = j;
      status_[j] = VarStatus::kBasic;
    } else {
      PlaceNonbasic(j, warm[j]);
    }
  }
  return k == m_ && Factorize();
}

bool SimplexEngine::Factorize(bool* repaired) {
  etas_.clear();
  if (repaired != nullptr) *repaired = false;
  std::vector<int> start(m_ + 1, 0);
  std::vector<int> index;
  std::vector<double> value;
  for (int attempt = 0; attempt < 2; ++attempt) {
    index.clear();
    value.clear();
    for (int i = 0; i < m_; ++i) {
      const int j = head_[i];
      if (j < n_) {
        for (int k = model_.col_start[j]; k < model_.col_start[j + 1]; ++k) {
          index.push_back(model_.row_index[k]);
          value.push_back(model_.value[k]);
        }
      } else {
        index.push_back(j - n_);
        value.push_back(-1.0);
      }
      start[i + 1] = static_cast<int>(index.size());
    }
    if (lu_.Factorize(m_, start, index, value)) return true;
    for (const auto& [position, row] : lu_.Repairs()) {
      const int out = head_[position];
      head_[position] = n_ + row;
      status_[n_ + row] = VarStatus::kBasic;
      PlaceNonbasic(out, VarStatus::kAtLower);
    }
    if (repaired != nullptr) *repaired = true;
  }
  return false;
}

// Returns true if the basis itself had to change.
bool SimplexEngine::Refactor() {
  bool repaired = false;
  if (!Factorize(&repaired)) {
    SlackBasis();
    Factorize();
    weights_.assign(m_, 1.0);
    repaired = true;
  }
  ComputeBasicValues();
  return repaired;
}

void SimplexEngine::ComputeBasicValues() {
  if (m_ == 0) return;
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < total_; ++j) {
    if (status_[j] != VarStatus::kBasic && x_[j] != 0.0) AddColumn(j, -x_[j], rhs);
  }
  Ftran(rhs);
  for (int i = 0; i < m_; ++i) x_[head_[i]] = rhs[i];
}

void SimplexEngine::ComputeDuals() {
  std::vector<double> y(m_);
  for (int i = 0; i < m_; ++i) y[i] = cost_[head_[i]];
  if (m_ > 0) Btran(y);
  for (int j = 0; j < total_; ++j) {
    d_[j] = status_[j] == VarStatus::kBasic ? 0.0 : cost_[j] - DotColumn(j, y);
  }
}

bool SimplexEngine::DualFeasible() const {
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kBasic || lower_[j] == upper_[j]) continue;
    if (status_[j] != VarStatus::kAtUpper && d_[j] < -kDualTol) return false;
    if (status_[j] != VarStatus::kAtLower && d_[j] > kDualTol) return false;
  }
  return true;
}

void SimplexEngine::Ftran(std::vector<double>& v) const {
  lu_.Ftran(v);
  for (const Eta& eta : etas_) {
    const double wr = v[eta.row] / eta.pivot;
    if (wr != 0.0) {
      for (std::size_t k = 0; k < eta.index.size(); ++k) {
        v[eta.index[k]] -= eta.value[k] * wr;
      }
    }
    v[eta.row] = wr;
  }
}

void SimplexEngine::Btran(std::vector<double>& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double sum = v[it->row];
    for (std::size_t k = 0; k < it->index.size(); ++k) {
      sum -= it->value[k] * v[it->index[k]];
    }
    v[it->row] = sum / it->pivot;
  }
  lu_.Btran(v);
}

void SimplexEngine::LoadColumn(int j, std::vector<double>& v) const {
  v.assign(m_, 0.0);
  AddColumn(j, 1.0, v);
}

void SimplexEngine::AddColumn(int j, double scale, std::vector<double>& v) const {
  if (j >= n_) {
    v[j - n_] -= scale;
    return;
  }
  for (int k = model_.col_start[j]; k < model_.col_start[j + 1]; ++k) {
    v[model_.row_index[k]] += scale * model_.value[k];
  }
}

double SimplexEngine::DotColumn(int j, const std::vector<double>& y) const {
  if (j >= n_) return -y[j - n_];
  double sum = 0.0;
  for (int k = model_.col_start[j]; k < model_.col_start[j + 1]; ++k) {
    sum += model_.value[k] * y[model_.row_index[k]];
  }
  return sum;
}

// row[j] = rho' [A, -I]_j for nonbasic, non-fixed j; zero elsewhere.
void SimplexEngine::PivotRow(const std::vector<double>& rho,
                             std::vector<double>& row) const {
  std::fill(row.begin(), row.end(), 0.0);
  for (int i = 0; i < m_; ++i) {
    const double r = rho[i];
    if (r == 0.0) continue;
    for (int k = model_.row_start[i]; k < model_.row_start[i + 1]; ++k) {
      row[model_.col_index[k]] += r * model_.row_value[k];
    }
    row[n_ + i] = -r;
  }
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kBasic || lower_[j] == upper_[j]) row[j] = 0.0;
  }
}

void SimplexEngine::PushEta(int r, const std::vector<double>& alpha) {
  Eta eta{r, alpha[r], {}, {}};
  for (int i = 0; i < m_; ++i) {
    if (i != r && std::abs(alpha[i]) > kDropTol) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
}

EngineStatus SimplexEngine::Solve(const BasisStatus* warm,
                                  long iteration_limit, double cutoff) {
  iterations_ = 0;
  if (model_.infeasible) return EngineStatus::kInfeasible;
  for (int j = 0; j < n_; ++j) {
    if (lower_[j] > upper_[j]) return EngineStatus::kInfeasible;
  }
  if (warm == nullptr || !LoadBasis(*warm)) {
    SlackBasis();
    Factorize();
  }
  weights_.assign(m_, 1.0);
  ComputeBasicValues();
  ComputeDuals();
  if (DualFeasible()) {
    const EngineStatus status = Dual(iteration_limit, cutoff);
    if (status != EngineStatus::kOptimal) return status;
  }
  return Primal(iteration_limit);
}

// Dual simplex with steepest-edge row selection and a bound-flipping ratio
// test. Requires a dual feasible basis. Also returns kOptimal, unfinished, if
// a basis repair destroys dual feasibility; the primal pass completes it.
EngineStatus SimplexEngine::Dual(long iteration_limit, double cutoff) {
  std::vector<double> rho(m_);
  std::vector<double> alpha(m_);
  std::vector<double> tau(m_);
  std::vector<double> shift(m_);
  std::vector<double> row(total_, 0.0);
  std::vector<int> candidates;
  std::vector<int> flips;
  bool fresh = true;
  const auto refresh = [&] {
    const bool changed = Refactor();
    ComputeDuals();
    fresh = true;
    return changed && !DualFeasible();
  };
  while (true) {
    if (iterations_ >= iteration_limit) return EngineStatus::kIterationLimit;
    if (static_cast<int>(etas_.size()) >= kRefactorInterval && refresh()) {
      return EngineStatus::kOptimal;
    }
    if (std::isfinite(cutoff) &&
        Objective() > cutoff + 1e-9 * std::max(1.0, std::abs(cutoff))) {
      return EngineStatus::kCutoff;
    }

    int r = -1;
    double best = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int v = head_[i];
      const double excess = std::max(lower_[v] - x_[v], x_[v] - upper_[v]);
      if (excess > kPrimalTol && excess * excess > best * weights_[i]) {
        best = excess * excess / weights_[i];
        r = i;
      }
    }
    if (r < 0) return EngineStatus::kOptimal;
    const int leaving = head_[r];
    // s = +1: the leaving variable rises to its lower bound.
    const int s = x_[leaving] < lower_[leaving] ? 1 : -1;
    const double target = s > 0 ? lower_[leaving] : upper_[leaving];

    std::fill(rho.begin(), rho.end(), 0.0);
    rho[r] = 1.0;
    Btran(rho);
    double row_norm = 0.0;
    for (const double v : rho) row_norm += v * v;
    weights_[r] = row_norm;
    PivotRow(rho, row);

    // Reduced-cost slack of each candidate in the direction of the dual step.
    candidates.clear();
    for (int j = 0; j < total_; ++j) {
      const double a = row[j];
      if (std::abs(a) <= kPivotTol) continue;
      double slack = -1.0;
      switch (status_[j]) {
        case VarStatus::kAtLower:
          if (s * a < 0.0) slack = std::max(d_[j], 0.0);
          break;
        case VarStatus::kAtUpper:
          if (s * a > 0.0) slack = std::max(-d_[j], 0.0);
          break;
        case VarStatus::kAtZero:
          slack = 0.0;
          break;
        case VarStatus::kBasic:
          break;
      }
      if (slack < 0.0) continue;
      d_[j] = status_[j] == VarStatus::kAtUpper ? -slack
              : status_[j] == VarStatus::kAtLower ? slack
                                                   : d_[j];
      candidates.push_back(j);
    }
    auto ratio = [&](int j) { return std::abs(d_[j]) / std::abs(row[j]); };
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      const double ra = ratio(a);
      const double rb = ratio(b);
      return ra != rb ? ra < rb : a < b;
    });

    // Walk breakpoints; boxed candidates may be flipped to their opposite
    // bound while the leaving row stays infeasible.
    double slope = std::abs(target - x_[leaving]);
    flips.clear();
    int q = -1;
    std::size_t k = 0;
    while (k < candidates.size()) {
      double t_max = kInf;
      std::size_t g = k;
      while (g < candidates.size() && ratio(candidates[g]) <= t_max) {
        const int j = candidates[g];
        t_max = std::min(t_max, (std::abs(d_[j]) + kDualTol) / std::abs(row[j]));
        ++g;
      }
      double reduction = 0.0;
      for (std::size_t h = k; h < g; ++h) {
        const int j = candidates[h];
        reduction += std::abs(row[j]) * (upper_[j] - lower_[j]);
      }
      if (slope - reduction > kPrimalTol) {
        for (std::size_t h = k; h < g; ++h) flips.push_back(candidates[h]);
        slope -= reduction;
        k = g;
        continue;
      }
      double pivot = 0.0;
      for (std::size_t h = k; h < g; ++h) {
        const int j = candidates[h];
        if (std::abs(row[j]) > pivot) {
          pivot = std::abs(row[j]);
          q = j;
        }
      }
      break;
    }
    if (q < 0) {
      if (!fresh) {
        if (refresh()) return EngineStatus::kOptimal;
        continue;
      }
      return EngineStatus::kInfeasible;
    }

    LoadColumn(q, alpha);
    Ftran(alpha);
    if (std::abs(alpha[r] - row[q]) > 1e-7 * (1.0 + std::abs(row[q])) && !fresh) {
      if (refresh()) return EngineStatus::kOptimal;
      continue;
    }
    tau = rho;
    Ftran(tau);

    const double t = ratio(q);
    for (int j = 0; j < total_; ++j) {
      if (row[j] != 0.0) d_[j] += s * t * row[j];
    }
    d_[q] = 0.0;
    d_[leaving] = s * t;

    if (!flips.empty()) {
      std::fill(shift.begin(), shift.end(), 0.0);
      for (const int j : flips) {
        const bool up = status_[j] == VarStatus::kAtLower;
        const double step = up ? upper_[j] - lower_[j] : lower_[j] - upper_[j];
        status_[j] = up ? VarStatus::kAtUpper : VarStatus::kAtLower;
        x_[j] = up ? upper_[j] : lower_[j];
        AddColumn(j, step, shift);
      }
      Ftran(shift);
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= shift[i];
    }

    const double delta = (target - x_[leaving]) / -alpha[r];
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= alpha[i] * delta;
    x_[q] += delta;
    x_[leaving] = target;
    status_[leaving] = s > 0 ? VarStatus::kAtLower : VarStatus::kAtUpper;

    const double ar = alpha[r];
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      const double kappa = alpha[i] / ar;
      weights_[i] = std::max(
          weights_[i] - 2.0 * kappa * tau[i] + kappa * kappa * row_norm, 1e-10);
    }
    weights_[r] = std::max(row_norm / (ar * ar), 1e-10);

    head_[r] = q;
    status_[q] = VarStatus::kBasic;
    PushEta(r, alpha);
    ++iterations_;
    fresh = false;
  }
}

// Widens every finite bound by a small pseudo-random amount so that
// degenerate vertices split apart.
void SimplexEngine::Perturb() {
  saved_lower_ = lower_;
  saved_upper_ = upper_;
  std::mt19937 rng(20260515);
  std::uniform_real_distribution<double> unit(0.5, 1.0);
  for (int j = 0; j < total_; ++j) {
    if (std::isfinite(lower_[j])) {
      lower_[j] -= kPerturbation * (1.0 + std::abs(lower_[j])) * unit(rng);
    }
    if (std::isfinite(upper_[j])) {
      upper_[j] += kPerturbation * (1.0 + std::abs(upper_[j])) * unit(rng);
    }
    if (status_[j] == VarStatus::kAtLower) x_[j] = lower_[j];
    if (status_[j] == VarStatus::kAtUpper) x_[j] = upper_[j];
  }
  perturbed_ = true;
  ComputeBasicValues();
}

void SimplexEngine::Unperturb() {
  lower_ = std::move(saved_lower_);
  upper_ = std::move(saved_upper_);
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kAtLower) x_[j] = lower_[j];
    if (status_[j] == VarStatus::kAtUpper) x_[j] = upper_[j];
  }
  perturbed_ = false;
  ComputeBasicValues();
}

// Primal simplex with a composite phase 1 (sum of infeasibilities), Dantzig
// pricing, Harris ratio test and bound flips. Falls back to Bland's rule
// after a long run of degenerate pivots.
EngineStatus SimplexEngine::Primal(long iteration_limit) {
  std::vector<double> y(m_);
  std::vector<double> alpha(m_);
  int degenerate = 0;
  bool fresh = true;
  bool may_perturb = true;
  auto finish = [&](EngineStatus status) {
    if (perturbed_) Unperturb();
    return status;
  };
  while (true) {
    if (iterations_ >= iteration_limit) return finish(EngineStatus::kIterationLimit);
    if (may_perturb && degenerate >= kPerturbAfter) {
      Perturb();
      may_perturb = false;
      degenerate = 0;
    }
    if (static_cast<int>(etas_.size()) >= kRefactorInterval) {
      Refactor();
      fresh = true;
    }

    bool phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const int v = head_[i];
      if (x_[v] < lower_[v] - kPrimalTol) {
        y[i] = -1.0;
        phase1 = true;
      } else if (x_[v] > upper_[v] + kPrimalTol) {
        y[i] = 1.0;
        phase1 = true;
      } else {
        y[i] = 0.0;
      }
    }
    if (!phase1) {
      for (int i = 0; i < m_; ++i) y[i] = cost_[head_[i]];
    }
    Btran(y);

    const bool bland = degenerate >= kBlandAfter;
    int q = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < total_; ++j) {
      const VarStatus st = status_[j];
      if (st == VarStatus::kBasic || lower_[j] == upper_[j]) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - DotColumn(j, y);
      int dj = 0;
      if (d < -kDualTol && st != VarStatus::kAtUpper) {
        dj = 1;
      } else if (d > kDualTol && st != VarStatus::kAtLower) {
        dj = -1;
      }
      if (dj == 0) continue;
      if (bland) {
        q = j;
        dir = dj;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dir = dj;
      }
    }
    if (q < 0) {
      if (!fresh) {
        Refactor();
        fresh = true;
        continue;
      }
      if (perturbed_) {
        // The perturbed problem is a relaxation, so its infeasibility carries
        // over; an optimal basis stays dual feasible once bounds are restored.
        Unperturb();
        if (phase1) return EngineStatus::kInfeasible;
        ComputeDuals();
        if (DualFeasible()) {
          const EngineStatus status = Dual(iteration_limit, kInf);
          if (status != EngineStatus::kOptimal) return status;
        }
        fresh = true;
        continue;
      }
      return phase1 ? EngineStatus::kInfeasible : EngineStatus::kOptimal;
    }

    LoadColumn(q, alpha);
    Ftran(alpha);

    // Basic i moves at rate g_i = -dir * alpha_i per unit step of x_q.
    // Returns false if it imposes no limit; `slack` relaxes real bounds.
    auto limit = [&](int i, double slack, double& ratio, double& target) {
      const double g = -dir * alpha[i];
      if (std::abs(g) <= kPivotTol) return false;
      const int v = head_[i];
      const double xv = x_[v];
      if (g > 0.0) {
        if (xv > upper_[v] + kPrimalTol) return false;
        if (xv < lower_[v] - kPrimalTol) {
          ratio = (lower_[v] - xv) / g;
          target = lower_[v];
          return true;
        }
        if (!std::isfinite(upper_[v])) return false;
        ratio = (upper_[v] - xv + slack) / g;
        target = upper_[v];
        return true;
      }
      if (xv < lower_[v] - kPrimalTol) return false;
      if (xv > upper_[v] + kPrimalTol) {
        ratio = (xv - upper_[v]) / -g;
        target = upper_[v];
        return true;
      }
      if (!std::isfinite(lower_[v])) return false;
      ratio = (xv - lower_[v] + slack) / -g;
      target = lower_[v];
      return true;
    };

    int r = -1;
    double theta = kInf;
    double target = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
    if (bland) {
      for (int i = 0; i < m_; ++i) {
        if (!limit(i, 0.0, ratio, bound)) continue;
        ratio = std::max(ratio, 0.0);
        if (ratio < theta || (ratio == theta && head_[i] < head_[r])) {
          theta = ratio;
          r = i;
          target = bound;
        }
      }
    } else {
      double theta_max = kInf;
      for (int i = 0; i < m_; ++i) {
        if (limit(i, kPrimalTol, ratio, bound)) theta_max = std::min(theta_max, ratio);
      }
      double best_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (!limit(i, 0.0, ratio, bound) || ratio > theta_max) continue;
        if (std::abs(alpha[i]) > best_pivot) {
          best_pivot = std::abs(alpha[i]);
          r = i;
          theta = std::max(ratio, 0.0);
          target = bound;
        }
      }
      if (r < 0) theta = theta_max;
    }

    const double span = upper_[q] - lower_[q];
    if (std::isfinite(span) && span <= theta) {
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * alpha[i] * span;
      status_[q] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      x_[q] = dir > 0 ? upper_[q] : lower_[q];
      ++iterations_;
      degenerate = 0;
      fresh = false;
      continue;
    }
    if (r < 0) {
      if (!phase1) return finish(EngineStatus::kUnbounded);
      if (!fresh) {
        Refactor();
        fresh = true;
        continue;
      }
      return finish(EngineStatus::kIterationLimit);
    }

    for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * alpha[i] * theta;
    x_[q] += dir * theta;
    const int leaving = head_[r];
    x_[leaving] = target;
    status_[leaving] =
        target == lower_[leaving] ? VarStatus::kAtLower : VarStatus::kAtUpper;
    head_[r] = q;
    status_[q] = VarStatus::kBasic;
    PushEta(r, alpha);
    degenerate = theta <= 1e-9 ? degenerate + 1 : 0;
    ++iterations_;
    fresh = false;
  }
}

double SimplexEngine::Objective() const {
  double total = model_.cost_offset;
  for (int j = 0; j < n_; ++j) total += cost_[j] * x_[j];
  return total;
}

std::vector<double> SimplexEngine::Values() const {
  std::vector<double> values(x_.begin(), x_.begin() + n_);
  model_.Postsolve(values);
  return values;
}

}  // namespace flexsched::internal
