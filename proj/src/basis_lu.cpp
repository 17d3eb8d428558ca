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

#include "basis_lu.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace flexsched::internal {
namespace {

constexpr double kThreshold = 0.1;
constexpr double kSingularTol = 1e-11;

}  // namespace

// Steps reachable in the graph of L from the nonzero rows of `column`, in
// topological order.
void BasisLu::Reach(int column, const std::vector<int>& start,
                    const std::vector<int>& index) {
  ++stamp_;
  topo_.clear();
  for (int k = start[column]; k < start[column + 1]; ++k) {
    const int root = step_of_row_[index[k]];
    if (root < 0 || mark_[root] == stamp_) continue;
    mark_[root] = stamp_;
    stack_.push_back({root, l_start_[root]});
    while (!stack_.empty()) {
      auto& [s, next] = stack_.back();
      bool descended = false;
      while (next < l_start_[s + 1]) {
        const int child = step_of_row_[l_row_[next++]];
        if (child >= 0 && mark_[child] != stamp_) {
          mark_[child] = stamp_;
          stack_.push_back({child, l_start_[child]});
          descended = true;
          break;
        }
      }
      if (!descended) {
        topo_.push_back(stack_.back().first);
        stack_.pop_back();
      }
    }
  }
  std::reverse(topo_.begin(), topo_.end());
}

bool BasisLu::Factorize(int m, const std::vector<int>& start,
                        const std::vector<int>& index,
                        const std::vector<double>& value) {
  m_ = m;
  pivot_row_.clear();
  pivot_col_.clear();
  step_of_row_.assign(m, -1);
  l_start_.assign(1, 0);
  l_row_.clear();
  l_value_.clear();
  u_start_.assign(1, 0);
  u_step_.clear();
  u_value_.clear();
  u_diag_.clear();
  repairs_.clear();
  work_.assign(m, 0.0);
  mark_.assign(m, 0);
  stamp_ = 0;

  std::vector<int> row_start(m + 1, 0);
  for (int k = 0; k < start[m]; ++k) ++row_start[index[k] + 1];
  for (int i = 0; i < m; ++i) row_start[i + 1] += row_start[i];
  std::vector<int> row_cols(start[m]);
  {
    std::vector<int> fill(row_start.begin(), row_start.end() - 1);
    for (int c = 0; c < m; ++c) {
      for (int k = start[c]; k < start[c + 1]; ++k) row_cols[fill[index[k]]++] = c;
    }
  }
  std::vector<int> row_count(m);
  for (int i = 0; i < m; ++i) row_count[i] = row_start[i + 1] - row_start[i];
  std::vector<int> col_count(m);
  std::set<std::pair<int, int>> queue;
  for (int c = 0; c < m; ++c) {
    col_count[c] = start[c + 1] - start[c];
    queue.insert({col_count[c], c});
  }
  std::vector<bool> done(m, false);
  std::vector<int> singular;
  std::vector<int> pattern;

  while (!queue.empty()) {
    const int c = queue.begin()->second;
    queue.erase(queue.begin());
    done[c] = true;

    Reach(c, start, index);
    pattern.clear();
    for (int k = start[c]; k < start[c + 1]; ++k) {
      work_[index[k]] = value[k];
      if (step_of_row_[index[k]] < 0) pattern.push_back(index[k]);
    }
    for (const int s : topo_) {
      const double v = work_[pivot_row_[s]];
      if (v == 0.0) continue;
      for (int k = l_start_[s]; k < l_start_[s + 1]; ++k) {
        const int r = l_row_[k];
        if (work_[r] == 0.0 && step_of_row_[r] < 0) pattern.push_back(r);
        work_[r] -= l_value_[k] * v;
      }
    }
    std::sort(pattern.begin(), pattern.end());
    pattern.erase(std::unique(pattern.begin(), pattern.end()), pattern.end());

    double largest = 0.0;
    for (const int r : pattern) largest = std::max(largest, std::abs(work_[r]));
    const auto clear = [&] {
      for (const int s : topo_) work_[pivot_row_[s]] = 0.0;
      for (const int r : pattern) work_[r] = 0.0;
    };
    if (largest < kSingularTol) {
      singular.push_back(c);
      clear();
      continue;
    }
    int pivot = -1;
    for (const int r : pattern) {
      const double a = std::abs(work_[r]);
      if (a < kThreshold * largest) continue;
      if (pivot < 0 || row_count[r] < row_count[pivot] ||
          (row_count[r] == row_count[pivot] && a > std::abs(work_[pivot]))) {
        pivot = r;
      }
    }

    const int step = static_cast<int>(pivot_row_.size());
    const double diag = work_[pivot];
    for (const int s : topo_) {
      const double v = work_[pivot_row_[s]];
      if (v != 0.0) {
        u_step_.push_back(s);
        u_value_.push_back(v);
      }
    }
    u_start_.push_back(static_cast<int>(u_step_.size()));
    u_diag_.push_back(diag);
    for (const int r : pattern) {
      if (r != pivot && work_[r] != 0.0) {
        l_row_.push_back(r);
        l_value_.push_back(work_[r] / diag);
      }
    }
    l_start_.push_back(static_cast<int>(l_row_.size()));
    pivot_row_.push_back(pivot);
    pivot_col_.push_back(c);
    step_of_row_[pivot] = step;
    clear();

    for (int k = start[c]; k < start[c + 1]; ++k) --row_count[index[k]];
    for (int k = row_start[pivot]; k < row_start[pivot + 1]; ++k) {
      const int other = row_cols[k];
      if (done[other]) continue;
      queue.erase({col_count[other], other});
      queue.insert({--col_count[other], other});
    }
  }

  if (!singular.empty()) {
    std::size_t next = 0;
    for (int r = 0; r < m; ++r) {
      if (step_of_row_[r] < 0) repairs_.push_back({singular[next++], r});
    }
    return false;
  }
  l_step_.resize(l_row_.size());
  for (std::size_t k = 0; k < l_row_.size(); ++k) l_step_[k] = step_of_row_[l_row_[k]];
  return true;
}

void BasisLu::Ftran(std::vector<double>& x) const {
  std::vector<double>& y = scratch_;
  y.resize(m_);
  for (int s = 0; s < m_; ++s) y[s] = x[pivot_row_[s]];
  for (int s = 0; s < m_; ++s) {
    const double v = y[s];
    if (v == 0.0) continue;
    for (int k = l_start_[s]; k < l_start_[s + 1]; ++k) {
      y[l_step_[k]] -= l_value_[k] * v;
    }
  }
  for (int s = m_ - 1; s >= 0; --s) {
    if (y[s] == 0.0) continue;
    const double z = y[s] / u_diag_[s];
    y[s] = z;
    for (int k = u_start_[s]; k < u_start_[s + 1]; ++k) {
      y[u_step_[k]] -= u_value_[k] * z;
    }
  }
  for (int s = 0; s < m_; ++s) x[pivot_col_[s]] = y[s];
}

void BasisLu::Btran(std::vector<double>& x) const {
  std::vector<double>& y = scratch_;
  y.resize(m_);
  for (int s = 0; s < m_; ++s) {
    double sum = x[pivot_col_[s]];
    for (int k = u_start_[s]; k < u_start_[s + 1]; ++k) {
      sum -= u_value_[k] * y[u_step_[k]];
    }
    y[s] = sum / u_diag_[s];
  }
  for (int s = m_ - 1; s >= 0; --s) {
    double sum = y[s];
    for (int k = l_start_[s]; k < l_start_[s + 1]; ++k) {
      sum -= l_value_[k] * y[l_step_[k]];
    }
    y[s] = sum;
  }
  for (int s = 0; s < m_; ++s) x[pivot_row_[s]] = y[s];
}

}  // namespace flexsched::internal
