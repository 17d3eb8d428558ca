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

// Sparse LU of a square basis matrix, P B Q = L U, computed left-looking
// (Gilbert-Peierls) with a sparsest-column-first order and threshold row
// pivoting.

#ifndef FLEXSCHED_BASIS_LU_HPP_
#define FLEXSCHED_BASIS_LU_HPP_

#include <utility>
#include <vector>

namespace flexsched::internal {

class BasisLu {
 public:
  // Columns in CSC form, one per basis position. Returns false if the matrix
  // is numerically singular; Repairs() then pairs every position that found
  // no pivot with a row that was left unpivoted.
  bool Factorize(int m, const std::vector<int>& start,
                 const std::vector<int>& index,
                 const std::vector<double>& value);

  const std::vector<std::pair<int, int>>& Repairs() const { return repairs_; }

  // x (row space) := B^{-1} x (position space).
  void Ftran(std::vector<double>& x) const;
  // x (position space) := B^{-T} x (row space).
  void Btran(std::vector<double>& x) const;

 private:
  void Reach(int column, const std::vector<int>& start,
             const std::vector<int>& index);

  int m_ = 0;
  std::vector<int> pivot_row_;  // step -> row
  std::vector<int> pivot_col_;  // step -> basis position
  std::vector<int> step_of_row_;
  std::vector<int> l_start_, l_row_, l_step_;
  std::vector<double> l_value_;
  std::vector<int> u_start_, u_step_;
  std::vector<double> u_value_, u_diag_;
  std::vector<std::pair<int, int>> repairs_;

  // Factorization scratch.
  std::vector<double> work_;
  std::vector<int> mark_;
  int stamp_ = 0;
  std::vector<int> topo_;
  std::vector<std::pair<int, int>> stack_;
  mutable std::vector<double> scratch_;
};

}  // namespace flexsched::internal

#endif  // FLEXSCHED_BASIS_LU_HPP_
