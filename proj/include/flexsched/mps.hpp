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

// Interchange with external solvers: fixed-format MPS (export and parse) and
// a one-way LP-style text dump.

#ifndef FLEXSCHED_MPS_HPP_
#define FLEXSCHED_MPS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "flexsched/milp.hpp"

namespace flexsched {

// Names of at most 8 characters drawn from [A-Za-z0-9_], derived from
// `labels` in order. A name that collides with an earlier one (or with
// `reserved`) gets its tail replaced by a base-36 counter.
std::vector<std::string> MpsNames(const std::vector<std::string>& labels,
                                  const std::vector<std::string>& reserved = {});

// Objective row is COST; its RHS carries the negated objective constant.
// Numbers are written with 12 significant digits and may overflow their
// 12-character field.
std::string ExportMps(const MilpInstance& instance,
                      std::string_view name = "FLEXSCHD");

// Reads fixed or free MPS with whitespace-separated fields. Variable tags and
// row provenances are the MPS names. Integer columns default to [0, 1] and
// must stay binary. Ranged rows become two rows. Throws ParseError.
MilpInstance ParseMps(std::string_view text);

std::string ExportLpText(const MilpInstance& instance);

}  // namespace flexsched

#endif  // FLEXSCHED_MPS_HPP_
