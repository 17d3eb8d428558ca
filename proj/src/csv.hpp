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

#ifndef FLEXSCHED_CSV_HPP_
#define FLEXSCHED_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "flexsched/time.hpp"

namespace flexsched::internal {

struct CsvRow {
  int line = 0;
  std::vector<std::string> fields;
};

// Requires `header` as the first line; skips blank lines. Fields are not
// quoted.
std::vector<CsvRow> ReadCsv(std::string_view text, std::string_view header);

double ParseNumber(std::string_view text, int line, std::string_view what);
Timestamp ParseTime(std::string_view text, int line);
void ExpectFields(const CsvRow& row, std::size_t count);

}  // namespace flexsched::internal

#endif  // FLEXSCHED_CSV_HPP_
