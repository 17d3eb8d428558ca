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

#ifndef FLEXSCHED_TIME_HPP_
#define FLEXSCHED_TIME_HPP_

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace flexsched {

// A wall-clock instant. Ordering and equality use the UTC instant only; the
// offset is kept so that rendered timestamps look like the ones we parsed.
struct Timestamp {
  std::chrono::sys_seconds utc{};
  std::chrono::minutes offset{0};

  friend bool operator==(const Timestamp& a, const Timestamp& b) {
    return a.utc == b.utc;
  }
  friend auto operator<=>(const Timestamp& a, const Timestamp& b) {
    return a.utc <=> b.utc;
  }

  // Same offset, shifted instant.
  Timestamp operator+(std::chrono::seconds d) const { return {utc + d, offset}; }
  Timestamp operator-(std::chrono::seconds d) const { return {utc - d, offset}; }
  std::chrono::seconds operator-(const Timestamp& other) const {
    return utc - other.utc;
  }
};

// Accepts "YYYY-MM-DDTHH:MM[:SS[.fff]]" followed by "Z", "+HH:MM", "-HH:MM"
// or nothing (UTC). A space is accepted in place of 'T'.
// Throws std::invalid_argument on malformed input.
Timestamp ParseTimestamp(std::string_view text);

// Renders "YYYY-MM-DDTHH:MM:SS+HH:MM" in the timestamp's own offset.
std::string FormatTimestamp(const Timestamp& ts);

}  // namespace flexsched

#endif  // FLEXSCHED_TIME_HPP_
