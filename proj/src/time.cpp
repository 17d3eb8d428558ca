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

#include "flexsched/time.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include <fmt/format.h>

namespace flexsched {
namespace {

using std::chrono::days;
using std::chrono::hours;
using std::chrono::minutes;
using std::chrono::seconds;

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  int Digits(int count) {
    if (pos_ + count > text_.size()) Fail("truncated");
    int value = 0;
    const char* begin = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, begin + count, value);
    if (ec != std::errc() || ptr != begin + count) Fail("expected digits");
    pos_ += count;
    return value;
  }

  void Expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) {
      Fail(fmt::format("expected '{}'", c));
    }
    ++pos_;
  }

  bool Accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }
  void Skip() { ++pos_; }

  [[noreturn]] void Fail(const std::string& why) const {
    throw std::invalid_argument(
        fmt::format("invalid timestamp '{}': {}", text_, why));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Timestamp ParseTimestamp(std::string_view text) {
  Cursor c(text);
  const int y = c.Digits(4);
  c.Expect('-');
  const int mo = c.Digits(2);
  c.Expect('-');
  const int d = c.Digits(2);
  if (!c.Accept('T') && !c.Accept(' ')) c.Fail("expected 'T'");
  const int h = c.Digits(2);
  c.Expect(':');
  const int mi = c.Digits(2);
  int s = 0;
  if (c.Accept(':')) {
    s = c.Digits(2);
    if (c.Accept('.')) {
      // Sub-second precision is truncated.
      while (!c.AtEnd() && c.Peek() >= '0' && c.Peek() <= '9') c.Skip();
    }
  }
  minutes offset{0};
  if (c.Accept('Z')) {
  } else if (!c.AtEnd()) {
    int sign = 0;
    if (c.Accept('+')) {
      sign = 1;
    } else if (c.Accept('-')) {
      sign = -1;
    } else {
      c.Fail("expected offset");
    }
    const int oh = c.Digits(2);
    c.Accept(':');
    const int om = c.Digits(2);
    offset = minutes(sign * (oh * 60 + om));
  }
  if (!c.AtEnd()) c.Fail("trailing characters");

  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) c.Fail("field out of range");
  const auto local = std::chrono::sys_days{ymd} + hours(h) + minutes(mi) +
                     seconds(s);
  return Timestamp{std::chrono::time_point_cast<seconds>(local - offset),
                   offset};
}

std::string FormatTimestamp(const Timestamp& ts) {
  const auto local = ts.utc + ts.offset;
  const auto day = std::chrono::floor<days>(local);
  const std::chrono::year_month_day ymd{day};
  const std::chrono::hh_mm_ss hms{local - day};
  const long off = ts.offset.count();
  const long abs_off = std::labs(off);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}{}{:02}:{:02}",
                     int(ymd.year()), unsigned(ymd.month()),
                     unsigned(ymd.day()), hms.hours().count(),
                     hms.minutes().count(), hms.seconds().count(),
                     off < 0 ? '-' : '+', abs_off / 60, abs_off % 60);
}

}  // namespace flexsched
