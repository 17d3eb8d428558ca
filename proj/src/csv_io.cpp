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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "csv.hpp"
#include "flexsched/errors.hpp"
#include "flexsched/io.hpp"

namespace flexsched {
namespace internal {

std::vector<CsvRow> ReadCsv(std::string_view text, std::string_view header) {
  std::vector<CsvRow> rows;
  int line = 0;
  bool seen_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (!seen_header) {
      if (line == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.remove_prefix(3);
      if (raw != header) {
        throw ParseError(fmt::format("expected header '{}', got '{}'", header, raw),
                         line);
      }
      seen_header = true;
      continue;
    }
    if (raw.empty()) continue;
    CsvRow row;
    row.line = line;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = raw.find(',', start);
      row.fields.emplace_back(raw.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (!seen_header) throw ParseError("empty document", 1);
  return rows;
}

double ParseNumber(std::string_view text, int line, std::string_view what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(fmt::format("{} '{}' is not a finite number", what, text), line);
  }
  return value;
}

Timestamp ParseTime(std::string_view text, int line) {
  try {
    return ParseTimestamp(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line);
  }
}

void ExpectFields(const CsvRow& row, std::size_t count) {
  if (row.fields.size() != count) {
    throw ParseError(fmt::format("expected {} fields, found {}", count,
                                 row.fields.size()),
                     row.line);
  }
}

}  // namespace internal

using internal::CsvRow;
using internal::ExpectFields;
using internal::ParseNumber;
using internal::ParseTime;
using internal::ReadCsv;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(fmt::format("cannot move '{}' into place: {}", path.string(),
                            ec.message()));
  }
}

PriceSeries ParsePriceCsv(std::string_view text) {
  const std::vector<CsvRow> rows = ReadCsv(text, "timestamp,price_eur_mwh");
  PriceSeries out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CsvRow& row = rows[i];
    ExpectFields(row, 2);
    TimedValue v{ParseTime(row.fields[0], row.line),
                 ParseNumber(row.fields[1], row.line, "price")};
    if (i > 0) {
      const auto gap = v.time - out.samples.back().time;
      if (gap.count() <= 0) {
        throw ParseError(fmt::format("non-increasing timestamp at row {}", i + 1),
                         row.line);
      }
      if (i == 1) {
        if (gap.count() % 60 != 0) {
          throw ParseError("resolution is not a whole number of minutes", row.line);
        }
        out.resolution = std::chrono::duration_cast<Minutes>(gap);
      } else if (gap != out.resolution) {
        throw ParseError(fmt::format("irregular spacing at row {}", i + 1), row.line);
      }
    }
    out.samples.push_back(v);
  }
  if (out.samples.size() < 2) {
    throw ParseError("at least two rows are needed to infer the resolution",
                     rows.empty() ? 1 : rows.back().line);
  }
  return out;
}

std::string PriceCsv(const PriceSeries& series) {
  std::string out = "timestamp,price_eur_mwh\n";
  for (const TimedValue& v : series.samples) {
    out += fmt::format("{},{}\n", FormatTimestamp(v.time), v.value);
  }
  return out;
}

std::vector<MeasurementSeries> ParseMeasurementCsv(std::string_view text) {
  const std::vector<CsvRow> rows = ReadCsv(text, "timestamp,variable,value,unit");
  std::vector<MeasurementSeries> out;
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CsvRow& row = rows[i];
    ExpectFields(row, 4);
    const std::string& variable = row.fields[1];
    if (variable.empty()) throw ParseError("empty variable label", row.line);
    TimedValue v{ParseTime(row.fields[0], row.line),
                 ParseNumber(row.fields[2], row.line, "value")};
    auto [it, fresh] = slot.emplace(variable, out.size());
    if (fresh) out.push_back({variable, {}, row.fields[3]});
    MeasurementSeries& s = out[it->second];
    if (s.unit != row.fields[3]) {
      throw ParseError(fmt::format("unit mismatch for '{}' at row {}: '{}' vs '{}'",
                                   variable, i + 1, row.fields[3], s.unit),
                       row.line);
    }
    if (!s.samples.empty() && v.time < s.samples.back().time) {
      throw ParseError(fmt::format("timestamps of '{}' decrease at row {}", variable,
                                   i + 1),
                       row.line);
    }
    s.samples.push_back(v);
  }
  return out;
}

std::string MeasurementCsv(const std::vector<MeasurementSeries>& series) {
  std::string out = "timestamp,variable,value,unit\n";
  for (const MeasurementSeries& s : series) {
    for (const TimedValue& v : s.samples) {
      out += fmt::format("{},{},{},{}\n", FormatTimestamp(v.time), s.variable,
                         v.value, s.unit);
    }
  }
  return out;
}

ForecastSeries ParseForecastCsv(std::string_view text, std::string unit) {
  const std::vector<CsvRow> rows = ReadCsv(text, "timestamp,value");
  ForecastSeries out;
  out.unit = std::move(unit);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CsvRow& row = rows[i];
    ExpectFields(row, 2);
    TimedValue v{ParseTime(row.fields[0], row.line),
                 ParseNumber(row.fields[1], row.line, "value")};
    if (v.value < 0) {
      throw ParseError(fmt::format("negative forecast value at row {}", i + 1), row.line);
    }
    if (!out.samples.empty() && v.time <= out.samples.back().time) {
      throw ParseError(fmt::format("non-increasing timestamp at row {}", i + 1),
                       row.line);
    }
    out.samples.push_back(v);
  }
  if (out.samples.empty()) throw ParseError("no forecast rows", 1);
  return out;
}

}  // namespace flexsched
