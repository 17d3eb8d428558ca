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

#include "flexsched/mps.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "flexsched/errors.hpp"

namespace flexsched {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNameLength = 8;
constexpr const char* kCostRow = "COST";

std::string Number(double v) { return fmt::format("{:.12g}", v); }

std::string ToBase36(int k) {
  static constexpr char kDigits[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::string out;
  do {
    out.insert(out.begin(), kDigits[k % 36]);
    k /= 36;
  } while (k > 0);
  return out;
}

// Fixed-format field positions 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
std::string Line(std::string_view code, std::string_view a, std::string_view b = {},
                 std::string_view c = {}) {
  std::string out = fmt::format(" {:<2} {:<8}  {:<8}  {}", code, a, b, c);
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out + "\n";
}

std::vector<std::string> Tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > begin) out.emplace_back(line.substr(begin, i - begin));
  }
  return out;
}

double ParseNumber(const std::string& text, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    const std::string lower = [&] {
      std::string s;
      for (char ch : text) s += static_cast<char>(std::tolower(ch));
      return s;
    }();
    if (lower == "inf" || lower == "+inf" || lower == "infinity" || lower == "1e+30" ||
        lower == "1e30") {
      return kInf;
    }
    if (lower == "-inf" || lower == "-infinity") return -kInf;
    throw ParseError(fmt::format("invalid number '{}'", text), line);
  }
  if (std::abs(v) >= 1e30) return std::copysign(kInf, v);
  return v;
}

struct RowDraft {
  std::string name;
  char type = 'N';
  std::vector<Term> terms;
  double rhs = 0.0;
  std::optional<double> range;
};

}  // namespace

std::vector<std::string> MpsNames(const std::vector<std::string>& labels,
                                  const std::vector<std::string>& reserved) {
  std::set<std::string> used(reserved.begin(), reserved.end());
  std::map<std::string, int> counters;
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const std::string& label : labels) {
    std::string base;
    for (const char ch : label) {
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') base += ch;
    }
    if (base.empty()) base = "N";
    if (base.size() > kNameLength) base.resize(kNameLength);
    std::string name = base;
    if (used.count(name) > 0) {
      int& k = counters[base];
      do {
        const std::string suffix = ToBase36(k++);
        name = base.substr(0, kNameLength - std::min(suffix.size(), kNameLength)) + suffix;
      } while (used.count(name) > 0);
    }
    used.insert(name);
    out.push_back(std::move(name));
  }
  return out;
}

std::string ExportMps(const MilpInstance& instance, std::string_view name) {
  std::vector<std::string> tags;
  for (const VarRef& v : instance.variables) tags.push_back(v.tag);
  std::vector<std::string> labels;
  for (const LinearConstraint& c : instance.constraints) labels.push_back(c.provenance);
  const std::vector<std::string> cols = MpsNames(tags);
  const std::vector<std::string> rows = MpsNames(labels, {kCostRow});

  const std::size_t n = instance.variables.size();
  std::vector<std::vector<std::pair<std::string_view, double>>> entries(n);
  for (const Term& t : instance.objective) {
    if (t.coeff != 0.0) entries[t.var].push_back({kCostRow, t.coeff});
  }
  for (std::size_t i = 0; i < instance.constraints.size(); ++i) {
    for (const Term& t : instance.constraints[i].terms) {
      entries[t.var].push_back({rows[i], t.coeff});
    }
  }

  std::string out = fmt::format("NAME          {}\nROWS\n", name);
  out += Line("N", kCostRow);
  for (std::size_t i = 0; i < instance.constraints.size(); ++i) {
    const Sense sense = instance.constraints[i].sense;
    out += Line(sense == Sense::kLessEqual ? "L" : sense == Sense::kEqual ? "E" : "G",
                rows[i]);
  }
  out += "COLUMNS\n";
  bool integer_block = false;
  int marker = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const bool binary = instance.variables[j].kind == VarKind::kBinary;
    if (binary != integer_block) {
      out += Line("", fmt::format("MARKER{:02d}", marker++ % 100), "'MARKER'",
                  binary ? "'INTORG'" : "'INTEND'");
      integer_block = binary;
    }
    if (entries[j].empty()) out += Line("", cols[j], kCostRow, "0");
    for (const auto& [row, coeff] : entries[j]) {
      out += Line("", cols[j], row, Number(coeff));
    }
  }
  if (integer_block) {
    out += Line("", fmt::format("MARKER{:02d}", marker % 100), "'MARKER'", "'INTEND'");
  }
  out += "RHS\n";
  if (instance.objective_constant != 0.0) {
    out += Line("", "RHS", kCostRow, Number(-instance.objective_constant));
  }
  for (std::size_t i = 0; i < instance.constraints.size(); ++i) {
    if (instance.constraints[i].rhs != 0.0) {
      out += Line("", "RHS", rows[i], Number(instance.constraints[i].rhs));
    }
  }
  out += "RANGES\nBOUNDS\n";
  for (std::size_t j = 0; j < n; ++j) {
    const VarRef& v = instance.variables[j];
    const bool lower_inf = std::isinf(v.lower);
    const bool upper_inf = std::isinf(v.upper);
    if (v.kind == VarKind::kBinary) {
      out += Line("BV", "BND", cols[j]);
    } else if (lower_inf && upper_inf) {
      out += Line("FR", "BND", cols[j]);
    } else if (!lower_inf && v.lower == v.upper) {
      out += Line("FX", "BND", cols[j], Number(v.lower));
    } else {
      if (lower_inf) {
        out += Line("MI", "BND", cols[j]);
      } else if (v.lower != 0.0) {
        out += Line("LO", "BND", cols[j], Number(v.lower));
      }
      if (!upper_inf) out += Line("UP", "BND", cols[j], Number(v.upper));
    }
  }
  out += "ENDATA\n";
  return out;
}

MilpInstance ParseMps(std::string_view text) {
  enum class Section {
    kNone, kName, kObjSense, kRows, kColumns, kRhs, kRanges, kBounds, kEnd
  };
  Section section = Section::kNone;
  std::vector<RowDraft> rows;
  std::map<std::string, int> row_index;
  std::string objective_row;
  std::set<std::string> extra_free_rows;
  MilpInstance out;
  std::map<std::string, int> col_index;
  std::vector<bool> integer;
  std::vector<bool> bounded;
  bool in_integer_block = false;

  auto column = [&](const std::string& name, int line) {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    const int j = static_cast<int>(out.variables.size());
    if (section != Section::kColumns) {
      throw ParseError(fmt::format("unknown column '{}'", name), line);
    }
    out.variables.push_back({j, VarKind::kContinuous, 0.0, kInf, name});
    col_index.emplace(name, j);
    integer.push_back(in_integer_block);
    bounded.push_back(false);
    return j;
  };
  // Null for the objective; throws for unknown rows.
  auto row = [&](const std::string& name, int line) -> RowDraft* {
    if (name == objective_row) return nullptr;
    auto it = row_index.find(name);
    if (it == row_index.end()) {
      throw ParseError(fmt::format("unknown row '{}'", name), line);
    }
    return &rows[it->second];
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size() && section != Section::kEnd) {
    std::size_t next = text.find('\n', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view raw = text.substr(pos, next - pos);
    pos = next + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.empty() || raw.front() == '*') continue;
    const std::vector<std::string> f = Tokens(raw);
    if (f.empty()) continue;
    if (raw.front() != ' ' && raw.front() != '\t') {
      const std::string& head = f[0];
      if (head == "NAME") {
        section = Section::kName;
      } else if (head == "ROWS") {
        section = Section::kRows;
      } else if (head == "COLUMNS") {
        section = Section::kColumns;
      } else if (head == "RHS") {
        section = Section::kRhs;
      } else if (head == "RANGES") {
        section = Section::kRanges;
      } else if (head == "BOUNDS") {
        section = Section::kBounds;
      } else if (head == "ENDATA") {
        section = Section::kEnd;
      } else if (head == "OBJSENSE") {
        section = Section::kObjSense;
        if (f.size() > 1 && (f[1] == "MAX" || f[1] == "MAXIMIZE")) {
          throw ParseError("only minimization is supported", line_no);
        }
      } else {
        throw ParseError(fmt::format("unknown section '{}'", head), line_no);
      }
      continue;
    }
    switch (section) {
      case Section::kRows: {
        if (f.size() != 2 || f[0].size() != 1) {
          throw ParseError("malformed ROWS entry", line_no);
        }
        const char type = static_cast<char>(std::toupper(f[0][0]));
        if (type == 'N') {
          if (objective_row.empty()) {
            objective_row = f[1];
          } else {
            extra_free_rows.insert(f[1]);
          }
          continue;
        }
        if (type != 'L' && type != 'G' && type != 'E') {
          throw ParseError(fmt::format("unknown row type '{}'", f[0]), line_no);
        }
        if (!row_index.emplace(f[1], static_cast<int>(rows.size())).second) {
          throw ParseError(fmt::format("duplicate row '{}'", f[1]), line_no);
        }
        rows.push_back({f[1], type, {}, 0.0, std::nullopt});
        break;
      }
      case Section::kColumns: {
        if (f.size() >= 3 && f[1] == "'MARKER'") {
          if (f[2] == "'INTORG'") {
            in_integer_block = true;
          } else if (f[2] == "'INTEND'") {
            in_integer_block = false;
          } else {
            throw ParseError(fmt::format("unknown marker {}", f[2]), line_no);
          }
          continue;
        }
        if (f.size() != 3 && f.size() != 5) {
          throw ParseError("malformed COLUMNS entry", line_no);
        }
        const int j = column(f[0], line_no);
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          if (extra_free_rows.count(f[k]) > 0) continue;
          const double v = ParseNumber(f[k + 1], line_no);
          if (RowDraft* r = row(f[k], line_no)) {
            if (v != 0.0) r->terms.push_back({j, v});
          } else if (v != 0.0) {
            out.objective.push_back({j, v});
          }
        }
        break;
      }
      case Section::kRhs:
      case Section::kRanges: {
        if (f.size() != 2 && f.size() != 3 && f.size() != 5) {
          throw ParseError("malformed RHS/RANGES entry", line_no);
        }
        // The set name is optional when only one pair follows.
        const std::size_t first = f.size() == 2 ? 0 : 1;
        for (std::size_t k = first; k + 1 < f.size(); k += 2) {
          if (extra_free_rows.count(f[k]) > 0) continue;
          const double v = ParseNumber(f[k + 1], line_no);
          RowDraft* r = row(f[k], line_no);
          if (section == Section::kRhs) {
            if (r != nullptr) {
              r->rhs = v;
            } else {
              out.objective_constant = -v;
            }
          } else if (r != nullptr) {
            r->range = v;
          }
        }
        break;
      }
      case Section::kBounds: {
        if (f.size() < 3) throw ParseError("malformed BOUNDS entry", line_no);
        const std::string type = f[0];
        auto it = col_index.find(f[2]);
        if (it == col_index.end()) {
          throw ParseError(fmt::format("unknown column '{}'", f[2]), line_no);
        }
        VarRef& v = out.variables[it->second];
        const bool needs_value = type == "UP" || type == "LO" || type == "FX" ||
                                 type == "LI" || type == "UI";
        if (needs_value && f.size() < 4) {
          throw ParseError(fmt::format("bound {} needs a value", type), line_no);
        }
        const double value = needs_value ? ParseNumber(f[3], line_no) : 0.0;
        bounded[it->second] = true;
        if (type == "UP" || type == "UI") {
          v.upper = value;
          if (value < 0.0 && v.lower == 0.0) v.lower = -kInf;
        } else if (type == "LO" || type == "LI") {
          v.lower = value;
        } else if (type == "FX") {
          v.lower = v.upper = value;
        } else if (type == "FR") {
          v.lower = -kInf;
          v.upper = kInf;
        } else if (type == "MI") {
          v.lower = -kInf;
        } else if (type == "PL") {
          v.upper = kInf;
        } else if (type == "BV") {
          v.lower = 0.0;
          v.upper = 1.0;
          integer[it->second] = true;
        } else {
          throw ParseError(fmt::format("unknown bound type '{}'", type), line_no);
        }
        if (type == "LI" || type == "UI") integer[it->second] = true;
        break;
      }
      case Section::kObjSense:
        if (f[0] == "MAX" || f[0] == "MAXIMIZE") {
          throw ParseError("only minimization is supported", line_no);
        }
        break;
      default:
        throw ParseError("data line outside a section", line_no);
    }
  }
  if (section != Section::kEnd) throw ParseError("missing ENDATA", line_no);

  for (std::size_t j = 0; j < out.variables.size(); ++j) {
    VarRef& v = out.variables[j];
    if (!integer[j]) continue;
    if (!bounded[j]) v.upper = 1.0;
    if (v.lower != 0.0 || v.upper != 1.0) {
      throw ParseError(
          fmt::format("integer column '{}' is not binary; only binaries are supported",
                      v.tag),
          line_no);
    }
    v.kind = VarKind::kBinary;
  }
  for (const VarRef& v : out.variables) out.index_map.emplace(v.tag, v.index);
  for (RowDraft& r : rows) {
    Sense sense = r.type == 'L' ? Sense::kLessEqual
                  : r.type == 'G' ? Sense::kGreaterEqual
                                  : Sense::kEqual;
    if (!r.range) {
      out.AddConstraint(std::move(r.terms), sense, r.rhs, r.name, RowFamily::kOther);
      continue;
    }
    const double span = std::abs(*r.range);
    double lo = r.rhs;
    double hi = r.rhs;
    if (r.type == 'L' || (r.type == 'E' && *r.range < 0.0)) lo = r.rhs - span;
    if (r.type == 'G' || (r.type == 'E' && *r.range > 0.0)) hi = r.rhs + span;
    out.AddConstraint(r.terms, Sense::kGreaterEqual, lo, r.name, RowFamily::kOther);
    out.AddConstraint(std::move(r.terms), Sense::kLessEqual, hi, r.name,
                      RowFamily::kOther);
  }
  return out;
}

std::string ExportLpText(const MilpInstance& instance) {
  auto linear = [&](const std::vector<Term>& terms) {
    std::string s;
    for (const Term& t : terms) {
      s += fmt::format(" {} {} {}", t.coeff < 0.0 ? "-" : "+", Number(std::abs(t.coeff)),
                       instance.variables[t.var].tag);
    }
    return s.empty() ? std::string(" 0") : s;
  };
  std::string out = fmt::format("\\ {} variables, {} rows, {} binaries\n",
                                instance.variables.size(),
                                instance.constraints.size(), instance.BinaryCount());
  out += "Minimize\n cost:" + linear(instance.objective);
  if (instance.objective_constant != 0.0) {
    out += fmt::format(" + {}", Number(instance.objective_constant));
  }
  out += "\nSubject To\n";
  for (const LinearConstraint& c : instance.constraints) {
    const char* op = c.sense == Sense::kLessEqual ? "<=" : c.sense == Sense::kEqual ? "=" : ">=";
    out += fmt::format(" {}:{} {} {}\n", c.provenance, linear(c.terms), op, Number(c.rhs));
  }
  out += "Bounds\n";
  for (const VarRef& v : instance.variables) {
    if (v.kind == VarKind::kBinary) continue;
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out += fmt::format(" {} free\n", v.tag);
    } else if (std::isinf(v.upper)) {
      out += fmt::format(" {} >= {}\n", v.tag, Number(v.lower));
    } else if (std::isinf(v.lower)) {
      out += fmt::format(" {} <= {}\n", v.tag, Number(v.upper));
    } else {
      out += fmt::format(" {} <= {} <= {}\n", Number(v.lower), v.tag, Number(v.upper));
    }
  }
  out += "Binaries\n";
  for (const VarRef& v : instance.variables) {
    if (v.kind == VarKind::kBinary) out += " " + v.tag + "\n";
  }
  out += "End\n";
  return out;
}

}  // namespace flexsched
