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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flexsched/builder.hpp"
#include "flexsched/errors.hpp"
#include "flexsched/mps.hpp"
#include "flexsched/solver.hpp"

namespace flexsched {
namespace {

void ExpectSameStructure(const MilpInstance& a, const MilpInstance& b) {
  ASSERT_EQ(a.variables.size(), b.variables.size());
  ASSERT_EQ(a.constraints.size(), b.constraints.size());
  for (size_t j = 0; j < a.variables.size(); ++j) {
    EXPECT_EQ(a.variables[j].kind, b.variables[j].kind) << j;
    EXPECT_EQ(a.variables[j].lower, b.variables[j].lower) << j;
    EXPECT_EQ(a.variables[j].upper, b.variables[j].upper) << j;
  }
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-11 * std::max(1.0, std::abs(x)); };
  for (size_t i = 0; i < a.constraints.size(); ++i) {
    const LinearConstraint& r = a.constraints[i];
    const LinearConstraint& s = b.constraints[i];
    EXPECT_EQ(r.sense, s.sense) << i;
    EXPECT_TRUE(close(r.rhs, s.rhs)) << i;
    ASSERT_EQ(r.terms.size(), s.terms.size()) << i;
    std::map<int, double> m;
    for (const Term& t : r.terms) m[t.var] = t.coeff;
    for (const Term& t : s.terms) EXPECT_TRUE(close(m[t.var], t.coeff)) << i;
  }
  std::map<int, double> obj;
  for (const Term& t : a.objective) obj[t.var] += t.coeff;
  for (const Term& t : b.objective) EXPECT_TRUE(close(obj[t.var], t.coeff));
  EXPECT_TRUE(close(a.objective_constant, b.objective_constant));
}

TEST(Mps, TinyPlantRoundTrip) {
  const testing::TinyParams p;
  const MilpInstance inst = BuildInstance(testing::TinyTopology(p), testing::TinyHorizon(p),
                                          p.prices, testing::TinyForecasts(p));
  const std::string text = ExportMps(inst);
  const MilpInstance back = ParseMps(text);
  ExpectSameStructure(inst, back);
  EXPECT_EQ(ExportMps(back), text);
  const MilpSolution a = SolveMilp(inst, {.gap = 1e-9});
  const MilpSolution b = SolveMilp(back, {.gap = 1e-9});
  ASSERT_EQ(a.status, MilpStatus::kOptimalWithinGap);
  ASSERT_EQ(b.status, MilpStatus::kOptimalWithinGap);
  EXPECT_NEAR(a.objective, b.objective, 1e-9);
}

TEST(Mps, LpBatteryRoundTrip) {
  for (const testing::LpCase& c : testing::LpBattery()) {
    SCOPED_TRACE(c.name);
    const MilpInstance back = ParseMps(ExportMps(c.instance));
    ExpectSameStructure(c.instance, back);
    const LpSolution sol = SolveLp(back);
    EXPECT_EQ(sol.status, c.status);
    if (c.status == LpStatus::kOptimal) {
      EXPECT_NEAR(sol.objective, c.objective, 1e-7);
    }
  }
}

TEST(Mps, ExportIsFixedFormat) {
  MilpInstance inst;
  const int x = inst.AddVariable("x", VarKind::kContinuous, -1, 4);
  const int b = inst.AddVariable("b", VarKind::kBinary, 0, 1);
  inst.AddConstraint({{x, 1}, {b, -2.5}}, Sense::kLessEqual, 3, "cap @ t=0", RowFamily::kOther);
  inst.objective = {{x, 1}};
  inst.objective_constant = 2;
  const std::string expected =
      "NAME          FLEXSCHD\n"
      "ROWS\n"
      " N  COST\n"
      " L  capt0\n"
      "COLUMNS\n"
      "    x         COST      1\n"
      "    x         capt0     1\n"
      "    MARKER00  'MARKER'  'INTORG'\n"
      "    b         capt0     -2.5\n"
      "    MARKER01  'MARKER'  'INTEND'\n"
      "RHS\n"
      "    RHS       COST      -2\n"
      "    RHS       capt0     3\n"
      "RANGES\n"
      "BOUNDS\n"
      " LO BND       x         -1\n"
      " UP BND       x         4\n"
      " BV BND       b\n"
      "ENDATA\n";
  EXPECT_EQ(ExportMps(inst), expected);
}

TEST(Mps, ParsesFreeFormWithRangesAndBounds) {
  const std::string text =
      "* comment\n"
      "NAME demo\n"
      "ROWS\n"
      " N obj\n"
      " G r1\n"
      " L r2\n"
      " E r3\n"
      "COLUMNS\n"
      " x obj 1 r1 1\n"
      " x r2 1\n"
      " y obj -1 r1 1\n"
      " y r3 1\n"
      "RHS\n"
      " rhs r1 1 r2 4\n"
      " rhs r3 2\n"
      "RANGES\n"
      " rng r2 3 r3 -1\n"
      "BOUNDS\n"
      " MI bnd x\n"
      " UP bnd x 10\n"
      " UP bnd y 5\n"
      "ENDATA\n";
  const MilpInstance inst = ParseMps(text);
  ASSERT_EQ(inst.variables.size(), 2u);
  EXPECT_TRUE(std::isinf(inst.variables[0].lower));
  EXPECT_EQ(inst.variables[0].upper, 10);
  // r1, r2 split into [1, 4], r3 split into [1, 2].
  ASSERT_EQ(inst.constraints.size(), 5u);
  EXPECT_EQ(inst.constraints[1].sense, Sense::kGreaterEqual);
  EXPECT_EQ(inst.constraints[1].rhs, 1);
  EXPECT_EQ(inst.constraints[2].rhs, 4);
  EXPECT_EQ(inst.constraints[3].rhs, 1);
  EXPECT_EQ(inst.constraints[4].rhs, 2);
  // min x - y, x + y >= 1, 1 <= x <= 4, 1 <= y <= 2: x = 1, y = 2.
  const LpSolution sol = SolveLp(inst);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -1, 1e-9);
}

TEST(Mps, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      ParseMps(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("NAME x\nROWS\n N c\nCOLUMNS\n x nope 1\nENDATA\n"), 5);
  EXPECT_EQ(line_of("NAME x\nROWS\n N c\n Q r\nENDATA\n"), 4);
  EXPECT_EQ(line_of("NAME x\nROWS\n N c\nCOLUMNS\n x c 1\n"), 5);
  EXPECT_EQ(line_of("NAME x\nROWS\n N c\nCOLUMNS\n x c abc\nENDATA\n"), 5);
  EXPECT_EQ(line_of("NAME x\nOBJSENSE\n MAX\nROWS\n N c\nENDATA\n"), 3);
  EXPECT_GT(line_of("NAME x\nROWS\n N c\nCOLUMNS\n M 'MARKER' 'INTORG'\n x c 1\n"
                    " M 'MARKER' 'INTEND'\nBOUNDS\n UP b x 3\nENDATA\n"),
            0);
}

TEST(MpsProperty, NamesAreShortUniqueAndStable) {
  testing::Rng rng(8);
  const std::string alphabet = "abcXYZ019_[]/@ =-";
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> labels;
    const int n = rng.Int(1, 300);
    for (int i = 0; i < n; ++i) {
      std::string s;
      const int len = rng.Int(0, 14);
      for (int k = 0; k < len; ++k) s += alphabet[rng.Int(0, int(alphabet.size()) - 1)];
      labels.push_back(s);
    }
    const std::vector<std::string> names = MpsNames(labels, {"COST"});
    ASSERT_EQ(names.size(), labels.size());
    std::set<std::string> seen{"COST"};
    for (const std::string& name : names) {
      EXPECT_FALSE(name.empty());
      EXPECT_LE(name.size(), 8u);
      for (char c : name) EXPECT_TRUE(std::isalnum(static_cast<unsigned char>(c)) || c == '_');
      EXPECT_TRUE(seen.insert(name).second) << name;
    }
    EXPECT_EQ(MpsNames(labels, {"COST"}), names);
  }
}

TEST(Mps, LpTextMentionsEveryRow) {
  const testing::TinyParams p;
  const MilpInstance inst = BuildInstance(testing::TinyTopology(p), testing::TinyHorizon(p),
                                          p.prices, testing::TinyForecasts(p));
  const std::string text = ExportLpText(inst);
  for (const LinearConstraint& c : inst.constraints) {
    EXPECT_NE(text.find(" " + c.provenance + ":"), std::string::npos) << c.provenance;
  }
}

}  // namespace
}  // namespace flexsched
