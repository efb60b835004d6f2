#include <gtest/gtest.h>

#include "cktbench/equiv/equiv.hpp"
#include "cktbench/mna/mna.hpp"
#include "cktbench/netlist/netlist.hpp"
#include "cktbench/schemgen/generator.hpp"
#include "cktbench/symexpr/expr.hpp"
#include "oracles.hpp"

using namespace cktbench;
using namespace cktbench::mna;
using netlist::parse_netlist;
using symexpr::parse_rational;
using cplx = std::complex<double>;

namespace {

const char* kQ1 = "R5 1 0 R5\nR1 0 3 R1\nR6 1 2 R6\nV1 2 3 V1\nR2 3 4 R2\nR3 5 2 R3\nR4 6 2 R4\nR7 5 4 R7\nR8 5 6 R8\n";
const char* kQ3 = "R1 1 2 R1\nC1 1 0 C1\nE1 3 2 1 2 x_1 0\nV1 5 0 step\nR2 3 5 R2\n";
const char* kQ5 =
    "R4 1 2 R4\nV1 1 0 step\nL2 3 2 L2\nC1 2 0 C1\nR1 3 0 R1\nR2 0 5 R2\nL1 6 0 L1\nR3 6 0 R3\n"
    "Rint1 5 31 Rint1\nCint1 6 31 Cint1\nEint1 6 0 0 31 Ad 0\n";

bool equivalent(const RationalFunc& a, const RationalFunc& b) {
  const auto v = equiv::check_equivalence(a, b);
  return v.outcome == equiv::Outcome::Equivalent && v.decided_by == equiv::Stage::SymbolicZero;
}

}  // namespace

TEST(Stamp, SingleLoop) {
  const auto n = parse_netlist("V1 1 0 step\nR1 1 0 R1\n");
  const MnaSystem sys = stamp(n);
  EXPECT_EQ(sys.size(), 2u);
  EXPECT_EQ(sys.unknowns[0].label(), "Vn1");
  EXPECT_EQ(sys.unknowns[1].label(), "I(V1)");
  EXPECT_EQ(node_voltage(n, 1), parse_rational("V1/s"));
}

TEST(Stamp, UnsupportedMacro) {
  try {
    stamp(parse_netlist("V1 1 0 step\nX1 1 2 R\nR1 2 0 R1\n"));
    FAIL();
  } catch (const MnaError& e) {
    EXPECT_EQ(e.kind(), MnaError::Kind::UnsupportedKind);
  }
}

TEST(Stamp, Q5CarriesOpAmpGain) {
  const MnaSystem sys = stamp(parse_netlist(kQ5));
  bool found = false;
  for (const auto& row : sys.a)
    for (const auto& x : row)
      for (const auto& sym : x.symbols()) found |= sym == "Ad";
  EXPECT_TRUE(found);
  EXPECT_NE(sys.to_string().find("Ad"), std::string::npos);
}

TEST(Solve, Q1NodeTwo) {
  const RationalFunc v = node_voltage(parse_netlist(kQ1), 2);
  EXPECT_TRUE(equivalent(v, parse_rational("V1*(R5 + R6)/(s*(R1 + R5 + R6))")));
  EXPECT_EQ(v, parse_rational("V1*(R5 + R6)/(s*(R1 + R5 + R6))"));
}

TEST(Solve, Q5NodeThree) {
  // The op-amp stage shares only ground with node 3.
  const RationalFunc v = node_voltage(parse_netlist(kQ5), 3);
  EXPECT_TRUE(equivalent(v, parse_rational("R1*V1/(s*(C1*L2*R4*s**2 + C1*R1*R4*s + L2*s + R1 + R4))")));
}

TEST(Solve, Divider) {
  const auto n = parse_netlist("V1 1 0 ac\nR1 1 2 R1\nR2 2 0 R2\n");
  EXPECT_EQ(node_voltage(n, 2), parse_rational("V1*R2/(R1 + R2)"));
}

TEST(Solve, ResidualIsZero) {
  for (const char* text : {kQ1, kQ3, kQ5}) {
    const MnaSystem sys = stamp(parse_netlist(text));
    const Solution x = solve(sys);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      RationalFunc r = -sys.b[i];
      for (std::size_t j = 0; j < sys.size(); ++j) r += sys.a[i][j] * x.at(sys.unknowns[j].label());
      EXPECT_TRUE(symexpr::simplify(r).value.is_zero()) << text << " row " << i;
    }
  }
}

TEST(Solve, Singular) {
  // E1 sits in parallel with V1, so the two branch currents cannot be told apart.
  try {
    solve(stamp(parse_netlist("V1 1 0 step\nR1 1 2 R1\nR2 2 0 R2\nE1 1 0 2 0 k 0\n")));
    FAIL();
  } catch (const MnaError& e) {
    EXPECT_EQ(e.kind(), MnaError::Kind::SingularSystem);
  }
}

TEST(Solve, BudgetExceeded) {
  try {
    solve(stamp(parse_netlist(kQ5)), SolveOptions{.work_limit = 10});
    FAIL();
  } catch (const MnaError& e) {
    EXPECT_EQ(e.kind(), MnaError::Kind::WorkBudgetExceeded);
  }
}

TEST(Budget, ComplexityScore) {
  const auto n = parse_netlist(kQ5);
  // 11 components, 1 controlled source, 4 reactive.
  EXPECT_DOUBLE_EQ(complexity_score(n), 11 + 2 * 1 + 3 * 4);
  EXPECT_EQ(work_budget(n), static_cast<std::uint64_t>(1e6 * (1 + 25 / 10.0)));
}

TEST(Transfer, Q3AcrossR1) {
  const RationalFunc h = transfer_function(parse_netlist(kQ3), std::string("R1"));
  EXPECT_TRUE(equivalent(h, parse_rational("((R1*s/(R1*x_1 - R1 - R2))/(s - 1/(C1*R1*x_1 - C1*R1 - C1*R2)))*1")));
}

TEST(Transfer, RcLowPass) {
  const RationalFunc h = transfer_function(parse_netlist("V1 1 0 step\nR 1 2 R\nC 2 0 C\n"), std::string("C"));
  EXPECT_EQ(h, parse_rational("1/(R*C*s + 1)"));
}

TEST(Transfer, AcrossSourceIsUnity) {
  const auto n = parse_netlist("V1 1 0 step\nR1 1 2 R1\nC1 2 0 C1\n");
  EXPECT_EQ(transfer_function(n, std::string("V1")), RationalFunc(1L));
  EXPECT_EQ(transfer_function(n, std::pair<NodeId, NodeId>{1, 0}), RationalFunc(1L));
}

TEST(Transfer, PolarityFollowsTerminalOrder) {
  const auto a = parse_netlist("V1 1 0 step\nR1 1 2 R1\nR2 2 0 R2\n");
  const auto b = parse_netlist("V1 1 0 step\nR1 2 1 R1\nR2 2 0 R2\n");
  EXPECT_EQ(transfer_function(a, std::string("R1")), -transfer_function(b, std::string("R1")));
}

TEST(Transfer, BadOutput) {
  const auto n = parse_netlist("V1 1 0 step\nR1 1 0 R1\n");
  EXPECT_THROW(transfer_function(n, std::string("R9")), MnaError);
}

TEST(Numeric, Divider) {
  const auto n = parse_netlist("V1 1 0 ac\nR1 1 2 R1\nR2 2 0 R2\n");
  const auto x = numeric_solve(n, {{"V1", 1}, {"R1", 1}, {"R2", 1}}, 1.0);
  EXPECT_NEAR(std::abs(x.at(2) - 0.5), 0, 1e-15);
}

TEST(Numeric, Q1AllOnes) {
  const auto n = parse_netlist(kQ1);
  NumericValues v;
  for (const auto& c : n.components()) v[c.value] = 1.0;
  const auto x = numeric_solve(n, v, 2.0);
  EXPECT_NEAR(std::abs(x.at(2) - 1.0 / 3.0), 0, 1e-14);
}

TEST(Numeric, Singular) {
  const auto n = parse_netlist("V1 1 0 step\nR1 1 2 R1\nE1 2 0 2 0 x 0\n");
  try {
    numeric_solve(n, {{"V1", 1}, {"R1", 1}, {"x", 1}}, 1.0);
    FAIL();
  } catch (const MnaError& e) {
    EXPECT_EQ(e.kind(), MnaError::Kind::NumericallySingular);
  }
}

TEST(Numeric, ConjugateSymmetry) {
  Rng rng(8);
  for (const char* text : {kQ1, kQ3, kQ5}) {
    const auto n = parse_netlist(text);
    const auto v = oracle::netlist_values(n, rng);
    const cplx s(0.7, 1.3);
    const auto a = numeric_solve(n, v, s), b = numeric_solve(n, v, std::conj(s));
    for (const auto& [node, x] : a) EXPECT_LT(std::abs(std::conj(x) - b.at(node)), 1e-12);
  }
}

// Symbolic result evaluated numerically against the floating-point solve.
TEST(Property, SymbolicMatchesNumeric) {
  int checked = 0;
  for (int level : {0, 1, 2, 4}) {
    for (int i = 0; i < 12; ++i) {
      Rng rng(derive_seed(100 + level, i));
      const auto g = schemgen::generate_schematic(rng, level, schemgen::default_config(level));
      Solution sol;
      try {
        sol = solve(stamp(g.netlist), SolveOptions{.work_limit = work_budget(g.netlist)});
      } catch (const MnaError&) {
        continue;
      }
      for (int k = 0; k < 10; ++k) {
        const auto values = oracle::netlist_values(g.netlist, rng);
        const cplx s = oracle::random_s(rng);
        NumericSolution num;
        try {
          num = numeric_solve(g.netlist, values, s);
        } catch (const MnaError&) {
          continue;
        }
        symexpr::Assignment a(values.begin(), values.end());
        a["s"] = s;
        for (const auto& [node, x] : num) {
          if (node == 0) continue;
          const auto it = sol.find("Vn" + std::to_string(node));
          ASSERT_NE(it, sol.end());
          cplx y;
          try {
            y = symexpr::eval_numeric(it->second, a, 1e-12);
          } catch (const symexpr::EvalError&) {
            continue;
          }
          EXPECT_LE(oracle::rel_err(y, x), 1e-9) << netlist::serialize(g.netlist) << "node " << node;
        }
      }
      ++checked;
    }
  }
  EXPECT_GE(checked, 40);
}

TEST(Property, WaveformDoesNotChangeTransferFunction) {
  for (int i = 0; i < 20; ++i) {
    Rng rng(derive_seed(55, i));
    auto g = schemgen::generate_schematic(rng, 1, schemgen::default_config(1));
    if (g.kind != schemgen::QuestionKind::TransferFunction) continue;
    auto ac = g.netlist;
    for (auto& c : ac.components())
      if (c.waveform) c.waveform->kind = netlist::Waveform::AcUnit;
    EXPECT_TRUE(equivalent(transfer_function(g.netlist, g.target_component),
                           transfer_function(ac, g.target_component)));
  }
}
