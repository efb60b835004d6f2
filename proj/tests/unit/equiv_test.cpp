#include <gtest/gtest.h>

#include "cktbench/equiv/equiv.hpp"
#include "cktbench/rng.hpp"
#include "cktbench/symexpr/expr.hpp"

using namespace cktbench;
using namespace cktbench::equiv;
using symexpr::parse_rational;
using symexpr::Polynomial;

namespace {

const char* kLowPass = "1/(R*C*s+1)";
const char* kLowPassAlt = "(1/(R*C))/(s+1/(R*C))";

Polynomial random_poly(Rng& rng) {
  static const char* names[] = {"s", "R", "C", "L"};
  Polynomial p;
  const int terms = 1 + static_cast<int>(rng.below(3));
  for (int t = 0; t < terms; ++t) {
    Polynomial m(rng.between(1, 6) * (rng.chance(0.3) ? -1 : 1));
    for (const char* n : names)
      if (unsigned e = static_cast<unsigned>(rng.below(3))) m *= Polynomial::variable(n, e);
    p += m;
  }
  return p.is_zero() ? Polynomial(1L) : p;
}

}  // namespace

TEST(Check, SectionPairIsEquivalent) {
  const Verdict v = check_equivalence(kLowPass, kLowPassAlt);
  EXPECT_EQ(v.outcome, Outcome::Equivalent);
  EXPECT_EQ(v.decided_by, Stage::SymbolicZero);
  EXPECT_EQ(to_string(v), "Equivalent (SymbolicZero)");
}

TEST(Check, ScaledIsNot) {
  const Verdict v = check_equivalence("2/(R*C*s+1)", kLowPassAlt);
  EXPECT_EQ(v.outcome, Outcome::NotEquivalent);
  EXPECT_EQ(v.decided_by, Stage::NumericSampling);
}

TEST(Check, ParseFailure) {
  const Verdict v = check_equivalence("garbage((", kLowPass);
  EXPECT_EQ(v.outcome, Outcome::NotEquivalent);
  EXPECT_EQ(v.decided_by, Stage::ParseFailure);
  EXPECT_NE(v.details.find("pred"), std::string::npos) << v.details;
}

TEST(Check, EquationSidesAndNotation) {
  EXPECT_EQ(check_equivalence("H(s) = 1/(C*R*s + 1)", "H(s)=1/(R*C*s+1)").outcome, Outcome::Equivalent);
  EXPECT_EQ(check_equivalence("Vn3(s) = R1*V1/(s*(L2*s**2 + 1))", "R1*V1/(s*(L2*s^2+1))").outcome,
            Outcome::Equivalent);
  EXPECT_EQ(check_equivalence("0.5*V1/s", "V1/(2*s)").outcome, Outcome::Equivalent);
}

TEST(Check, ExtraSymbolIsNotEquivalent) {
  EXPECT_EQ(check_equivalence("1/(R*C*s+1) + K", kLowPass).outcome, Outcome::NotEquivalent);
  EXPECT_EQ(check_equivalence("K/(R*C*s+1)", kLowPass).outcome, Outcome::NotEquivalent);
}

TEST(Check, ZeroAgainstZero) { EXPECT_EQ(check_equivalence("0", "s - s").outcome, Outcome::Equivalent); }

TEST(Check, BudgetFallsBackToSampling) {
  SamplingConfig cfg;
  cfg.work_limit = 1;
  const Verdict v = check_equivalence("(R+C+s)^3/(R+C+s)^4", "1/(R+C+s)", cfg);
  EXPECT_EQ(v.outcome, Outcome::Equivalent);
  EXPECT_EQ(v.decided_by, Stage::NumericSampling);
}

TEST(Check, Deterministic) {
  SamplingConfig cfg;
  cfg.seed = 99;
  const Verdict a = check_equivalence("1/(R*C*s+2)", kLowPass, cfg);
  const Verdict b = check_equivalence("1/(R*C*s+2)", kLowPass, cfg);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.details, b.details);
}

TEST(Extract, AnswerTag) {
  EXPECT_EQ(extract_answer("<think>...</think><answer>H(s)=1/(s+1)</answer>"), "H(s)=1/(s+1)");
  EXPECT_EQ(extract_answer("<answer> a </answer> then <answer>\n b \n</answer>"), "b");
}

TEST(Extract, Fallbacks) {
  EXPECT_EQ(extract_answer("some words\nTherefore Vn2(s) = V1/s\nDone."), "Therefore Vn2(s) = V1/s");
  EXPECT_EQ(check_equivalence(extract_answer("Therefore Vn2(s) = V1/s"), "V1/s").outcome, Outcome::Equivalent);
  EXPECT_EQ(extract_answer("  B  \n"), "B");
}

TEST(Mc, Letters) {
  EXPECT_TRUE(grade_mc("B", "b"));
  EXPECT_TRUE(grade_mc(" C ", "C"));
  EXPECT_TRUE(grade_mc("(B)", "B"));
  EXPECT_TRUE(grade_mc("B)", "B"));
  EXPECT_FALSE(grade_mc("A", "B"));
}

TEST(Mc, OptionText) {
  const std::vector<std::string> opts = {"1/(s+1)", "2/(s+1)", "s", "None of the above"};
  EXPECT_TRUE(grade_mc("None of the above", "D", opts));
  EXPECT_TRUE(grade_mc("none of the  above", "D", opts));
  EXPECT_TRUE(grade_mc("2/(s+1)", "B", opts));
  EXPECT_FALSE(grade_mc("None of the above", "A", opts));
}

TEST(Property, Reflexive) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const symexpr::RationalFunc f(random_poly(rng), random_poly(rng));
    const std::string t = symexpr::format_canonical(f);
    EXPECT_EQ(check_equivalence(t, t).outcome, Outcome::Equivalent) << t;
  }
}

TEST(Property, ScaleCancellation) {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Polynomial n = random_poly(rng), d = random_poly(rng), k = random_poly(rng);
    const symexpr::RationalFunc truth(n, d), scaled(n * k, d * k);
    const Verdict v = check_equivalence(symexpr::format_canonical(scaled), symexpr::format_canonical(truth));
    EXPECT_EQ(v.outcome, Outcome::Equivalent);
    EXPECT_EQ(v.decided_by, Stage::SymbolicZero);
  }
}

TEST(Property, SoundUnderPerturbation) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const symexpr::RationalFunc f(random_poly(rng), random_poly(rng));
    // delta is a nonzero symbolic term, so f * (1 + delta) differs from f.
    const symexpr::RationalFunc delta(random_poly(rng), random_poly(rng));
    if (f.is_zero() || delta.is_zero()) continue;
    const Verdict v = check_equivalence(f * (symexpr::RationalFunc(1L) + delta), f);
    EXPECT_EQ(v.outcome, Outcome::NotEquivalent) << symexpr::format_canonical(f) << " | " << v.details;
  }
}
