#include "cktbench/equiv/equiv.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "cktbench/rng.hpp"
#include "cktbench/symexpr/expr.hpp"

namespace cktbench::equiv {

using symexpr::Polynomial;

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Equivalent: return "Equivalent";
    case Outcome::NotEquivalent: return "NotEquivalent";
    case Outcome::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::SymbolicZero: return "SymbolicZero";
    case Stage::NumericSampling: return "NumericSampling";
    case Stage::ParseFailure: return "ParseFailure";
  }
  return "NumericSampling";
}

std::string to_string(const Verdict& v) {
  return std::string(outcome_name(v.outcome)) + " (" + std::string(stage_name(v.decided_by)) + ")";
}

namespace {

struct SampleResult {
  int checked = 0;
  int mismatches = 0;
  std::string first_mismatch;
};

SampleResult sample(const RationalFunc& pred, const RationalFunc& truth, const SamplingConfig& cfg) {
  std::set<std::string> names;
  for (const auto& n : pred.symbols()) names.insert(n);
  for (const auto& n : truth.symbols()) names.insert(n);

  Rng rng(cfg.seed);
  SampleResult r;
  for (int i = 0; i < cfg.points; ++i) {
    for (int attempt = 0; attempt <= cfg.max_redraws; ++attempt) {
      symexpr::Assignment a;
      for (const auto& n : names) {
        if (n == symexpr::kFrequencyVar) {
          a[n] = std::polar(rng.uniform(cfg.s_min, cfg.s_max), rng.uniform(0.0, 2 * std::numbers::pi));
        } else {
          a[n] = rng.uniform(cfg.symbol_min, cfg.symbol_max);
        }
      }
      std::complex<double> p, t;
      try {
        p = symexpr::eval_numeric(pred, a, cfg.pole_guard);
        t = symexpr::eval_numeric(truth, a, cfg.pole_guard);
      } catch (const symexpr::EvalError&) {
        continue;
      }
      if (!std::isfinite(p.real()) || !std::isfinite(p.imag()) || !std::isfinite(t.real()) ||
          !std::isfinite(t.imag())) {
        continue;
      }
      ++r.checked;
      if (std::abs(p - t) > cfg.tolerance * std::max(1.0, std::abs(t))) {
        if (r.mismatches++ == 0) {
          r.first_mismatch = "point " + std::to_string(i) + ": |pred - truth| = " + std::to_string(std::abs(p - t));
        }
      }
      break;
    }
  }
  return r;
}

}  // namespace

Verdict check_equivalence(const RationalFunc& pred, const RationalFunc& truth, const SamplingConfig& cfg) {
  bool budget_hit = false;
  try {
    symexpr::WorkBudget budget(cfg.work_limit);
    symexpr::BudgetScope scope(budget);
    const Polynomial diff =
        pred.numerator() * truth.denominator() - truth.numerator() * pred.denominator();
    if (diff.is_zero()) return {Outcome::Equivalent, Stage::SymbolicZero, "difference simplifies to 0"};
  } catch (const symexpr::BudgetExceeded&) {
    budget_hit = true;
  }

  const SampleResult r = sample(pred, truth, cfg);
  if (r.mismatches > 0) {
    return {Outcome::NotEquivalent, Stage::NumericSampling,
            std::to_string(r.mismatches) + " of " + std::to_string(r.checked) + " points differ; " + r.first_mismatch};
  }
  if (r.checked == 0) return {Outcome::Indeterminate, Stage::NumericSampling, "no point avoided the poles"};
  if (budget_hit) {
    return {Outcome::Equivalent, Stage::NumericSampling,
            "symbolic subtraction over budget; " + std::to_string(r.checked) + " points agree"};
  }
  return {Outcome::Indeterminate, Stage::NumericSampling,
          "difference is nonzero yet " + std::to_string(r.checked) + " points agree within tolerance"};
}

Verdict check_equivalence(std::string_view pred, std::string_view truth, const SamplingConfig& cfg) {
  RationalFunc p, t;
  try {
    t = symexpr::parse_rational(truth);
  } catch (const std::exception& e) {
    return {Outcome::NotEquivalent, Stage::ParseFailure, std::string("truth: ") + e.what()};
  }
  try {
    p = symexpr::parse_rational(pred);
  } catch (const std::exception& e) {
    return {Outcome::NotEquivalent, Stage::ParseFailure, std::string("pred: ") + e.what()};
  }
  return check_equivalence(p, t, cfg);
}

}  // namespace cktbench::equiv
