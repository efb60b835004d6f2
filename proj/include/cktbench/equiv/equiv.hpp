#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cktbench/symexpr/rational_func.hpp"

namespace cktbench::equiv {

using symexpr::RationalFunc;

enum class Outcome { Equivalent, NotEquivalent, Indeterminate };
enum class Stage { SymbolicZero, NumericSampling, ParseFailure };

struct Verdict {
  Outcome outcome = Outcome::Indeterminate;
  Stage decided_by = Stage::NumericSampling;
  std::string details;
};

std::string_view outcome_name(Outcome o);
std::string_view stage_name(Stage s);
/// "Equivalent (SymbolicZero)".
std::string to_string(const Verdict& v);

struct SamplingConfig {
  int points = 100;
  /// |s| is drawn uniformly from this range with a uniform argument.
  double s_min = 0.1;
  double s_max = 10;
  /// Real draws for every other symbol.
  double symbol_min = 0.1;
  double symbol_max = 10;
  double pole_guard = 1e-8;
  /// |pred - truth| <= tolerance * max(1, |truth|).
  double tolerance = 1e-6;
  /// Redraws of a point that lands near a pole of either side.
  int max_redraws = 10;
  std::uint64_t seed = 0;
  /// Monomial-operation budget for the symbolic subtraction.
  std::uint64_t work_limit = symexpr::kDefaultSimplifyBudget;
};

/// Parses both sides (text after the last '='), subtracts them exactly and
/// declares Equivalent(SymbolicZero) when the difference vanishes. A
/// nonzero difference goes to numeric sampling, which can only confirm
/// NotEquivalent; when every sample agrees the verdict is Indeterminate.
/// When the subtraction exceeds its budget, sampling decides alone.
Verdict check_equivalence(std::string_view pred, std::string_view truth, const SamplingConfig& cfg = {});
Verdict check_equivalence(const RationalFunc& pred, const RationalFunc& truth, const SamplingConfig& cfg = {});

/// Content of the last <answer>...</answer> span, trimmed; else the last
/// line containing '='; else the whole trimmed text.
std::string extract_answer(std::string_view response);

/// Case- and whitespace-insensitive comparison of option letters. When
/// `options` (texts of A, B, C, ...) is given, an option text on either
/// side resolves to its letter first; "B)", "(B)" and "B." read as "B".
bool grade_mc(std::string_view selected, std::string_view key, const std::vector<std::string>& options = {});

}  // namespace cktbench::equiv
