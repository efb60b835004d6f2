#pragma once

#include <string>
#include <vector>

#include "cktbench/symexpr/polynomial.hpp"

namespace cktbench::symexpr {

/// Greatest common divisor over Q[vars], normalized to integer coefficients
/// with unit content and a positive leading coefficient. gcd(0, 0) = 0.
///
/// Content/primitive-part recursion on one main variable at a time, with a
/// primitive pseudo-remainder sequence in that variable. Charges the active
/// WorkBudget and may throw BudgetExceeded.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// `p` scaled to integer coefficients with unit content and a positive
/// leading coefficient.
Polynomial normalized(const Polynomial& p);

/// Coefficients of `p` viewed as a polynomial in `var`; entry k multiplies
/// var^k. The coefficients keep p's variable list with `var` zeroed out.
std::vector<Polynomial> coefficients_in(const Polynomial& p, const std::string& var);

}  // namespace cktbench::symexpr
