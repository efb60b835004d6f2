#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cktbench/symexpr/polynomial.hpp"

namespace cktbench::symexpr {

/// The complex-frequency variable.
inline constexpr const char* kFrequencyVar = "s";

/// Exact ratio of two polynomials.
///
/// Always held in canonical form: integer coefficients whose combined content
/// is one, no monomial factor common to numerator and denominator, a
/// denominator with positive leading coefficient, and denominator 1 when the
/// numerator is zero. Canonical form does not cancel polynomial common
/// factors; that is what simplify() is for.
class RationalFunc {
 public:
  RationalFunc() : den_(1) {}
  RationalFunc(const Polynomial& num);  // NOLINT: polynomials embed implicitly
  RationalFunc(Polynomial num, Polynomial den);
  explicit RationalFunc(const Rational& c) : RationalFunc(Polynomial(c)) {}
  explicit RationalFunc(long c) : RationalFunc(Polynomial(c)) {}

  static RationalFunc symbol(const std::string& name) { return RationalFunc(Polynomial::variable(name)); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  std::vector<std::string> symbols() const;

  RationalFunc operator-() const;
  friend RationalFunc operator+(const RationalFunc& a, const RationalFunc& b);
  friend RationalFunc operator-(const RationalFunc& a, const RationalFunc& b);
  friend RationalFunc operator*(const RationalFunc& a, const RationalFunc& b);
  friend RationalFunc operator/(const RationalFunc& a, const RationalFunc& b);
  RationalFunc& operator+=(const RationalFunc& b) { return *this = *this + b; }
  RationalFunc& operator-=(const RationalFunc& b) { return *this = *this - b; }
  RationalFunc& operator*=(const RationalFunc& b) { return *this = *this * b; }
  RationalFunc& operator/=(const RationalFunc& b) { return *this = *this / b; }
  RationalFunc pow(int n) const;
  RationalFunc reciprocal() const;

  /// Structural equality of canonical forms.
  friend bool operator==(const RationalFunc& a, const RationalFunc& b);

 private:
  Polynomial num_;
  Polynomial den_;
  void canonicalize();
};

/// True when a and b are the same function (cross-multiplication test; no
/// gcd required).
bool same_function(const RationalFunc& a, const RationalFunc& b);

struct SimplifyResult {
  RationalFunc value;
  /// False when the gcd exceeded the work budget and `value` is the input.
  bool simplified = true;
};

/// Default monomial-operation budget for simplify().
inline constexpr std::uint64_t kDefaultSimplifyBudget = 50'000'000;

/// Cancels the polynomial gcd of numerator and denominator. Idempotent.
/// Runs under its own budget of `work_limit` operations (0 = unlimited).
SimplifyResult simplify(const RationalFunc& rf, std::uint64_t work_limit = kDefaultSimplifyBudget);

class EvalError : public std::runtime_error {
 public:
  enum class Kind { MissingSymbol, NearPole };
  EvalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Evaluates num(a)/den(a). Throws EvalError::MissingSymbol when the
/// assignment lacks a symbol, EvalError::NearPole when |den(a)| <= pole_guard.
std::complex<double> eval_numeric(const RationalFunc& rf, const Assignment& assignment,
                                  double pole_guard = 1e-12);

/// Deterministic text that parses back to the same canonical function,
/// e.g. "1/(C*R*s + 1)" or "R1*s**2".
std::string format_canonical(const RationalFunc& rf);

}  // namespace cktbench::symexpr
