#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

namespace cktbench::symexpr {

using Rational = mpq_class;
using Exponents = boost::container::small_vector<std::uint16_t, 24>;
using Assignment = std::map<std::string, std::complex<double>, std::less<>>;

/// Symbol names follow `[A-Za-z][A-Za-z0-9_]*`.
bool is_valid_symbol(std::string_view name);

/// Raised when a computation runs past the active WorkBudget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded() : std::runtime_error("symbolic work budget exceeded") {}
};

/// Counts monomial-level operations performed while a BudgetScope is active
/// on the current thread. A limit of zero means unlimited.
class WorkBudget {
 public:
  explicit WorkBudget(std::uint64_t limit = 0) : limit_(limit) {}

  void charge(std::uint64_t units) {
    used_ += units;
    if (limit_ != 0 && used_ > limit_) throw BudgetExceeded();
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

/// Installs a budget for polynomial arithmetic on this thread. Scopes nest;
/// charges go to the innermost one and are forwarded to enclosing scopes.
class BudgetScope {
 public:
  explicit BudgetScope(WorkBudget& budget);
  ~BudgetScope();
  BudgetScope(const BudgetScope&) = delete;
  BudgetScope& operator=(const BudgetScope&) = delete;

  static void charge(std::uint64_t units);

 private:
  WorkBudget* budget_;
  BudgetScope* parent_;
};

struct Term {
  Exponents exps;
  unsigned degree = 0;
  Rational coeff;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Every polynomial carries its own sorted variable list; exponent vectors
/// are indexed by position in that list. Terms are kept sorted in
/// descending graded-lexicographic order (variables compared by name), so
/// the first term is the leading term. Binary operations first align both
/// operands onto the union of their variable lists.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Rational& constant);
  explicit Polynomial(long constant) : Polynomial(Rational(constant)) {}

  static Polynomial variable(const std::string& name, unsigned power = 1);
  /// Builds from unsorted terms, merging duplicates and dropping zeros.
  static Polynomial from_terms(std::vector<std::string> vars, std::vector<Term> terms);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of a constant polynomial (zero for the zero polynomial).
  Rational constant_value() const;
  const Term& leading_term() const { return terms_.front(); }

  /// Variables with a nonzero exponent in some term, sorted.
  std::vector<std::string> symbols() const;
  unsigned degree(std::string_view var) const;
  unsigned total_degree() const;

  /// Re-expresses the polynomial over a sorted superset of its variables.
  Polynomial with_vars(const std::vector<std::string>& vars) const;
  /// Drops variables that no term uses.
  Polynomial compact() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  Polynomial scaled(const Rational& factor) const;
  /// Multiplies every term by the monomial with the given exponents.
  Polynomial shifted(const Exponents& mono) const;
  /// Divides every term by the monomial; each term must be divisible.
  Polynomial unshifted(const Exponents& mono) const;
  Polynomial pow(unsigned n) const;

  /// Quotient when `divisor` divides this polynomial exactly.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

  /// Positive rational c such that this / c has coprime integer coefficients.
  Rational content() const;
  /// Elementwise minimum exponent over all terms (the monomial content).
  Exponents min_exponents() const;

  Polynomial rename(const std::string& from, const std::string& to) const;
  /// Replaces `var` by `value`.
  Polynomial substitute(const std::string& var, const Polynomial& value) const;

  std::complex<double> evaluate(const Assignment& values) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

  /// Text using `*` and `**`, terms in descending graded-lex order.
  std::string to_string() const;

 private:
  std::vector<std::string> vars_;
  std::vector<Term> terms_;

  friend void align(Polynomial& a, Polynomial& b);
};

/// Aligns both polynomials onto the union of their variable lists.
void align(Polynomial& a, Polynomial& b);
std::vector<std::string> merge_vars(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b);

/// Descending graded-lex comparison: true when `a` sorts before `b`.
bool grlex_greater(const Term& a, const Term& b);

/// Exact decimal or scientific literal ("0.5", "1e-3") as a rational.
Rational parse_decimal(std::string_view text);

}  // namespace cktbench::symexpr
