#include "cktbench/symexpr/rational_func.hpp"

#include <algorithm>

#include "cktbench/symexpr/gcd.hpp"

namespace cktbench::symexpr {

RationalFunc::RationalFunc(const Polynomial& num) : num_(num), den_(1) { canonicalize(); }

RationalFunc::RationalFunc(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  canonicalize();
}

void RationalFunc::canonicalize() {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  align(num_, den_);
  const Exponents mn = num_.min_exponents(), md = den_.min_exponents();
  Exponents common(mn.size());
  bool any = false;
  for (std::size_t k = 0; k < common.size(); ++k) {
    common[k] = std::min(mn[k], md[k]);
    any = any || common[k] != 0;
  }
  if (any) {
    num_ = num_.unshifted(common);
    den_ = den_.unshifted(common);
  }

  mpz_class num_gcd = 0, den_lcm = 1;
  for (const Polynomial* p : {&num_, &den_}) {
    for (const auto& t : p->terms()) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
    }
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (sgn(den_.leading_term().coeff) < 0) scale = -scale;
  if (scale != 1) {
    num_ = num_.scaled(scale);
    den_ = den_.scaled(scale);
  }
  num_ = num_.compact();
  den_ = den_.compact();
}

std::vector<std::string> RationalFunc::symbols() const {
  return merge_vars(num_.symbols(), den_.symbols());
}

RationalFunc RationalFunc::operator-() const {
  RationalFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunc operator+(const RationalFunc& a, const RationalFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return RationalFunc(a.num_ + b.num_, a.den_);
  return RationalFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunc operator-(const RationalFunc& a, const RationalFunc& b) { return a + (-b); }

RationalFunc operator*(const RationalFunc& a, const RationalFunc& b) {
  if (a.is_zero() || b.is_zero()) return RationalFunc();
  return RationalFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunc operator/(const RationalFunc& a, const RationalFunc& b) { return a * b.reciprocal(); }

RationalFunc RationalFunc::reciprocal() const {
  if (is_zero()) throw std::domain_error("division by zero rational function");
  return RationalFunc(den_, num_);
}

RationalFunc RationalFunc::pow(int n) const {
  if (n < 0) return reciprocal().pow(-n);
  return RationalFunc(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)));
}

bool operator==(const RationalFunc& a, const RationalFunc& b) {
  return a.num_ == b.num_ && a.den_ == b.den_;
}

bool same_function(const RationalFunc& a, const RationalFunc& b) {
  if (a == b) return true;
  return a.numerator() * b.denominator() == b.numerator() * a.denominator();
}

SimplifyResult simplify(const RationalFunc& rf, std::uint64_t work_limit) {
  if (rf.is_zero() || rf.denominator().is_constant() || rf.numerator().is_constant()) return {rf, true};
  WorkBudget budget(work_limit);
  try {
    BudgetScope scope(budget);
    Polynomial g = gcd(rf.numerator(), rf.denominator());
    if (g.is_constant()) return {rf, true};
    auto num = rf.numerator().divide_exact(g);
    auto den = rf.denominator().divide_exact(g);
    if (!num || !den) throw std::logic_error("gcd does not divide its arguments");
    return {RationalFunc(*num, *den), true};
  } catch (const BudgetExceeded&) {
    return {rf, false};
  }
}

std::complex<double> eval_numeric(const RationalFunc& rf, const Assignment& assignment, double pole_guard) {
  std::complex<double> num, den;
  try {
    num = rf.numerator().evaluate(assignment);
    den = rf.denominator().evaluate(assignment);
  } catch (const std::out_of_range& e) {
    throw EvalError(EvalError::Kind::MissingSymbol, e.what());
  }
  if (std::abs(den) <= pole_guard) {
    throw EvalError(EvalError::Kind::NearPole, "denominator magnitude below pole guard");
  }
  return num / den;
}

std::string format_canonical(const RationalFunc& rf) {
  const Polynomial& num = rf.numerator();
  const Polynomial& den = rf.denominator();
  if (den.is_constant() && den.constant_value() == 1) return num.to_string();
  std::string out = num.size() > 1 ? "(" + num.to_string() + ")" : num.to_string();
  bool bare = false;
  if (den.size() == 1) {
    const Term& t = den.leading_term();
    const auto nonzero = std::count_if(t.exps.begin(), t.exps.end(), [](auto e) { return e != 0; });
    bare = t.degree == 0 || (t.coeff == 1 && nonzero == 1);
  }
  out += "/";
  out += bare ? den.to_string() : "(" + den.to_string() + ")";
  return out;
}

}  // namespace cktbench::symexpr
