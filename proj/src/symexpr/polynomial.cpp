#include "cktbench/symexpr/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace cktbench::symexpr {

namespace {

thread_local BudgetScope* active_scope = nullptr;

unsigned degree_of(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

int grlex_compare(const Term& a, const Term& b) {
  if (a.degree != b.degree) return a.degree > b.degree ? 1 : -1;
  for (std::size_t i = 0; i < a.exps.size(); ++i) {
    if (a.exps[i] != b.exps[i]) return a.exps[i] > b.exps[i] ? 1 : -1;
  }
  return 0;
}

// Sorts and merges like terms in place.
void normalize_terms(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(), grlex_greater);
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().exps == t.exps) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && sgn(out.back().coeff) == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && sgn(out.back().coeff) == 0) out.pop_back();
  terms = std::move(out);
}

Exponents remap(const Exponents& e, const std::vector<std::size_t>& index, std::size_t width) {
  Exponents out(width, 0);
  for (std::size_t i = 0; i < e.size(); ++i) out[index[i]] = e[i];
  return out;
}

std::uint16_t checked_add(std::uint16_t a, std::uint16_t b) {
  unsigned sum = unsigned(a) + unsigned(b);
  if (sum > 0xFFFF) throw std::overflow_error("polynomial exponent overflow");
  return static_cast<std::uint16_t>(sum);
}

}  // namespace

bool is_valid_symbol(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

BudgetScope::BudgetScope(WorkBudget& budget) : budget_(&budget), parent_(active_scope) {
  active_scope = this;
}

BudgetScope::~BudgetScope() { active_scope = parent_; }

void BudgetScope::charge(std::uint64_t units) {
  for (BudgetScope* s = active_scope; s != nullptr; s = s->parent_) s->budget_->charge(units);
}

bool grlex_greater(const Term& a, const Term& b) { return grlex_compare(a, b) > 0; }

std::vector<std::string> merge_vars(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b) {
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void align(Polynomial& a, Polynomial& b) {
  if (a.vars_ == b.vars_) return;
  auto vars = merge_vars(a.vars_, b.vars_);
  a = a.with_vars(vars);
  b = b.with_vars(vars);
}

Polynomial::Polynomial(const Rational& constant) {
  if (sgn(constant) != 0) terms_.push_back(Term{{}, 0, constant});
}

Polynomial Polynomial::variable(const std::string& name, unsigned power) {
  if (!is_valid_symbol(name)) throw std::invalid_argument("invalid symbol name: " + name);
  if (power > 0xFFFF) throw std::overflow_error("polynomial exponent overflow");
  Polynomial p;
  p.vars_ = {name};
  p.terms_.push_back(Term{{static_cast<std::uint16_t>(power)}, power, Rational(1)});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<std::string> vars, std::vector<Term> terms) {
  if (!std::is_sorted(vars.begin(), vars.end()) ||
      std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
    throw std::invalid_argument("polynomial variables must be sorted and unique");
  }
  for (auto& t : terms) {
    if (t.exps.size() != vars.size()) throw std::invalid_argument("exponent width mismatch");
    t.degree = degree_of(t.exps);
  }
  normalize_terms(terms);
  Polynomial p;
  p.vars_ = std::move(vars);
  p.terms_ = std::move(terms);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].degree == 0);
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return terms_[0].coeff;
}

std::vector<std::string> Polynomial::symbols() const {
  std::vector<bool> used(vars_.size(), false);
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < vars_.size(); ++i) used[i] = used[i] || t.exps[i] != 0;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (used[i]) out.push_back(vars_[i]);
  }
  return out;
}

unsigned Polynomial::degree(std::string_view var) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
  if (it == vars_.end() || *it != var) return 0;
  auto idx = static_cast<std::size_t>(it - vars_.begin());
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max<unsigned>(d, t.exps[idx]);
  return d;
}

unsigned Polynomial::total_degree() const { return terms_.empty() ? 0 : terms_.front().degree; }

Polynomial Polynomial::with_vars(const std::vector<std::string>& vars) const {
  if (vars == vars_) return *this;
  std::vector<std::size_t> index(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::lower_bound(vars.begin(), vars.end(), vars_[i]);
    if (it == vars.end() || *it != vars_[i]) {
      throw std::invalid_argument("with_vars: target list lacks " + vars_[i]);
    }
    index[i] = static_cast<std::size_t>(it - vars.begin());
  }
  Polynomial p;
  p.vars_ = vars;
  p.terms_.reserve(terms_.size());
  // Inserting zero columns preserves the relative grlex order.
  for (const auto& t : terms_) p.terms_.push_back(Term{remap(t.exps, index, vars.size()), t.degree, t.coeff});
  return p;
}

Polynomial Polynomial::compact() const {
  auto used = symbols();
  if (used.size() == vars_.size()) return *this;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0, j = 0; i < vars_.size(); ++i) {
    if (j < used.size() && vars_[i] == used[j]) {
      keep.push_back(i);
      ++j;
    }
  }
  Polynomial p;
  p.vars_ = used;
  p.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Exponents e(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) e[k] = t.exps[keep[k]];
    p.terms_.push_back(Term{std::move(e), t.degree, t.coeff});
  }
  return p;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

Polynomial operator+(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.is_zero()) return rhs;
  if (rhs.is_zero()) return lhs;
  Polynomial a = lhs, b = rhs;
  align(a, b);
  BudgetScope::charge(a.size() + b.size());
  Polynomial out;
  out.vars_ = a.vars_;
  out.terms_.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    int c = i == a.terms_.size()   ? -1
            : j == b.terms_.size() ? 1
                                   : grlex_compare(a.terms_[i], b.terms_[j]);
    if (c > 0) {
      out.terms_.push_back(std::move(a.terms_[i++]));
    } else if (c < 0) {
      out.terms_.push_back(std::move(b.terms_[j++]));
    } else {
      Rational sum = a.terms_[i].coeff + b.terms_[j].coeff;
      if (sgn(sum) != 0) out.terms_.push_back(Term{std::move(a.terms_[i].exps), a.terms_[i].degree, sum});
      ++i;
      ++j;
    }
  }
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return Polynomial();
  Polynomial a = lhs, b = rhs;
  align(a, b);
  BudgetScope::charge(a.size() * b.size());
  if (a.size() == 1 && a.terms_[0].degree == 0) return b.scaled(a.terms_[0].coeff);
  if (b.size() == 1 && b.terms_[0].degree == 0) return a.scaled(b.terms_[0].coeff);
  if (a.size() > b.size()) std::swap(a, b);
  const std::size_t width = a.vars_.size();
  const auto& ta = a.terms_;
  const auto& tb = b.terms_;

  // Each row ta[i] * tb[*] is already sorted, so the rows are merged
  // through a heap keyed on the product monomial.
  struct Cursor {
    std::uint32_t i, j;
  };
  auto less = [&](const Cursor& x, const Cursor& y) {
    const unsigned dx = ta[x.i].degree + tb[x.j].degree, dy = ta[y.i].degree + tb[y.j].degree;
    if (dx != dy) return dx < dy;
    for (std::size_t k = 0; k < width; ++k) {
      const unsigned ex = unsigned(ta[x.i].exps[k]) + tb[x.j].exps[k];
      const unsigned ey = unsigned(ta[y.i].exps[k]) + tb[y.j].exps[k];
      if (ex != ey) return ex < ey;
    }
    return false;
  };
  std::vector<Cursor> heap;
  heap.reserve(ta.size());
  for (std::uint32_t i = 0; i < ta.size(); ++i) heap.push_back({i, 0});
  std::make_heap(heap.begin(), heap.end(), less);

  std::vector<Term> out;
  Rational prod;
  Cursor last{0, 0};
  bool have_last = false;
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), less);
    const Cursor c = heap.back();
    heap.pop_back();
    mpq_mul(prod.get_mpq_t(), ta[c.i].coeff.get_mpq_t(), tb[c.j].coeff.get_mpq_t());
    if (have_last && !less(last, c) && !less(c, last)) {
      out.back().coeff += prod;
    } else {
      if (!out.empty() && sgn(out.back().coeff) == 0) out.pop_back();
      Exponents e(width);
      for (std::size_t k = 0; k < width; ++k) e[k] = checked_add(ta[c.i].exps[k], tb[c.j].exps[k]);
      out.push_back(Term{std::move(e), ta[c.i].degree + tb[c.j].degree, prod});
      last = c;
      have_last = true;
    }
    if (c.j + 1 < tb.size()) {
      heap.push_back({c.i, c.j + 1});
      std::push_heap(heap.begin(), heap.end(), less);
    }
  }
  if (!out.empty() && sgn(out.back().coeff) == 0) out.pop_back();
  Polynomial result;
  result.vars_ = std::move(a.vars_);
  result.terms_ = std::move(out);
  return result;
}

Polynomial Polynomial::scaled(const Rational& factor) const {
  if (sgn(factor) == 0) return Polynomial();
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coeff *= factor;
  return p;
}

Polynomial Polynomial::shifted(const Exponents& mono) const {
  Polynomial p = *this;
  for (auto& t : p.terms_) {
    for (std::size_t k = 0; k < mono.size(); ++k) t.exps[k] = checked_add(t.exps[k], mono[k]);
    t.degree += degree_of(mono);
  }
  return p;
}

Polynomial Polynomial::unshifted(const Exponents& mono) const {
  Polynomial p = *this;
  const unsigned d = degree_of(mono);
  for (auto& t : p.terms_) {
    for (std::size_t k = 0; k < mono.size(); ++k) {
      if (t.exps[k] < mono[k]) throw std::logic_error("unshifted: monomial does not divide term");
      t.exps[k] = static_cast<std::uint16_t>(t.exps[k] - mono[k]);
    }
    t.degree -= d;
  }
  return p;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial result(Rational(1));
  Polynomial base = *this;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
  if (is_zero()) return Polynomial();
  Polynomial num = *this, den = divisor;
  align(num, den);
  if (den.size() == 1) {
    const Term& d = den.terms_[0];
    for (const auto& t : num.terms_) {
      for (std::size_t k = 0; k < d.exps.size(); ++k) {
        if (t.exps[k] < d.exps[k]) return std::nullopt;
      }
    }
    BudgetScope::charge(num.size());
    return num.unshifted(d.exps).scaled(1 / d.coeff);
  }
  if (num.total_degree() < den.total_degree()) return std::nullopt;

  struct Key {
    unsigned degree;
    Exponents exps;
  };
  auto cmp = [](const Key& x, const Key& y) {
    if (x.degree != y.degree) return x.degree > y.degree;
    return x.exps > y.exps;
  };
  std::map<Key, Rational, decltype(cmp)> rem(cmp);
  for (const auto& t : num.terms_) rem.emplace(Key{t.degree, t.exps}, t.coeff);

  const Term& lead = den.terms_[0];
  const std::size_t width = num.vars_.size();
  std::vector<Term> quotient;
  Rational prod;
  while (!rem.empty()) {
    auto top = rem.begin();
    Exponents qe(width);
    for (std::size_t k = 0; k < width; ++k) {
      if (top->first.exps[k] < lead.exps[k]) return std::nullopt;
      qe[k] = static_cast<std::uint16_t>(top->first.exps[k] - lead.exps[k]);
    }
    const unsigned qd = top->first.degree - lead.degree;
    Rational qc = top->second / lead.coeff;
    BudgetScope::charge(den.size());
    rem.erase(top);
    for (std::size_t i = 1; i < den.terms_.size(); ++i) {
      const Term& t = den.terms_[i];
      Key key{t.degree + qd, Exponents(width)};
      for (std::size_t k = 0; k < width; ++k) key.exps[k] = checked_add(t.exps[k], qe[k]);
      mpq_mul(prod.get_mpq_t(), qc.get_mpq_t(), t.coeff.get_mpq_t());
      auto [it, inserted] = rem.try_emplace(std::move(key), 0);
      it->second -= prod;
      if (sgn(it->second) == 0) rem.erase(it);
    }
    quotient.push_back(Term{std::move(qe), qd, std::move(qc)});
  }
  return from_terms(num.vars_, std::move(quotient));
}

Rational Polynomial::content() const {
  if (terms_.empty()) return Rational(1);
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const auto& t : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c(num_gcd, den_lcm);
  c.canonicalize();
  return c;
}

Exponents Polynomial::min_exponents() const {
  if (terms_.empty()) return Exponents(vars_.size(), 0);
  Exponents m = terms_.front().exps;
  for (const auto& t : terms_) {
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = std::min(m[k], t.exps[k]);
  }
  return m;
}

Polynomial Polynomial::rename(const std::string& from, const std::string& to) const {
  if (!is_valid_symbol(to)) throw std::invalid_argument("invalid symbol name: " + to);
  auto it = std::find(vars_.begin(), vars_.end(), from);
  if (it == vars_.end()) return *this;
  return substitute(from, variable(to));
}

Polynomial Polynomial::substitute(const std::string& var, const Polynomial& value) const {
  auto it = std::find(vars_.begin(), vars_.end(), var);
  if (it == vars_.end()) return *this;
  auto idx = static_cast<std::size_t>(it - vars_.begin());
  // Group terms by power of `var` and use Horner-free accumulation.
  std::map<unsigned, std::vector<Term>> by_power;
  for (const auto& t : terms_) {
    Term rest = t;
    rest.exps[idx] = 0;
    rest.degree -= t.exps[idx];
    by_power[t.exps[idx]].push_back(std::move(rest));
  }
  Polynomial out;
  for (auto& [power, group] : by_power) {
    Polynomial coeff = from_terms(vars_, std::move(group));
    out += coeff * value.pow(power);
  }
  return out.compact();
}

std::complex<double> Polynomial::evaluate(const Assignment& values) const {
  std::vector<std::complex<double>> point(vars_.size());
  std::vector<bool> used(vars_.size(), false);
  for (const auto& t : terms_) {
    for (std::size_t k = 0; k < vars_.size(); ++k) used[k] = used[k] || t.exps[k] != 0;
  }
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if (!used[k]) continue;
    auto it = values.find(vars_[k]);
    if (it == values.end()) throw std::out_of_range("missing value for symbol " + vars_[k]);
    point[k] = it->second;
  }
  std::complex<double> sum = 0;
  for (const auto& t : terms_) {
    std::complex<double> term = t.coeff.get_d();
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      if (t.exps[k] != 0) term *= std::pow(point[k], static_cast<int>(t.exps[k]));
    }
    sum += term;
  }
  return sum;
}

bool operator==(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.size() != rhs.size()) return false;
  if (lhs.vars_ == rhs.vars_) {
    for (std::size_t i = 0; i < lhs.terms_.size(); ++i) {
      if (lhs.terms_[i].exps != rhs.terms_[i].exps || lhs.terms_[i].coeff != rhs.terms_[i].coeff) {
        return false;
      }
    }
    return true;
  }
  Polynomial a = lhs.compact(), b = rhs.compact();
  if (a.vars_ != b.vars_) return false;
  return a == b;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    bool negative = sgn(c) < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (c != 1 || t.degree == 0) {
      out << c.get_str();
      need_star = true;
    }
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      if (t.exps[k] == 0) continue;
      if (need_star) out << '*';
      out << vars_[k];
      if (t.exps[k] > 1) out << "**" << t.exps[k];
      need_star = true;
    }
  }
  return out.str();
}

Rational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  mpz_class mantissa = 0;
  long scale = 0;
  bool digits = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    mantissa = mantissa * 10 + (text[i] - '0');
    digits = true;
    ++i;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      mantissa = mantissa * 10 + (text[i] - '0');
      --scale;
      digits = true;
      ++i;
    }
  }
  if (!digits) throw std::invalid_argument("malformed number: " + std::string(text));
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    long e = 0;
    bool exp_digits = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      e = e * 10 + (text[i] - '0');
      if (e > 4096) throw std::invalid_argument("exponent too large: " + std::string(text));
      exp_digits = true;
      ++i;
    }
    if (!exp_digits) throw std::invalid_argument("malformed number: " + std::string(text));
    scale += neg ? -e : e;
  }
  if (i != text.size()) throw std::invalid_argument("malformed number: " + std::string(text));
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale < 0 ? Rational(mantissa, ten_pow) : Rational(mantissa * ten_pow);
  r.canonicalize();
  return r;
}

}  // namespace cktbench::symexpr
