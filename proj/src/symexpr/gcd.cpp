#include "cktbench/symexpr/gcd.hpp"

#include <algorithm>
#include <map>

namespace cktbench::symexpr {

namespace {

std::size_t index_of(const Polynomial& p, const std::string& var) {
  const auto& vars = p.vars();
  return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), var) - vars.begin());
}

std::vector<Polynomial> coeffs_at(const Polynomial& p, std::size_t idx) {
  std::vector<std::vector<Term>> groups;
  for (const auto& t : p.terms()) {
    const unsigned e = t.exps[idx];
    if (groups.size() <= e) groups.resize(e + 1);
    Term rest = t;
    rest.exps[idx] = 0;
    groups[e].push_back(std::move(rest));
  }
  std::vector<Polynomial> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.push_back(Polynomial::from_terms(p.vars(), std::move(g)));
  return out;
}

Polynomial from_coeffs(const std::vector<Polynomial>& coeffs, const std::vector<std::string>& vars,
                       std::size_t idx) {
  Polynomial out;
  Exponents unit(vars.size(), 0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    unit[idx] = static_cast<std::uint16_t>(k);
    out += coeffs[k].with_vars(vars).shifted(unit);
  }
  return out.with_vars(merge_vars(out.vars(), vars));
}

Polynomial gcd_rec(Polynomial a, Polynomial b);

Polynomial content_of(const std::vector<Polynomial>& coeffs) {
  Polynomial g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = gcd_rec(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

// Content of `p` with respect to every variable in `vars` at once.
Polynomial content_wrt(const Polynomial& p, const std::vector<std::string>& vars) {
  std::vector<std::size_t> idx;
  for (const auto& v : vars) idx.push_back(index_of(p, v));
  std::map<Exponents, std::vector<Term>> groups;
  for (const auto& t : p.terms()) {
    Exponents key;
    key.reserve(idx.size());
    Term rest = t;
    for (auto i : idx) {
      key.push_back(t.exps[i]);
      rest.exps[i] = 0;
    }
    groups[key].push_back(std::move(rest));
  }
  std::vector<Polynomial> coeffs;
  for (auto& [key, g] : groups) coeffs.push_back(Polynomial::from_terms(p.vars(), std::move(g)));
  // Smallest first keeps the running gcd small.
  std::sort(coeffs.begin(), coeffs.end(),
            [](const Polynomial& x, const Polynomial& y) { return x.size() < y.size(); });
  return content_of(coeffs);
}

// Pseudo-remainder of a by b in the variable at idx, up to a factor free of
// that variable.
Polynomial prem(const Polynomial& a, const Polynomial& b, std::size_t idx) {
  auto ac = coeffs_at(a, idx);
  const auto bc = coeffs_at(b, idx);
  const std::size_t n = bc.size() - 1;
  const Polynomial& lb = bc.back();
  while (!ac.empty() && ac.size() - 1 >= n) {
    const Polynomial la = ac.back();
    const std::size_t shift = ac.size() - 1 - n;
    for (auto& c : ac) c = c * lb;
    for (std::size_t i = 0; i <= n; ++i) ac[i + shift] -= la * bc[i];
    while (!ac.empty() && ac.back().is_zero()) ac.pop_back();
  }
  return from_coeffs(ac, a.vars(), idx);
}

Polynomial primitive_at(const Polynomial& p, std::size_t idx) {
  auto c = content_of(coeffs_at(p, idx));
  if (c.is_constant()) return normalized(p);
  return normalized(p.divide_exact(c).value());
}

std::vector<std::string> set_minus(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Polynomial gcd_rec(Polynomial a, Polynomial b) {
  if (a.is_zero()) return normalized(b);
  if (b.is_zero()) return normalized(a);
  a = normalized(a);
  b = normalized(b);
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  align(a, b);

  const Exponents ma = a.min_exponents(), mb = b.min_exponents();
  Exponents mono(ma.size());
  for (std::size_t k = 0; k < mono.size(); ++k) mono[k] = std::min(ma[k], mb[k]);
  a = a.unshifted(ma);
  b = b.unshifted(mb);
  const Polynomial mono_factor = Polynomial(1).with_vars(a.vars()).shifted(mono);
  auto finish = [&](const Polynomial& g) { return normalized(g * mono_factor); };

  if (a.is_constant() || b.is_constant()) return finish(Polynomial(1));
  if (a == b) return finish(a);

  // A variable present in only one operand cannot occur in the gcd.
  for (;;) {
    auto sa = a.symbols(), sb = b.symbols();
    auto only_a = set_minus(sa, sb), only_b = set_minus(sb, sa);
    if (only_a.empty() && only_b.empty()) break;
    if (!only_a.empty()) a = content_wrt(a, only_a);
    if (!only_b.empty()) b = content_wrt(b, only_b);
    if (a.is_constant() || b.is_constant()) return finish(Polynomial(1));
    align(a, b);
  }

  if (b.size() <= a.size()) {
    if (a.divide_exact(b)) return finish(b);
  } else if (b.divide_exact(a)) {
    return finish(a);
  }

  const auto shared = a.symbols();
  std::string main_var = shared.front();
  unsigned best = ~0u;
  for (const auto& v : shared) {
    unsigned d = std::max(a.degree(v), b.degree(v));
    if (d < best) {
      best = d;
      main_var = v;
    }
  }
  const std::size_t idx = index_of(a, main_var);

  const Polynomial ca = content_of(coeffs_at(a, idx));
  const Polynomial cb = content_of(coeffs_at(b, idx));
  Polynomial pa = ca.is_constant() ? a : a.divide_exact(ca).value();
  Polynomial pb = cb.is_constant() ? b : b.divide_exact(cb).value();
  const Polynomial gc = gcd_rec(ca, cb);

  if (pa.degree(main_var) < pb.degree(main_var)) std::swap(pa, pb);
  pa = pa.with_vars(a.vars());
  pb = pb.with_vars(a.vars());
  Polynomial g;
  for (;;) {
    Polynomial r = prem(pa, pb, idx);
    if (r.is_zero()) {
      g = primitive_at(pb, idx);
      break;
    }
    if (r.degree(main_var) == 0) {
      g = Polynomial(1);
      break;
    }
    pa = std::move(pb);
    pb = primitive_at(r, idx).with_vars(a.vars());
  }
  return finish(gc * g);
}

}  // namespace

Polynomial normalized(const Polynomial& p) {
  if (p.is_zero()) return p;
  Rational c = p.content();
  if (sgn(p.leading_term().coeff) < 0) c = -c;
  if (c == 1) return p;
  return p.scaled(1 / c);
}

std::vector<Polynomial> coefficients_in(const Polynomial& p, const std::string& var) {
  const auto& vars = p.vars();
  if (std::find(vars.begin(), vars.end(), var) == vars.end()) return {p};
  return coeffs_at(p, index_of(p, var));
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) { return gcd_rec(a, b).compact(); }

}  // namespace cktbench::symexpr
