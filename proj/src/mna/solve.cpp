#include <algorithm>

#include "cktbench/mna/mna.hpp"
#include "cktbench/symexpr/gcd.hpp"

namespace cktbench::mna {

using symexpr::Polynomial;

namespace {

bool is_monomial(const Polynomial& p) { return p.size() == 1; }

// Least common multiple of two denominators, up to a constant factor.
Polynomial lcm(const Polynomial& a, const Polynomial& b) {
  if (a.is_constant()) return b;
  if (b.is_constant()) return a;
  if (is_monomial(a) && is_monomial(b)) {
    Polynomial x = a, y = b;
    symexpr::align(x, y);
    symexpr::Exponents e = x.leading_term().exps;
    const auto& f = y.leading_term().exps;
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::max(e[k], f[k]);
    return Polynomial(1).with_vars(x.vars()).shifted(e);
  }
  Polynomial g = symexpr::gcd(a, b);
  return (a.divide_exact(g).value()) * b;
}

Polynomial exact(const Polynomial& num, const Polynomial& den) {
  auto q = num.divide_exact(den);
  if (!q) throw std::logic_error("fraction-free elimination produced an inexact division");
  return std::move(*q);
}

}  // namespace

Elimination::Elimination(const MnaSystem& system, const SolveOptions& options) : options_(options) {
  const std::size_t n = system.size();
  symexpr::WorkBudget budget(options.work_limit);
  try {
    symexpr::BudgetScope scope(budget);

    // Row scaling turns every entry into a polynomial.
    std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial l(1);
      for (std::size_t j = 0; j <= n; ++j) {
        const RationalFunc& e = j < n ? system.a[i][j] : system.b[i];
        if (!e.is_zero()) l = lcm(l, e.denominator());
      }
      for (std::size_t j = 0; j <= n; ++j) {
        const RationalFunc& e = j < n ? system.a[i][j] : system.b[i];
        if (!e.is_zero()) m[i][j] = e.numerator() * exact(l, e.denominator());
      }
    }

    // Pivot: fewest nonzeros in its row, then fewest terms.
    Polynomial prev(1);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t pivot = n, best_count = 0, best_size = 0;
      for (std::size_t i = k; i < n; ++i) {
        if (m[i][k].is_zero()) continue;
        std::size_t count = 0;
        for (std::size_t j = k; j < n; ++j) count += !m[i][j].is_zero();
        if (pivot == n || count < best_count || (count == best_count && m[i][k].size() < best_size)) {
          pivot = i, best_count = count, best_size = m[i][k].size();
        }
      }
      if (pivot == n) throw MnaError(MnaError::Kind::SingularSystem, "MNA matrix is singular");
      std::swap(m[k], m[pivot]);
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j <= n; ++j) {
          Polynomial v = m[k][k] * m[i][j];
          if (!m[i][k].is_zero() && !m[k][j].is_zero()) v -= m[i][k] * m[k][j];
          m[i][j] = exact(v, prev);
        }
        m[i][k] = Polynomial();
      }
      prev = m[k][k];
    }
    det_ = prev;

    scaled_.assign(n, Polynomial());
    for (std::size_t ii = n; ii-- > 0;) {
      Polynomial acc = det_ * m[ii][n];
      for (std::size_t j = ii + 1; j < n; ++j) {
        if (!m[ii][j].is_zero() && !scaled_[j].is_zero()) acc -= m[ii][j] * scaled_[j];
      }
      scaled_[ii] = exact(acc, m[ii][ii]);
    }
  } catch (const symexpr::BudgetExceeded&) {
    throw MnaError(MnaError::Kind::WorkBudgetExceeded, "elimination exceeded its work budget");
  }
  work_used_ = budget.used();
}

RationalFunc Elimination::raw(std::size_t i) const { return RationalFunc(scaled_.at(i), det_); }

RationalFunc Elimination::value(std::size_t i) const {
  return symexpr::simplify(raw(i), options_.simplify_limit).value;
}

Solution solve(const MnaSystem& system, const SolveOptions& options) {
  Elimination elim(system, options);
  Solution out;
  for (std::size_t i = 0; i < system.size(); ++i) out.emplace(system.unknowns[i].label(), elim.value(i));
  return out;
}

RationalFunc node_voltage(const Netlist& netlist, NodeId node, const SolveOptions& options) {
  if (node == netlist::kGround) return RationalFunc();
  MnaSystem sys = stamp(netlist);
  Elimination elim(sys, options);
  return elim.value(sys.index_of_node(node));
}

RationalFunc transfer_function(const Netlist& netlist, const Output& output, const SolveOptions& options) {
  const netlist::Component* source = nullptr;
  for (const auto& c : netlist.components()) {
    if (c.kind != netlist::ComponentKind::VoltageSource) continue;
    if (source != nullptr) throw MnaError(MnaError::Kind::InvalidOutput, "more than one voltage source");
    source = &c;
  }
  if (source == nullptr) throw MnaError(MnaError::Kind::InvalidOutput, "no voltage source");

  std::pair<NodeId, NodeId> port;
  if (const auto* pair = std::get_if<std::pair<NodeId, NodeId>>(&output)) {
    port = *pair;
  } else {
    const auto* c = netlist.find(std::get<std::string>(output));
    if (c == nullptr) throw MnaError(MnaError::Kind::InvalidOutput, "no component " + std::get<std::string>(output));
    port = {c->nodes[0], c->nodes[1]};
  }

  MnaSystem sys = stamp(netlist, {SourceMode::UnitInput, source->name});
  Elimination elim(sys, options);
  auto scaled = [&](NodeId n) {
    return n == netlist::kGround ? Polynomial() : elim.scaled(sys.index_of_node(n));
  };
  RationalFunc h(scaled(port.first) - scaled(port.second), elim.determinant());
  return symexpr::simplify(h, options.simplify_limit).value;
}

}  // namespace cktbench::mna
