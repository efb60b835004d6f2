#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cktbench/mna/mna.hpp"

// Floating-point oracle for the symbolic path. Stamping is written
// separately from stamp.cpp on purpose, and inductors use the admittance
// form here rather than a branch current.

namespace cktbench::mna {

using netlist::Component;
using netlist::ComponentKind;
using Complex = std::complex<double>;

namespace {

using Matrix = std::vector<std::vector<Complex>>;

std::vector<Complex> gauss_solve(Matrix a, std::vector<Complex> b) {
  const std::size_t n = b.size();
  double scale = 0;
  for (const auto& row : a) {
    for (const auto& v : row) scale = std::max(scale, std::abs(v));
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    }
    if (std::abs(a[piv][k]) <= 1e-13 * std::max(scale, 1e-300)) {
      throw MnaError(MnaError::Kind::NumericallySingular, "numeric MNA matrix is singular");
    }
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = a[i][k] / a[k][k];
      if (f == Complex(0)) continue;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<Complex> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Complex acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace

NumericSolution numeric_solve(const Netlist& netlist, const NumericValues& values, Complex s,
                              const StampOptions& options) {
  auto lookup = [&](const std::string& sym) -> Complex {
    auto it = values.find(sym);
    if (it == values.end()) throw std::invalid_argument("no numeric value for symbol " + sym);
    return it->second;
  };

  std::set<std::string> sensed;
  for (const auto& c : netlist.components()) {
    if (c.kind == ComponentKind::OpAmpMacro) {
      throw MnaError(MnaError::Kind::UnsupportedKind, "unexpanded op-amp macro " + c.name);
    }
    if (c.kind == ComponentKind::Ccvs || c.kind == ComponentKind::Cccs) sensed.insert(c.control);
  }

  std::map<netlist::NodeId, std::size_t> node_row;
  std::size_t n = 0;
  for (auto id : netlist.nodes()) {
    if (id != netlist::kGround) node_row[id] = n++;
  }
  std::map<std::string, std::size_t> branch_row;
  for (const auto& c : netlist.components()) {
    const bool voltage_defined =
        c.kind == ComponentKind::VoltageSource || c.kind == ComponentKind::Vcvs || c.kind == ComponentKind::Ccvs;
    if (voltage_defined || sensed.count(c.name)) branch_row[c.name] = n++;
  }

  Matrix a(n, std::vector<Complex>(n));
  std::vector<Complex> b(n);
  auto row = [&](netlist::NodeId id) -> long {
    return id == netlist::kGround ? -1 : static_cast<long>(node_row.at(id));
  };
  auto put = [&](long r, long c, Complex v) {
    if (r >= 0 && c >= 0) a[r][c] += v;
  };
  auto source = [&](const Component& c) -> Complex {
    if (options.mode == SourceMode::UnitInput) return c.name == options.input_source ? 1.0 : 0.0;
    Complex amp = lookup(c.value);
    const bool step = c.waveform.value_or(netlist::SourceWaveform{}).kind == netlist::Waveform::Step;
    return step ? amp / s : amp;
  };

  for (const auto& c : netlist.components()) {
    const long p = row(c.nodes[0]), q = row(c.nodes[1]);
    const auto br = branch_row.find(c.name);
    const long k = br == branch_row.end() ? -1 : static_cast<long>(br->second);
    // Current through an element leaves p and enters q.
    if (k >= 0) {
      put(p, k, 1.0);
      put(q, k, -1.0);
    }
    // Two-terminal admittance, either stamped into the node block or used
    // in the branch equation i = y * (Vp - Vq).
    auto admit = [&](Complex y) {
      if (k < 0) {
        put(p, p, y);
        put(q, q, y);
        put(p, q, -y);
        put(q, p, -y);
      } else {
        put(k, k, -1.0);
        put(k, p, y);
        put(k, q, -y);
      }
    };
    switch (c.kind) {
      case ComponentKind::Resistor: admit(1.0 / lookup(c.value)); break;
      case ComponentKind::Capacitor: admit(s * lookup(c.value)); break;
      case ComponentKind::Inductor: admit(1.0 / (s * lookup(c.value))); break;
      case ComponentKind::VoltageSource:
        put(k, p, 1.0);
        put(k, q, -1.0);
        b[k] += source(c);
        break;
      case ComponentKind::CurrentSource:
        if (k < 0) {
          if (p >= 0) b[p] -= source(c);
          if (q >= 0) b[q] += source(c);
        } else {
          put(k, k, 1.0);
          b[k] += source(c);
        }
        break;
      case ComponentKind::Vcvs: {
        const Complex mu = lookup(c.value);
        put(k, p, 1.0);
        put(k, q, -1.0);
        put(k, row(c.nodes[2]), -mu);
        put(k, row(c.nodes[3]), mu);
        break;
      }
      case ComponentKind::Vccs: {
        const Complex g = lookup(c.value);
        const long cp = row(c.nodes[2]), cq = row(c.nodes[3]);
        if (k < 0) {
          put(p, cp, g);
          put(p, cq, -g);
          put(q, cp, -g);
          put(q, cq, g);
        } else {
          put(k, k, 1.0);
          put(k, cp, -g);
          put(k, cq, g);
        }
        break;
      }
      case ComponentKind::Ccvs: {
        put(k, p, 1.0);
        put(k, q, -1.0);
        put(k, static_cast<long>(branch_row.at(c.control)), -lookup(c.value));
        break;
      }
      case ComponentKind::Cccs: {
        const long ctl = static_cast<long>(branch_row.at(c.control));
        const Complex beta = lookup(c.value);
        if (k < 0) {
          put(p, ctl, beta);
          put(q, ctl, -beta);
        } else {
          put(k, k, 1.0);
          put(k, ctl, -beta);
        }
        break;
      }
      case ComponentKind::OpAmpMacro: break;
    }
  }

  const auto x = gauss_solve(std::move(a), std::move(b));
  NumericSolution out;
  out[netlist::kGround] = 0.0;
  for (const auto& [id, r] : node_row) out[id] = x[r];
  return out;
}

}  // namespace cktbench::mna
