#pragma once

// Reference computations shared by the unit and acceptance tests.

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>

#include "cktbench/blockdiag/diagram.hpp"
#include "cktbench/netlist/netlist.hpp"
#include "cktbench/rng.hpp"
#include "cktbench/symexpr/rational_func.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Solves the signal equations x_v = sum over in-edges of gain * x_src with
// x_input = 1 and returns x_output. Block gains are evaluated at `s`;
// `symbols` covers any block labels left symbolic.
inline cplx diagram_response(const cktbench::blockdiag::SignalFlowGraph& g, cplx s,
                             cktbench::symexpr::Assignment symbols = {}) {
  symbols["s"] = s;
  const int n = static_cast<int>(g.nodes.size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
  b(g.input) = 1.0;
  for (const auto& e : g.edges) {
    if (e.dst == g.input) continue;
    cplx gain = static_cast<double>(e.sign);
    if (e.block >= 0) gain *= cktbench::symexpr::eval_numeric(g.blocks[e.block].tf, symbols, 0);
    a(e.dst, e.src) -= gain;
  }
  const Eigen::VectorXcd x = a.fullPivLu().solve(b);
  return x(g.output);
}

// Random positive values for every symbol a netlist mentions: component
// values, gains and source amplitudes.
inline std::map<std::string, cplx, std::less<>> netlist_values(const cktbench::netlist::Netlist& net,
                                                              cktbench::Rng& rng, double lo = 0.5,
                                                              double hi = 2.0) {
  std::map<std::string, cplx, std::less<>> out;
  for (const auto& c : net.components()) {
    if (!c.value.empty() && cktbench::symexpr::is_valid_symbol(c.value) && !out.count(c.value))
      out[c.value] = rng.uniform(lo, hi);
  }
  return out;
}

// |got - want| / max(1, |want|).
inline double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

// Point drawn with |s| in [lo, hi] and uniform argument.
inline cplx random_s(cktbench::Rng& rng, double lo = 0.2, double hi = 5.0) {
  return std::polar(rng.uniform(lo, hi), rng.uniform(0.0, 6.283185307179586));
}

}  // namespace oracle
