#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cktbench/netlist/netlist.hpp"
#include "cktbench/symexpr/rational_func.hpp"

namespace cktbench::mna {

using netlist::Netlist;
using netlist::NodeId;
using symexpr::RationalFunc;

class MnaError : public std::runtime_error {
 public:
  enum class Kind { UnsupportedKind, SingularSystem, WorkBudgetExceeded, NumericallySingular, InvalidOutput };
  MnaError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// An MNA unknown: a node voltage or the current through a named branch.
struct Unknown {
  enum class Kind { NodeVoltage, BranchCurrent };
  Kind kind;
  NodeId node = 0;
  std::string branch;

  /// "Vn3" or "I(V1)".
  std::string label() const;
  friend bool operator==(const Unknown&, const Unknown&) = default;
};

/// How independent sources enter the right-hand side.
enum class SourceMode {
  /// Each source contributes its Laplace-domain value (Step: amplitude/s).
  Laplace,
  /// The named source contributes 1; every other independent source is zeroed.
  UnitInput,
};

struct StampOptions {
  SourceMode mode = SourceMode::Laplace;
  std::string input_source;  // used with UnitInput
};

/// A * x = b with exact entries. Ground is eliminated.
struct MnaSystem {
  std::vector<Unknown> unknowns;
  std::vector<std::vector<RationalFunc>> a;
  std::vector<RationalFunc> b;

  std::size_t size() const { return unknowns.size(); }
  std::size_t index_of_node(NodeId node) const;
  /// One line per row: "sum of a_ij*x_j = b_i".
  std::string to_string() const;
};

/// Component count + 2 * controlled sources + 3 * reactive elements.
double complexity_score(const Netlist& netlist);

/// Elimination budget in monomial operations for a netlist:
/// 1e6 * (1 + score / 10).
std::uint64_t work_budget(const Netlist& netlist);

/// Stamps the netlist. Inductors use the branch-current form; capacitors
/// the admittance form; elements whose current a CCVS/CCCS senses get an
/// explicit branch current.
MnaSystem stamp(const Netlist& netlist, const StampOptions& options = {});

using Solution = std::map<std::string, RationalFunc>;  // keyed by Unknown::label()

struct SolveOptions {
  /// Monomial-operation cap for elimination; 0 means unlimited.
  std::uint64_t work_limit = 0;
  /// Budget handed to simplify() per unknown.
  std::uint64_t simplify_limit = symexpr::kDefaultSimplifyBudget;
};

/// Fraction-free (Bareiss) elimination of the row-scaled polynomial system
/// followed by fraction-free back substitution. Every Bareiss division is
/// checked for exactness.
class Elimination {
 public:
  explicit Elimination(const MnaSystem& system, const SolveOptions& options = {});

  /// Unsimplified value of unknown i as (Cramer numerator, determinant).
  RationalFunc raw(std::size_t i) const;
  /// Simplified value of unknown i.
  RationalFunc value(std::size_t i) const;
  const symexpr::Polynomial& determinant() const { return det_; }
  /// determinant() * x_i, a polynomial by Cramer's rule.
  const symexpr::Polynomial& scaled(std::size_t i) const { return scaled_.at(i); }
  std::uint64_t work_used() const { return work_used_; }

 private:
  SolveOptions options_;
  symexpr::Polynomial det_;
  std::vector<symexpr::Polynomial> scaled_;  // det * x_i
  std::uint64_t work_used_ = 0;
};

/// Solves for every unknown, each simplified.
Solution solve(const MnaSystem& system, const SolveOptions& options = {});

/// Node voltage Vn_k(s) including the source transforms.
RationalFunc node_voltage(const Netlist& netlist, NodeId node, const SolveOptions& options = {});

/// Output port: a node pair, or a component whose first two terminals
/// define the pair. Polarity is V(first) - V(second).
using Output = std::variant<std::pair<NodeId, NodeId>, std::string>;

/// H(s) = V_out(s) / V_in(s) for the netlist's single independent voltage
/// source; other independent sources are zeroed.
RationalFunc transfer_function(const Netlist& netlist, const Output& output, const SolveOptions& options = {});

using NumericValues = std::map<std::string, std::complex<double>, std::less<>>;
using NumericSolution = std::map<NodeId, std::complex<double>>;

/// Dense complex MNA solve with partial pivoting at a single frequency.
/// `values` must cover every component value symbol and source amplitude.
NumericSolution numeric_solve(const Netlist& netlist, const NumericValues& values, std::complex<double> s,
                              const StampOptions& options = {});

}  // namespace cktbench::mna
