#include "cktbench/mna/mna.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cktbench::mna {

using netlist::Component;
using netlist::ComponentKind;
using netlist::kGround;

std::string Unknown::label() const {
  if (kind == Kind::NodeVoltage) return "Vn" + std::to_string(node);
  return "I(" + branch + ")";
}

std::size_t MnaSystem::index_of_node(NodeId node) const {
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    if (unknowns[i].kind == Unknown::Kind::NodeVoltage && unknowns[i].node == node) return i;
  }
  throw MnaError(MnaError::Kind::InvalidOutput, "no unknown for node " + std::to_string(node));
}

std::string MnaSystem::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < size(); ++i) {
    bool first = true;
    for (std::size_t j = 0; j < size(); ++j) {
      if (a[i][j].is_zero()) continue;
      if (!first) out << " + ";
      first = false;
      out << "(" << symexpr::format_canonical(a[i][j]) << ")*" << unknowns[j].label();
    }
    if (first) out << "0";
    out << " = " << symexpr::format_canonical(b[i]) << '\n';
  }
  return out.str();
}

double complexity_score(const Netlist& netlist) {
  double score = 0;
  for (const auto& c : netlist.components()) {
    score += 1;
    if (netlist::is_controlled_source(c.kind)) score += 2;
    if (netlist::is_reactive(c.kind)) score += 3;
  }
  return score;
}

std::uint64_t work_budget(const Netlist& netlist) {
  return static_cast<std::uint64_t>(1e6 * (1.0 + complexity_score(netlist) / 10.0));
}

namespace {

class Stamper {
 public:
  Stamper(const Netlist& net, const StampOptions& options) : net_(net), options_(options) {
    for (const auto& c : net.components()) {
      if (c.kind == ComponentKind::OpAmpMacro) {
        throw MnaError(MnaError::Kind::UnsupportedKind, "unexpanded op-amp macro " + c.name);
      }
      if (c.kind == ComponentKind::Ccvs || c.kind == ComponentKind::Cccs) {
        if (net.find(c.control) == nullptr) {
          throw MnaError(MnaError::Kind::SingularSystem, "unresolved control branch " + c.control);
        }
        sensed_.insert(c.control);
      }
    }
    for (NodeId n : net.nodes()) {
      if (n != kGround) sys_.unknowns.push_back({Unknown::Kind::NodeVoltage, n, {}});
    }
    for (const auto& c : net.components()) {
      if (has_branch(c)) sys_.unknowns.push_back({Unknown::Kind::BranchCurrent, 0, c.name});
    }
    const std::size_t n = sys_.unknowns.size();
    sys_.a.assign(n, std::vector<RationalFunc>(n));
    sys_.b.assign(n, RationalFunc());
  }

  MnaSystem run() {
    for (const auto& c : net_.components()) stamp_component(c);
    return std::move(sys_);
  }

 private:
  const Netlist& net_;
  StampOptions options_;
  std::set<std::string> sensed_;
  MnaSystem sys_;

  bool has_branch(const Component& c) const {
    switch (c.kind) {
      case ComponentKind::VoltageSource:
      case ComponentKind::Inductor:
      case ComponentKind::Vcvs:
      case ComponentKind::Ccvs: return true;
      default: return sensed_.count(c.name) > 0;
    }
  }

  // Row/column of a node voltage; -1 for ground.
  long node(NodeId id) const {
    if (id == kGround) return -1;
    for (std::size_t i = 0; i < sys_.unknowns.size(); ++i) {
      if (sys_.unknowns[i].kind == Unknown::Kind::NodeVoltage && sys_.unknowns[i].node == id) return long(i);
    }
    throw std::logic_error("unknown node");
  }

  long branch(const std::string& name) const {
    for (std::size_t i = 0; i < sys_.unknowns.size(); ++i) {
      if (sys_.unknowns[i].kind == Unknown::Kind::BranchCurrent && sys_.unknowns[i].branch == name) return long(i);
    }
    throw std::logic_error("unknown branch " + name);
  }

  void add(long row, long col, const RationalFunc& v) {
    if (row < 0 || col < 0) return;
    sys_.a[row][col] += v;
  }

  void add_rhs(long row, const RationalFunc& v) {
    if (row < 0) return;
    sys_.b[row] += v;
  }

  // Admittance y between nodes p and q.
  void admittance(long p, long q, const RationalFunc& y) {
    add(p, p, y);
    add(q, q, y);
    add(p, q, -y);
    add(q, p, -y);
  }

  // Branch current k leaves node p and enters node q through the element.
  void branch_kcl(long k, long p, long q) {
    add(p, k, RationalFunc(1));
    add(q, k, RationalFunc(-1));
  }

  RationalFunc source_value(const Component& c) const {
    if (options_.mode == SourceMode::UnitInput) return RationalFunc(c.name == options_.input_source ? 1 : 0);
    RationalFunc amp = RationalFunc::symbol(c.value);
    auto w = c.waveform.value_or(netlist::SourceWaveform{});
    if (w.kind == netlist::Waveform::Step) return amp / RationalFunc::symbol(symexpr::kFrequencyVar);
    return amp;
  }

  void stamp_component(const Component& c) {
    const RationalFunc value = RationalFunc::symbol(c.value);
    const RationalFunc s = RationalFunc::symbol(symexpr::kFrequencyVar);
    const long p = node(c.nodes[0]), q = node(c.nodes[1]);
    const long k = has_branch(c) ? branch(c.name) : -1;
    switch (c.kind) {
      case ComponentKind::Resistor:
        if (k < 0) {
          admittance(p, q, value.reciprocal());
        } else {
          branch_kcl(k, p, q);
          add(k, p, RationalFunc(1));
          add(k, q, RationalFunc(-1));
          add(k, k, -value);
        }
        break;
      case ComponentKind::Capacitor:
        if (k < 0) {
          admittance(p, q, s * value);
        } else {
          branch_kcl(k, p, q);
          add(k, p, s * value);
          add(k, q, -(s * value));
          add(k, k, RationalFunc(-1));
        }
        break;
      case ComponentKind::Inductor:
        branch_kcl(k, p, q);
        add(k, p, RationalFunc(1));
        add(k, q, RationalFunc(-1));
        add(k, k, -(s * value));
        break;
      case ComponentKind::VoltageSource:
        branch_kcl(k, p, q);
        add(k, p, RationalFunc(1));
        add(k, q, RationalFunc(-1));
        add_rhs(k, source_value(c));
        break;
      case ComponentKind::CurrentSource:
        if (k < 0) {
          add_rhs(p, -source_value(c));
          add_rhs(q, source_value(c));
        } else {
          branch_kcl(k, p, q);
          add(k, k, RationalFunc(1));
          add_rhs(k, source_value(c));
        }
        break;
      case ComponentKind::Vcvs: {
        const long cp = node(c.nodes[2]), cq = node(c.nodes[3]);
        branch_kcl(k, p, q);
        add(k, p, RationalFunc(1));
        add(k, q, RationalFunc(-1));
        add(k, cp, -value);
        add(k, cq, value);
        break;
      }
      case ComponentKind::Vccs: {
        const long cp = node(c.nodes[2]), cq = node(c.nodes[3]);
        if (k < 0) {
          add(p, cp, value);
          add(p, cq, -value);
          add(q, cp, -value);
          add(q, cq, value);
        } else {
          branch_kcl(k, p, q);
          add(k, k, RationalFunc(1));
          add(k, cp, -value);
          add(k, cq, value);
        }
        break;
      }
      case ComponentKind::Ccvs: {
        const long ctl = branch(c.control);
        branch_kcl(k, p, q);
        add(k, p, RationalFunc(1));
        add(k, q, RationalFunc(-1));
        add(k, ctl, -value);
        break;
      }
      case ComponentKind::Cccs: {
        const long ctl = branch(c.control);
        if (k < 0) {
          add(p, ctl, value);
          add(q, ctl, -value);
        } else {
          branch_kcl(k, p, q);
          add(k, k, RationalFunc(1));
          add(k, ctl, -value);
        }
        break;
      }
      case ComponentKind::OpAmpMacro: break;
    }
  }
};

}  // namespace

MnaSystem stamp(const Netlist& netlist, const StampOptions& options) { return Stamper(netlist, options).run(); }

}  // namespace cktbench::mna
