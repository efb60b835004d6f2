#include "cktbench/netlist/validate.hpp"

#include <map>
#include <numeric>
#include <set>

#include "cktbench/symexpr/polynomial.hpp"

namespace cktbench::netlist {

std::string_view violation_name(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::NoGround: return "NoGround";
    case Violation::Kind::LowDegreeNode: return "LowDegreeNode";
    case Violation::Kind::Disconnected: return "Disconnected";
    case Violation::Kind::NoVoltageSource: return "NoVoltageSource";
    case Violation::Kind::TooManyVoltageSources: return "TooManyVoltageSources";
    case Violation::Kind::ShortedComponent: return "ShortedComponent";
    case Violation::Kind::InvalidControl: return "InvalidControl";
    case Violation::Kind::InvalidValue: return "InvalidValue";
    case Violation::Kind::UnexpandedMacro: return "UnexpandedMacro";
  }
  return "Unknown";
}

std::string describe(const Violation& v) {
  std::string out(violation_name(v.kind));
  if (!v.subject.empty()) out += " " + v.subject;
  return out;
}

namespace {

struct DisjointSets {
  std::map<NodeId, NodeId> parent;
  NodeId find(NodeId x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return x;
    }
    if (it->second == x) return x;
    return parent[x] = find(it->second);
  }
  void unite(NodeId a, NodeId b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<Violation> validate(const Netlist& netlist) {
  std::vector<Violation> out;
  const auto& comps = netlist.components();

  std::map<NodeId, int> degree;
  DisjointSets sets;
  for (const auto& c : comps) {
    if (c.nodes.size() < 2) continue;
    degree[c.nodes[0]]++;
    degree[c.nodes[1]]++;
    sets.unite(c.nodes[0], c.nodes[1]);
  }

  if (!degree.count(kGround)) out.push_back({Violation::Kind::NoGround, ""});

  for (const auto& [node, d] : degree) {
    if (d < 2) out.push_back({Violation::Kind::LowDegreeNode, std::to_string(node)});
  }
  if (degree.count(kGround)) {
    const NodeId root = sets.find(kGround);
    for (const auto& [node, d] : degree) {
      if (sets.find(node) != root) out.push_back({Violation::Kind::Disconnected, std::to_string(node)});
    }
  }

  const auto vsources = netlist.count(ComponentKind::VoltageSource);
  if (vsources == 0) out.push_back({Violation::Kind::NoVoltageSource, ""});
  if (vsources > 1) out.push_back({Violation::Kind::TooManyVoltageSources, ""});

  for (const auto& c : comps) {
    const bool four = c.kind == ComponentKind::Vcvs || c.kind == ComponentKind::Vccs;
    if (c.nodes.size() != (four ? 4u : 2u)) {
      out.push_back({Violation::Kind::InvalidControl, c.name});
      continue;
    }
    if (c.nodes[0] == c.nodes[1]) out.push_back({Violation::Kind::ShortedComponent, c.name});
    if (c.kind == ComponentKind::OpAmpMacro) {
      out.push_back({Violation::Kind::UnexpandedMacro, c.name});
      continue;
    }
    if (!symexpr::is_valid_symbol(c.value)) out.push_back({Violation::Kind::InvalidValue, c.name});
    if (four) {
      const bool dangling = (c.nodes[2] != kGround && !degree.count(c.nodes[2])) ||
                            (c.nodes[3] != kGround && !degree.count(c.nodes[3]));
      if (dangling || c.nodes[2] == c.nodes[3]) out.push_back({Violation::Kind::InvalidControl, c.name});
    }
    if (c.kind == ComponentKind::Ccvs || c.kind == ComponentKind::Cccs) {
      const Component* sensed = netlist.find(c.control);
      if (sensed == nullptr || sensed == &c || sensed->kind == ComponentKind::OpAmpMacro) {
        out.push_back({Violation::Kind::InvalidControl, c.name});
      }
    }
  }
  return out;
}

}  // namespace cktbench::netlist
