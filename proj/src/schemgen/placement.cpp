#include <algorithm>
#include <map>

#include "cktbench/netlist/validate.hpp"
#include "cktbench/schemgen/generator.hpp"

namespace cktbench::schemgen {

using netlist::Component;

namespace {

ComponentKind draw_kind(Rng& rng, const KindWeights& weights, bool allow_vsource) {
  std::vector<ComponentKind> kinds;
  std::vector<double> w;
  for (const auto& [k, x] : weights) {
    if (k == ComponentKind::VoltageSource && !allow_vsource) continue;
    kinds.push_back(k);
    w.push_back(x);
  }
  double total = 0;
  for (double x : w) total += x;
  if (!(total > 0)) return ComponentKind::Resistor;
  return kinds[rng.weighted(w)];
}

class Builder {
 public:
  Builder(Rng& rng, const GridTopology& grid) : rng_(rng), grid_(grid) {
    const auto points = grid.points();
    // Ground is the bottom-left retained point; the rest are numbered in
    // row-major order.
    int ground = points.front();
    for (int p : points) {
      if (grid.row(p) > grid.row(ground) || (grid.row(p) == grid.row(ground) && grid.col(p) < grid.col(ground))) {
        ground = p;
      }
    }
    NodeId next = 1;
    for (int p : points) {
      ids_[p] = p == ground ? netlist::kGround : next++;
      layout_[ids_[p]] = {double(grid.row(p)), double(grid.col(p))};
    }
    next_node_ = next;
  }

  Placement build(const std::vector<ComponentKind>& kinds) {
    std::vector<std::size_t> passives;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      const auto& [a, b] = grid_.edges[i];
      NodeId p = ids_.at(a), q = ids_.at(b);
      if (p == netlist::kGround) std::swap(p, q);
      const ComponentKind kind = kinds[i];
      if (kind == ComponentKind::OpAmpMacro) {
        opamp(p, q);
        continue;
      }
      Component c;
      c.kind = kind;
      c.name = next_name(netlist::kind_letter(kind));
      c.nodes = {p, q};
      c.value = c.name;
      if (netlist::is_independent_source(kind)) c.waveform = netlist::SourceWaveform{};
      if (netlist::is_controlled_source(kind)) c.value = "x_" + std::to_string(++gains_);
      if (netlist::is_passive(kind)) passives.push_back(net_.components().size());
      net_.add(std::move(c));
    }
    // Control references point at passives placed on the grid.
    for (auto& c : net_.components()) {
      if (!netlist::is_controlled_source(c.kind) || c.name.rfind("Eint", 0) == 0) continue;
      std::vector<std::size_t> others;
      for (std::size_t i : passives) {
        if (net_.components()[i].name != c.name) others.push_back(i);
      }
      if (others.empty()) throw std::runtime_error("no passive to control from");
      const Component& ref = net_.components()[rng_.pick(others)];
      if (c.kind == ComponentKind::Vcvs || c.kind == ComponentKind::Vccs) {
        c.nodes.push_back(ref.nodes[0]);
        c.nodes.push_back(ref.nodes[1]);
      } else {
        c.control = ref.name;
      }
    }
    return {std::move(net_), std::move(layout_)};
  }

 private:
  Rng& rng_;
  const GridTopology& grid_;
  std::map<int, NodeId> ids_;
  Layout layout_;
  Netlist net_;
  std::map<std::string, int> counters_;
  NodeId next_node_ = 1;
  int gains_ = 0;
  int opamps_ = 0;

  std::string next_name(const std::string& prefix) { return prefix + std::to_string(++counters_[prefix]); }
  std::string next_name(char letter) { return next_name(std::string(1, letter)); }

  // Inverting amplifier between p (input) and q (output): input resistor
  // to a fresh internal node, a feedback network from q back to it, and a
  // high-gain VCVS driving q from the internal node.
  void opamp(NodeId in, NodeId out) {
    if (out == netlist::kGround) std::swap(in, out);
    const int k = ++opamps_;
    const NodeId internal = next_node_++;
    const auto& pa = layout_.at(in);
    const auto& pb = layout_.at(out);
    // Halfway along the edge, pushed up (horizontal edge) or left (vertical).
    const bool horizontal = pa.first == pb.first;
    layout_[internal] = {(pa.first + pb.first) / 2 - (horizontal ? 0.3 : 0.0),
                         (pa.second + pb.second) / 2 - (horizontal ? 0.0 : 0.3)};

    auto add = [&](ComponentKind kind, std::string name, std::vector<NodeId> nodes, std::string value) {
      Component c;
      c.kind = kind;
      c.name = std::move(name);
      c.nodes = std::move(nodes);
      c.value = std::move(value);
      net_.add(std::move(c));
    };
    const std::string rin = next_name("Rint");
    add(ComponentKind::Resistor, rin, {in, internal}, rin);
    const int variant = static_cast<int>(rng_.below(3));
    if (variant != 0) {
      const std::string cf = "Cint" + std::to_string(k);
      add(ComponentKind::Capacitor, cf, {out, internal}, cf);
    }
    if (variant != 1) {
      const std::string rf = next_name("Rint");
      add(ComponentKind::Resistor, rf, {out, internal}, rf);
    }
    add(ComponentKind::Vcvs, "Eint" + std::to_string(k), {out, netlist::kGround, netlist::kGround, internal}, "Ad");
  }
};

}  // namespace

Placement place_components(Rng& rng, const GridTopology& grid, const PlacementConfig& cfg) {
  if (!is_valid_topology(grid)) throw std::invalid_argument("grid topology is not valid");
  const std::size_t n = grid.edges.size();
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    std::vector<ComponentKind> kinds(n);
    std::vector<std::size_t> vsources, outer;
    for (std::size_t i = 0; i < n; ++i) {
      const bool is_outer = grid.is_outer(grid.edges[i]);
      if (is_outer) outer.push_back(i);
      kinds[i] = draw_kind(rng, is_outer ? cfg.outer : cfg.inner, true);
      if (kinds[i] == ComponentKind::VoltageSource) vsources.push_back(i);
    }
    if (vsources.empty()) {
      const std::size_t i = outer.empty() ? rng.below(n) : rng.pick(outer);
      kinds[i] = ComponentKind::VoltageSource;
    } else {
      const std::size_t keep = rng.pick(vsources);
      for (std::size_t i : vsources) {
        if (i != keep) kinds[i] = draw_kind(rng, grid.is_outer(grid.edges[i]) ? cfg.outer : cfg.inner, false);
      }
    }
    if (cfg.level == 4 && std::count(kinds.begin(), kinds.end(), ComponentKind::OpAmpMacro) == 0 &&
        rng.chance(cfg.opamp_probability)) {
      std::vector<std::size_t> eligible;
      for (std::size_t i = 0; i < n; ++i) {
        if (kinds[i] != ComponentKind::VoltageSource) eligible.push_back(i);
      }
      if (!eligible.empty()) kinds[rng.pick(eligible)] = ComponentKind::OpAmpMacro;
    }

    Placement out;
    try {
      out = Builder(rng, grid).build(kinds);
    } catch (const std::runtime_error&) {
      continue;
    }
    if (netlist::validate(out.netlist).empty()) return out;
  }
  throw ExhaustedRetries("no valid placement after " + std::to_string(cfg.max_retries) + " attempts");
}

}  // namespace cktbench::schemgen
