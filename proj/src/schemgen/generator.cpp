#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "cktbench/mna/mna.hpp"
#include "cktbench/schemgen/generator.hpp"

namespace cktbench::schemgen {

using netlist::Component;

namespace {

mna::NumericValues random_values(Rng& rng, const Netlist& net) {
  mna::NumericValues v;
  for (const auto& c : net.components()) v.emplace(c.value, rng.uniform(0.5, 2.0));
  return v;
}

std::complex<double> random_s(Rng& rng) {
  return std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2 * std::numbers::pi));
}

}  // namespace

GeneratedSchematic generate_schematic(Rng& rng, int level, const PlacementConfig& cfg_in) {
  PlacementConfig cfg = cfg_in;
  cfg.level = level;
  check_config(cfg);

  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    GeneratedSchematic g;
    g.level = level;
    g.grid = sample_grid(rng, cfg);
    Placement placed = place_components(rng, g.grid, cfg);
    g.netlist = std::move(placed.netlist);
    g.layout = std::move(placed.layout);

    const Component* source = nullptr;
    for (const auto& c : g.netlist.components()) {
      if (c.kind == ComponentKind::VoltageSource) source = &c;
    }
    g.input_source = source->name;

    // A singular matrix at a random point means a singular symbolic system
    // with probability one.
    const auto values = random_values(rng, g.netlist);
    const auto s = random_s(rng);
    mna::NumericSolution laplace, unit;
    try {
      laplace = mna::numeric_solve(g.netlist, values, s);
      unit = mna::numeric_solve(g.netlist, values, s, {mna::SourceMode::UnitInput, g.input_source});
    } catch (const mna::MnaError&) {
      continue;
    }
    double scale = 0;
    for (const auto& [n, v] : laplace) scale = std::max(scale, std::abs(v));
    const double floor = 1e-9 * std::max(scale, 1.0);

    if (rng.chance(cfg.nodal_probability)) {
      std::vector<NodeId> candidates;
      for (const auto& [n, v] : laplace) {
        if (n != netlist::kGround && std::abs(v) > floor) candidates.push_back(n);
      }
      if (candidates.empty()) continue;
      g.kind = QuestionKind::Nodal;
      g.target_node = rng.pick(candidates);
      return g;
    }

    std::vector<std::string> away, near;
    for (const auto& c : g.netlist.components()) {
      if (!netlist::is_passive(c.kind)) continue;
      if (std::abs(unit.at(c.nodes[0]) - unit.at(c.nodes[1])) <= 1e-9) continue;
      const bool touches = std::any_of(c.nodes.begin(), c.nodes.end(), [&](NodeId n) {
        return n == source->nodes[0] || n == source->nodes[1];
      });
      (touches ? near : away).push_back(c.name);
    }
    if (away.empty() && near.empty()) continue;
    g.kind = QuestionKind::TransferFunction;
    g.target_adjacent = away.empty();
    g.target_component = rng.pick(away.empty() ? near : away);
    return g;
  }
  throw ExhaustedRetries("no usable schematic after " + std::to_string(cfg.max_retries) + " attempts");
}

}  // namespace cktbench::schemgen
