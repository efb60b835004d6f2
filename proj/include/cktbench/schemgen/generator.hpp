#pragma once

#include <map>
#include <string>
#include <utility>

#include "cktbench/netlist/netlist.hpp"
#include "cktbench/rng.hpp"
#include "cktbench/schemgen/config.hpp"
#include "cktbench/schemgen/grid.hpp"

namespace cktbench::schemgen {

using netlist::Netlist;
using netlist::NodeId;

/// Drawing position of a node in grid units (row, col). Op-amp internal
/// nodes sit between grid points.
using Layout = std::map<NodeId, std::pair<double, double>>;

struct Placement {
  Netlist netlist;
  Layout layout;
};

/// Puts one component on each grid edge using the inner/outer kind
/// weights, forces exactly one voltage source, and expands op-amp macros
/// into Rint/Cint/Eint primitives. The result passes netlist::validate.
/// Throws ExhaustedRetries.
Placement place_components(Rng& rng, const GridTopology& grid, const PlacementConfig& cfg);

enum class QuestionKind { Nodal, TransferFunction };

struct GeneratedSchematic {
  Netlist netlist;
  GridTopology grid;
  Layout layout;
  int level = 0;
  QuestionKind kind = QuestionKind::Nodal;
  /// Nodal questions.
  NodeId target_node = 0;
  /// Transfer-function questions: the input source and output component.
  std::string input_source;
  std::string target_component;
  /// No candidate away from the source existed, so the output component
  /// touches the source.
  bool target_adjacent = false;
};

/// Samples grid and placement, rejects samples whose MNA matrix is
/// numerically singular, and picks a question target with a nonzero
/// response. Throws ExhaustedRetries.
GeneratedSchematic generate_schematic(Rng& rng, int level, const PlacementConfig& cfg);

}  // namespace cktbench::schemgen
