#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cktbench/netlist/netlist.hpp"

namespace cktbench::schemgen {

using netlist::ComponentKind;

struct GridSize {
  int rows = 2;
  int cols = 2;
  friend auto operator<=>(const GridSize&, const GridSize&) = default;
};

using KindWeights = std::map<ComponentKind, double>;

struct PlacementConfig {
  int level = 1;
  /// Grid size distribution; weights need not sum to 1.
  std::vector<std::pair<GridSize, double>> grid_sizes;
  /// Kind weights for edges inside the grid and on its boundary.
  KindWeights inner;
  KindWeights outer;
  /// Level 4: chance that a circuit which drew no op-amp gets one forced in.
  double opamp_probability = 1.0;
  /// Chance that each grid edge is kept before pruning.
  double edge_keep = 0.8;
  /// Chance that a sample becomes a nodal-equation question.
  double nodal_probability = 0.65;
  int max_retries = 200;
};

/// Schematic levels are 0, 1, 2 and 4.
bool is_schematic_level(int level);

/// Kinds a level may place. L0: R, V. L1 adds L, C. L2 adds the four
/// controlled sources and I. L4 adds the op-amp macro.
std::vector<ComponentKind> allowed_kinds(int level);

PlacementConfig default_config(int level);

/// Throws std::invalid_argument describing the first problem found.
void check_config(const PlacementConfig& cfg);

class ExhaustedRetries : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cktbench::schemgen
