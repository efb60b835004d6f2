#pragma once

#include <utility>
#include <vector>

#include "cktbench/rng.hpp"
#include "cktbench/schemgen/config.hpp"

namespace cktbench::schemgen {

/// Grid point index is row * cols + col.
using GridEdge = std::pair<int, int>;

/// A selection of edges from an m x n grid graph.
struct GridTopology {
  int rows = 0;
  int cols = 0;
  /// first < second; sorted.
  std::vector<GridEdge> edges;

  int row(int point) const { return point / cols; }
  int col(int point) const { return point % cols; }
  /// Edge lies on the boundary of the full grid.
  bool is_outer(const GridEdge& e) const;
  /// Grid points touched by at least one edge, ascending.
  std::vector<int> points() const;

  friend bool operator==(const GridTopology&, const GridTopology&) = default;
};

/// Nonempty, connected, and every retained point has degree >= 2.
bool is_valid_topology(const GridTopology& g);

/// Every edge of the full m x n grid, ascending.
std::vector<GridEdge> full_grid_edges(int rows, int cols);

/// Draws a grid size, keeps each edge with probability cfg.edge_keep,
/// prunes degree-1 points and retries until the result is valid.
/// Throws ExhaustedRetries after cfg.max_retries attempts.
GridTopology sample_grid(Rng& rng, const PlacementConfig& cfg);

}  // namespace cktbench::schemgen
