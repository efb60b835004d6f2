#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cktbench/blockdiag/diagram.hpp"

namespace cktbench::blockdiag {

/// A simple path or cycle with the nodes it touches.
struct GraphPath {
  std::vector<int> nodes;  // in traversal order; a loop does not repeat its start
  std::vector<int> edges;
  RationalFunc gain;
  std::uint64_t mask = 0;  // bit i set iff node i is on the path
};

/// Simple input-to-output paths in depth-first order, following edges in
/// index order.
std::vector<GraphPath> enumerate_forward_paths(const SignalFlowGraph& g);

/// Simple directed cycles, each reported once starting from its lowest
/// node id.
std::vector<GraphPath> enumerate_loops(const SignalFlowGraph& g);

/// 1 - sum L_i + sum L_i L_j - ... over sets of pairwise non-touching
/// loops, restricted to loops that avoid `exclude`.
RationalFunc determinant(const std::vector<GraphPath>& loops, std::uint64_t exclude = 0);

struct MasonTrace {
  std::vector<GraphPath> paths;
  std::vector<GraphPath> loops;
  RationalFunc delta;
  std::vector<RationalFunc> cofactors;  // Delta_k per path
  RationalFunc h;                       // simplified
};

/// Throws BlockDiagramError(ZeroDeterminant) when Delta is identically 0.
MasonTrace mason_trace(const SignalFlowGraph& g);
RationalFunc mason(const SignalFlowGraph& g);

enum class LabelMode { HighLevel, Exact };

struct LabeledDiagram {
  /// Same topology; in HighLevel mode every block's tf is its label symbol.
  SignalFlowGraph graph;
  /// Display text per block: the label, or the tf in canonical notation.
  std::vector<std::string> labels;
};

LabeledDiagram render_labels(const SignalFlowGraph& g, LabelMode mode);

}  // namespace cktbench::blockdiag
