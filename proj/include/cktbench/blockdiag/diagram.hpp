#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cktbench/rng.hpp"
#include "cktbench/symexpr/rational_func.hpp"

namespace cktbench::blockdiag {

using symexpr::RationalFunc;

struct TfBlock {
  std::string label;  // "G1", "H2"
  RationalFunc tf;
};

enum class NodeKind { Input, Output, Signal, Junction };
enum class EdgeRole { Main, Feedback, Feedforward };

/// A signal. Junction nodes sum their signed inputs; the output node sums
/// its inputs too when a feedforward path ends there.
struct Node {
  NodeKind kind = NodeKind::Signal;
  /// Layout in drawing units; the main path runs along y = 0.
  double x = 0;
  double y = 0;
  /// Position along the main path, 0 for the input.
  int position = 0;
};

/// Directed edge with gain sign * tf(block), or sign alone without a block.
struct Edge {
  int src = 0;
  int dst = 0;
  int block = -1;  // index into SignalFlowGraph::blocks, -1 for unity
  int sign = 1;    // port sign at a junction, +1 elsewhere
  EdgeRole role = EdgeRole::Main;
  /// Routing lane for auxiliary edges: feedback below (> 0), feedforward
  /// above (< 0); 0 on the main path.
  int lane = 0;
};

struct SignalFlowGraph {
  std::vector<Node> nodes;
  std::vector<TfBlock> blocks;
  std::vector<Edge> edges;
  int input = 0;
  int output = 0;
  /// Number of main-path components (blocks plus junctions).
  int main_length = 0;

  /// Gain of an edge as a rational function.
  RationalFunc gain(const Edge& e) const;
  std::size_t feedback_count() const;
  std::size_t feedforward_count() const;
};

/// Structural equality: nodes, edges and block labels and functions.
bool operator==(const SignalFlowGraph& a, const SignalFlowGraph& b);

/// Single input and output, edges in range, no duplicate (src, dst)
/// pairs, every junction with two or more inputs, every node on some
/// input-to-output walk.
bool is_well_formed(const SignalFlowGraph& g);

struct GenParams {
  int tau_b = 2;
  int tau_e = 5;
  int tau_fb = 3;
  int tau_ff = 2;
  /// Block:junction selection ratio on the main path.
  double ratio_block = 3;
  double ratio_junction = 2;
  /// Chance that an auxiliary path carries a block.
  double p_block = 0.5;
  int max_retries = 200;
};

class BlockDiagramError : public std::runtime_error {
 public:
  enum class Kind { InvalidParams, ExhaustedRetries, ZeroDeterminant, Malformed };
  BlockDiagramError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

void check_params(const GenParams& p);

/// Draws a transfer function from the standard library: K/(s+p),
/// K/(s^2+a*s+b), K, 1/s, (s+z)/(s+p), all with small integer coefficients.
RationalFunc random_tf(Rng& rng);

/// Main path of n in [tau_b, tau_e] blocks and junctions, then up to tau_fb
/// feedback and tau_ff feedforward paths. Resamples diagrams whose Mason
/// determinant vanishes.
SignalFlowGraph generate_diagram(Rng& rng, const GenParams& params);

/// Text form:
///
///   diagram v1
///   main <length>
///   node <id> input|output|signal|junction <position> <x> <y>
///   block <index> <label> <tf>
///   edge <src> <dst> main|feedback|feedforward <+|-> <block|-> <lane>
///
/// Nodes, blocks and edges appear in index order; <tf> runs to the end of
/// the line in format_canonical notation.
std::string serialize(const SignalFlowGraph& g);
SignalFlowGraph parse_diagram(std::string_view text);

}  // namespace cktbench::blockdiag
