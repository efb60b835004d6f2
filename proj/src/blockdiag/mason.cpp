#include "cktbench/blockdiag/mason.hpp"

#include <functional>

namespace cktbench::blockdiag {

namespace {

std::vector<std::vector<int>> out_edges(const SignalFlowGraph& g) {
  if (g.nodes.size() > 64) {
    throw BlockDiagramError(BlockDiagramError::Kind::Malformed, "diagrams are limited to 64 nodes");
  }
  std::vector<std::vector<int>> out(g.nodes.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) out.at(g.edges[i].src).push_back(static_cast<int>(i));
  return out;
}

GraphPath make_path(const SignalFlowGraph& g, const std::vector<int>& nodes, const std::vector<int>& edges) {
  GraphPath p;
  p.nodes = nodes;
  p.edges = edges;
  p.gain = RationalFunc(1);
  for (int e : edges) p.gain *= g.gain(g.edges[e]);
  for (int v : nodes) p.mask |= std::uint64_t(1) << v;
  return p;
}

}  // namespace

std::vector<GraphPath> enumerate_forward_paths(const SignalFlowGraph& g) {
  const auto out = out_edges(g);
  std::vector<GraphPath> paths;
  std::vector<int> nodes{g.input}, edges;
  std::uint64_t visited = std::uint64_t(1) << g.input;
  std::function<void(int)> dfs = [&](int v) {
    if (v == g.output) {
      paths.push_back(make_path(g, nodes, edges));
      return;
    }
    for (int e : out[v]) {
      const int w = g.edges[e].dst;
      if (visited >> w & 1) continue;
      visited |= std::uint64_t(1) << w;
      nodes.push_back(w);
      edges.push_back(e);
      dfs(w);
      nodes.pop_back();
      edges.pop_back();
      visited &= ~(std::uint64_t(1) << w);
    }
  };
  dfs(g.input);
  return paths;
}

std::vector<GraphPath> enumerate_loops(const SignalFlowGraph& g) {
  const auto out = out_edges(g);
  std::vector<GraphPath> loops;
  for (int start = 0; start < static_cast<int>(g.nodes.size()); ++start) {
    std::vector<int> nodes{start}, edges;
    std::uint64_t visited = std::uint64_t(1) << start;
    std::function<void(int)> dfs = [&](int v) {
      for (int e : out[v]) {
        const int w = g.edges[e].dst;
        if (w == start) {
          edges.push_back(e);
          loops.push_back(make_path(g, nodes, edges));
          edges.pop_back();
          continue;
        }
        if (w < start || (visited >> w & 1)) continue;
        visited |= std::uint64_t(1) << w;
        nodes.push_back(w);
        edges.push_back(e);
        dfs(w);
        nodes.pop_back();
        edges.pop_back();
        visited &= ~(std::uint64_t(1) << w);
      }
    };
    dfs(start);
  }
  return loops;
}

RationalFunc determinant(const std::vector<GraphPath>& loops, std::uint64_t exclude) {
  RationalFunc delta(1);
  std::function<void(std::size_t, std::uint64_t, const RationalFunc&, int)> rec =
      [&](std::size_t from, std::uint64_t used, const RationalFunc& product, int count) {
        for (std::size_t i = from; i < loops.size(); ++i) {
          if (loops[i].mask & (used | exclude)) continue;
          const RationalFunc term = product * loops[i].gain;
          delta += (count % 2 == 0) ? -term : term;
          rec(i + 1, used | loops[i].mask, term, count + 1);
        }
      };
  rec(0, 0, RationalFunc(1), 0);
  return delta;
}

MasonTrace mason_trace(const SignalFlowGraph& g) {
  MasonTrace t;
  t.paths = enumerate_forward_paths(g);
  t.loops = enumerate_loops(g);
  t.delta = determinant(t.loops);
  if (t.delta.is_zero()) throw BlockDiagramError(BlockDiagramError::Kind::ZeroDeterminant, "Mason determinant is zero");
  RationalFunc num;
  for (const auto& p : t.paths) {
    t.cofactors.push_back(determinant(t.loops, p.mask));
    num += p.gain * t.cofactors.back();
  }
  t.h = symexpr::simplify(num / t.delta).value;
  return t;
}

RationalFunc mason(const SignalFlowGraph& g) { return mason_trace(g).h; }

LabeledDiagram render_labels(const SignalFlowGraph& g, LabelMode mode) {
  LabeledDiagram out{g, {}};
  for (auto& b : out.graph.blocks) {
    if (mode == LabelMode::HighLevel) {
      out.labels.push_back(b.label);
      b.tf = RationalFunc::symbol(b.label);
    } else {
      out.labels.push_back(symexpr::format_canonical(b.tf));
    }
  }
  return out;
}

}  // namespace cktbench::blockdiag
