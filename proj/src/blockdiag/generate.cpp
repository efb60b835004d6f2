#include <algorithm>
#include <set>

#include "cktbench/blockdiag/diagram.hpp"
#include "cktbench/blockdiag/mason.hpp"

namespace cktbench::blockdiag {

namespace {

constexpr double kSpacing = 140;

class Builder {
 public:
  Builder(Rng& rng, const GenParams& p) : rng_(rng), p_(p) {}

  // One attempt; returns false when the sampled shape cannot be completed.
  bool build(SignalFlowGraph& g) {
    const int n = static_cast<int>(rng_.between(p_.tau_b, p_.tau_e));
    int n_fb = static_cast<int>(rng_.between(0, p_.tau_fb));
    int n_ff = static_cast<int>(rng_.between(0, p_.tau_ff));
    if (n == 1) n_fb = n_ff = 0;

    // Main path kinds; every junction must be fed by some auxiliary path.
    std::vector<bool> junction(n, false);
    int junctions = 0;
    const double pj = p_.ratio_junction / (p_.ratio_block + p_.ratio_junction);
    for (int i = 0; i < n; ++i) {
      if (junctions < n_fb + n_ff && rng_.chance(pj)) junction[i] = true, ++junctions;
    }
    if (junctions == n) {
      junction[rng_.below(n)] = false;
      --junctions;
    }
    if (n_fb > 0 && junctions == 0) {
      junction[rng_.below(n)] = true;
      ++junctions;
    }

    g = SignalFlowGraph{};
    g.main_length = n;
    add_node(g, NodeKind::Input, 0);
    int prev = 0;
    for (int i = 0; i < n; ++i) {
      if (junction[i]) {
        const int j = add_node(g, NodeKind::Junction, i + 1);
        add_edge(g, prev, j, -1, rng_.chance(0.5) ? 1 : -1, EdgeRole::Main, 0);
        prev = j;
      } else {
        const int v = add_node(g, NodeKind::Signal, i + 1);
        add_edge(g, prev, v, add_block(g, 'G'), 1, EdgeRole::Main, 0);
        prev = v;
      }
    }
    if (g.nodes[prev].kind == NodeKind::Junction) {
      const int c = add_node(g, NodeKind::Output, n + 1);
      add_edge(g, prev, c, -1, 1, EdgeRole::Main, 0);
      prev = c;
    }
    g.nodes[prev].kind = NodeKind::Output;
    g.output = prev;

    std::vector<int> main_nodes(g.nodes.size());
    for (std::size_t i = 0; i < main_nodes.size(); ++i) main_nodes[i] = static_cast<int>(i);
    auto pos = [&](int v) { return g.nodes[v].position; };

    // Feed each junction first.
    for (int j : main_nodes) {
      if (g.nodes[j].kind != NodeKind::Junction) continue;
      std::vector<int> sources;
      if (n_fb > 0) {
        for (int v : main_nodes) {
          if (pos(v) > pos(j)) sources.push_back(v);
        }
        add_aux(g, rng_.pick(sources), j, EdgeRole::Feedback);
        --n_fb;
      } else if (n_ff > 0) {
        for (int v : main_nodes) {
          if (pos(v) < pos(j) && !used_.count({v, j})) sources.push_back(v);
        }
        if (sources.empty()) return false;
        add_aux(g, rng_.pick(sources), j, EdgeRole::Feedforward);
        --n_ff;
      } else {
        return false;
      }
    }
    for (; n_fb > 0; --n_fb) {
      std::vector<std::pair<int, int>> pairs;
      for (int j : main_nodes) {
        if (g.nodes[j].kind != NodeKind::Junction) continue;
        for (int v : main_nodes) {
          if (pos(v) > pos(j) && !used_.count({v, j})) pairs.emplace_back(v, j);
        }
      }
      if (pairs.empty()) break;
      const auto [src, dst] = rng_.pick(pairs);
      add_aux(g, src, dst, EdgeRole::Feedback);
    }
    for (; n_ff > 0; --n_ff) {
      std::vector<std::pair<int, int>> pairs;
      for (int d : main_nodes) {
        if (g.nodes[d].kind != NodeKind::Junction && d != g.output) continue;
        for (int v : main_nodes) {
          if (pos(v) < pos(d) && !used_.count({v, d})) pairs.emplace_back(v, d);
        }
      }
      if (pairs.empty()) break;
      const auto [src, dst] = rng_.pick(pairs);
      add_aux(g, src, dst, EdgeRole::Feedforward);
    }
    return is_well_formed(g);
  }

 private:
  Rng& rng_;
  const GenParams& p_;
  std::set<std::pair<int, int>> used_;
  int g_count_ = 0;
  int h_count_ = 0;
  int fb_lanes_ = 0;
  int ff_lanes_ = 0;

  int add_node(SignalFlowGraph& g, NodeKind kind, int position) {
    Node n;
    n.kind = kind;
    n.position = position;
    n.x = position * kSpacing;
    n.y = 0;
    g.nodes.push_back(n);
    return static_cast<int>(g.nodes.size()) - 1;
  }

  int add_block(SignalFlowGraph& g, char prefix) {
    const int k = prefix == 'G' ? ++g_count_ : ++h_count_;
    g.blocks.push_back({std::string(1, prefix) + std::to_string(k), random_tf(rng_)});
    return static_cast<int>(g.blocks.size()) - 1;
  }

  void add_edge(SignalFlowGraph& g, int src, int dst, int block, int sign, EdgeRole role, int lane) {
    used_.insert({src, dst});
    g.edges.push_back({src, dst, block, sign, role, lane});
  }

  void add_aux(SignalFlowGraph& g, int src, int dst, EdgeRole role) {
    const bool fb = role == EdgeRole::Feedback;
    const int block = rng_.chance(p_.p_block) ? add_block(g, fb ? 'H' : 'G') : -1;
    const int sign = g.nodes[dst].kind == NodeKind::Junction ? (rng_.chance(0.5) ? 1 : -1) : 1;
    const int lane = fb ? ++fb_lanes_ : -(++ff_lanes_);
    add_edge(g, src, dst, block, sign, role, lane);
  }
};

}  // namespace

SignalFlowGraph generate_diagram(Rng& rng, const GenParams& params) {
  check_params(params);
  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    SignalFlowGraph g;
    if (!Builder(rng, params).build(g)) continue;
    if (determinant(enumerate_loops(g)).is_zero()) continue;
    return g;
  }
  throw BlockDiagramError(BlockDiagramError::Kind::ExhaustedRetries,
                          "no valid diagram after " + std::to_string(params.max_retries) + " attempts");
}

}  // namespace cktbench::blockdiag
