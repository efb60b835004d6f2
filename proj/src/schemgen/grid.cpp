#include "cktbench/schemgen/grid.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace cktbench::schemgen {

bool GridTopology::is_outer(const GridEdge& e) const {
  const int r1 = row(e.first), c1 = col(e.first), r2 = row(e.second), c2 = col(e.second);
  if (r1 == r2) return r1 == 0 || r1 == rows - 1;
  return c1 == c2 && (c1 == 0 || c1 == cols - 1);
}

std::vector<int> GridTopology::points() const {
  std::set<int> s;
  for (const auto& [a, b] : edges) {
    s.insert(a);
    s.insert(b);
  }
  return {s.begin(), s.end()};
}

bool is_valid_topology(const GridTopology& g) {
  if (g.edges.empty()) return false;
  std::map<int, int> degree;
  std::map<int, int> parent;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : g.edges) {
    degree[a]++;
    degree[b]++;
    parent.emplace(a, a);
    parent.emplace(b, b);
  }
  for (const auto& [a, b] : g.edges) parent[find(a)] = find(b);
  const int root = find(g.edges.front().first);
  for (const auto& [p, d] : degree) {
    if (d < 2 || find(p) != root) return false;
  }
  return true;
}

std::vector<GridEdge> full_grid_edges(int rows, int cols) {
  std::vector<GridEdge> out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int p = r * cols + c;
      if (c + 1 < cols) out.emplace_back(p, p + 1);
      if (r + 1 < rows) out.emplace_back(p, p + cols);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Repeatedly drops edges at degree-1 points, then keeps the component
// holding the most edges.
void prune(GridTopology& g) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<int, int> degree;
    for (const auto& [a, b] : g.edges) {
      degree[a]++;
      degree[b]++;
    }
    const auto before = g.edges.size();
    std::erase_if(g.edges, [&](const GridEdge& e) { return degree[e.first] < 2 || degree[e.second] < 2; });
    changed = g.edges.size() != before;
  }
  if (g.edges.empty()) return;

  std::map<int, int> parent;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : g.edges) {
    parent.emplace(a, a);
    parent.emplace(b, b);
  }
  for (const auto& [a, b] : g.edges) parent[find(a)] = find(b);
  std::map<int, int> size;
  for (const auto& e : g.edges) size[find(e.first)]++;
  int best = -1, best_size = 0;
  for (const auto& [root, n] : size) {
    if (n > best_size) best = root, best_size = n;
  }
  std::erase_if(g.edges, [&](const GridEdge& e) { return find(e.first) != best; });
}

}  // namespace

GridTopology sample_grid(Rng& rng, const PlacementConfig& cfg) {
  std::vector<double> weights;
  for (const auto& entry : cfg.grid_sizes) weights.push_back(entry.second);
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    const GridSize size = cfg.grid_sizes[rng.weighted(weights)].first;
    GridTopology g{size.rows, size.cols, {}};
    for (const auto& e : full_grid_edges(size.rows, size.cols)) {
      if (rng.chance(cfg.edge_keep)) g.edges.push_back(e);
    }
    prune(g);
    if (is_valid_topology(g)) return g;
  }
  throw ExhaustedRetries("no valid grid topology after " + std::to_string(cfg.max_retries) + " attempts");
}

}  // namespace cktbench::schemgen
