#include "cktbench/blockdiag/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "cktbench/symexpr/expr.hpp"

namespace cktbench::blockdiag {

using symexpr::Polynomial;

RationalFunc SignalFlowGraph::gain(const Edge& e) const {
  RationalFunc g(static_cast<long>(e.sign));
  if (e.block >= 0) g = g * blocks.at(static_cast<std::size_t>(e.block)).tf;
  return g;
}

std::size_t SignalFlowGraph::feedback_count() const {
  return std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.role == EdgeRole::Feedback; });
}

std::size_t SignalFlowGraph::feedforward_count() const {
  return std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.role == EdgeRole::Feedforward; });
}

bool operator==(const SignalFlowGraph& a, const SignalFlowGraph& b) {
  if (a.input != b.input || a.output != b.output || a.main_length != b.main_length) return false;
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size() || a.blocks.size() != b.blocks.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const Node &x = a.nodes[i], &y = b.nodes[i];
    if (x.kind != y.kind || x.x != y.x || x.y != y.y || x.position != y.position) return false;
  }
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const Edge &x = a.edges[i], &y = b.edges[i];
    if (x.src != y.src || x.dst != y.dst || x.block != y.block || x.sign != y.sign || x.role != y.role ||
        x.lane != y.lane) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    if (a.blocks[i].label != b.blocks[i].label || !(a.blocks[i].tf == b.blocks[i].tf)) return false;
  }
  return true;
}

bool is_well_formed(const SignalFlowGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  if (n < 2 || g.input < 0 || g.input >= n || g.output < 0 || g.output >= n || g.input == g.output) return false;
  int inputs = 0, outputs = 0;
  for (const auto& node : g.nodes) {
    inputs += node.kind == NodeKind::Input;
    outputs += node.kind == NodeKind::Output;
  }
  if (inputs != 1 || outputs != 1) return false;
  if (g.nodes[g.input].kind != NodeKind::Input || g.nodes[g.output].kind != NodeKind::Output) return false;

  std::set<std::pair<int, int>> pairs;
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n), in(n);
  for (const auto& e : g.edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n || e.src == e.dst) return false;
    if (e.block >= static_cast<int>(g.blocks.size()) || (e.sign != 1 && e.sign != -1)) return false;
    if (!pairs.insert({e.src, e.dst}).second) return false;
    if (e.dst == g.input) return false;
    indegree[e.dst]++;
    out[e.src].push_back(e.dst);
    in[e.dst].push_back(e.src);
  }
  for (int i = 0; i < n; ++i) {
    if (g.nodes[i].kind == NodeKind::Junction && indegree[i] < 2) return false;
    if (i != g.input && indegree[i] == 0) return false;
  }
  auto reach = [&](int start, const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!seen[w]) seen[w] = true, stack.push_back(w);
      }
    }
    return seen;
  };
  const auto from_input = reach(g.input, out);
  const auto to_output = reach(g.output, in);
  for (int i = 0; i < n; ++i) {
    if (!from_input[i] || !to_output[i]) return false;
  }
  return true;
}

void check_params(const GenParams& p) {
  auto fail = [](const std::string& m) { throw BlockDiagramError(BlockDiagramError::Kind::InvalidParams, m); };
  if (p.tau_b < 1) fail("tau_b must be at least 1");
  if (p.tau_e < p.tau_b) fail("tau_e must be at least tau_b");
  if (p.tau_fb < 0 || p.tau_ff < 0) fail("tau_fb and tau_ff must be non-negative");
  if (p.ratio_block < 0 || p.ratio_junction < 0 || p.ratio_block + p.ratio_junction <= 0) {
    fail("block:junction ratio must be non-negative and not both zero");
  }
  if (!(p.p_block >= 0 && p.p_block <= 1)) fail("p_block must lie in [0, 1]");
  if (p.max_retries < 1) fail("max_retries must be positive");
}

RationalFunc random_tf(Rng& rng) {
  const Polynomial s = Polynomial::variable(symexpr::kFrequencyVar);
  auto c = [](long v) { return Polynomial(v); };
  switch (rng.below(5)) {
    case 0: return RationalFunc(c(rng.between(1, 10)), s + c(rng.between(1, 10)));
    case 1: {
      const long a = rng.between(1, 6), b = rng.between(1, 10);
      return RationalFunc(c(rng.between(1, 10)), s * s + s * c(a) + c(b));
    }
    case 2: return RationalFunc(rng.between(2, 10));
    case 3: return RationalFunc(c(1), s);
    default: {
      const long z = rng.between(1, 10);
      long p = rng.between(1, 9);
      if (p >= z) ++p;
      return RationalFunc(s + c(z), s + c(p));
    }
  }
}

namespace {

const char* kind_word(NodeKind k) {
  switch (k) {
    case NodeKind::Input: return "input";
    case NodeKind::Output: return "output";
    case NodeKind::Signal: return "signal";
    case NodeKind::Junction: return "junction";
  }
  return "signal";
}

const char* role_word(EdgeRole r) {
  switch (r) {
    case EdgeRole::Main: return "main";
    case EdgeRole::Feedback: return "feedback";
    case EdgeRole::Feedforward: return "feedforward";
  }
  return "main";
}

std::string number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

[[noreturn]] void malformed(int line, const std::string& what) {
  throw BlockDiagramError(BlockDiagramError::Kind::Malformed, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string serialize(const SignalFlowGraph& g) {
  std::ostringstream out;
  out << "diagram v1\n";
  out << "main " << g.main_length << '\n';
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Node& n = g.nodes[i];
    out << "node " << i << ' ' << kind_word(n.kind) << ' ' << n.position << ' ' << number(n.x) << ' ' << number(n.y)
        << '\n';
  }
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    out << "block " << i << ' ' << g.blocks[i].label << ' ' << symexpr::format_canonical(g.blocks[i].tf) << '\n';
  }
  for (const auto& e : g.edges) {
    out << "edge " << e.src << ' ' << e.dst << ' ' << role_word(e.role) << ' ' << (e.sign > 0 ? '+' : '-') << ' ';
    if (e.block >= 0) {
      out << e.block;
    } else {
      out << '-';
    }
    out << ' ' << e.lane << '\n';
  }
  return out.str();
}

SignalFlowGraph parse_diagram(std::string_view text) {
  SignalFlowGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  int inputs = 0, outputs = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (!header) {
      std::string version;
      ls >> version;
      if (word != "diagram" || version != "v1") malformed(line_no, "expected 'diagram v1' header");
      header = true;
      continue;
    }
    if (word == "main") {
      if (!(ls >> g.main_length)) malformed(line_no, "bad main line");
    } else if (word == "node") {
      std::size_t id;
      std::string kind;
      Node n;
      if (!(ls >> id >> kind >> n.position >> n.x >> n.y) || id != g.nodes.size()) malformed(line_no, "bad node line");
      static const std::map<std::string, NodeKind> kinds{{"input", NodeKind::Input},
                                                         {"output", NodeKind::Output},
                                                         {"signal", NodeKind::Signal},
                                                         {"junction", NodeKind::Junction}};
      auto it = kinds.find(kind);
      if (it == kinds.end()) malformed(line_no, "unknown node kind " + kind);
      n.kind = it->second;
      if (n.kind == NodeKind::Input) g.input = static_cast<int>(id), ++inputs;
      if (n.kind == NodeKind::Output) g.output = static_cast<int>(id), ++outputs;
      g.nodes.push_back(n);
    } else if (word == "block") {
      std::size_t id;
      TfBlock b;
      if (!(ls >> id >> b.label) || id != g.blocks.size()) malformed(line_no, "bad block line");
      std::string rest;
      std::getline(ls, rest);
      try {
        b.tf = symexpr::parse_rational(rest);
      } catch (const std::exception& e) {
        malformed(line_no, std::string("bad transfer function: ") + e.what());
      }
      g.blocks.push_back(std::move(b));
    } else if (word == "edge") {
      Edge e;
      std::string role, sign, block;
      if (!(ls >> e.src >> e.dst >> role >> sign >> block >> e.lane)) malformed(line_no, "bad edge line");
      if (role == "main") {
        e.role = EdgeRole::Main;
      } else if (role == "feedback") {
        e.role = EdgeRole::Feedback;
      } else if (role == "feedforward") {
        e.role = EdgeRole::Feedforward;
      } else {
        malformed(line_no, "unknown edge role " + role);
      }
      if (sign != "+" && sign != "-") malformed(line_no, "edge sign must be + or -");
      e.sign = sign == "+" ? 1 : -1;
      if (block == "-") {
        e.block = -1;
      } else {
        try {
          e.block = std::stoi(block);
        } catch (const std::exception&) {
          malformed(line_no, "bad block index " + block);
        }
      }
      g.edges.push_back(e);
    } else {
      malformed(line_no, "unknown record " + word);
    }
  }
  if (!header) throw BlockDiagramError(BlockDiagramError::Kind::Malformed, "empty diagram");
  if (inputs != 1 || outputs != 1) {
    throw BlockDiagramError(BlockDiagramError::Kind::Malformed, "diagram needs exactly one input and one output");
  }
  if (!is_well_formed(g)) throw BlockDiagramError(BlockDiagramError::Kind::Malformed, "diagram is not well formed");
  return g;
}

}  // namespace cktbench::blockdiag
