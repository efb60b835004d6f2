#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "cktbench/blockdiag/diagram.hpp"
#include "cktbench/blockdiag/mason.hpp"
#include "cktbench/symexpr/expr.hpp"
#include "oracles.hpp"

using namespace cktbench;
using namespace cktbench::blockdiag;
using symexpr::parse_rational;
using cplx = std::complex<double>;

namespace {

Node node(NodeKind k, int pos) { return Node{k, 140.0 * pos, 0, pos}; }

// R -> (+) -> G1 -> C with C fed back into the junction.
SignalFlowGraph feedback_loop(const char* g, int fb_sign, const char* h = nullptr) {
  SignalFlowGraph d;
  d.nodes = {node(NodeKind::Input, 0), node(NodeKind::Junction, 1), node(NodeKind::Output, 2)};
  d.output = 2;
  d.main_length = 2;
  d.blocks = {{"G1", parse_rational(g)}};
  if (h) d.blocks.push_back({"H1", parse_rational(h)});
  d.edges = {{0, 1, -1, 1, EdgeRole::Main, 0},
             {1, 2, 0, 1, EdgeRole::Main, 0},
             {2, 1, h ? 1 : -1, fb_sign, EdgeRole::Feedback, 1}};
  return d;
}

SignalFlowGraph q6() {
  SignalFlowGraph d = feedback_loop("10/(s^2+2*s+1)", 1, "5/(s+2)");
  d.edges[0].sign = -1;
  return d;
}

// R -> G1 -> a -> G2 -> b -> G3 -> C. With the feedforward, b becomes
// b -> (+) -> G3 -> C and a bypasses G2 into the junction.
SignalFlowGraph chain(bool feedforward) {
  SignalFlowGraph d;
  d.blocks = {{"G1", parse_rational("1/(s+1)")}, {"G2", parse_rational("2/(s+3)")}, {"G3", parse_rational("4")}};
  if (!feedforward) {
    d.nodes = {node(NodeKind::Input, 0), node(NodeKind::Signal, 1), node(NodeKind::Signal, 2),
               node(NodeKind::Output, 3)};
    d.output = 3;
    d.main_length = 3;
    d.edges = {{0, 1, 0, 1, EdgeRole::Main, 0}, {1, 2, 1, 1, EdgeRole::Main, 0}, {2, 3, 2, 1, EdgeRole::Main, 0}};
    return d;
  }
  d.nodes = {node(NodeKind::Input, 0), node(NodeKind::Signal, 1), node(NodeKind::Signal, 2),
             node(NodeKind::Junction, 3), node(NodeKind::Output, 4)};
  d.output = 4;
  d.main_length = 4;
  d.edges = {{0, 1, 0, 1, EdgeRole::Main, 0},
             {1, 2, 1, 1, EdgeRole::Main, 0},
             {2, 3, -1, 1, EdgeRole::Main, 0},
             {3, 4, 2, 1, EdgeRole::Main, 0},
             {1, 3, -1, 1, EdgeRole::Feedforward, -1}};
  return d;
}

using EdgeSeq = std::vector<int>;

// Every simple input -> output path as a list of edge indices.
std::set<EdgeSeq> brute_paths(const SignalFlowGraph& g) {
  std::set<EdgeSeq> out;
  std::vector<bool> on(g.nodes.size());
  EdgeSeq cur;
  std::function<void(int)> go = [&](int v) {
    if (v == g.output) {
      out.insert(cur);
      return;
    }
    on[v] = true;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      if (g.edges[e].src != v || on[g.edges[e].dst]) continue;
      cur.push_back(e);
      go(g.edges[e].dst);
      cur.pop_back();
    }
    on[v] = false;
  };
  go(g.input);
  return out;
}

// Every simple cycle as a sorted edge set.
std::set<EdgeSeq> brute_loops(const SignalFlowGraph& g) {
  std::set<EdgeSeq> out;
  const int n = static_cast<int>(g.nodes.size());
  for (int start = 0; start < n; ++start) {
    std::vector<bool> on(n);
    EdgeSeq cur;
    std::function<void(int)> go = [&](int v) {
      on[v] = true;
      for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const Edge& x = g.edges[e];
        if (x.src != v || x.dst < start) continue;
        cur.push_back(e);
        if (x.dst == start) {
          EdgeSeq s = cur;
          std::sort(s.begin(), s.end());
          out.insert(s);
        } else if (!on[x.dst]) {
          go(x.dst);
        }
        cur.pop_back();
      }
      on[v] = false;
    };
    go(start);
  }
  return out;
}

bool equivalent(const RationalFunc& a, const RationalFunc& b) { return symexpr::same_function(a, b); }

}  // namespace

TEST(Generate, MinimalDiagram) {
  GenParams p;
  p.tau_b = p.tau_e = 1;
  p.tau_fb = p.tau_ff = 0;
  Rng rng(1);
  const SignalFlowGraph g = generate_diagram(rng, p);
  ASSERT_EQ(g.blocks.size(), 1u);
  EXPECT_EQ(g.blocks[0].label, "G1");
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.nodes.size(), 2u);
  EXPECT_TRUE(is_well_formed(g));
  EXPECT_EQ(mason(g), g.blocks[0].tf);
}

TEST(Generate, UnityFeedbackWithoutBlock) {
  GenParams p;
  p.tau_b = p.tau_e = 2;
  p.tau_fb = 1;
  p.tau_ff = 0;
  p.p_block = 0;
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const SignalFlowGraph g = generate_diagram(rng, p);
    for (const auto& e : g.edges)
      if (e.role != EdgeRole::Main) {
        EXPECT_EQ(e.role, EdgeRole::Feedback);
        EXPECT_EQ(e.block, -1);
        ++seen;
      }
    EXPECT_LE(g.feedback_count(), 1u);
  }
  EXPECT_GT(seen, 0);
}

TEST(Generate, Deterministic) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(seed), b(seed);
    const auto x = generate_diagram(a, GenParams{}), y = generate_diagram(b, GenParams{});
    EXPECT_TRUE(x == y);
    EXPECT_EQ(serialize(x), serialize(y));
  }
}

TEST(Generate, RespectsParams) {
  const GenParams p;
  for (int i = 0; i < 300; ++i) {
    Rng rng(derive_seed(9, i));
    const SignalFlowGraph g = generate_diagram(rng, p);
    EXPECT_TRUE(is_well_formed(g));
    EXPECT_GE(g.main_length, p.tau_b);
    EXPECT_LE(g.main_length, p.tau_e);
    EXPECT_LE(g.feedback_count(), static_cast<std::size_t>(p.tau_fb));
    EXPECT_LE(g.feedforward_count(), static_cast<std::size_t>(p.tau_ff));
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : g.edges) EXPECT_TRUE(pairs.insert({e.src, e.dst}).second) << serialize(g);
    for (const auto& n : g.nodes) EXPECT_GE(n.position, 0);
    for (const auto& e : g.edges) {
      if (e.role == EdgeRole::Main) {
        EXPECT_EQ(e.lane, 0);
      } else if (e.role == EdgeRole::Feedback) {
        EXPECT_GT(e.lane, 0);
      } else {
        EXPECT_LT(e.lane, 0);
      }
    }
  }
}

TEST(Generate, InvalidParams) {
  GenParams p;
  p.tau_e = 1;
  p.tau_b = 2;
  EXPECT_THROW(check_params(p), BlockDiagramError);
  p = GenParams{};
  p.ratio_block = p.ratio_junction = 0;
  EXPECT_THROW(check_params(p), BlockDiagramError);
  p = GenParams{};
  p.p_block = 1.5;
  Rng rng(0);
  EXPECT_THROW(generate_diagram(rng, p), BlockDiagramError);
}

TEST(Generate, LibraryFunctionsAreProper) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const RationalFunc tf = random_tf(rng);
    EXPECT_LE(tf.numerator().degree("s"), tf.denominator().degree("s")) << symexpr::format_canonical(tf);
    EXPECT_EQ(tf.symbols().size() <= 1, true);
  }
}

TEST(Paths, SeriesChain) {
  const auto paths = enumerate_forward_paths(chain(false));
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].gain, parse_rational("8/((s+1)*(s+3))"));
  EXPECT_TRUE(enumerate_loops(chain(false)).empty());
  EXPECT_EQ(mason_trace(chain(false)).delta, RationalFunc(1L));
}

TEST(Paths, FeedforwardGivesTwo) {
  const SignalFlowGraph g = chain(true);
  ASSERT_TRUE(is_well_formed(g));
  const auto paths = enumerate_forward_paths(g);
  EXPECT_EQ(paths.size(), 2u);
  std::set<EdgeSeq> got;
  for (const auto& p : paths) got.insert(EdgeSeq(p.edges.begin(), p.edges.end()));
  EXPECT_EQ(got, brute_paths(g));
  EXPECT_TRUE(equivalent(mason(g), parse_rational("4/(s+1)*(2/(s+3) + 1)")));
}

TEST(Q6, PathAndLoop) {
  const SignalFlowGraph g = q6();
  ASSERT_TRUE(is_well_formed(g));
  const auto paths = enumerate_forward_paths(g);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_TRUE(equivalent(paths[0].gain, parse_rational("-10/(s^2+2*s+1)")));
  const auto loops = enumerate_loops(g);
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_TRUE(equivalent(loops[0].gain, parse_rational("50/((s^2+2*s+1)*(s+2))")));
  EXPECT_TRUE(equivalent(mason(g), parse_rational("(-10/(s^2+2*s+1))/(1-50/((s^2+2*s+1)*(s+2)))")));
}

TEST(Mason, SingleBlock) {
  SignalFlowGraph d;
  d.nodes = {node(NodeKind::Input, 0), node(NodeKind::Output, 1)};
  d.output = 1;
  d.main_length = 1;
  d.blocks = {{"G1", parse_rational("3/(s+4)")}};
  d.edges = {{0, 1, 0, 1, EdgeRole::Main, 0}};
  const MasonTrace t = mason_trace(d);
  EXPECT_EQ(t.delta, RationalFunc(1L));
  ASSERT_EQ(t.cofactors.size(), 1u);
  EXPECT_EQ(t.cofactors[0], RationalFunc(1L));
  EXPECT_EQ(t.h, parse_rational("3/(s+4)"));
}

TEST(Mason, UnityNegativeFeedback) {
  const SignalFlowGraph g = feedback_loop("G", -1);
  const auto loops = enumerate_loops(g);
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_EQ(loops[0].gain, parse_rational("-G"));
  EXPECT_EQ(mason(g), parse_rational("G/(1+G)"));
}

TEST(Mason, ZeroDeterminant) {
  const SignalFlowGraph g = feedback_loop("1", 1);
  try {
    mason(g);
    FAIL();
  } catch (const BlockDiagramError& e) {
    EXPECT_EQ(e.kind(), BlockDiagramError::Kind::ZeroDeterminant);
  }
}

TEST(Mason, NonTouchingLoopsMultiply) {
  // Two separate loops on disjoint junction pairs: Delta = 1 - L1 - L2 + L1 L2.
  const std::vector<GraphPath> loops = {{{1, 2}, {}, parse_rational("a"), 0b0110},
                                        {{3, 4}, {}, parse_rational("b"), 0b11000}};
  EXPECT_EQ(determinant(loops), parse_rational("1 - a - b + a*b"));
  EXPECT_EQ(determinant(loops, 0b0010), parse_rational("1 - b"));
  const std::vector<GraphPath> touching = {{{1, 2}, {}, parse_rational("a"), 0b0110},
                                           {{2, 3}, {}, parse_rational("b"), 0b1100}};
  EXPECT_EQ(determinant(touching), parse_rational("1 - a - b"));
}

TEST(Labels, HighLevelAndExact) {
  const SignalFlowGraph g = feedback_loop("10/(s+5)", -1);
  const LabeledDiagram hi = render_labels(g, LabelMode::HighLevel);
  EXPECT_EQ(hi.labels, std::vector<std::string>{"G1"});
  EXPECT_EQ(mason(hi.graph), parse_rational("G1/(1+G1)"));
  const LabeledDiagram ex = render_labels(g, LabelMode::Exact);
  EXPECT_EQ(ex.labels, std::vector<std::string>{"10/(s + 5)"});
  EXPECT_EQ(mason(ex.graph), parse_rational("10/(s+15)"));
  // Topology is untouched by the mode.
  EXPECT_EQ(serialize(hi.graph).substr(0, serialize(hi.graph).find("block")),
            serialize(ex.graph).substr(0, serialize(ex.graph).find("block")));
  EXPECT_EQ(hi.graph.edges.size(), ex.graph.edges.size());
  for (std::size_t i = 0; i < hi.graph.edges.size(); ++i) {
    EXPECT_EQ(hi.graph.edges[i].src, ex.graph.edges[i].src);
    EXPECT_EQ(hi.graph.edges[i].dst, ex.graph.edges[i].dst);
    EXPECT_EQ(hi.graph.edges[i].sign, ex.graph.edges[i].sign);
  }
}

TEST(Serialize, RoundTrip) {
  EXPECT_TRUE(parse_diagram(serialize(q6())) == q6());
  for (int i = 0; i < 200; ++i) {
    Rng rng(derive_seed(31, i));
    const auto g = generate_diagram(rng, GenParams{});
    const std::string text = serialize(g);
    EXPECT_EQ(text.rfind("diagram v1\n", 0), 0u);
    EXPECT_TRUE(parse_diagram(text) == g) << text;
    EXPECT_EQ(serialize(parse_diagram(text)), text);
  }
  EXPECT_THROW(parse_diagram("diagram v2\n"), BlockDiagramError);
}

TEST(Property, EnumeratorsMatchBruteForce) {
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    Rng rng(derive_seed(77, i));
    const auto g = generate_diagram(rng, GenParams{});
    if (g.nodes.size() > 10) continue;
    ++checked;
    std::set<EdgeSeq> paths, loops;
    for (const auto& p : enumerate_forward_paths(g)) paths.insert(EdgeSeq(p.edges.begin(), p.edges.end()));
    for (const auto& l : enumerate_loops(g)) {
      EdgeSeq s(l.edges.begin(), l.edges.end());
      std::sort(s.begin(), s.end());
      loops.insert(s);
    }
    EXPECT_EQ(paths, brute_paths(g)) << serialize(g);
    EXPECT_EQ(loops, brute_loops(g)) << serialize(g);
    EXPECT_EQ(enumerate_forward_paths(g).size(), paths.size());
    EXPECT_EQ(enumerate_loops(g).size(), loops.size());
  }
  EXPECT_GT(checked, 200);
}

TEST(Property, LooplessDeltaIsOne) {
  GenParams p;
  p.tau_fb = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(derive_seed(78, i));
    const auto g = generate_diagram(rng, p);
    EXPECT_EQ(mason_trace(g).delta, RationalFunc(1L));
  }
}

TEST(Property, MasonMatchesSignalEquations) {
  for (int i = 0; i < 100; ++i) {
    Rng rng(derive_seed(79, i));
    const auto g = generate_diagram(rng, GenParams{});
    const RationalFunc h = mason(g);
    for (int k = 0; k < 20; ++k) {
      const cplx s = oracle::random_s(rng);
      cplx want;
      try {
        want = symexpr::eval_numeric(h, {{"s", s}}, 1e-9);
      } catch (const symexpr::EvalError&) {
        continue;
      }
      EXPECT_LE(oracle::rel_err(oracle::diagram_response(g, s), want), 1e-9) << serialize(g);
    }
  }
}
