// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "../unit/oracles.hpp"
#include "cktbench/blockdiag/mason.hpp"
#include "cktbench/equiv/equiv.hpp"
#include "cktbench/harness/dataset.hpp"
#include "cktbench/harness/distractors.hpp"
#include "cktbench/harness/grading.hpp"
#include "cktbench/mna/mna.hpp"
#include "cktbench/netlist/validate.hpp"
#include "cktbench/schemgen/generator.hpp"
#include "cktbench/symexpr/expr.hpp"

using namespace cktbench;
namespace fs = std::filesystem;
using symexpr::format_canonical;
using symexpr::parse_rational;
using symexpr::Polynomial;
using symexpr::RationalFunc;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned limits.
constexpr double kC1Seconds = 1.0;
constexpr double kC2Seconds = 1.0;
constexpr double kC3Seconds = 60.0;
constexpr int kC3Pairs = 1000;
constexpr double kC4Seconds = 300.0;
constexpr int kC4Schematics = 200;
constexpr int kC4Assignments = 10;
constexpr int kC4Diagrams = 200;
constexpr int kC4Points = 20;
constexpr double kC4Tolerance = 1e-9;
constexpr double kC5Seconds = 300.0;
constexpr int kC5Schematics = 1000;
constexpr double kC6Seconds = 600.0;
constexpr int kC6SchematicsPerLevel = 125;  // x 4 levels = 500
constexpr int kC6Diagrams = 100;
constexpr double kC6MaxDiscardRate = 0.20;

const char* kQ1 = "R5 1 0 R5\nR1 0 3 R1\nR6 1 2 R6\nV1 2 3 V1\nR2 3 4 R2\nR3 5 2 R3\nR4 6 2 R4\nR7 5 4 R7\nR8 5 6 R8\n";
const char* kQ1Truth = "Vn2(s) = V1*(R5 + R6)/(s*(R1 + R5 + R6))";
const char* kQ3 = "R1 1 2 R1\nC1 1 0 C1\nE1 3 2 1 2 x_1 0\nV1 5 0 step\nR2 3 5 R2\n";
const char* kQ3Truth = "H(s) = ((R1*s/(R1*x_1 - R1 - R2))/(s - 1/(C1*R1*x_1 - C1*R1 - C1*R2)))*1";
const char* kQ6Truth = "(-10/(s^2+2*s+1))/(1-50/((s^2+2*s+1)*(s+2)))";

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Result {
  bool pass = false;
  std::string detail;
};

bool all_passed = true;

void report(int n, const Result& r, double secs) {
  std::printf("criterion %d: %s  %s  [%.2f s]\n", n, r.pass ? "PASS" : "FAIL", r.detail.c_str(), secs);
  std::fflush(stdout);
  all_passed &= r.pass;
}

void run(int n, const std::function<Result()>& body) {
  const auto t0 = Clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  report(n, r, seconds_since(t0));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("cktbench_accept_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Polynomial random_poly(Rng& rng, int max_terms) {
  static const char* names[] = {"s", "R1", "R2", "C1", "L1"};
  Polynomial p;
  const int terms = 1 + static_cast<int>(rng.below(max_terms));
  for (int t = 0; t < terms; ++t) {
    Polynomial m(rng.between(1, 9) * (rng.chance(0.25) ? -1 : 1));
    for (const char* n : names)
      if (unsigned e = static_cast<unsigned>(rng.below(3)); e && rng.chance(0.5)) m *= Polynomial::variable(n, e);
    p += m;
  }
  return p.is_zero() ? Polynomial(1L) : p;
}

// A truth in the shape the dataset produces: either a Mason result or a
// rational function of component symbols and s.
RationalFunc random_truth(Rng& rng, int i) {
  if (i % 2 == 0) {
    Rng d(derive_seed(rng.next(), 0));
    return blockdiag::mason(blockdiag::generate_diagram(d, blockdiag::GenParams{}));
  }
  RationalFunc f(random_poly(rng, 3), random_poly(rng, 4));
  return f.is_zero() ? RationalFunc(Polynomial::variable("R1")) : f;
}

Result criterion1() {
  std::string detail;
  bool ok = true;
  for (int which = 0; which < 2; ++which) {
    const auto t0 = Clock::now();
    const auto net = netlist::parse_netlist(which == 0 ? kQ1 : kQ3);
    const RationalFunc got =
        which == 0 ? mna::node_voltage(net, 2) : mna::transfer_function(net, std::string("R1"));
    const equiv::Verdict v = equiv::check_equivalence(format_canonical(got), which == 0 ? kQ1Truth : kQ3Truth);
    const double secs = seconds_since(t0);
    const bool good = v.outcome == equiv::Outcome::Equivalent && v.decided_by == equiv::Stage::SymbolicZero &&
                      secs < kC1Seconds;
    ok &= good;
    detail += fmt("%s %s in %.3f s; ", which == 0 ? "Q1 Vn2" : "Q3 H(s)", equiv::to_string(v).c_str(), secs);
  }
  return {ok, detail};
}

Result criterion2() {
  using namespace blockdiag;
  const auto t0 = Clock::now();
  SignalFlowGraph g;
  g.nodes = {{NodeKind::Input, 0, 0, 0}, {NodeKind::Junction, 140, 0, 1}, {NodeKind::Output, 280, 0, 2}};
  g.output = 2;
  g.main_length = 2;
  g.blocks = {{"G1", parse_rational("10/(s^2+2*s+1)")}, {"H1", parse_rational("5/(s+2)")}};
  g.edges = {{0, 1, -1, -1, EdgeRole::Main, 0}, {1, 2, 0, 1, EdgeRole::Main, 0}, {2, 1, 1, 1, EdgeRole::Feedback, 1}};
  const MasonTrace t = mason_trace(g);
  const bool shape = t.paths.size() == 1 && t.loops.size() == 1 &&
                     symexpr::same_function(t.paths[0].gain, parse_rational("-10/(s^2+2*s+1)")) &&
                     symexpr::same_function(t.loops[0].gain, parse_rational("50/((s^2+2*s+1)*(s+2))"));
  const equiv::Verdict v = equiv::check_equivalence(format_canonical(t.h), kQ6Truth);
  const double secs = seconds_since(t0);
  const bool ok = shape && v.outcome == equiv::Outcome::Equivalent && secs < kC2Seconds;
  return {ok, fmt("H = %s, %s, paths/loops as published: %s", format_canonical(t.h).c_str(),
                  equiv::to_string(v).c_str(), shape ? "yes" : "no")};
}

Result criterion3() {
  const auto t0 = Clock::now();
  const equiv::Verdict pair = equiv::check_equivalence("1/(R*C*s+1)", "(1/(R*C))/(s+1/(R*C))");
  const bool pair_ok = pair.outcome == equiv::Outcome::Equivalent;

  Rng rng(20240301);
  int mutated = 0, mutated_not_eq = 0, false_eq = 0, skipped = 0;
  for (int i = 0; mutated < kC3Pairs; ++i) {
    const RationalFunc truth = random_truth(rng, i);
    const auto kind = static_cast<harness::Mutation>(i % 5);
    RationalFunc pred;
    try {
      pred = harness::mutate(truth, kind, rng);
    } catch (const std::exception&) {
      ++skipped;
      continue;
    }
    if (symexpr::same_function(pred, truth)) {  // not a mutation after all
      ++skipped;
      continue;
    }
    ++mutated;
    const auto v = equiv::check_equivalence(format_canonical(pred), format_canonical(truth));
    mutated_not_eq += v.outcome == equiv::Outcome::NotEquivalent;
    false_eq += v.outcome == equiv::Outcome::Equivalent;
  }

  int scaled_eq = 0, false_not_eq = 0;
  for (int i = 0; i < kC3Pairs; ++i) {
    const RationalFunc truth = random_truth(rng, i);
    const Polynomial k = random_poly(rng, 3);
    const RationalFunc pred(truth.numerator() * k, truth.denominator() * k);
    const auto v = equiv::check_equivalence(format_canonical(pred), format_canonical(truth));
    scaled_eq += v.outcome == equiv::Outcome::Equivalent;
    false_not_eq += v.outcome == equiv::Outcome::NotEquivalent;
  }
  const double secs = seconds_since(t0);
  const bool ok = pair_ok && mutated_not_eq == kC3Pairs && false_eq == 0 && scaled_eq == kC3Pairs &&
                  false_not_eq == 0 && secs < kC3Seconds;
  return {ok, fmt("pair %s; mutations %d/%d NotEquivalent, %d false Equivalent (%d degenerate skipped); "
                  "scaled %d/%d Equivalent, %d false NotEquivalent",
                  equiv::to_string(pair).c_str(), mutated_not_eq, kC3Pairs, false_eq, skipped, scaled_eq, kC3Pairs,
                  false_not_eq)};
}

Result criterion4() {
  const auto t0 = Clock::now();
  const int levels[] = {0, 1, 2, 4};
  int schematics = 0, budget_discards = 0, points = 0, bad_points = 0;
  double worst = 0;
  std::string first_bad;
  for (int i = 0; schematics < kC4Schematics; ++i) {
    const int level = levels[i % 4];
    Rng rng(derive_seed(4004, i));
    const auto g = schemgen::generate_schematic(rng, level, harness::default_tool_config().placement.at(level));
    const mna::MnaSystem sys = mna::stamp(g.netlist);
    std::unique_ptr<mna::Elimination> elim;
    try {
      elim = std::make_unique<mna::Elimination>(sys, mna::SolveOptions{.work_limit = mna::work_budget(g.netlist)});
    } catch (const mna::MnaError& e) {
      if (e.kind() != mna::MnaError::Kind::WorkBudgetExceeded) throw;
      ++budget_discards;  // discarded upstream as well
      continue;
    }
    ++schematics;
    for (int k = 0; k < kC4Assignments; ++k) {
      const auto values = oracle::netlist_values(g.netlist, rng);
      const std::complex<double> s = oracle::random_s(rng);
      mna::NumericSolution num;
      try {
        num = mna::numeric_solve(g.netlist, values, s);
      } catch (const mna::MnaError&) {
        continue;
      }
      symexpr::Assignment a(values.begin(), values.end());
      a["s"] = s;
      for (std::size_t u = 0; u < sys.size(); ++u) {
        if (sys.unknowns[u].kind != mna::Unknown::Kind::NodeVoltage) continue;
        std::complex<double> y;
        try {
          y = symexpr::eval_numeric(elim->raw(u), a, 1e-300);
        } catch (const symexpr::EvalError&) {
          continue;  // pole
        }
        const double err = oracle::rel_err(y, num.at(sys.unknowns[u].node));
        ++points;
        worst = std::max(worst, err);
        if (!(err <= kC4Tolerance)) {
          if (bad_points++ == 0) first_bad = netlist::serialize(g.netlist);
        }
      }
    }
  }
  int diagrams = 0, dpoints = 0, dbad = 0;
  double dworst = 0;
  for (int i = 0; diagrams < kC4Diagrams; ++i, ++diagrams) {
    Rng rng(derive_seed(4005, i));
    const auto g = blockdiag::generate_diagram(rng, blockdiag::GenParams{});
    const RationalFunc h = blockdiag::mason(g);
    for (int k = 0; k < kC4Points; ++k) {
      const std::complex<double> s = oracle::random_s(rng);
      std::complex<double> want;
      try {
        want = symexpr::eval_numeric(h, {{"s", s}}, 1e-9);
      } catch (const symexpr::EvalError&) {
        continue;
      }
      const double err = oracle::rel_err(oracle::diagram_response(g, s), want);
      ++dpoints;
      dworst = std::max(dworst, err);
      dbad += !(err <= kC4Tolerance);
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = bad_points == 0 && dbad == 0 && points >= kC4Schematics * kC4Assignments &&
                  dpoints >= kC4Diagrams * kC4Points * 9 / 10 && secs < kC4Seconds;
  if (!first_bad.empty()) std::fprintf(stderr, "first mismatch:\n%s", first_bad.c_str());
  return {ok, fmt("%d schematics (%d over budget skipped), %d node values, %d beyond 1e-9, worst %.2e; "
                  "%d diagrams, %d points, %d beyond 1e-9, worst %.2e",
                  schematics, budget_discards, points, bad_points, worst, diagrams, dpoints, dbad, dworst)};
}

Result criterion5() {
  const auto t0 = Clock::now();
  const harness::ToolConfig tool = harness::default_tool_config();
  const int levels[] = {0, 1, 2, 4};
  int clean = 0, one_source = 0;
  for (int i = 0; i < kC5Schematics; ++i) {
    const int level = levels[i % 4];
    Rng rng(derive_seed(5005, i));
    const auto g = schemgen::generate_schematic(rng, level, tool.placement.at(level));
    clean += netlist::validate(g.netlist).empty();
    one_source += g.netlist.count(netlist::ComponentKind::VoltageSource) == 1;
  }
  TempDir tmp("c5");
  harness::DatasetConfig cfg;
  cfg.levels = {0, 1, 2, 4, 5};
  cfg.count = 8;
  cfg.seed = 555;
  cfg.mc = true;
  cfg.threads = 0;
  harness::generate_dataset(cfg, tmp.path() / "a");
  harness::generate_dataset(cfg, tmp.path() / "b");
  const auto a = tree(tmp.path() / "a");
  const bool identical = a == tree(tmp.path() / "b");
  const double secs = seconds_since(t0);
  const bool ok = clean == kC5Schematics && one_source == kC5Schematics && identical && secs < kC5Seconds;
  return {ok, fmt("%d/%d validate clean, %d/%d with one V source; two runs of a %zu-file tree %s", clean,
                  kC5Schematics, one_source, kC5Schematics, a.size(), identical ? "byte-identical" : "DIFFER")};
}

Result criterion6() {
  const auto t0 = Clock::now();
  TempDir tmp("c6");
  harness::DatasetConfig sch;
  sch.levels = {0, 1, 2, 4};
  sch.count = kC6SchematicsPerLevel;
  sch.seed = 606;
  sch.mc = true;
  sch.threads = 0;
  const auto ms = harness::generate_dataset(sch, tmp.path() / "schematic");
  harness::DatasetConfig blk = sch;
  blk.levels = {5};
  blk.count = kC6Diagrams;
  const auto mb = harness::generate_dataset(blk, tmp.path() / "block");
  const double secs = seconds_since(t0);

  int complete = 0;
  for (const auto& [root, m] : {std::pair{tmp.path() / "schematic", &ms}, std::pair{tmp.path() / "block", &mb}}) {
    for (const auto& e : m->entries) {
      const std::string q = "q" + std::to_string(e.id);
      const fs::path d = root / q;
      bool ok = std::distance(fs::directory_iterator(d), fs::directory_iterator{}) == 8;
      for (const char* suffix : {"_ta.txt", "_der.txt", "_image.svg", "_mc.txt", "_a.txt"})
        ok &= fs::file_size(d / (q + suffix)) > 0;
      complete += ok;
    }
  }
  const int emitted = static_cast<int>(ms.entries.size() + mb.entries.size());
  const int discarded = ms.total_discarded() + mb.total_discarded();
  const double rate = static_cast<double>(discarded) / (discarded + emitted);
  std::string reasons;
  for (const auto* m : {&ms, &mb})
    for (const auto& [why, n] : m->discards) reasons += " " + why + "=" + std::to_string(n);
  const bool ok = emitted == 4 * kC6SchematicsPerLevel + kC6Diagrams && complete == emitted &&
                  rate < kC6MaxDiscardRate && secs < kC6Seconds;
  return {ok, fmt("%d questions (%d complete folders), %d discarded attempts, discard rate %.1f%%;%s", emitted,
                  complete, discarded, 100 * rate, reasons.c_str())};
}

// Responses built with a known outcome per question; the report must match
// the tallies computed here exactly.
Result criterion7() {
  TempDir tmp("c7");
  harness::DatasetConfig open;
  open.levels = {0, 1, 2, 5};
  open.count = 10;
  open.seed = 707;
  const auto m = harness::generate_dataset(open, tmp.path() / "open");
  harness::DatasetConfig mc = open;
  mc.levels = {4};
  mc.mc = true;
  const auto mm = harness::generate_dataset(mc, tmp.path() / "mc");

  // Outcome plan per question index within its level: C correct, W wrong, M missing.
  const std::map<int, std::string> plan = {
      {0, "CCCCCCCWWW"}, {1, "CCCCWWWMMM"}, {2, "CCCCCCCCCC"}, {4, "CCCCCWWWWM"}, {5, "CWCWCWCWCW"}};

  bool ok = true;
  std::string detail;
  for (const auto& [root, man] : {std::pair{tmp.path() / "open", &m}, std::pair{tmp.path() / "mc", &mm}}) {
    const fs::path resp = root.parent_path() / (root.filename().string() + "_responses");
    fs::create_directories(resp);
    std::map<int, int> seen;
    std::map<int, harness::Tally> want_level;
    std::map<std::string, harness::Tally> want_cat;
    harness::Tally want_all;
    std::vector<int> want_missing;
    Rng rng(7);
    for (const auto& e : man->entries) {
      const char outcome = plan.at(e.level)[seen[e.level]++];
      const std::string q = "q" + std::to_string(e.id);
      const fs::path file = resp / (q + ".txt");
      std::string text;
      if (e.mc) {
        const char key = slurp(root / q / (q + "_a.txt"))[0];
        const char wrong = key == 'A' ? 'C' : 'A';
        text = "<think>...</think>\n<answer>" + std::string(1, outcome == 'C' ? key : wrong) + "</answer>\n";
      } else {
        const std::string ta = slurp(root / q / (q + "_ta.txt"));
        const std::string lhs = ta.substr(0, ta.find('=') + 1);
        const RationalFunc truth = parse_rational(ta);
        // Correct answers are rewritten as an equivalent, differently scaled form.
        const Polynomial k = Polynomial::variable("s") + Polynomial(3L);
        const RationalFunc pred = outcome == 'C' ? RationalFunc(truth.numerator() * k, truth.denominator() * k)
                                                 : harness::mutate(truth, harness::Mutation::CoefficientScale, rng);
        text = "<think>work</think>\n<answer>" + lhs + " " + format_canonical(pred) + "</answer>\n";
      }
      if (outcome != 'M') std::ofstream(file, std::ios::binary) << text;
      const bool correct = outcome == 'C';
      want_level[e.level].add(correct);
      want_cat[e.category].add(correct);
      want_all.add(correct);
      if (outcome == 'M') want_missing.push_back(e.id);
    }
    const harness::AccuracyReport r = harness::run_grading(root, resp, {}, 0);
    auto same = [](const harness::Tally& a, const harness::Tally& b) {
      return a.correct == b.correct && a.total == b.total && a.accuracy() == 100.0 * b.correct / b.total;
    };
    bool match = r.by_level.size() == want_level.size() && r.by_category.size() == want_cat.size() &&
                 same(r.overall, want_all) && r.missing == want_missing;
    for (const auto& [l, t] : want_level) match &= r.by_level.count(l) && same(r.by_level.at(l), t);
    for (const auto& [c, t] : want_cat) match &= r.by_category.count(c) && same(r.by_category.at(c), t);
    ok &= match;
    for (const auto& [l, t] : r.by_level) detail += fmt("L%d %d/%d=%.1f%% ", l, t.correct, t.total, t.accuracy());
    detail += fmt("missing %zu; ", r.missing.size());
  }
  return {ok, detail + (ok ? "report matches the constructed proportions exactly" : "report MISMATCH")};
}

}  // namespace

int main() {
  std::printf("cktbench acceptance (hardware threads: %u)\n", std::thread::hardware_concurrency());
  run(1, criterion1);
  run(2, criterion2);
  run(3, criterion3);
  run(4, criterion4);
  run(5, criterion5);
  run(6, criterion6);
  run(7, criterion7);
  std::printf("%s\n", all_passed ? "all criteria PASS" : "some criteria FAIL");
  return all_passed ? 0 : 1;
}
