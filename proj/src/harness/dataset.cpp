#include "cktbench/harness/dataset.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cktbench/blockdiag/mason.hpp"
#include "cktbench/harness/svg.hpp"
#include "cktbench/mna/mna.hpp"
#include "cktbench/schemgen/generator.hpp"
#include "json.hpp"

namespace cktbench::harness {

namespace fs = std::filesystem;
using json = nlohmann::json;
using symexpr::format_canonical;
using symexpr::Polynomial;

namespace {

constexpr std::uint64_t kDistractorWorkLimit = 2'000'000;

equiv::SamplingConfig distractor_sampling(const DatasetConfig& cfg) {
  equiv::SamplingConfig s = cfg.tool.sampling;
  s.work_limit = kDistractorWorkLimit;
  return s;
}

std::string perception_metadata(const netlist::Netlist& net) {
  std::ostringstream out;
  std::map<char, int> by_kind;
  for (const auto& c : net.components()) ++by_kind[netlist::kind_letter(c.kind)];
  out << "Perception metadata:\n";
  out << "Components: " << net.components().size();
  for (const auto& [letter, n] : by_kind) out << " " << letter << "=" << n;
  out << "\nNodes:";
  for (auto n : net.nodes()) out << " " << n;
  out << "\nConnections:\n";
  for (const auto& c : net.components()) {
    out << c.name << ":";
    for (auto n : c.nodes) out << " " << n;
    if (!c.control.empty()) out << " senses " << c.control;
    out << "\n";
  }
  return out.str();
}

QuestionRecord make_schematic(int id, int level, Rng& rng, const DatasetConfig& cfg) {
  schemgen::GeneratedSchematic gen;
  try {
    gen = schemgen::generate_schematic(rng, level, cfg.tool.placement.at(level));
  } catch (const schemgen::ExhaustedRetries& e) {
    throw Discard(std::string("generator: ") + e.what());
  }
  const auto& net = gen.netlist;
  const bool nodal = gen.kind == schemgen::QuestionKind::Nodal;

  mna::StampOptions stamp_opts;
  if (!nodal) stamp_opts = {mna::SourceMode::UnitInput, gen.input_source};
  const mna::MnaSystem sys = mna::stamp(net, stamp_opts);
  const std::uint64_t budget = mna::work_budget(net);

  std::optional<mna::Elimination> elim;
  try {
    elim.emplace(sys, mna::SolveOptions{budget, symexpr::kDefaultSimplifyBudget});
  } catch (const mna::MnaError& e) {
    if (e.kind() == mna::MnaError::Kind::WorkBudgetExceeded) throw Discard("work budget");
    throw Discard(std::string("solver: ") + e.what());
  }

  auto scaled = [&](netlist::NodeId n) {
    return n == netlist::kGround ? Polynomial() : elim->scaled(sys.index_of_node(n));
  };
  symexpr::RationalFunc raw;
  std::string lhs;
  const netlist::Component* target = nullptr;
  if (nodal) {
    raw = symexpr::RationalFunc(scaled(gen.target_node), elim->determinant());
    lhs = "Vn" + std::to_string(gen.target_node) + "(s)";
  } else {
    target = net.find(gen.target_component);
    raw = symexpr::RationalFunc(scaled(target->nodes[0]) - scaled(target->nodes[1]), elim->determinant());
    lhs = "H(s)";
  }
  const auto simp = symexpr::simplify(raw);
  if (!simp.simplified) throw Discard("unsimplified");
  if (simp.value.is_zero()) throw Discard("zero response");

  QuestionRecord r;
  r.id = id;
  r.level = level;
  r.category = std::string(nodal ? kTransientResponse : kTransferFunctionAnalysis);
  r.question = nodal ? nodal_question(gen.target_node) : transfer_question(gen.input_source, gen.target_component);
  r.ground_truth = lhs + " = " + format_canonical(simp.value);
  r.artifact_kind = ArtifactKind::Netlist;
  r.artifact = netlist_artifact(net, gen.layout);
  r.image_svg = render_schematic_svg(net, gen.layout);
  if (cfg.mc) {
    try {
      r.mc = build_mc(simp.value, rng, cfg.tool.mc_omit_truth, distractor_sampling(cfg));
    } catch (const MutationExhausted&) {
      throw Discard("distractors");
    }
  }

  std::ostringstream der;
  der << "Question type: " << (nodal ? "nodal voltage" : "transfer function") << "\n";
  der << "Netlist:\n" << netlist::serialize(net);
  if (nodal) {
    der << "Sources enter in the Laplace domain; a step of amplitude A contributes A/s.\n";
  } else {
    der << "Input " << gen.input_source << " is a unit source; other independent sources are zeroed.\n";
    der << "Output: V(" << target->nodes[0] << ") - V(" << target->nodes[1] << "), the voltage across "
        << gen.target_component << ".\n";
  }
  der << "Unknowns:";
  for (const auto& u : sys.unknowns) der << " " << u.label();
  der << "\nMNA equations (A x = b):\n" << sys.to_string();
  der << "Complexity score: " << mna::complexity_score(net) << "; elimination budget " << budget
      << " operations, used " << elim->work_used() << ".\n";
  der << "Determinant: " << elim->determinant().to_string() << "\n";
  der << "Cramer numerator: " << raw.numerator().to_string() << "\n";
  der << "After cancelling common factors:\n" << r.ground_truth << "\n";
  der << "\n" << perception_metadata(net);
  r.derivation = der.str();
  return r;
}

std::string path_text(const blockdiag::GraphPath& p) {
  std::string s;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) s += (i ? " -> " : "") + std::to_string(p.nodes[i]);
  return s;
}

QuestionRecord make_diagram(int id, Rng& rng, const DatasetConfig& cfg) {
  blockdiag::SignalFlowGraph g;
  try {
    g = blockdiag::generate_diagram(rng, cfg.tool.block);
  } catch (const blockdiag::BlockDiagramError& e) {
    throw Discard(std::string("generator: ") + e.what());
  }
  const auto labeled = blockdiag::render_labels(g, cfg.labels);
  blockdiag::MasonTrace trace;
  try {
    trace = blockdiag::mason_trace(labeled.graph);
  } catch (const blockdiag::BlockDiagramError& e) {
    throw Discard(std::string("mason: ") + e.what());
  }

  QuestionRecord r;
  r.id = id;
  r.level = 5;
  r.category = std::string(kTransferFunctionAnalysis);
  r.question = block_question();
  r.ground_truth = "H(s) = " + format_canonical(trace.h);
  r.artifact_kind = ArtifactKind::Diagram;
  r.artifact = blockdiag::serialize(labeled.graph);
  r.image_svg = render_diagram_svg(labeled.graph, labeled.labels);
  if (cfg.mc) {
    try {
      r.mc = build_mc(trace.h, rng, cfg.tool.mc_omit_truth, distractor_sampling(cfg));
    } catch (const MutationExhausted&) {
      throw Discard("distractors");
    }
  }

  std::ostringstream der;
  der << "Mason's gain formula: H(s) = sum_k P_k * Delta_k / Delta.\n";
  der << "Blocks:\n";
  for (std::size_t b = 0; b < g.blocks.size(); ++b) {
    der << g.blocks[b].label << " = " << format_canonical(g.blocks[b].tf) << "\n";
  }
  der << "Forward paths:\n";
  for (std::size_t k = 0; k < trace.paths.size(); ++k) {
    der << "P" << k + 1 << " = " << format_canonical(trace.paths[k].gain) << "   (nodes " << path_text(trace.paths[k])
        << ")\n";
  }
  der << "Loops:\n";
  if (trace.loops.empty()) der << "(none)\n";
  for (std::size_t i = 0; i < trace.loops.size(); ++i) {
    der << "L" << i + 1 << " = " << format_canonical(trace.loops[i].gain) << "   (nodes " << path_text(trace.loops[i])
        << ")\n";
  }
  der << "Delta = " << format_canonical(trace.delta) << "\n";
  for (std::size_t k = 0; k < trace.cofactors.size(); ++k) {
    der << "Delta_" << k + 1 << " = " << format_canonical(trace.cofactors[k]) << "\n";
  }
  der << r.ground_truth << "\n";
  std::size_t junctions = 0;
  for (const auto& n : g.nodes) junctions += n.kind == blockdiag::NodeKind::Junction;
  der << "\nPerception metadata:\n";
  der << "Blocks: " << g.blocks.size() << "; junctions: " << junctions << "; feedback paths: " << g.feedback_count()
      << "; feedforward paths: " << g.feedforward_count() << "; main path length: " << g.main_length << "\n";
  r.derivation = der.str();
  return r;
}

std::string labels_name(blockdiag::LabelMode m) { return m == blockdiag::LabelMode::Exact ? "exact" : "highlevel"; }

}  // namespace

QuestionRecord make_record(int id, int level, Rng& rng, const DatasetConfig& cfg) {
  if (level == 5) return make_diagram(id, rng, cfg);
  if (!cfg.tool.placement.count(level)) throw std::invalid_argument("unsupported level " + std::to_string(level));
  return make_schematic(id, level, rng, cfg);
}

std::vector<QuestionRecord> generate_records(const DatasetConfig& cfg, DatasetManifest* manifest) {
  for (int level : cfg.levels) {
    if (level != 5 && !cfg.tool.placement.count(level)) {
      throw std::invalid_argument("unsupported level " + std::to_string(level));
    }
  }
  if (cfg.count < 0) throw std::invalid_argument("count must be non-negative");
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.levels[i] == cfg.levels[j]) throw std::invalid_argument("level listed twice");
    }
  }

  struct Slot {
    int level;
    int index;
  };
  std::vector<Slot> slots;
  for (int level : cfg.levels) {
    for (int i = 0; i < cfg.count; ++i) slots.push_back({level, i});
  }

  std::vector<std::optional<QuestionRecord>> records(slots.size());
  std::vector<std::vector<std::string>> reasons(slots.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&] {
    for (std::size_t k = next++; k < slots.size(); k = next++) {
      const std::uint64_t stream = derive_seed(derive_seed(cfg.seed, slots[k].level), slots[k].index);
      for (int a = 0; a < cfg.max_attempts && !records[k]; ++a) {
        Rng rng(derive_seed(stream, a));
        try {
          records[k] = make_record(static_cast<int>(k) + 1, slots[k].level, rng, cfg);
        } catch (const Discard& d) {
          reasons[k].push_back(d.what());
        } catch (const std::exception& e) {
          std::lock_guard lock(error_mutex);
          if (first_error.empty()) first_error = e.what();
          break;
        }
      }
    }
  };
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(slots.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) throw std::runtime_error(first_error);

  std::vector<QuestionRecord> out;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (!records[k]) {
      throw std::runtime_error("question " + std::to_string(k + 1) + " (level " + std::to_string(slots[k].level) +
                               ") discarded " + std::to_string(cfg.max_attempts) + " times; last reason: " +
                               (reasons[k].empty() ? "none" : reasons[k].back()));
    }
    out.push_back(std::move(*records[k]));
  }

  if (manifest) {
    *manifest = DatasetManifest{};
    manifest->seed = cfg.seed;
    manifest->config = snapshot(cfg.tool);
    manifest->mc = cfg.mc;
    manifest->labels = labels_name(cfg.labels);
    for (int level : cfg.levels) manifest->counts[level] += cfg.count;
    for (std::size_t k = 0; k < out.size(); ++k) {
      manifest->entries.push_back(
          {out[k].id, out[k].level, out[k].category, out[k].mc.has_value(), static_cast<int>(reasons[k].size())});
      for (const auto& why : reasons[k]) {
        // Group by the reason's leading word so the tally stays small.
        ++manifest->discards[why.substr(0, why.find(':'))];
      }
    }
  }
  return out;
}

DatasetManifest generate_dataset(const DatasetConfig& cfg, const fs::path& out_dir, bool force) {
  std::error_code ec;
  if (fs::exists(out_dir, ec) && !fs::is_empty(out_dir, ec) && !force) {
    throw ExportError(out_dir.string() + " is not empty; pass force to overwrite");
  }
  DatasetManifest manifest;
  const auto records = generate_records(cfg, &manifest);
  if (force && fs::exists(out_dir, ec)) {
    // Drop earlier question folders so the tree matches this run exactly.
    for (const auto& entry : fs::directory_iterator(out_dir)) {
      const std::string name = entry.path().filename().string();
      const bool question = name.size() > 1 && name[0] == 'q' &&
                            name.find_first_not_of("0123456789", 1) == std::string::npos;
      if (question || name == "manifest.jsonl") fs::remove_all(entry.path(), ec);
    }
  }
  fs::create_directories(out_dir, ec);
  if (ec) throw ExportError("cannot create " + out_dir.string() + ": " + ec.message());
  for (const auto& r : records) export_question(r, out_dir, force);
  std::ofstream out(out_dir / "manifest.jsonl", std::ios::binary | std::ios::trunc);
  out << manifest.to_jsonl();
  if (!out) throw ExportError("cannot write manifest");
  return manifest;
}

int DatasetManifest::total_discarded() const {
  int n = 0;
  for (const auto& [why, k] : discards) n += k;
  return n;
}

double DatasetManifest::discard_rate() const {
  const int d = total_discarded();
  const auto total = d + static_cast<int>(entries.size());
  return total == 0 ? 0.0 : static_cast<double>(d) / total;
}

std::string DatasetManifest::to_jsonl() const {
  json head;
  head["type"] = "dataset";
  head["seed"] = seed;
  json counts_json = json::object();
  for (const auto& [level, n] : counts) counts_json[std::to_string(level)] = n;
  head["counts"] = counts_json;
  head["config"] = config;
  head["tool_version"] = tool_version;
  head["mc"] = mc;
  head["labels"] = labels;
  head["image_format"] = "svg";
  head["discards"] = discards;
  std::string out = head.dump() + "\n";
  for (const auto& e : entries) {
    json q;
    q["type"] = "question";
    q["id"] = e.id;
    q["level"] = e.level;
    q["category"] = e.category;
    q["mc"] = e.mc;
    q["discarded"] = e.discarded;
    out += q.dump() + "\n";
  }
  return out;
}

DatasetManifest DatasetManifest::from_jsonl(std::string_view text) {
  DatasetManifest m;
  std::istringstream in{std::string(text)};
  std::string l;
  bool seen_head = false;
  while (std::getline(in, l)) {
    if (l.empty()) continue;
    const json j = json::parse(l);
    if (j.at("type") == "dataset") {
      seen_head = true;
      m.seed = j.at("seed").get<std::uint64_t>();
      for (const auto& [k, v] : j.at("counts").items()) m.counts[std::stoi(k)] = v.get<int>();
      m.config = j.at("config").get<std::map<std::string, std::string>>();
      m.tool_version = j.at("tool_version").get<std::string>();
      m.mc = j.at("mc").get<bool>();
      m.labels = j.at("labels").get<std::string>();
      m.discards = j.at("discards").get<std::map<std::string, int>>();
    } else if (j.at("type") == "question") {
      m.entries.push_back({j.at("id").get<int>(), j.at("level").get<int>(), j.at("category").get<std::string>(),
                           j.at("mc").get<bool>(), j.at("discarded").get<int>()});
    }
  }
  if (!seen_head) throw std::runtime_error("manifest has no dataset line");
  return m;
}

DatasetConfig config_from_manifest(const DatasetManifest& m) {
  DatasetConfig cfg;
  cfg.seed = m.seed;
  cfg.mc = m.mc;
  cfg.labels = m.labels == "highlevel" ? blockdiag::LabelMode::HighLevel : blockdiag::LabelMode::Exact;
  std::string text;
  for (const auto& [k, v] : m.config) text += k + " = " + v + "\n";
  cfg.tool = parse_config(text);
  // Levels in id order; every level has the same count.
  for (const auto& e : m.entries) {
    if (cfg.levels.empty() || cfg.levels.back() != e.level) cfg.levels.push_back(e.level);
  }
  int count = 0;
  for (const auto& [level, n] : m.counts) {
    if (count > 0 && n != count) throw std::runtime_error("manifest counts differ between levels");
    count = n;
  }
  cfg.count = count;
  return cfg;
}

}  // namespace cktbench::harness
