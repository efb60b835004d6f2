#include "cktbench/harness/grading.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "cktbench/harness/dataset.hpp"
#include "json.hpp"

namespace cktbench::harness {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

// "A) text" lines of a q{n}_mc.txt.
std::vector<std::string> mc_options(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) {
    l = trimmed(l);
    if (l.size() >= 2 && l[1] == ')') out.push_back(trimmed(l.substr(2)));
  }
  return out;
}

GradeEntry grade_one(const ManifestEntry& m, const fs::path& dataset, const fs::path& responses,
                     const equiv::SamplingConfig& sampling) {
  GradeEntry g;
  g.id = m.id;
  g.level = m.level;
  g.category = m.category;
  g.mc = m.mc;
  const std::string q = "q" + std::to_string(m.id);
  const auto response = read_file(responses / (q + ".txt"));
  if (!response || blank(*response)) {
    g.missing = true;
    g.verdict = "Missing";
    g.details = response ? "empty response" : "no response file";
    return g;
  }
  g.extracted = equiv::extract_answer(*response);
  const fs::path folder = dataset / q;
  if (m.mc) {
    const auto key = read_file(folder / (q + "_a.txt"));
    const auto options = read_file(folder / (q + "_mc.txt"));
    if (!key || !options) throw std::runtime_error(q + ": missing MC key or options");
    g.correct = equiv::grade_mc(g.extracted, trimmed(*key), mc_options(*options));
    g.verdict = g.correct ? "MC match" : "MC mismatch";
    g.details = "key " + trimmed(*key);
    return g;
  }
  const auto truth = read_file(folder / (q + "_ta.txt"));
  if (!truth) throw std::runtime_error(q + ": missing ground truth");
  const equiv::Verdict v = equiv::check_equivalence(g.extracted, trimmed(*truth), sampling);
  g.correct = v.outcome == equiv::Outcome::Equivalent;
  g.verdict = equiv::to_string(v);
  g.details = v.details;
  return g;
}

std::string pct(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

void AccuracyReport::aggregate() {
  by_level.clear();
  by_category.clear();
  overall = {};
  missing.clear();
  for (const auto& e : entries) {
    by_level[e.level].add(e.correct);
    by_category[e.category].add(e.correct);
    overall.add(e.correct);
    if (e.missing) missing.push_back(e.id);
  }
}

std::string AccuracyReport::to_jsonl() const {
  std::string out;
  for (const auto& e : entries) {
    json j;
    j["type"] = "question";
    j["id"] = e.id;
    j["level"] = e.level;
    j["category"] = e.category;
    j["mc"] = e.mc;
    j["missing"] = e.missing;
    j["correct"] = e.correct;
    j["verdict"] = e.verdict;
    j["details"] = e.details;
    j["extracted"] = e.extracted;
    out += j.dump() + "\n";
  }
  auto tally = [](json j, const Tally& t) {
    j["correct"] = t.correct;
    j["total"] = t.total;
    j["accuracy"] = t.accuracy();
    return j.dump() + "\n";
  };
  for (const auto& [level, t] : by_level) out += tally({{"type", "level"}, {"level", level}}, t);
  for (const auto& [cat, t] : by_category) out += tally({{"type", "category"}, {"category", cat}}, t);
  json o{{"type", "overall"}, {"missing", missing}};
  out += tally(o, overall);
  return out;
}

std::string AccuracyReport::table() const {
  std::ostringstream out;
  out << pad("Group", 30) << pad("Correct", 10) << pad("Total", 8) << "Accuracy (%)\n";
  auto row = [&](const std::string& name, const Tally& t) {
    out << pad(name, 30) << pad(std::to_string(t.correct), 10) << pad(std::to_string(t.total), 8) << pct(t.accuracy())
        << "\n";
  };
  for (const auto& [level, t] : by_level) row("Level " + std::to_string(level), t);
  for (const auto& [cat, t] : by_category) row(cat, t);
  row("Overall", overall);
  if (!missing.empty()) {
    out << "Missing responses:";
    for (int id : missing) out << " q" << id;
    out << "\n";
  }
  return out.str();
}

AccuracyReport run_grading(const fs::path& dataset_dir, const fs::path& responses_dir,
                           const equiv::SamplingConfig& sampling, int threads) {
  const auto manifest_text = read_file(dataset_dir / "manifest.jsonl");
  if (!manifest_text) throw std::runtime_error("no manifest.jsonl in " + dataset_dir.string());
  if (!fs::is_directory(responses_dir)) throw std::runtime_error("no responses directory " + responses_dir.string());
  const DatasetManifest manifest = DatasetManifest::from_jsonl(*manifest_text);

  AccuracyReport report;
  report.entries.resize(manifest.entries.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t k = next++; k < manifest.entries.size() && !failed; k = next++) {
      try {
        report.entries[k] = grade_one(manifest.entries[k], dataset_dir, responses_dir, sampling);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, std::min<int>(n, static_cast<int>(manifest.entries.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  report.aggregate();
  return report;
}

}  // namespace cktbench::harness
