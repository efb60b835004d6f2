#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cktbench/blockdiag/mason.hpp"
#include "cktbench/harness/config_file.hpp"
#include "cktbench/harness/question.hpp"

namespace cktbench::harness {

inline constexpr std::string_view kToolVersion = "cktbench 0.1.0";

struct DatasetConfig {
  /// Any of 0, 1, 2, 4 (schematics) and 5 (block diagrams).
  std::vector<int> levels;
  int count = 1;  // per level
  std::uint64_t seed = 0;
  bool mc = false;
  blockdiag::LabelMode labels = blockdiag::LabelMode::Exact;
  ToolConfig tool = default_tool_config();
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 1;
  /// Attempts per question before generation fails.
  int max_attempts = 25;
};

struct ManifestEntry {
  int id = 0;
  int level = 0;
  std::string category;
  bool mc = false;
  /// Discarded attempts before this question was accepted.
  int discarded = 0;
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  std::map<int, int> counts;  // level -> questions
  std::map<std::string, std::string> config;
  std::string tool_version{kToolVersion};
  bool mc = false;
  std::string labels = "exact";
  std::vector<ManifestEntry> entries;
  /// Discarded attempts by reason.
  std::map<std::string, int> discards;

  int total_discarded() const;
  /// discarded / (discarded + emitted).
  double discard_rate() const;

  /// Line-delimited JSON: one {"type":"dataset",...} header line, then one
  /// {"type":"question",...} line per entry.
  std::string to_jsonl() const;
  static DatasetManifest from_jsonl(std::string_view text);
};

/// The configuration a manifest was produced with.
DatasetConfig config_from_manifest(const DatasetManifest& manifest);

/// Why an attempt produced no question.
class Discard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One attempt at a schematic (levels 0-4) or block-diagram (level 5)
/// question. Throws Discard when the sample fails a rejection rule: the
/// elimination budget, an unsimplified truth, a singular system, or
/// distractor exhaustion.
QuestionRecord make_record(int id, int level, Rng& rng, const DatasetConfig& cfg);

/// All records in id order: levels in the given order, `count` each.
/// Question (level, index) draws from its own seed stream, and attempt a
/// from derive_seed(stream, a), so results do not depend on threading.
std::vector<QuestionRecord> generate_records(const DatasetConfig& cfg, DatasetManifest* manifest = nullptr);

/// Generates and exports every record plus manifest.jsonl into `out_dir`.
/// Refuses a non-empty directory unless `force`.
DatasetManifest generate_dataset(const DatasetConfig& cfg, const std::filesystem::path& out_dir, bool force = false);

}  // namespace cktbench::harness
