#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cktbench/equiv/equiv.hpp"

namespace cktbench::harness {

struct GradeEntry {
  int id = 0;
  int level = 0;
  std::string category;
  bool mc = false;
  bool missing = false;  // no response file, or an empty one
  bool correct = false;
  /// "Equivalent (SymbolicZero)", "MC match", "Missing", ...
  std::string verdict;
  std::string details;
  std::string extracted;
};

struct Tally {
  int correct = 0;
  int total = 0;
  /// Percentage in [0, 100]; 0 for an empty tally.
  double accuracy() const { return total == 0 ? 0.0 : 100.0 * correct / total; }
  void add(bool ok) {
    ++total;
    correct += ok;
  }
};

struct AccuracyReport {
  std::vector<GradeEntry> entries;  // id order
  std::map<int, Tally> by_level;
  std::map<std::string, Tally> by_category;
  Tally overall;
  std::vector<int> missing;

  /// Rebuilds the tallies from `entries`.
  void aggregate();

  /// One {"type":"question",...} line per entry, then {"type":"level"},
  /// {"type":"category"} lines and one {"type":"overall"} line.
  std::string to_jsonl() const;
  /// Fixed-width table: one row per level and per category, then Overall.
  std::string table() const;
};

/// Grades `responses_dir/q{n}.txt` against every question listed in
/// `dataset_dir/manifest.jsonl`. Open-ended questions go through
/// extract_answer and check_equivalence; MC questions through grade_mc
/// against q{n}_a.txt. Missing responses count as incorrect and are listed.
AccuracyReport run_grading(const std::filesystem::path& dataset_dir, const std::filesystem::path& responses_dir,
                           const equiv::SamplingConfig& sampling = {}, int threads = 1);

}  // namespace cktbench::harness
