#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cktbench/harness/distractors.hpp"

namespace cktbench::harness {

inline constexpr std::string_view kTransientResponse = "Transient Response";
inline constexpr std::string_view kTransferFunctionAnalysis = "Transfer Function Analysis";

enum class ArtifactKind { Netlist, Diagram };

/// One benchmark question.
struct QuestionRecord {
  int id = 0;
  int level = 0;  // 0, 1, 2, 4 for schematics, 5 for block diagrams
  std::string category;
  std::string question;
  /// Full equation, "Vn2(s) = ..." or "H(s) = ...".
  std::string ground_truth;
  std::optional<McOptions> mc;
  std::string derivation;
  ArtifactKind artifact_kind = ArtifactKind::Netlist;
  std::string artifact;
  std::string image_svg;

  std::string folder_name() const { return "q" + std::to_string(id); }
  std::string image_name() const { return folder_name() + "_image.svg"; }
  std::string artifact_name() const;
};

std::string nodal_question(int node);
std::string transfer_question(const std::string& source, const std::string& target);
std::string block_question();

/// The full model prompt for a question text.
std::string build_prompt(const std::string& question);

/// Problems with a record: bad level, level/artifact mismatch, an
/// unparsable ground truth, a malformed MC block. Empty when valid.
std::vector<std::string> check_record(const QuestionRecord& record);

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File names written for a record, in a fixed order.
std::vector<std::string> question_files(const QuestionRecord& record);

/// Writes out_dir/q{n}/ with q{n}_question.txt, q{n}_image.svg,
/// q{n}_ta.txt, q{n}_der.txt, q{n}_category.txt, the artifact
/// (q{n}_netlist.cir or q{n}_diagram.txt) and, for MC records, q{n}_mc.txt
/// and q{n}_a.txt. An existing folder is an error unless `force`, which
/// replaces it. Returns the folder.
std::filesystem::path export_question(const QuestionRecord& record, const std::filesystem::path& out_dir,
                                      bool force = false);

}  // namespace cktbench::harness
