#include "cktbench/harness/question.hpp"

#include <fstream>

#include "cktbench/symexpr/expr.hpp"

namespace cktbench::harness {

namespace fs = std::filesystem;

std::string QuestionRecord::artifact_name() const {
  return folder_name() + (artifact_kind == ArtifactKind::Netlist ? "_netlist.cir" : "_diagram.txt");
}

std::string nodal_question(int node) {
  const std::string k = std::to_string(node);
  return "Derive the nodal equation for node " + k +
         " in the s-domain. Express the equation using only the circuit elements and their values as labeled in "
         "the diagram. Make sure the final answer is just the symbolic equation Vn" +
         k + "(s) = ..., where the right side contains only the labeled components and sources from the circuit "
             "diagram.";
}

std::string transfer_question(const std::string& source, const std::string& target) {
  return "What is the transfer function from " + source + " to " + target + " in this circuit?";
}

std::string block_question() { return "What is the Transfer function of the provided block diagram?"; }

std::string build_prompt(const std::string& question) {
  return "You are an expert electrical engineer specializing in circuit analysis. Analyze the circuit diagram and "
         "solve for the requested symbolic expression.\n"
         "\n"
         "Task: " +
         question +
         "\n"
         "\n"
         "Instructions:\n"
         "1. Use EXACT component labels as shown in the circuit (e.g., R1, R2, C1, C2, L1, not generic R, C, L)\n"
         "2. For Laplace domain, use lowercase 's' as the complex frequency variable\n"
         "3. Use standard impedances: R for resistors, 1/(sC) for capacitors, sL for inductors\n"
         "4. For op-amps: Apply virtual short (V+ = V-) if in negative feedback, use Ad for gain if specified\n"
         "\n"
         "Response Format:\n"
         "You MUST structure your response exactly as follows:\n"
         "\n"
         "<think>\n"
         "[Show your reasoning and intermediate steps here]\n"
         "- Identify components and nodes\n"
         "- Intermediate steps\n"
         "- Show equations\n"
         "- Show algebraic manipulation\n"
         "- Any simplification steps\n"
         "</think>\n"
         "<answer>\n"
         "[Only the final symbolic equation here, e.g., H(s) = ..., Vn1(s) = ..., etc.]\n"
         "</answer>\n"
         "\n"
         "Make sure to use standard mathematical notation with * for multiplication, / for division, and ^ for "
         "powers.\n";
}

std::vector<std::string> check_record(const QuestionRecord& r) {
  std::vector<std::string> problems;
  const bool schematic = r.level == 0 || r.level == 1 || r.level == 2 || r.level == 4;
  if (!schematic && r.level != 5) problems.push_back("level " + std::to_string(r.level) + " is not 0, 1, 2, 4 or 5");
  if (schematic && r.artifact_kind != ArtifactKind::Netlist) problems.push_back("schematic level without a netlist");
  if (r.level == 5 && r.artifact_kind != ArtifactKind::Diagram) problems.push_back("level 5 without a diagram");
  try {
    symexpr::parse_rational(r.ground_truth);
  } catch (const std::exception& e) {
    problems.push_back(std::string("ground truth does not parse: ") + e.what());
  }
  if (r.mc) {
    if (r.mc->key < 'A' || r.mc->key > 'D') problems.push_back("MC key outside A-D");
    if (r.mc->options[3] != kNoneOfTheAbove) problems.push_back("option D is not \"None of the above\"");
  }
  if (r.question.empty()) problems.push_back("empty question text");
  return problems;
}

std::vector<std::string> question_files(const QuestionRecord& r) {
  const std::string q = r.folder_name();
  std::vector<std::string> files{q + "_question.txt", r.image_name(), q + "_ta.txt"};
  if (r.mc) {
    files.push_back(q + "_mc.txt");
    files.push_back(q + "_a.txt");
  }
  files.push_back(q + "_der.txt");
  files.push_back(q + "_category.txt");
  files.push_back(r.artifact_name());
  return files;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw ExportError("cannot write " + path.string());
}

std::string line(const std::string& s) { return (!s.empty() && s.back() == '\n') ? s : s + "\n"; }

}  // namespace

fs::path export_question(const QuestionRecord& r, const fs::path& out_dir, bool force) {
  if (auto problems = check_record(r); !problems.empty()) {
    throw ExportError("invalid record " + r.folder_name() + ": " + problems.front());
  }
  const fs::path dir = out_dir / r.folder_name();
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!force) throw ExportError(dir.string() + " exists; pass force to overwrite");
    fs::remove_all(dir, ec);
    if (ec) throw ExportError("cannot remove " + dir.string() + ": " + ec.message());
  }
  fs::create_directories(dir, ec);
  if (ec) throw ExportError("cannot create " + dir.string() + ": " + ec.message());

  const std::string q = r.folder_name();
  write_file(dir / (q + "_question.txt"), line(r.question));
  write_file(dir / r.image_name(), r.image_svg);
  write_file(dir / (q + "_ta.txt"), line(r.ground_truth));
  if (r.mc) {
    std::string mc;
    for (std::size_t i = 0; i < 4; ++i) mc += std::string(1, static_cast<char>('A' + i)) + ") " + r.mc->options[i] + "\n";
    write_file(dir / (q + "_mc.txt"), mc);
    write_file(dir / (q + "_a.txt"), std::string(1, r.mc->key) + "\n");
  }
  write_file(dir / (q + "_der.txt"), line(r.derivation));
  write_file(dir / (q + "_category.txt"), line(r.category));
  write_file(dir / r.artifact_name(), line(r.artifact));
  return dir;
}

}  // namespace cktbench::harness
