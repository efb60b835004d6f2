// Command-line front end: generate, grade, check, render, validate.
//
// Exit status: 0 success, 1 a negative result (check not Equivalent,
// validate found violations), 2 usage error, 3 any other failure.
// Failures print one line to stderr: "error: <kind>: <message>".

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cktbench/harness/dataset.hpp"
#include "cktbench/harness/grading.hpp"
#include "cktbench/harness/svg.hpp"
#include "cktbench/netlist/validate.hpp"

namespace fs = std::filesystem;
using namespace cktbench;

namespace {

constexpr int kUsage = 2, kFailure = 3;

struct Failure {
  std::string kind;
  std::string message;
  int code = kFailure;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"io", "cannot read " + path};
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Failure{"io", "cannot write " + path};
}

std::vector<int> parse_levels(const std::vector<std::string>& specs) {
  std::vector<int> levels;
  for (const auto& spec : specs) {
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item == "0" || item == "1" || item == "2" || item == "4" || item == "5") {
        levels.push_back(item[0] - '0');
      } else {
        throw Failure{"usage", "level must be one of 0, 1, 2, 4, 5 (got '" + item + "')", kUsage};
      }
    }
  }
  return levels;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic circuit question generator and grader"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Generate a dataset");
  std::vector<std::string> level_specs;
  int count = 1, threads = 1;
  std::uint64_t seed = 0;
  std::string config_path, out_dir, labels = "exact";
  bool mc = false, force = false;
  gen->add_option("--level", level_specs, "Levels 0, 1, 2, 4, 5; repeat or comma-separate")->required();
  gen->add_option("--count", count, "Questions per level")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "Master seed");
  gen->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  gen->add_option("--out", out_dir, "Output directory (default $CKTBENCH_OUT or ./cktbench_out)");
  gen->add_flag("--mc", mc, "Emit multiple-choice options");
  gen->add_option("--labels", labels, "Block labels")->check(CLI::IsMember({"exact", "highlevel"}));
  gen->add_option("--threads", threads, "Worker threads, 0 for all cores");
  gen->add_flag("--force", force, "Overwrite an existing dataset");

  auto* grade = app.add_subcommand("grade", "Grade a response directory");
  std::string dataset, responses, report_path;
  grade->add_option("--dataset", dataset)->required()->check(CLI::ExistingDirectory);
  grade->add_option("--responses", responses)->required()->check(CLI::ExistingDirectory);
  grade->add_option("--report", report_path, "JSONL report file")->required();
  grade->add_option("--threads", threads, "Worker threads, 0 for all cores");

  auto* check = app.add_subcommand("check", "Compare two expressions");
  std::string pred_path, truth_path;
  check->add_option("--pred", pred_path)->required()->check(CLI::ExistingFile);
  check->add_option("--truth", truth_path)->required()->check(CLI::ExistingFile);

  auto* render = app.add_subcommand("render", "Draw a netlist or diagram artifact as SVG");
  std::string artifact, svg_out;
  render->add_option("--artifact", artifact)->required()->check(CLI::ExistingFile);
  render->add_option("--out", svg_out)->required();

  auto* validate = app.add_subcommand("validate", "Check a netlist");
  std::string netlist_path;
  validate->add_option("--netlist", netlist_path)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*gen) {
      harness::DatasetConfig cfg;
      cfg.levels = parse_levels(level_specs);
      cfg.count = count;
      cfg.seed = seed;
      cfg.mc = mc;
      cfg.threads = threads;
      cfg.labels = labels == "highlevel" ? blockdiag::LabelMode::HighLevel : blockdiag::LabelMode::Exact;
      if (!config_path.empty()) cfg.tool = harness::load_config(config_path);
      if (out_dir.empty()) {
        const char* env = std::getenv("CKTBENCH_OUT");
        out_dir = env && *env ? env : "cktbench_out";
      }
      const auto manifest = harness::generate_dataset(cfg, out_dir, force);
      std::cout << "generated " << manifest.entries.size() << " questions in " << out_dir << "; discarded "
                << manifest.total_discarded() << " attempts (rate " << manifest.discard_rate() << ")\n";
    } else if (*grade) {
      const auto report = harness::run_grading(dataset, responses, {}, threads);
      write_text(report_path, report.to_jsonl());
      std::cout << report.table();
    } else if (*check) {
      const auto verdict = equiv::check_equivalence(equiv::extract_answer(read_text(pred_path)),
                                                    equiv::extract_answer(read_text(truth_path)));
      std::cout << equiv::to_string(verdict) << "\n" << verdict.details << "\n";
      return verdict.outcome == equiv::Outcome::Equivalent ? 0 : 1;
    } else if (*render) {
      write_text(svg_out, harness::render_artifact(read_text(artifact)));
    } else if (*validate) {
      const auto violations = netlist::validate(netlist::parse_netlist(read_text(netlist_path)));
      for (const auto& v : violations) std::cout << netlist::describe(v) << "\n";
      if (violations.empty()) std::cout << "valid\n";
      return violations.empty() ? 0 : 1;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.kind << ": " << f.message << "\n";
    return f.code;
  } catch (const harness::ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kFailure;
  } catch (const netlist::NetlistError& e) {
    std::cerr << "error: netlist: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << "\n";
    return kFailure;
  }
  return 0;
}
