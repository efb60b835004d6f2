#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cktbench/blockdiag/diagram.hpp"
#include "cktbench/equiv/equiv.hpp"
#include "cktbench/schemgen/config.hpp"

namespace cktbench::harness {

/// Everything the generator and grader read from a config file.
struct ToolConfig {
  std::map<int, schemgen::PlacementConfig> placement;  // keyed by level 0, 1, 2, 4
  blockdiag::GenParams block;
  /// Chance that an MC question leaves the truth out (key "None of the above").
  double mc_omit_truth = 0.25;
  equiv::SamplingConfig sampling;
};

ToolConfig default_tool_config();

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies `key = value` lines on top of the defaults. `#` starts a
/// comment. Keys:
///
///   grid.<R>x<C>                 grid size weight; any grid key replaces the
///                                default distribution for every level
///   L<level>.inner.<K>           inner edge weight of kind letter K
///   L<level>.outer.<K>           outer edge weight of kind letter K
///   edge_keep, opamp_probability, nodal_probability, max_retries
///   L<level>.grid.<R>x<C>, L<level>.edge_keep, ...   the same, one level
///   block.tau_b, block.tau_e, block.tau_fb, block.tau_ff,
///   block.ratio_block, block.ratio_junction, block.p_block
///   mc.omit_truth
///   sampling.points, sampling.tolerance, sampling.pole_guard, sampling.seed
///
/// Throws ConfigError naming the line.
ToolConfig parse_config(std::string_view text);
ToolConfig load_config(const std::filesystem::path& path);

/// Every effective setting as key -> value text, for the manifest.
std::map<std::string, std::string> snapshot(const ToolConfig& cfg);

}  // namespace cktbench::harness
