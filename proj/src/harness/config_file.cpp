#include "cktbench/harness/config_file.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace cktbench::harness {

ToolConfig default_tool_config() {
  ToolConfig cfg;
  for (int level : {0, 1, 2, 4}) cfg.placement[level] = schemgen::default_config(level);
  return cfg;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("line " + std::to_string(line) + ": not a number: " + v);
}

int to_int(const std::string& v, int line) {
  const double d = to_double(v, line);
  if (d != static_cast<int>(d)) throw ConfigError("line " + std::to_string(line) + ": not an integer: " + v);
  return static_cast<int>(d);
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<schemgen::GridSize> parse_grid(const std::string& spec) {
  int r = 0, c = 0;
  char x = 0;
  std::istringstream in(spec);
  if (!(in >> r >> x >> c) || x != 'x' || !in.eof()) return std::nullopt;
  return schemgen::GridSize{r, c};
}

bool set_scalar(schemgen::PlacementConfig& p, const std::string& key, const std::string& value, int line) {
  if (key == "edge_keep") {
    p.edge_keep = to_double(value, line);
  } else if (key == "opamp_probability") {
    p.opamp_probability = to_double(value, line);
  } else if (key == "nodal_probability") {
    p.nodal_probability = to_double(value, line);
  } else if (key == "max_retries") {
    p.max_retries = to_int(value, line);
  } else {
    return false;
  }
  return true;
}

}  // namespace

ToolConfig parse_config(std::string_view text) {
  ToolConfig cfg = default_tool_config();
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  std::set<int> grid_replaced;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string l = trim(raw);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(l.substr(0, eq)), value = trim(l.substr(eq + 1));
    auto unknown = [&] { return ConfigError("line " + std::to_string(line) + ": unknown key " + key); };

    if (key.rfind("grid.", 0) == 0) {
      const auto size = parse_grid(key.substr(5));
      if (!size) throw unknown();
      for (auto& [lv, p] : cfg.placement) {
        if (grid_replaced.insert(lv).second) p.grid_sizes.clear();
        p.grid_sizes.push_back({*size, to_double(value, line)});
      }
    } else if (key.size() > 3 && key[0] == 'L' && std::isdigit(static_cast<unsigned char>(key[1]))) {
      const int level = key[1] - '0';
      auto it = cfg.placement.find(level);
      if (it == cfg.placement.end() || key[2] != '.') throw unknown();
      auto& p = it->second;
      const std::string rest = key.substr(3);
      const bool inner = rest.rfind("inner.", 0) == 0, outer = rest.rfind("outer.", 0) == 0;
      if (inner || outer) {
        const auto kind = rest.size() == 7 ? netlist::kind_from_letter(rest[6]) : std::nullopt;
        if (!kind) throw unknown();
        (inner ? p.inner : p.outer)[*kind] = to_double(value, line);
      } else if (rest.rfind("grid.", 0) == 0) {
        const auto size = parse_grid(rest.substr(5));
        if (!size) throw unknown();
        if (grid_replaced.insert(level).second) p.grid_sizes.clear();
        p.grid_sizes.push_back({*size, to_double(value, line)});
      } else if (!set_scalar(p, rest, value, line)) {
        throw unknown();
      }
    } else if (key == "edge_keep" || key == "opamp_probability" || key == "nodal_probability" ||
               key == "max_retries") {
      for (auto& [lv, p] : cfg.placement) set_scalar(p, key, value, line);
    } else if (key == "block.tau_b") {
      cfg.block.tau_b = to_int(value, line);
    } else if (key == "block.tau_e") {
      cfg.block.tau_e = to_int(value, line);
    } else if (key == "block.tau_fb") {
      cfg.block.tau_fb = to_int(value, line);
    } else if (key == "block.tau_ff") {
      cfg.block.tau_ff = to_int(value, line);
    } else if (key == "block.ratio_block") {
      cfg.block.ratio_block = to_double(value, line);
    } else if (key == "block.ratio_junction") {
      cfg.block.ratio_junction = to_double(value, line);
    } else if (key == "block.p_block") {
      cfg.block.p_block = to_double(value, line);
    } else if (key == "mc.omit_truth") {
      cfg.mc_omit_truth = to_double(value, line);
    } else if (key == "sampling.points") {
      cfg.sampling.points = to_int(value, line);
    } else if (key == "sampling.tolerance") {
      cfg.sampling.tolerance = to_double(value, line);
    } else if (key == "sampling.pole_guard") {
      cfg.sampling.pole_guard = to_double(value, line);
    } else if (key == "sampling.seed") {
      cfg.sampling.seed = static_cast<std::uint64_t>(to_double(value, line));
    } else {
      throw unknown();
    }
  }

  try {
    for (const auto& [lv, p] : cfg.placement) schemgen::check_config(p);
    blockdiag::check_params(cfg.block);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.mc_omit_truth >= 0 && cfg.mc_omit_truth <= 1)) throw ConfigError("mc.omit_truth must lie in [0, 1]");
  if (cfg.sampling.points < 1 || !(cfg.sampling.tolerance > 0)) {
    throw ConfigError("sampling.points must be positive and sampling.tolerance > 0");
  }
  return cfg;
}

ToolConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::map<std::string, std::string> snapshot(const ToolConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& [level, p] : cfg.placement) {
    const std::string prefix = "L" + std::to_string(level) + ".";
    for (const auto& [size, w] : p.grid_sizes) {
      out[prefix + "grid." + std::to_string(size.rows) + "x" + std::to_string(size.cols)] = fmt(w);
    }
    for (const auto& [k, w] : p.inner) out[prefix + "inner." + netlist::kind_letter(k)] = fmt(w);
    for (const auto& [k, w] : p.outer) out[prefix + "outer." + netlist::kind_letter(k)] = fmt(w);
    out[prefix + "edge_keep"] = fmt(p.edge_keep);
    out[prefix + "opamp_probability"] = fmt(p.opamp_probability);
    out[prefix + "nodal_probability"] = fmt(p.nodal_probability);
    out[prefix + "max_retries"] = std::to_string(p.max_retries);
  }
  out["block.tau_b"] = std::to_string(cfg.block.tau_b);
  out["block.tau_e"] = std::to_string(cfg.block.tau_e);
  out["block.tau_fb"] = std::to_string(cfg.block.tau_fb);
  out["block.tau_ff"] = std::to_string(cfg.block.tau_ff);
  out["block.ratio_block"] = fmt(cfg.block.ratio_block);
  out["block.ratio_junction"] = fmt(cfg.block.ratio_junction);
  out["block.p_block"] = fmt(cfg.block.p_block);
  out["mc.omit_truth"] = fmt(cfg.mc_omit_truth);
  out["sampling.points"] = std::to_string(cfg.sampling.points);
  out["sampling.tolerance"] = fmt(cfg.sampling.tolerance);
  out["sampling.pole_guard"] = fmt(cfg.sampling.pole_guard);
  out["sampling.seed"] = std::to_string(cfg.sampling.seed);
  return out;
}

}  // namespace cktbench::harness
