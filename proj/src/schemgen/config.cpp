#include "cktbench/schemgen/config.hpp"

#include <algorithm>

namespace cktbench::schemgen {

bool is_schematic_level(int level) { return level == 0 || level == 1 || level == 2 || level == 4; }

std::vector<ComponentKind> allowed_kinds(int level) {
  using K = ComponentKind;
  if (!is_schematic_level(level)) throw std::invalid_argument("no schematic level " + std::to_string(level));
  std::vector<K> out{K::Resistor, K::VoltageSource};
  if (level >= 1) {
    out.push_back(K::Inductor);
    out.push_back(K::Capacitor);
  }
  if (level >= 2) {
    for (K k : {K::Vcvs, K::Vccs, K::Ccvs, K::Cccs, K::CurrentSource}) out.push_back(k);
  }
  if (level >= 4) out.push_back(K::OpAmpMacro);
  return out;
}

PlacementConfig default_config(int level) {
  using K = ComponentKind;
  (void)allowed_kinds(level);
  PlacementConfig cfg;
  cfg.level = level;
  cfg.grid_sizes = {{{2, 2}, 1.0}, {{2, 3}, 1.0}, {{3, 3}, 1.0}, {{3, 4}, 1.0}};
  cfg.outer = {{K::Resistor, 4}, {K::VoltageSource, 1}};
  cfg.inner = {{K::Resistor, level == 0 ? 1.0 : 3.0}};
  if (level >= 1) {
    cfg.inner[K::Inductor] = 2;
    cfg.inner[K::Capacitor] = 2;
  }
  if (level == 2) {
    for (K k : {K::Vcvs, K::Vccs, K::Ccvs, K::Cccs}) cfg.inner[k] = 1;
    cfg.outer[K::CurrentSource] = 1;
  }
  if (level == 4) cfg.inner[K::OpAmpMacro] = 1;
  return cfg;
}

void check_config(const PlacementConfig& cfg) {
  const auto allowed = allowed_kinds(cfg.level);
  if (cfg.grid_sizes.empty()) throw std::invalid_argument("grid size distribution is empty");
  double total = 0;
  for (const auto& [size, w] : cfg.grid_sizes) {
    if (size.rows < 1 || size.cols < 1) throw std::invalid_argument("grid dimensions must be positive");
    if (w < 0) throw std::invalid_argument("negative grid size weight");
    total += w;
  }
  if (!(total > 0)) throw std::invalid_argument("grid size weights are all zero");
  for (const auto* weights : {&cfg.inner, &cfg.outer}) {
    const char* which = weights == &cfg.inner ? "inner" : "outer";
    double sum = 0;
    for (const auto& [kind, w] : *weights) {
      if (w < 0) throw std::invalid_argument(std::string("negative ") + which + " weight");
      if (w > 0 && std::find(allowed.begin(), allowed.end(), kind) == allowed.end()) {
        throw std::invalid_argument(std::string(which) + " weight for " + std::string(netlist::kind_name(kind)) +
                                    " is not allowed at level " + std::to_string(cfg.level));
      }
      sum += w;
    }
    if (!(sum > 0)) throw std::invalid_argument(std::string(which) + " weights are all zero");
  }
  auto unit = [](double p) { return p >= 0 && p <= 1; };
  if (!unit(cfg.opamp_probability) || !unit(cfg.edge_keep) || !unit(cfg.nodal_probability)) {
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
  if (cfg.max_retries < 1) throw std::invalid_argument("max_retries must be positive");
}

}  // namespace cktbench::schemgen
