#pragma once

#include <string>
#include <vector>

#include "cktbench/netlist/netlist.hpp"

namespace cktbench::netlist {

struct Violation {
  enum class Kind {
    NoGround,
    LowDegreeNode,
    Disconnected,
    NoVoltageSource,
    TooManyVoltageSources,
    ShortedComponent,
    InvalidControl,
    InvalidValue,
    UnexpandedMacro,
  };
  Kind kind;
  /// Node id or component name the violation is about; empty when global.
  std::string subject;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string_view violation_name(Violation::Kind kind);
std::string describe(const Violation& v);

/// Topological checks. Empty result iff every node has degree >= 2 counting
/// only current-carrying terminals (VCVS/VCCS control terminals excluded),
/// all components connect to ground, there is exactly one independent
/// voltage source, no component has both terminals on one node, and all
/// control references resolve. Violations come out in a fixed order.
std::vector<Violation> validate(const Netlist& netlist);

}  // namespace cktbench::netlist
