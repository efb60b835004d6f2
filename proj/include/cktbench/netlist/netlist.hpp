#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cktbench::netlist {

using NodeId = int;
inline constexpr NodeId kGround = 0;

enum class ComponentKind {
  Resistor,       // R
  Inductor,       // L
  Capacitor,      // C
  VoltageSource,  // V
  CurrentSource,  // I
  Vcvs,           // E
  Vccs,           // G
  Ccvs,           // H
  Cccs,           // F
  OpAmpMacro,     // X, only before template expansion
};

char kind_letter(ComponentKind kind);
std::optional<ComponentKind> kind_from_letter(char letter);
std::string_view kind_name(ComponentKind kind);

bool is_passive(ComponentKind kind);
bool is_reactive(ComponentKind kind);
bool is_independent_source(ComponentKind kind);
bool is_controlled_source(ComponentKind kind);

enum class Waveform { Step, AcUnit };

/// Laplace-domain behavior of an independent source. Step sources
/// contribute amplitude/s; AC-unit sources contribute amplitude.
struct SourceWaveform {
  Waveform kind = Waveform::Step;
  /// True when the line spelled only a keyword ("V1 1 0 step"); the
  /// amplitude symbol is then the component name.
  bool keyword_form = true;

  friend bool operator==(const SourceWaveform&, const SourceWaveform&) = default;
};

/// One netlist line.
///
/// `nodes` holds the two output terminals for every kind, followed by the
/// two control terminals for VCVS/VCCS. CCVS/CCCS name the component whose
/// current they sense in `control`. `value` is the symbolic value (or gain)
/// as written; it defaults to the component name. For an op-amp macro it is
/// the feedback network ("R", "C" or "RC").
struct Component {
  std::string name;
  ComponentKind kind = ComponentKind::Resistor;
  std::vector<NodeId> nodes;
  std::string value;
  std::string control;
  std::optional<SourceWaveform> waveform;

  friend bool operator==(const Component&, const Component&) = default;
};

class Netlist {
 public:
  Netlist() = default;
  explicit Netlist(std::vector<Component> components) : components_(std::move(components)) {}

  const std::vector<Component>& components() const { return components_; }
  std::vector<Component>& components() { return components_; }
  void add(Component c) { components_.push_back(std::move(c)); }

  const Component* find(std::string_view name) const;
  /// All node ids referenced by any component (output or control), sorted.
  std::vector<NodeId> nodes() const;
  std::size_t count(ComponentKind kind) const;

  friend bool operator==(const Netlist&, const Netlist&) = default;

 private:
  std::vector<Component> components_;
};

class NetlistError : public std::runtime_error {
 public:
  NetlistError(const std::string& message, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses a netlist. One component per line; blank lines and lines
/// starting with `*` are skipped. Line forms:
///
///   R|L|C<name> n+ n- [value]
///   V|I<name>   n+ n- [value] [step|ac]
///   E|G<name>   n+ n- nc+ nc- gain [0]
///   H|F<name>   n+ n- Vsense gain
///   X<name>     in out R|C|RC
Netlist parse_netlist(std::string_view text);

/// Inverse of parse_netlist; one line per component, newline terminated.
std::string serialize(const Netlist& netlist);

}  // namespace cktbench::netlist
