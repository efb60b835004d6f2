#include "cktbench/netlist/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "cktbench/symexpr/polynomial.hpp"

namespace cktbench::netlist {

char kind_letter(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Resistor: return 'R';
    case ComponentKind::Inductor: return 'L';
    case ComponentKind::Capacitor: return 'C';
    case ComponentKind::VoltageSource: return 'V';
    case ComponentKind::CurrentSource: return 'I';
    case ComponentKind::Vcvs: return 'E';
    case ComponentKind::Vccs: return 'G';
    case ComponentKind::Ccvs: return 'H';
    case ComponentKind::Cccs: return 'F';
    case ComponentKind::OpAmpMacro: return 'X';
  }
  return '?';
}

std::optional<ComponentKind> kind_from_letter(char letter) {
  switch (std::toupper(static_cast<unsigned char>(letter))) {
    case 'R': return ComponentKind::Resistor;
    case 'L': return ComponentKind::Inductor;
    case 'C': return ComponentKind::Capacitor;
    case 'V': return ComponentKind::VoltageSource;
    case 'I': return ComponentKind::CurrentSource;
    case 'E': return ComponentKind::Vcvs;
    case 'G': return ComponentKind::Vccs;
    case 'H': return ComponentKind::Ccvs;
    case 'F': return ComponentKind::Cccs;
    case 'X': return ComponentKind::OpAmpMacro;
    default: return std::nullopt;
  }
}

std::string_view kind_name(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Resistor: return "resistor";
    case ComponentKind::Inductor: return "inductor";
    case ComponentKind::Capacitor: return "capacitor";
    case ComponentKind::VoltageSource: return "voltage source";
    case ComponentKind::CurrentSource: return "current source";
    case ComponentKind::Vcvs: return "VCVS";
    case ComponentKind::Vccs: return "VCCS";
    case ComponentKind::Ccvs: return "CCVS";
    case ComponentKind::Cccs: return "CCCS";
    case ComponentKind::OpAmpMacro: return "op-amp";
  }
  return "unknown";
}

bool is_passive(ComponentKind kind) {
  return kind == ComponentKind::Resistor || kind == ComponentKind::Inductor || kind == ComponentKind::Capacitor;
}

bool is_reactive(ComponentKind kind) { return kind == ComponentKind::Inductor || kind == ComponentKind::Capacitor; }

bool is_independent_source(ComponentKind kind) {
  return kind == ComponentKind::VoltageSource || kind == ComponentKind::CurrentSource;
}

bool is_controlled_source(ComponentKind kind) {
  return kind == ComponentKind::Vcvs || kind == ComponentKind::Vccs || kind == ComponentKind::Ccvs ||
         kind == ComponentKind::Cccs;
}

const Component* Netlist::find(std::string_view name) const {
  auto it = std::find_if(components_.begin(), components_.end(), [&](const Component& c) { return c.name == name; });
  return it == components_.end() ? nullptr : &*it;
}

std::vector<NodeId> Netlist::nodes() const {
  std::set<NodeId> all;
  for (const auto& c : components_) all.insert(c.nodes.begin(), c.nodes.end());
  return {all.begin(), all.end()};
}

std::size_t Netlist::count(ComponentKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(components_.begin(), components_.end(), [&](const Component& c) { return c.kind == kind; }));
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

NodeId parse_node(const std::string& tok, int line) {
  NodeId id = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || id < 0) {
    throw NetlistError("invalid node id '" + tok + "'", line);
  }
  return id;
}

void require_symbolic(const std::string& tok, int line) {
  if (!symexpr::is_valid_symbol(tok)) throw NetlistError("invalid value token '" + tok + "'", line);
}

Component parse_line(const std::vector<std::string>& tok, int line) {
  Component c;
  c.name = tok[0];
  auto kind = kind_from_letter(c.name[0]);
  if (!kind) throw NetlistError(std::string("unknown component kind '") + c.name[0] + "'", line);
  if (!symexpr::is_valid_symbol(c.name)) throw NetlistError("invalid component name '" + c.name + "'", line);
  c.kind = *kind;
  const std::size_t n = tok.size();
  auto arity = [&](bool ok, const char* form) {
    if (!ok) throw NetlistError("wrong arity for " + c.name + ", expected: " + form, line);
  };

  switch (c.kind) {
    case ComponentKind::Resistor:
    case ComponentKind::Inductor:
    case ComponentKind::Capacitor:
      arity(n == 3 || n == 4, "name n+ n- [value]");
      c.nodes = {parse_node(tok[1], line), parse_node(tok[2], line)};
      c.value = n == 4 ? tok[3] : c.name;
      require_symbolic(c.value, line);
      break;
    case ComponentKind::VoltageSource:
    case ComponentKind::CurrentSource: {
      arity(n >= 3 && n <= 5, "name n+ n- [value] [step|ac]");
      c.nodes = {parse_node(tok[1], line), parse_node(tok[2], line)};
      SourceWaveform w;
      c.value = c.name;
      std::vector<std::string> rest(tok.begin() + 3, tok.end());
      if (!rest.empty()) {
        std::string kw = lower(rest.back());
        if (kw == "step" || kw == "ac") {
          w.kind = kw == "step" ? Waveform::Step : Waveform::AcUnit;
          rest.pop_back();
        } else if (rest.size() == 2) {
          throw NetlistError("unknown source waveform '" + rest.back() + "'", line);
        }
      }
      if (!rest.empty()) {
        c.value = rest.front();
        require_symbolic(c.value, line);
        w.keyword_form = false;
      } else if (n == 3) {
        w.keyword_form = false;
      }
      c.waveform = w;
      break;
    }
    case ComponentKind::Vcvs:
    case ComponentKind::Vccs:
      arity(n == 6 || (n == 7 && tok[6] == "0"), "name n+ n- nc+ nc- gain [0]");
      for (int i = 1; i <= 4; ++i) c.nodes.push_back(parse_node(tok[i], line));
      c.value = tok[5];
      require_symbolic(c.value, line);
      break;
    case ComponentKind::Ccvs:
    case ComponentKind::Cccs:
      arity(n == 5, "name n+ n- Vsense gain");
      c.nodes = {parse_node(tok[1], line), parse_node(tok[2], line)};
      c.control = tok[3];
      c.value = tok[4];
      require_symbolic(c.value, line);
      break;
    case ComponentKind::OpAmpMacro: {
      arity(n == 4, "name in out R|C|RC");
      c.nodes = {parse_node(tok[1], line), parse_node(tok[2], line)};
      c.value = tok[3];
      if (c.value != "R" && c.value != "C" && c.value != "RC") {
        throw NetlistError("unknown op-amp feedback '" + c.value + "'", line);
      }
      break;
    }
  }
  return c;
}

}  // namespace

Netlist parse_netlist(std::string_view text) {
  Netlist net;
  std::vector<int> lines;
  std::set<std::string> names;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(start, end - start);
    start = end + 1;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '*') continue;
    Component c = parse_line(tok, line_no);
    if (!names.insert(c.name).second) throw NetlistError("duplicate component name '" + c.name + "'", line_no);
    net.add(std::move(c));
    lines.push_back(line_no);
  }
  if (net.components().empty()) throw NetlistError("empty netlist", 0);

  for (std::size_t i = 0; i < net.components().size(); ++i) {
    const auto& c = net.components()[i];
    if (c.kind == ComponentKind::Ccvs || c.kind == ComponentKind::Cccs) {
      const Component* sensed = net.find(c.control);
      if (sensed == nullptr || sensed == &c) {
        throw NetlistError("control branch '" + c.control + "' of " + c.name + " does not exist", lines[i]);
      }
    }
  }
  return net;
}

std::string serialize(const Netlist& netlist) {
  std::ostringstream out;
  for (const auto& c : netlist.components()) {
    out << c.name;
    for (NodeId n : c.nodes) out << ' ' << n;
    switch (c.kind) {
      case ComponentKind::VoltageSource:
      case ComponentKind::CurrentSource: {
        SourceWaveform w = c.waveform.value_or(SourceWaveform{});
        const char* kw = w.kind == Waveform::Step ? "step" : "ac";
        if (w.keyword_form) {
          out << ' ' << kw;
        } else {
          out << ' ' << c.value;
          if (w.kind != Waveform::Step) out << ' ' << kw;
        }
        break;
      }
      case ComponentKind::Vcvs:
      case ComponentKind::Vccs: out << ' ' << c.value << " 0"; break;
      case ComponentKind::Ccvs:
      case ComponentKind::Cccs: out << ' ' << c.control << ' ' << c.value; break;
      default: out << ' ' << c.value; break;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace cktbench::netlist
