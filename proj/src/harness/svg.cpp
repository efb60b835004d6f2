#include "cktbench/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "cktbench/symexpr/rational_func.hpp"

namespace cktbench::harness {

using netlist::ComponentKind;
using netlist::NodeId;

namespace {

constexpr double kUnit = 120, kMargin = 60;

std::string num(double v) {
  if (std::abs(v) < 0.05) v = 0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Pt {
  double x, y;
};

Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }
Pt operator*(Pt a, double k) { return {a.x * k, a.y * k}; }

std::string line(Pt a, Pt b, std::string_view cls = "wire") {
  return "<line class=\"" + std::string(cls) + "\" x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" +
         num(b.x) + "\" y2=\"" + num(b.y) + "\"/>\n";
}

std::string text(Pt p, std::string_view body, std::string_view cls, std::string_view anchor = "middle") {
  return "<text class=\"" + std::string(cls) + "\" x=\"" + num(p.x) + "\" y=\"" + num(p.y) + "\" text-anchor=\"" +
         std::string(anchor) + "\">" + escape(body) + "</text>\n";
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" "
         "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\" style=\"fill:black;stroke:none\"/></marker></defs>\n"
         "<style>line,polyline,path,circle,rect,polygon{stroke:black;fill:none;stroke-width:1.5}"
         " text{fill:black;stroke:none} .dot{fill:black}</style>\n"
         "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" +
         num(w) + "\" height=\"" + num(h) + "\" style=\"fill:white;stroke:none\"/>\n";
}

// Symbol body in local coordinates: the component spans x in [-20, 20]
// along y = 0, first terminal on the left.
std::string symbol(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Resistor:
      return "<polyline points=\"-20,0 -15,-6 -9,6 -3,-6 3,6 9,-6 15,6 20,0\"/>";
    case ComponentKind::Capacitor:
      return "<line x1=\"-20\" y1=\"0\" x2=\"-4\" y2=\"0\"/><line x1=\"-4\" y1=\"-10\" x2=\"-4\" y2=\"10\"/>"
             "<line x1=\"4\" y1=\"-10\" x2=\"4\" y2=\"10\"/><line x1=\"4\" y1=\"0\" x2=\"20\" y2=\"0\"/>";
    case ComponentKind::Inductor:
      return "<path d=\"M-20,0 a5,5 0 0 1 10,0 a5,5 0 0 1 10,0 a5,5 0 0 1 10,0 a5,5 0 0 1 10,0\"/>";
    case ComponentKind::VoltageSource:
      return "<line x1=\"-20\" y1=\"0\" x2=\"-14\" y2=\"0\"/><circle cx=\"0\" cy=\"0\" r=\"14\"/>"
             "<line x1=\"14\" y1=\"0\" x2=\"20\" y2=\"0\"/>"
             "<text x=\"-7\" y=\"4\" text-anchor=\"middle\">+</text><text x=\"7\" y=\"4\" "
             "text-anchor=\"middle\">-</text>";
    case ComponentKind::CurrentSource:
      return "<line x1=\"-20\" y1=\"0\" x2=\"-14\" y2=\"0\"/><circle cx=\"0\" cy=\"0\" r=\"14\"/>"
             "<line x1=\"14\" y1=\"0\" x2=\"20\" y2=\"0\"/>"
             "<line x1=\"-8\" y1=\"0\" x2=\"7\" y2=\"0\" marker-end=\"url(#arrow)\"/>";
    case ComponentKind::Vcvs:
    case ComponentKind::Ccvs:
      return "<line x1=\"-20\" y1=\"0\" x2=\"-14\" y2=\"0\"/><polygon points=\"-14,0 0,-14 14,0 0,14\"/>"
             "<line x1=\"14\" y1=\"0\" x2=\"20\" y2=\"0\"/>"
             "<text x=\"-6\" y=\"4\" text-anchor=\"middle\">+</text><text x=\"6\" y=\"4\" "
             "text-anchor=\"middle\">-</text>";
    case ComponentKind::Vccs:
    case ComponentKind::Cccs:
      return "<line x1=\"-20\" y1=\"0\" x2=\"-14\" y2=\"0\"/><polygon points=\"-14,0 0,-14 14,0 0,14\"/>"
             "<line x1=\"14\" y1=\"0\" x2=\"20\" y2=\"0\"/>"
             "<line x1=\"-7\" y1=\"0\" x2=\"6\" y2=\"0\" marker-end=\"url(#arrow)\"/>";
    case ComponentKind::OpAmpMacro:
      return "<polygon points=\"-16,-14 16,0 -16,14\"/>";
  }
  return "";
}

// Name line and an optional gain line for controlled sources.
std::pair<std::string, std::string> caption(const netlist::Component& c) {
  switch (c.kind) {
    case ComponentKind::Vcvs:
    case ComponentKind::Vccs:
      return {c.name, c.value + "*V(" + std::to_string(c.nodes.at(2)) + "," + std::to_string(c.nodes.at(3)) + ")"};
    case ComponentKind::Ccvs:
    case ComponentKind::Cccs:
      return {c.name, c.value + "*I(" + c.control + ")"};
    default:
      if (!c.value.empty() && c.value != c.name) return {c.name + " = " + c.value, ""};
      return {c.name, ""};
  }
}

bool is_opamp_core(const netlist::Component& c) {
  return c.kind == ComponentKind::Vcvs && c.nodes.size() == 4 && c.nodes[1] == netlist::kGround &&
         c.nodes[2] == netlist::kGround && c.nodes[3] != netlist::kGround;
}

Pt perp(Pt d) { return {-d.y, d.x}; }

Pt unit(Pt d) {
  const double n = std::hypot(d.x, d.y);
  return n > 0 ? d * (1 / n) : Pt{1, 0};
}

}  // namespace

Layout auto_layout(const netlist::Netlist& net) {
  std::vector<NodeId> ids;
  for (NodeId n : net.nodes()) {
    if (n != netlist::kGround) ids.push_back(n);
  }
  ids.push_back(netlist::kGround);
  const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(ids.size())))));
  Layout out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out[ids[i]] = {double(static_cast<int>(i) / cols), double(static_cast<int>(i) % cols)};
  }
  return out;
}

std::string render_schematic_svg(const netlist::Netlist& net, const Layout& given) {
  Layout layout = given;
  bool complete = true;
  for (NodeId n : net.nodes()) complete = complete && layout.count(n);
  if (!complete) layout = auto_layout(net);

  double max_r = 0, max_c = 0;
  for (const auto& [id, rc] : layout) {
    max_r = std::max(max_r, rc.first);
    max_c = std::max(max_c, rc.second);
  }
  auto at = [&](NodeId n) {
    const auto& rc = layout.at(n);
    return Pt{rc.second * kUnit + kMargin, rc.first * kUnit + kMargin};
  };

  std::ostringstream body;

  // Op-amp stages keyed by internal node: the triangle sits on the line
  // from the input resistor's far end (p) to the output (q); the internal
  // node m lies off that line on the `side` half.
  struct Stage {
    NodeId q;
    Pt p, m, dir, side;
    double height;  // distance of m from the p-q line
  };
  std::map<NodeId, Stage> stages;
  for (const auto& c : net.components()) {
    if (!is_opamp_core(c)) continue;
    const NodeId m = c.nodes[3], q = c.nodes[0];
    Pt p = at(m);
    for (const auto& other : net.components()) {
      if (other.kind != ComponentKind::Resistor || other.nodes.size() < 2) continue;
      if (other.nodes[1] == m && other.nodes[0] != q) p = at(other.nodes[0]);
      if (other.nodes[0] == m && other.nodes[1] != q) p = at(other.nodes[1]);
    }
    Stage st{q, p, at(m), unit(at(q) - p), {}, 0};
    st.side = perp(st.dir);
    double h = (st.m.x - p.x) * st.side.x + (st.m.y - p.y) * st.side.y;
    if (h < 0) {
      st.side = st.side * -1;
      h = -h;
    }
    st.height = h;
    stages[m] = st;
  }
  auto feedback_stage = [&](const netlist::Component& c) -> const Stage* {
    for (int i = 0; i < 2; ++i) {
      auto it = stages.find(c.nodes[i]);
      if (it != stages.end() && c.nodes[1 - i] == it->second.q) return &it->second;
    }
    return nullptr;
  };

  // Parallel components between one node pair are fanned out sideways.
  std::map<std::pair<NodeId, NodeId>, int> pair_total, pair_seen;
  auto key = [](const netlist::Component& c) {
    return std::minmax(c.nodes.at(0), c.nodes.at(1));
  };
  for (const auto& c : net.components()) {
    if (!is_opamp_core(c)) ++pair_total[key(c)];
  }

  for (const auto& c : net.components()) {
    if (is_opamp_core(c)) {
      const Stage& st = stages.at(c.nodes[3]);
      const Pt q = at(st.q), dir = st.dir, side = st.side;
      const Pt centre = st.p + (q - st.p) * 0.6, back = centre - dir * 16, tip = centre + dir * 16;
      const Pt minus = back + side * 8, plus = back - side * 8;
      body << "<g class=\"opamp\" data-name=\"" << escape(c.name) << "\">\n";
      body << "<polygon points=\"" << num((back + side * 16).x) << "," << num((back + side * 16).y) << " "
           << num(tip.x) << "," << num(tip.y) << " " << num((back - side * 16).x) << ","
           << num((back - side * 16).y) << "\"/>\n";
      const Pt elbow = minus - dir * 10;
      body << line(st.m, elbow) << line(elbow, minus) << line(tip, q);
      const Pt g = plus - dir * 10 - side * 8;
      body << line(plus, plus - dir * 10) << line(plus - dir * 10, g) << line(g + dir * -6, g + dir * 6)
           << line(g - side * 3 + dir * -4, g - side * 3 + dir * 4) << line(g - side * 6 + dir * -2, g - side * 6 + dir * 2);
      body << text(minus + dir * 5 + Pt{0, 4}, "-", "sign") << text(plus + dir * 5 + Pt{0, 4}, "+", "sign");
      body << text(centre - side * 30 + Pt{0, 4}, c.name, "name");
      body << "</g>\n";
      continue;
    }
    const Pt a = at(c.nodes[0]), b = at(c.nodes[1]);
    const auto k = key(c);
    const int idx = pair_seen[k]++, total = pair_total[k];
    Pt p, q, dir, side, label_side;
    bool feedback = false;
    if (const Stage* st = feedback_stage(c)) {
      // Feedback element: a run parallel to the p-q line, above m.
      const double lift = 18 + 26 * idx;
      const Pt over_m = st->m + st->side * lift;
      const Pt over_q = at(st->q) + st->side * (st->height + lift);
      const bool from_m = c.nodes[0] != st->q;
      p = from_m ? over_m : over_q;
      q = from_m ? over_q : over_m;
      dir = unit(q - p);
      side = perp(dir);
      label_side = st->side;
      feedback = true;
    } else {
      dir = unit(b - a);
      side = perp(dir);
      const Pt off = side * ((idx - (total - 1) / 2.0) * 34);
      p = a + off;
      q = b + off;
      label_side = side;
      if (label_side.y > 0 || (label_side.y == 0 && label_side.x > 0)) label_side = label_side * -1;
    }
    const Pt mid = (p + q) * 0.5;
    body << "<g class=\"component\" data-name=\"" << escape(c.name) << "\">\n";
    if (p.x != a.x || p.y != a.y) body << line(a, p);
    if (q.x != b.x || q.y != b.y) body << line(b, q);
    body << line(p, mid - dir * 20) << line(mid + dir * 20, q);
    const double angle = std::atan2(dir.y, dir.x) * 180 / 3.14159265358979323846;
    body << "<g transform=\"translate(" << num(mid.x) << "," << num(mid.y) << ") rotate(" << num(angle) << ")\">"
         << symbol(c.kind) << "</g>\n";
    if (feedback && std::abs(dir.x) >= std::abs(dir.y)) {
      // Feedback runs are stacked closely; label at the run's left end.
      body << text(Pt{std::min(p.x, q.x) - 4, mid.y + 4}, caption(c).first, "name", "end");
    } else {
      const std::string_view anchor = label_side.x < -0.5 ? "end" : label_side.x > 0.5 ? "start" : "middle";
      const auto [name, gain] = caption(c);
      body << text(mid + label_side * 22 + Pt{0, gain.empty() ? 4.0 : -3.0}, name, "name", anchor);
      if (!gain.empty()) body << text(mid + label_side * 22 + Pt{0, 11}, gain, "gain", anchor);
    }
    body << "</g>\n";
  }

  for (const auto& [id, rc] : layout) {
    const Pt p = at(id);
    if (id == netlist::kGround) {
      body << "<g class=\"ground\">" << line(p, p + Pt{0, 14}) << line(p + Pt{-10, 14}, p + Pt{10, 14})
           << line(p + Pt{-6, 18}, p + Pt{6, 18}) << line(p + Pt{-2, 22}, p + Pt{2, 22}) << "</g>\n";
      continue;
    }
    body << "<circle class=\"dot\" cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"3\"/>\n";
    body << text(p + Pt{8, -8}, std::to_string(id), "node", "start");
  }
  return header(max_c * kUnit + 2 * kMargin, max_r * kUnit + 2 * kMargin + 30) + body.str() + "</svg>\n";
}

std::string render_diagram_svg(const blockdiag::SignalFlowGraph& g, const std::vector<std::string>& labels) {
  using blockdiag::EdgeRole;
  using blockdiag::NodeKind;
  constexpr double kLane = 60, kLeft = 70, kTop = 40;
  int max_lane = 0, min_lane = 0;
  double max_x = 0;
  for (const auto& e : g.edges) {
    max_lane = std::max(max_lane, e.lane);
    min_lane = std::min(min_lane, e.lane);
  }
  auto block_text = [&](int b) {
    if (b < static_cast<int>(labels.size()) && !labels[b].empty()) return labels[b];
    return symexpr::format_canonical(g.blocks[b].tf);
  };
  auto block_width = [&](int b) { return std::max(40.0, 7.0 * static_cast<double>(block_text(b).size()) + 16); };
  // Stretch the recorded x spacing (140 per main-path step) to fit the widest block.
  double widest = 0;
  for (std::size_t b = 0; b < g.blocks.size(); ++b) widest = std::max(widest, block_width(static_cast<int>(b)));
  const double stretch = std::max(1.0, (widest + 70) / 140);
  for (const auto& n : g.nodes) max_x = std::max(max_x, n.x * stretch);
  const double y0 = kTop + (-min_lane) * kLane + 30;
  auto at = [&](int id) { return Pt{g.nodes[id].x * stretch + kLeft, g.nodes[id].y + y0}; };

  std::ostringstream body;
  auto arrow = [&](const std::vector<Pt>& pts) {
    body << "<polyline class=\"arrow\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body << (i ? " " : "") << num(pts[i].x) << "," << num(pts[i].y);
    body << "\" marker-end=\"url(#arrow)\"/>\n";
  };
  auto box = [&](Pt centre, int b) {
    const double w = block_width(b);
    body << "<rect class=\"block\" x=\"" << num(centre.x - w / 2) << "\" y=\"" << num(centre.y - 16) << "\" width=\""
         << num(w) << "\" height=\"32\"/>\n";
    body << text(centre + Pt{0, 4}, block_text(b), "tf");
  };
  auto node_radius = [&](int id) {
    switch (g.nodes[id].kind) {
      case NodeKind::Junction: return 10.0;
      case NodeKind::Signal: return 0.0;
      default: return 4.0;
    }
  };

  for (const auto& e : g.edges) {
    const Pt a = at(e.src), b = at(e.dst);
    const double ra = node_radius(e.src), rb = node_radius(e.dst);
    if (e.lane == 0) {
      const Pt start = a + Pt{ra, 0}, end = b - Pt{rb, 0};
      if (e.block >= 0) {
        const Pt mid = (start + end) * 0.5;
        const double w = block_width(e.block);
        arrow({start, mid - Pt{w / 2, 0}});
        box(mid, e.block);
        arrow({mid + Pt{w / 2, 0}, end});
      } else {
        arrow({start, end});
      }
    } else {
      // Leave vertically, run along the lane, enter the target vertically.
      const double dir = e.lane > 0 ? 1 : -1;
      const double ly = y0 + e.lane * kLane;
      const Pt start = a + Pt{0, dir * ra}, end = b + Pt{0, dir * rb};
      const Pt c1{a.x, ly}, c2{b.x, ly};
      if (e.block >= 0) {
        const Pt mid = (c1 + c2) * 0.5;
        const double w = block_width(e.block);
        const double s = b.x > a.x ? 1 : -1;
        arrow({start, c1, mid - Pt{s * w / 2, 0}});
        box(mid, e.block);
        arrow({mid + Pt{s * w / 2, 0}, c2, end});
      } else {
        arrow({start, c1, c2, end});
      }
    }
    if (g.nodes[e.dst].kind == NodeKind::Junction || (e.dst == g.output && e.role == EdgeRole::Feedforward)) {
      const Pt sign_at = e.lane == 0 ? b + Pt{-rb - 8, -8} : b + Pt{9, (e.lane > 0 ? 1 : -1) * (rb + 10)};
      body << text(sign_at, e.sign < 0 ? "-" : "+", "sign");
    }
  }

  for (std::size_t id = 0; id < g.nodes.size(); ++id) {
    const Pt p = at(static_cast<int>(id));
    switch (g.nodes[id].kind) {
      case NodeKind::Junction:
        body << "<circle class=\"junction\" cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"10\"/>\n";
        break;
      case NodeKind::Signal:
        body << "<circle class=\"dot\" cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"2.5\"/>\n";
        break;
      case NodeKind::Input:
        body << text(p - Pt{10, -4}, "R(s)", "label", "end");
        break;
      case NodeKind::Output:
        body << text(p + Pt{10, 4}, "C(s)", "label", "start");
        break;
    }
  }
  const double height = y0 + std::max(max_lane, 0) * kLane + 50;
  return header(max_x + 2 * kLeft, height) + body.str() + "</svg>\n";
}

std::string netlist_artifact(const netlist::Netlist& net, const Layout& layout) {
  std::string out = netlist::serialize(net);
  for (const auto& [id, rc] : layout) {
    out += "* pos " + std::to_string(id) + " " + num(rc.first) + " " + num(rc.second) + "\n";
  }
  return out;
}

Layout parse_layout_comments(std::string_view text) {
  Layout out;
  std::istringstream in{std::string(text)};
  std::string l;
  while (std::getline(in, l)) {
    std::istringstream fields(l);
    std::string star, tag;
    NodeId id = 0;
    double r = 0, c = 0;
    if (fields >> star >> tag >> id >> r >> c && star == "*" && tag == "pos") out[id] = {r, c};
  }
  return out;
}

std::string render_artifact(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text.substr(first).rfind("diagram", 0) == 0) {
    return render_diagram_svg(blockdiag::parse_diagram(text));
  }
  return render_schematic_svg(netlist::parse_netlist(text), parse_layout_comments(text));
}

}  // namespace cktbench::harness
