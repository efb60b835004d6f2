#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cktbench/blockdiag/diagram.hpp"
#include "cktbench/netlist/netlist.hpp"
#include "cktbench/schemgen/generator.hpp"

namespace cktbench::harness {

using schemgen::Layout;

/// Grid-based placement for netlists without a recorded layout: nodes in
/// id order, row-major on a near-square grid, ground last.
Layout auto_layout(const netlist::Netlist& net);

/// Schematic on the given layout (grid units, 120 px per unit).
/// Nodes missing from the layout fall back to auto_layout.
std::string render_schematic_svg(const netlist::Netlist& net, const Layout& layout);

/// Block diagram along its recorded layout. `labels` gives the text of
/// each block; empty means format_canonical of its tf.
std::string render_diagram_svg(const blockdiag::SignalFlowGraph& g, const std::vector<std::string>& labels = {});

/// Netlist text with the layout appended as `* pos <node> <row> <col>`
/// comment lines, which parse_netlist skips.
std::string netlist_artifact(const netlist::Netlist& net, const Layout& layout);
Layout parse_layout_comments(std::string_view text);

/// Renders a netlist artifact or a `diagram v1` text, picked by content.
std::string render_artifact(std::string_view text);

}  // namespace cktbench::harness
