#pragma once

#include <iosfwd>
#include <string>

#include "glp/process.hpp"

namespace glp {

// Edge-list text format, version 1:
//
//   # glp v1 p=<p> steps=<t> seed=<seed>
//   u v        one line per edge in creation order, starting with "1 1"
//
// A vertex-step edge is written target first, new vertex second.

void export_edges(const GlpGraph& graph, std::ostream& out);
void export_edges(const GlpGraph& graph, const std::string& path);

/// Rebuilds the graph, including arrival times, from an exported edge list.
/// Throws ParseError with the offending line number on malformed input.
GlpGraph import_edges(std::istream& in);
GlpGraph import_edges(const std::string& path);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace glp
