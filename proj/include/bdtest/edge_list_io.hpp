#pragma once

#include <iosfwd>
#include <string>

#include "bdtest/graph.hpp"

namespace bdtest {

// Text format: first non-comment line "n d", then one "u v" line per edge
// with u < v. '#' starts a comment that runs to the end of the line.

BoundedDegreeGraph read_edge_list(std::istream& in);
void write_edge_list(const BoundedDegreeGraph& g, std::ostream& out);

BoundedDegreeGraph load_edge_list(const std::string& path);
void save_edge_list(const BoundedDegreeGraph& g, const std::string& path);

}  // namespace bdtest
