#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdtest/graph.hpp"

namespace bdtest {

struct MinorSearchOptions {
  // Exact search refuses hosts larger than this after reductions.
  std::size_t max_host_vertices = 64;
  std::size_t max_pattern_vertices = 6;
  // Search-tree nodes per call before SearchBudgetExceeded.
  std::uint64_t node_budget = 50'000'000;
  // Answer "no" without searching when the host is planar and the pattern
  // is not (minors of planar graphs are planar).
  bool planarity_filter = true;
};

// Built-in patterns by name: K<n> (e.g. K5), K<a><b> (e.g. K33), C<n>,
// P<n> (path), "petersen". Anything else is read as an edge-list file.
BoundedDegreeGraph pattern_from_name(const std::string& name);

// True iff `pattern` is a minor of `host`. Exhaustive search over branch
// sets; throws SearchBudgetExceeded when a guard trips.
bool has_minor(const BoundedDegreeGraph& host, const BoundedDegreeGraph& pattern,
               const MinorSearchOptions& options = {});

// Linear-time planarity test (Boyer-Myrvold), usable on any size.
bool is_planar(const BoundedDegreeGraph& g);

// Planarity decided by forbidden minors K5 and K3,3.
bool is_planar_small(const BoundedDegreeGraph& g, const MinorSearchOptions& options = {});

// Minimum number of edge deletions after which no pattern is a minor, or
// nullopt when that number exceeds `cap`. Exact, by enumerating deletion
// sets in increasing size.
std::optional<std::size_t> edit_distance_to_minor_free(const BoundedDegreeGraph& g,
                                                       const std::vector<BoundedDegreeGraph>& patterns,
                                                       std::size_t cap,
                                                       const MinorSearchOptions& options = {});

}  // namespace bdtest
