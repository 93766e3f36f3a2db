#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bdtest {

// Small vertex-labelled simple graph, the input to canonical labelling.
// Labels act as vertex colors: isomorphisms must preserve them.
struct LabeledGraph {
  std::vector<std::vector<std::uint32_t>> adjacency;
  std::vector<std::string> labels;

  std::size_t size() const { return adjacency.size(); }
};

// Canonical certificate: two labelled graphs receive the same string iff a
// label-preserving isomorphism exists between them.
//
// Pendant trees are folded into their attachment vertices first (AHU
// encoding), then the remaining core is labelled by individualization and
// colour refinement, pruning the search tree with discovered automorphisms.
// Labels must not contain the characters '(', ')', ';' or '|'.
std::string canonical_certificate(const LabeledGraph& g);

}  // namespace bdtest
