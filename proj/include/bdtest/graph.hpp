#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace bdtest {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Immutable simple undirected graph whose degrees never exceed a fixed
// bound d. Neighbor lists are sorted ascending, so the i-th neighbor of a
// vertex is well defined.
class BoundedDegreeGraph {
 public:
  BoundedDegreeGraph() = default;

  // Builds a graph on vertices [0, n). Throws InvalidEdge for self-loops,
  // out-of-range endpoints or repeated edges, DegreeExceeded if a vertex
  // would get more than `max_degree` neighbors.
  BoundedDegreeGraph(std::size_t n, std::size_t max_degree,
                     std::span<const Edge> edges);

  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }
  std::size_t max_degree() const { return max_degree_; }

  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }
  bool has_edge(Vertex u, Vertex v) const;

  // Largest degree actually present.
  std::size_t observed_max_degree() const;

  // Edges as (u, v) with u < v, sorted.
  std::vector<Edge> edges() const;

  // Same edges, different degree bound. Throws DegreeExceeded if the new
  // bound is too small.
  BoundedDegreeGraph with_degree_bound(std::size_t max_degree) const;

  // Induced subgraph on `vertices` (relabelled to their position).
  BoundedDegreeGraph induced(std::span<const Vertex> vertices) const;

  // Graph minus the given edges (same vertex set and bound).
  BoundedDegreeGraph without_edges(std::span<const Edge> removed) const;

  friend bool operator==(const BoundedDegreeGraph&, const BoundedDegreeGraph&) = default;

 private:
  std::size_t max_degree_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbors_;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Checks every structural invariant; returns false on the first violation.
bool validate(const BoundedDegreeGraph& g);

// Connected components as a label per vertex; returns the component count.
std::size_t connected_components(const BoundedDegreeGraph& g, std::vector<std::uint32_t>& label);

// Black-box access to a graph: only n, d and neighbor queries are visible,
// and every neighbor query is counted.
class QueryOracle {
 public:
  explicit QueryOracle(const BoundedDegreeGraph& g) : graph_(&g) {}

  std::size_t num_vertices() const { return graph_->num_vertices(); }
  std::size_t max_degree() const { return graph_->max_degree(); }

  // The i-th neighbor of v for i in [1, d], or nullopt when deg(v) < i.
  // Throws OutOfRange for a bad vertex or index.
  std::optional<Vertex> neighbor_query(Vertex v, std::size_t i);

  std::uint64_t queries_used() const { return queries_; }

 private:
  const BoundedDegreeGraph* graph_;
  std::uint64_t queries_ = 0;
};

}  // namespace bdtest
