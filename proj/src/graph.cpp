#include "bdtest/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "bdtest/error.hpp"

namespace bdtest {

BoundedDegreeGraph::BoundedDegreeGraph(std::size_t n, std::size_t max_degree,
                                       std::span<const Edge> edges)
    : max_degree_(max_degree), offsets_(n + 1, 0) {
  std::vector<std::size_t> deg(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw InvalidEdge("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    if (u == v) throw InvalidEdge("self-loop at vertex " + std::to_string(u));
    ++deg[u];
    ++deg[v];
  }
  {
    std::vector<Edge> sorted(edges.begin(), edges.end());
    for (auto& e : sorted) e = make_edge(e.first, e.second);
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
      throw InvalidEdge("duplicate edge (" + std::to_string(dup->first) + ", " + std::to_string(dup->second) + ")");
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (deg[v] > max_degree) throw DegreeExceeded(v);
    offsets_[v + 1] = offsets_[v] + deg[v];
  }
  neighbors_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    neighbors_[fill[u]++] = v;
    neighbors_[fill[v]++] = u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) {
      throw InvalidEdge("duplicate edge at vertex " + std::to_string(v));
    }
  }
}

bool BoundedDegreeGraph::has_edge(Vertex u, Vertex v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t BoundedDegreeGraph::observed_max_degree() const {
  std::size_t best = 0;
  for (std::size_t v = 0; v < num_vertices(); ++v) best = std::max(best, degree(static_cast<Vertex>(v)));
  return best;
}

std::vector<Edge> BoundedDegreeGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (Vertex v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

BoundedDegreeGraph BoundedDegreeGraph::with_degree_bound(std::size_t max_degree) const {
  auto e = edges();
  return BoundedDegreeGraph(num_vertices(), max_degree, e);
}

BoundedDegreeGraph BoundedDegreeGraph::induced(std::span<const Vertex> vertices) const {
  std::vector<std::int64_t> pos(num_vertices(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) pos[vertices[i]] = static_cast<std::int64_t>(i);
  std::vector<Edge> e;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (Vertex w : neighbors(vertices[i])) {
      const auto j = pos[w];
      if (j > static_cast<std::int64_t>(i)) e.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    }
  }
  return BoundedDegreeGraph(vertices.size(), max_degree_, e);
}

BoundedDegreeGraph BoundedDegreeGraph::without_edges(std::span<const Edge> removed) const {
  std::vector<Edge> drop(removed.begin(), removed.end());
  for (auto& e : drop) e = make_edge(e.first, e.second);
  std::sort(drop.begin(), drop.end());
  std::vector<Edge> keep;
  for (const auto& e : edges()) {
    if (!std::binary_search(drop.begin(), drop.end(), e)) keep.push_back(e);
  }
  return BoundedDegreeGraph(num_vertices(), max_degree_, keep);
}

bool validate(const BoundedDegreeGraph& g) {
  const std::size_t n = g.num_vertices();
  for (Vertex v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    if (nb.size() > g.max_degree()) return false;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] >= n || nb[i] == v) return false;
      if (i > 0 && nb[i - 1] >= nb[i]) return false;
      if (!g.has_edge(nb[i], v)) return false;
    }
  }
  return true;
}

std::size_t connected_components(const BoundedDegreeGraph& g, std::vector<std::uint32_t>& label) {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  label.assign(g.num_vertices(), kUnset);
  std::uint32_t count = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(u)) {
        if (label[w] == kUnset) {
          label[w] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  return count;
}

std::optional<Vertex> QueryOracle::neighbor_query(Vertex v, std::size_t i) {
  if (v >= graph_->num_vertices()) {
    throw OutOfRange("vertex " + std::to_string(v) + " out of range");
  }
  if (i < 1 || i > graph_->max_degree()) {
    throw OutOfRange("neighbor index " + std::to_string(i) + " outside [1, d]");
  }
  ++queries_;
  auto nb = graph_->neighbors(v);
  if (i > nb.size()) return std::nullopt;
  return nb[i - 1];
}

}  // namespace bdtest
