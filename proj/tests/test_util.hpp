#pragma once

// Test-only helpers: random inputs and brute-force oracles that share no code
// with the routines they check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "bdtest/canonical.hpp"
#include "bdtest/graph.hpp"
#include "bdtest/neighborhood.hpp"
#include "bdtest/random.hpp"

namespace bdtest::testing {

// Random graph on n vertices with max degree d: random edge proposals,
// accepted while both endpoints have room.
inline BoundedDegreeGraph random_bounded_graph(std::size_t n, std::size_t d, std::size_t attempts, Rng& rng) {
  std::vector<std::size_t> deg(n, 0);
  std::vector<Edge> edges;
  for (std::size_t t = 0; t < attempts && n > 1; ++t) {
    auto u = static_cast<Vertex>(uniform_below(rng, n));
    auto v = static_cast<Vertex>(uniform_below(rng, n));
    if (u == v || deg[u] >= d || deg[v] >= d) continue;
    auto e = make_edge(u, v);
    if (std::find(edges.begin(), edges.end(), e) != edges.end()) continue;
    edges.push_back(e);
    ++deg[u];
    ++deg[v];
  }
  return BoundedDegreeGraph(n, d, edges);
}

// Same graph with vertex ids permuted at random.
inline BoundedDegreeGraph relabel(const BoundedDegreeGraph& g, Rng& rng, std::vector<Vertex>* perm_out = nullptr) {
  std::vector<Vertex> perm(g.num_vertices());
  std::iota(perm.begin(), perm.end(), 0);
  shuffle_range(perm.begin(), perm.end(), rng);
  std::vector<Edge> e;
  for (auto [u, v] : g.edges()) e.push_back(make_edge(perm[u], perm[v]));
  if (perm_out) *perm_out = perm;
  return BoundedDegreeGraph(g.num_vertices(), g.max_degree(), e);
}

// Ball with its non-root local ids shuffled.
inline RootedBall shuffle_ball(const RootedBall& b, Rng& rng) {
  std::vector<std::uint32_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  if (perm.size() > 1) shuffle_range(perm.begin() + 1, perm.end(), rng);
  RootedBall out;
  out.radius = b.radius;
  out.vertices.resize(b.size());
  out.depth.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    out.vertices[perm[i]] = b.vertices[i];
    out.depth[perm[i]] = b.depth[i];
  }
  for (auto [x, y] : b.edges) {
    auto a = perm[x], c = perm[y];
    out.edges.emplace_back(std::min(a, c), std::max(a, c));
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

// Brute-force mu_r: group every vertex's ball into classes with the
// backtracking isomorphism test and return the class sizes over n, keyed by
// one representative vertex.
struct OracleDistribution {
  std::vector<RootedBall> representatives;
  std::vector<double> mass;
};

inline OracleDistribution brute_force_distribution(const BoundedDegreeGraph& g, std::size_t r) {
  OracleDistribution out;
  std::vector<std::size_t> counts;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto ball = extract_ball(g, v, r);
    bool placed = false;
    for (std::size_t i = 0; i < out.representatives.size() && !placed; ++i) {
      if (rooted_isomorphic(out.representatives[i], ball)) {
        ++counts[i];
        placed = true;
      }
    }
    if (!placed) {
      out.representatives.push_back(ball);
      counts.push_back(1);
    }
  }
  for (auto c : counts) out.mass.push_back(static_cast<double>(c) / static_cast<double>(g.num_vertices()));
  return out;
}

// Brute-force rho_r: L1 distance of two brute-force distributions, matching
// classes across graphs with the backtracking isomorphism test.
inline double brute_force_rho(const BoundedDegreeGraph& a, const BoundedDegreeGraph& b, std::size_t r) {
  auto da = brute_force_distribution(a, r);
  auto db = brute_force_distribution(b, r);
  double total = 0;
  std::vector<bool> matched(db.representatives.size(), false);
  for (std::size_t i = 0; i < da.representatives.size(); ++i) {
    double other = 0;
    for (std::size_t j = 0; j < db.representatives.size(); ++j) {
      if (!matched[j] && rooted_isomorphic(da.representatives[i], db.representatives[j])) {
        matched[j] = true;
        other = db.mass[j];
        break;
      }
    }
    total += std::abs(da.mass[i] - other);
  }
  for (std::size_t j = 0; j < db.representatives.size(); ++j) {
    if (!matched[j]) total += db.mass[j];
  }
  return total;
}

// Unlabelled isomorphism certificate of a whole graph.
inline std::string graph_certificate(const BoundedDegreeGraph& g) {
  LabeledGraph lg;
  lg.adjacency.resize(g.num_vertices());
  lg.labels.assign(g.num_vertices(), "v");
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto nb = g.neighbors(v);
    lg.adjacency[v].assign(nb.begin(), nb.end());
  }
  return canonical_certificate(lg);
}

// Every connected graph on 1..max_n vertices, one per isomorphism class.
// Built by attaching a new vertex to every nonempty subset of an earlier
// graph's vertices; each connected graph has a non-cut vertex, so nothing is
// missed. Degree bound is max_n - 1.
inline std::vector<BoundedDegreeGraph> all_connected_graphs(std::size_t max_n) {
  std::vector<BoundedDegreeGraph> out;
  if (max_n == 0) return out;
  const std::size_t d = std::max<std::size_t>(max_n - 1, 1);
  std::vector<BoundedDegreeGraph> layer{BoundedDegreeGraph(1, d, {})};
  out = layer;
  for (std::size_t n = 2; n <= max_n; ++n) {
    std::set<std::string> seen;
    std::vector<BoundedDegreeGraph> next;
    for (const auto& g : layer) {
      const auto base = g.edges();
      for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
        auto e = base;
        for (Vertex v = 0; v + 1 < n; ++v) {
          if (mask >> v & 1) e.emplace_back(v, static_cast<Vertex>(n - 1));
        }
        BoundedDegreeGraph h(n, d, e);
        if (seen.insert(graph_certificate(h)).second) next.push_back(std::move(h));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Planarity by exhaustive embedding search. Edges are inserted one at a time
// in an order that keeps the drawn part connected; each insertion tries every
// pair of rotation slots at its endpoints and keeps the result only if the
// rotation system still has genus zero (V - E + F == 2).
class EmbeddingSearch {
 public:
  explicit EmbeddingSearch(const BoundedDegreeGraph& g) : n_(g.num_vertices()), rot_(n_) {
    std::vector<bool> seen(n_, false);
    std::vector<Vertex> queue{0};
    seen[0] = true;
    std::set<Edge> used;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex u = queue[head];
      for (Vertex w : g.neighbors(u)) {
        if (used.insert(make_edge(u, w)).second) order_.emplace_back(u, w);
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
  }

  bool planar() {
    if (n_ >= 3 && order_.size() > 3 * n_ - 6) return false;
    return place(0);
  }

 private:
  std::size_t faces() const {
    std::set<std::pair<Vertex, Vertex>> visited;
    std::size_t count = 0;
    for (Vertex u = 0; u < n_; ++u) {
      for (Vertex v : rot_[u]) {
        if (visited.count({u, v})) continue;
        ++count;
        Vertex a = u, b = v;
        while (visited.insert({a, b}).second) {
          const auto& r = rot_[b];
          const auto at = std::find(r.begin(), r.end(), a) - r.begin();
          const Vertex c = r[(static_cast<std::size_t>(at) + 1) % r.size()];
          a = b;
          b = c;
        }
      }
    }
    return count == 0 ? 1 : count;
  }

  bool place(std::size_t next) {
    if (next == order_.size()) return true;
    const auto [u, w] = order_[next];
    const std::size_t su = std::max<std::size_t>(rot_[u].size(), 1);
    const std::size_t sw = std::max<std::size_t>(rot_[w].size(), 1);
    for (std::size_t i = 0; i < su; ++i) {
      for (std::size_t j = 0; j < sw; ++j) {
        rot_[u].insert(rot_[u].begin() + static_cast<std::ptrdiff_t>(i), w);
        rot_[w].insert(rot_[w].begin() + static_cast<std::ptrdiff_t>(j), u);
        std::size_t drawn = 0;
        for (const auto& r : rot_) drawn += r.empty() ? 0 : 1;
        if (drawn + faces() == next + 3 && place(next + 1)) return true;
        rot_[u].erase(rot_[u].begin() + static_cast<std::ptrdiff_t>(i));
        rot_[w].erase(rot_[w].begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<Vertex>> rot_;
  std::vector<Edge> order_;
};

inline bool planar_by_embedding(const BoundedDegreeGraph& g) { return EmbeddingSearch(g).planar(); }

}  // namespace bdtest::testing
