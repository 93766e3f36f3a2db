#include "bdtest/minor.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <regex>
#include <set>
#include <string>
#include <unordered_set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "bdtest/edge_list_io.hpp"
#include "bdtest/error.hpp"
#include "bdtest/generators.hpp"

namespace bdtest {
namespace {

using Mask = std::uint64_t;
using AdjSets = std::vector<std::set<std::uint32_t>>;

bool planar_edges(std::size_t n, const std::vector<Edge>& edges) {
  using G = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                  boost::property<boost::vertex_index_t, int>>;
  G g(n);
  for (const auto& [u, v] : edges) boost::add_edge(u, v, g);
  return boost::boyer_myrvold_planarity_test(g);
}

AdjSets to_sets(const BoundedDegreeGraph& g) {
  AdjSets adj(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto nb = g.neighbors(v);
    adj[v].insert(nb.begin(), nb.end());
  }
  return adj;
}

// Shrinks the host without changing whether it has a minor whose smallest
// degree is `min_degree`: isolated vertices go when min_degree >= 1, leaves
// when >= 2, and degree-2 vertices are contracted into a neighbour when >= 3.
void reduce(AdjSets& adj, std::vector<bool>& alive, std::size_t min_degree) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t v = 0; v < adj.size(); ++v) {
      if (!alive[v]) continue;
      const std::size_t deg = adj[v].size();
      if ((deg == 0 && min_degree >= 1) || (deg == 1 && min_degree >= 2)) {
        for (auto w : adj[v]) adj[w].erase(v);
        adj[v].clear();
        alive[v] = false;
        changed = true;
      } else if (deg == 2 && min_degree >= 3) {
        const auto a = *adj[v].begin();
        const auto b = *adj[v].rbegin();
        adj[a].erase(v);
        adj[b].erase(v);
        adj[a].insert(b);
        adj[b].insert(a);
        adj[v].clear();
        alive[v] = false;
        changed = true;
      }
    }
  }
}

class ModelSearch {
 public:
  ModelSearch(std::vector<Mask> host_adj, const BoundedDegreeGraph& pattern, std::uint64_t budget)
      : host_(std::move(host_adj)), budget_(budget) {
    const std::size_t h = pattern.num_vertices();
    // Pattern order: highest degree first, then always the vertex with the
    // most already-ordered neighbours so branch sets grow next to each other.
    std::vector<bool> placed(h, false);
    for (std::size_t step = 0; step < h; ++step) {
      std::size_t best = h;
      std::pair<std::size_t, std::size_t> best_key{0, 0};
      for (Vertex p = 0; p < h; ++p) {
        if (placed[p]) continue;
        std::size_t links = 0;
        for (Vertex q : pattern.neighbors(p)) links += placed[q] ? 1 : 0;
        std::pair<std::size_t, std::size_t> key{links, pattern.degree(p)};
        if (best == h || key > best_key) {
          best = p;
          best_key = key;
        }
      }
      placed[best] = true;
      order_.push_back(static_cast<Vertex>(best));
    }
    std::vector<std::size_t> position(h);
    for (std::size_t t = 0; t < h; ++t) position[order_[t]] = t;
    earlier_.resize(h);
    for (std::size_t t = 0; t < h; ++t) {
      for (Vertex q : pattern.neighbors(order_[t])) {
        if (position[q] < t) earlier_[t].push_back(position[q]);
      }
      std::sort(earlier_[t].begin(), earlier_[t].end());
    }
    all_ = host_.size() == 64 ? ~Mask{0} : ((Mask{1} << host_.size()) - 1);
    // Candidate order: ascending host degree.
    by_degree_.resize(host_.size());
    std::iota(by_degree_.begin(), by_degree_.end(), 0);
    std::stable_sort(by_degree_.begin(), by_degree_.end(), [&](auto a, auto b) {
      return std::popcount(host_[a]) < std::popcount(host_[b]);
    });
    sets_.assign(h, 0);
  }

  bool run() { return dfs(); }

 private:
  Mask neighborhood(Mask m) const {
    Mask out = 0;
    while (m) {
      out |= host_[static_cast<std::size_t>(std::countr_zero(m))];
      m &= m - 1;
    }
    return out;
  }

  bool reachable(Mask from, Mask to, Mask free) const {
    Mask reach = from;
    while (true) {
      const Mask nb = neighborhood(reach);
      if (nb & to) return true;
      const Mask grow = nb & free & ~reach;
      if (!grow) return false;
      reach |= grow;
    }
  }

  bool feasible(Mask used) const {
    const Mask free = all_ & ~used;
    std::size_t unseeded = 0;
    for (std::size_t t = 0; t < sets_.size(); ++t) {
      if (sets_[t] == 0) {
        ++unseeded;
        continue;
      }
      for (auto s : earlier_[t]) {
        if (!(neighborhood(sets_[s]) & sets_[t]) && !reachable(sets_[s], sets_[t], free)) return false;
      }
    }
    return static_cast<std::size_t>(std::popcount(free)) >= unseeded;
  }

  std::string key() const {
    return std::string(reinterpret_cast<const char*>(sets_.data()), sets_.size() * sizeof(Mask));
  }

  template <typename F>
  bool for_each_candidate(Mask candidates, F&& f) {
    for (auto v : by_degree_) {
      if ((candidates >> v) & 1) {
        if (f(Mask{1} << v)) return true;
      }
    }
    return false;
  }

  bool dfs() {
    if (++nodes_ > budget_) throw SearchBudgetExceeded("minor search exceeded its node budget");
    Mask used = 0;
    for (auto m : sets_) used |= m;
    if (!feasible(used)) return false;
    const std::string k = key();
    if (failed_.contains(k)) return false;
    const bool found = expand(used);
    if (!found && failed_.size() < kMaxMemo) failed_.insert(k);
    return found;
  }

  bool expand(Mask used) {
    const Mask free = all_ & ~used;
    for (std::size_t t = 0; t < sets_.size(); ++t) {
      if (sets_[t] == 0) {
        if (earlier_[t].empty()) {
          return for_each_candidate(free, [&](Mask bit) { return with(t, bit); });
        }
        const std::size_t s = earlier_[t].front();
        const Mask touch = neighborhood(sets_[s]) & free;
        return for_each_candidate(touch, [&](Mask bit) { return with(t, bit) || with(s, bit); });
      }
      for (auto s : earlier_[t]) {
        if (neighborhood(sets_[s]) & sets_[t]) continue;
        if (for_each_candidate(neighborhood(sets_[s]) & free, [&](Mask bit) { return with(s, bit); })) return true;
        return for_each_candidate(neighborhood(sets_[t]) & free, [&](Mask bit) { return with(t, bit); });
      }
    }
    return true;
  }

  bool with(std::size_t t, Mask bit) {
    sets_[t] |= bit;
    const bool ok = dfs();
    sets_[t] &= ~bit;
    return ok;
  }

  static constexpr std::size_t kMaxMemo = 4'000'000;
  std::vector<Mask> host_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  Mask all_ = 0;
  std::vector<Vertex> order_;
  std::vector<std::vector<std::size_t>> earlier_;
  std::vector<std::uint32_t> by_degree_;
  std::vector<Mask> sets_;
  std::unordered_set<std::string> failed_;
};

bool connected(const BoundedDegreeGraph& g) {
  std::vector<std::uint32_t> label;
  return connected_components(g, label) <= 1;
}

}  // namespace

BoundedDegreeGraph pattern_from_name(const std::string& name) {
  static const std::regex complete(R"(K(\d))");
  static const std::regex bipartite(R"(K(\d)(\d))");
  static const std::regex cycle(R"(C(\d+))");
  static const std::regex path(R"(P(\d+))");
  std::smatch m;
  if (std::regex_match(name, m, complete)) return generate("complete(" + m[1].str() + ")", 0);
  if (std::regex_match(name, m, bipartite)) {
    return generate("complete_bipartite(" + m[1].str() + "," + m[2].str() + ")", 0);
  }
  if (std::regex_match(name, m, cycle)) return generate("cycle(" + m[1].str() + ")", 0);
  if (std::regex_match(name, m, path)) return generate("path(" + m[1].str() + ")", 0);
  if (name == "petersen") return generate("petersen()", 0);
  return load_edge_list(name);
}

bool is_planar(const BoundedDegreeGraph& g) { return planar_edges(g.num_vertices(), g.edges()); }

bool has_minor(const BoundedDegreeGraph& host, const BoundedDegreeGraph& pattern,
               const MinorSearchOptions& options) {
  const std::size_t h = pattern.num_vertices();
  if (h == 0) return true;
  if (h > options.max_pattern_vertices) {
    throw SearchBudgetExceeded("pattern has " + std::to_string(h) + " vertices; cap is " +
                               std::to_string(options.max_pattern_vertices));
  }
  std::size_t min_degree = h;
  for (Vertex p = 0; p < h; ++p) min_degree = std::min(min_degree, pattern.degree(p));

  AdjSets adj = to_sets(host);
  std::vector<bool> alive(adj.size(), true);
  reduce(adj, alive, min_degree);

  // Reduced host as an explicit graph.
  std::vector<std::uint32_t> index(adj.size(), 0);
  std::size_t n = 0;
  for (std::uint32_t v = 0; v < adj.size(); ++v) {
    if (alive[v]) index[v] = static_cast<std::uint32_t>(n++);
  }
  std::vector<Edge> edges;
  for (std::uint32_t v = 0; v < adj.size(); ++v) {
    if (!alive[v]) continue;
    for (auto w : adj[v]) {
      if (v < w) edges.emplace_back(index[v], index[w]);
    }
  }
  std::size_t max_deg = 0;
  for (std::uint32_t v = 0; v < adj.size(); ++v) max_deg = std::max(max_deg, adj[v].size());
  const BoundedDegreeGraph reduced(n, max_deg, edges);

  const bool pattern_connected = connected(pattern);
  const bool pattern_planar = !options.planarity_filter || is_planar(pattern);

  // A connected pattern lives inside one component; otherwise search the
  // whole host so that branch sets of different components stay disjoint.
  std::vector<std::vector<Vertex>> parts;
  if (pattern_connected) {
    std::vector<std::uint32_t> label;
    const auto count = connected_components(reduced, label);
    parts.resize(count);
    for (Vertex v = 0; v < n; ++v) parts[label[v]].push_back(v);
  } else {
    parts.emplace_back(n);
    std::iota(parts.back().begin(), parts.back().end(), 0);
  }

  for (const auto& part : parts) {
    if (part.size() < h) continue;
    const auto piece = reduced.induced(part);
    if (piece.num_edges() < pattern.num_edges()) continue;
    if (piece.observed_max_degree() < pattern.observed_max_degree() && piece.num_vertices() == h) continue;
    if (!pattern_planar && is_planar(piece)) continue;
    if (piece.num_vertices() > options.max_host_vertices || piece.num_vertices() > 64) {
      throw SearchBudgetExceeded("host component has " + std::to_string(piece.num_vertices()) +
                                 " vertices after reduction; cap is " +
                                 std::to_string(options.max_host_vertices));
    }
    std::vector<Mask> masks(piece.num_vertices(), 0);
    for (Vertex v = 0; v < piece.num_vertices(); ++v) {
      for (Vertex w : piece.neighbors(v)) masks[v] |= Mask{1} << w;
    }
    ModelSearch search(std::move(masks), pattern, options.node_budget);
    if (search.run()) return true;
  }
  return false;
}

bool is_planar_small(const BoundedDegreeGraph& g, const MinorSearchOptions& options) {
  static const BoundedDegreeGraph k5 = pattern_from_name("K5");
  static const BoundedDegreeGraph k33 = pattern_from_name("K33");
  return !has_minor(g, k5, options) && !has_minor(g, k33, options);
}

std::optional<std::size_t> edit_distance_to_minor_free(const BoundedDegreeGraph& g,
                                                       const std::vector<BoundedDegreeGraph>& patterns,
                                                       std::size_t cap, const MinorSearchOptions& options) {
  constexpr std::uint64_t kMaxSubsets = 2'000'000;
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  auto free_of_all = [&](const BoundedDegreeGraph& h) {
    return std::none_of(patterns.begin(), patterns.end(), [&](const auto& p) { return has_minor(h, p, options); });
  };
  std::uint64_t checked = 0;
  for (std::size_t size = 0; size <= std::min(cap, m); ++size) {
    // Lexicographic enumeration of size-element index subsets.
    std::vector<std::size_t> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      if (++checked > kMaxSubsets) {
        throw SearchBudgetExceeded("edit-distance enumeration exceeded " + std::to_string(kMaxSubsets) +
                                   " deletion sets");
      }
      std::vector<Edge> removed;
      for (auto i : pick) removed.push_back(edges[i]);
      if (free_of_all(g.without_edges(removed))) return size;
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == m - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace bdtest
