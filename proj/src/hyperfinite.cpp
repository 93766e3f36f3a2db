#include "bdtest/hyperfinite.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "bdtest/canonical.hpp"
#include "bdtest/neighborhood.hpp"
#include "bdtest/random.hpp"

namespace bdtest {
namespace {

// ESU enumeration. `cover[u]` counts how many vertices of the current set are
// u itself or a neighbour of u; a vertex may join the extension only while its
// count is zero, which makes every connected set appear exactly once.
class SetEnumerator {
 public:
  SetEnumerator(const BoundedDegreeGraph& g, std::size_t k, const std::function<void(std::span<const Vertex>)>& f)
      : g_(g), k_(k), f_(f), cover_(g.num_vertices(), 0) {}

  void run_from(Vertex root, bool only_larger) {
    root_ = root;
    only_larger_ = only_larger;
    sub_.assign(1, root);
    add_cover(root, +1);
    std::vector<Vertex> ext;
    for (Vertex u : g_.neighbors(root)) {
      if (allowed(u)) ext.push_back(u);
    }
    extend(std::move(ext));
    add_cover(root, -1);
  }

 private:
  bool allowed(Vertex u) const { return u != root_ && (!only_larger_ || u > root_); }

  void add_cover(Vertex w, int delta) {
    cover_[w] += delta;
    for (Vertex u : g_.neighbors(w)) cover_[u] += delta;
  }

  void extend(std::vector<Vertex> ext) {
    f_(sub_);
    if (sub_.size() >= k_) return;
    while (!ext.empty()) {
      const Vertex w = ext.back();
      ext.pop_back();
      std::vector<Vertex> next = ext;
      for (Vertex u : g_.neighbors(w)) {
        if (cover_[u] == 0 && allowed(u)) next.push_back(u);
      }
      sub_.push_back(w);
      add_cover(w, +1);
      extend(std::move(next));
      add_cover(w, -1);
      sub_.pop_back();
    }
  }

  const BoundedDegreeGraph& g_;
  std::size_t k_;
  const std::function<void(std::span<const Vertex>)>& f_;
  std::vector<int> cover_;
  std::vector<Vertex> sub_;
  Vertex root_ = 0;
  bool only_larger_ = true;
};

std::vector<Edge> edges_between_parts(const BoundedDegreeGraph& g, const std::vector<std::uint32_t>& part) {
  std::vector<Edge> cut;
  for (const auto& [u, v] : g.edges()) {
    if (part[u] != part[v]) cut.emplace_back(u, v);
  }
  return cut;
}

// Components of g after deleting the sorted edge list `removed`.
std::vector<std::uint32_t> components_without(const BoundedDegreeGraph& g, const std::vector<Edge>& removed,
                                              std::size_t& count) {
  std::vector<std::uint32_t> parent(g.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) {
    if (std::binary_search(removed.begin(), removed.end(), e)) continue;
    const auto a = find(e.first), b = find(e.second);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::uint32_t> label(g.num_vertices());
  std::unordered_map<std::uint32_t, std::uint32_t> ids;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto [it, fresh] = ids.try_emplace(find(v), static_cast<std::uint32_t>(ids.size()));
    label[v] = it->second;
  }
  count = ids.size();
  return label;
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Sorted copy of a connected set; most sets are tiny.
ConnectedSet sorted_set(std::span<const Vertex> s) {
  ConnectedSet out(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::size_t PartitionCut::max_component() const {
  std::size_t best = 0;
  for (const auto& c : components) best = std::max(best, c.size());
  return best;
}

PartitionCut make_partition_cut(const BoundedDegreeGraph& g, std::vector<Edge> cut, std::size_t k) {
  for (auto& e : cut) {
    e = make_edge(e.first, e.second);
    if (e.second >= g.num_vertices() || !g.has_edge(e.first, e.second)) {
      throw Error("cut edge (" + std::to_string(e.first) + ", " + std::to_string(e.second) + ") is not in the graph");
    }
  }
  std::sort(cut.begin(), cut.end());
  cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
  std::size_t count = 0;
  const auto label = components_without(g, cut, count);
  PartitionCut out;
  out.components.resize(count);
  for (Vertex v = 0; v < g.num_vertices(); ++v) out.components[label[v]].push_back(v);
  for (const auto& c : out.components) {
    if (c.size() > k) {
      throw Error("component of size " + std::to_string(c.size()) + " exceeds k = " + std::to_string(k));
    }
  }
  for (const auto& [u, v] : cut) {
    if (label[u] == label[v]) {
      throw Error("cut edge (" + std::to_string(u) + ", " + std::to_string(v) + ") lies inside one component");
    }
  }
  out.cut_edges = std::move(cut);
  out.k = k;
  out.delta = g.num_vertices() == 0 ? 0.0
                                    : static_cast<double>(out.cut_edges.size()) / static_cast<double>(g.num_vertices());
  return out;
}

void for_each_connected_set(const BoundedDegreeGraph& g, std::size_t k,
                            const std::function<void(std::span<const Vertex>)>& f) {
  if (k == 0) return;
  SetEnumerator e(g, k, f);
  for (Vertex v = 0; v < g.num_vertices(); ++v) e.run_from(v, true);
}

std::vector<ConnectedSet> enumerate_connected_sets(const BoundedDegreeGraph& g, Vertex v, std::size_t k) {
  if (v >= g.num_vertices()) throw OutOfRange("vertex " + std::to_string(v) + " out of range");
  std::vector<ConnectedSet> out;
  if (k == 0) return out;
  const std::function<void(std::span<const Vertex>)> f = [&](std::span<const Vertex> s) {
    out.push_back(sorted_set(s));
  };
  SetEnumerator e(g, k, f);
  e.run_from(v, false);
  return out;
}

PartitionCut find_partition_exact(const BoundedDegreeGraph& g, std::size_t k, std::size_t max_vertices) {
  const std::size_t n = g.num_vertices();
  if (n > max_vertices || n > 24) {
    throw SearchBudgetExceeded("exact partition limited to " + std::to_string(std::min<std::size_t>(max_vertices, 24)) +
                               " vertices, graph has " + std::to_string(n));
  }
  if (k == 0) throw Error("k must be at least 1");
  using Mask = std::uint32_t;
  std::vector<Mask> adj(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.neighbors(v)) adj[v] |= Mask{1} << w;
  }
  // Candidate parts grouped by their smallest vertex.
  std::vector<std::vector<Mask>> parts(n);
  for_each_connected_set(g, k, [&](std::span<const Vertex> s) {
    Mask m = 0;
    for (Vertex v : s) m |= Mask{1} << v;
    parts[s[0]].push_back(m);
  });
  constexpr auto kUnknown = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> best(std::size_t{1} << n, kUnknown);
  std::vector<Mask> choice(std::size_t{1} << n, 0);
  best[0] = 0;
  // Masks in increasing order: every proper sub-mask is already solved.
  for (Mask mask = 1; mask < (Mask{1} << n); ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    for (Mask part : parts[low]) {
      if ((part & mask) != part) continue;
      const Mask rest = mask & ~part;
      if (best[rest] == kUnknown) continue;
      std::uint32_t crossing = 0;
      for (Mask m = part; m; m &= m - 1) {
        crossing += static_cast<std::uint32_t>(std::popcount(adj[static_cast<std::size_t>(std::countr_zero(m))] & rest));
      }
      if (best[rest] + crossing < best[mask]) {
        best[mask] = best[rest] + crossing;
        choice[mask] = part;
      }
    }
  }
  std::vector<std::uint32_t> label(n, 0);
  std::uint32_t id = 0;
  for (Mask mask = n == 0 ? 0 : (Mask{1} << n) - 1; mask; mask &= ~choice[mask], ++id) {
    for (Mask m = choice[mask]; m; m &= m - 1) label[static_cast<std::size_t>(std::countr_zero(m))] = id;
  }
  return make_partition_cut(g, edges_between_parts(g, label), k);
}

namespace {

std::vector<std::uint32_t> grow_partition(const BoundedDegreeGraph& g, std::size_t k,
                                          const std::vector<Vertex>& seed_order) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> part(n, kUnset);
  std::vector<std::uint32_t> dist(n, kUnset);
  std::uint32_t id = 0;
  for (Vertex seed : seed_order) {
    if (part[seed] != kUnset) continue;
    // Distances from the seed through unassigned vertices, up to depth k.
    std::vector<Vertex> touched{seed};
    dist[seed] = 0;
    for (std::size_t head = 0; head < touched.size(); ++head) {
      const Vertex u = touched[head];
      if (dist[u] >= k) continue;
      for (Vertex w : g.neighbors(u)) {
        if (part[w] == kUnset && dist[w] == kUnset) {
          dist[w] = dist[u] + 1;
          touched.push_back(w);
        }
      }
    }
    std::vector<Vertex> comp{seed};
    part[seed] = id;
    while (comp.size() < k) {
      Vertex best = 0;
      bool found = false;
      std::tuple<std::size_t, std::uint32_t, Vertex> best_key{};
      for (Vertex u : comp) {
        for (Vertex w : g.neighbors(u)) {
          if (part[w] != kUnset) continue;
          std::size_t links = 0;
          for (Vertex x : g.neighbors(w)) links += part[x] == id ? 1 : 0;
          // Larger links first, then smaller distance, then smaller id.
          std::tuple<std::size_t, std::uint32_t, Vertex> key{std::numeric_limits<std::size_t>::max() - links, dist[w], w};
          if (!found || key < best_key) {
            found = true;
            best_key = key;
            best = w;
          }
        }
      }
      if (!found) break;
      part[best] = id;
      comp.push_back(best);
    }
    for (Vertex v : touched) dist[v] = kUnset;
    ++id;
  }
  return part;
}

}  // namespace

PartitionCut find_partition_greedy(const BoundedDegreeGraph& g, std::size_t k, std::uint64_t seed,
                                   std::size_t restarts) {
  if (k == 0) throw Error("k must be at least 1");
  std::vector<Vertex> order(g.num_vertices());
  std::iota(order.begin(), order.end(), 0);
  auto best = edges_between_parts(g, grow_partition(g, k, order));
  Rng rng(mix_seed(seed));
  for (std::size_t r = 0; r < restarts; ++r) {
    shuffle_range(order.begin(), order.end(), rng);
    auto cut = edges_between_parts(g, grow_partition(g, k, order));
    if (cut.size() < best.size()) best = std::move(cut);
  }
  return make_partition_cut(g, std::move(best), k);
}

std::string pair_invariant(const BoundedDegreeGraph& g, std::span<const Vertex> k_set) {
  std::string out(3 + g.max_degree() + 1, '\0');
  std::size_t twice_internal = 0, degree_sum = 0;
  for (Vertex v : k_set) {
    const auto nb = g.neighbors(v);
    degree_sum += nb.size();
    ++out[3 + nb.size()];
    for (Vertex w : nb) {
      if (std::find(k_set.begin(), k_set.end(), w) != k_set.end()) ++twice_internal;
    }
  }
  out[0] = static_cast<char>(k_set.size());
  out[1] = static_cast<char>(twice_internal / 2);
  out[2] = static_cast<char>(degree_sum - twice_internal);
  return out;
}

std::string pair_type(const BoundedDegreeGraph& g, std::span<const Vertex> k_set, std::size_t radius) {
  std::unordered_map<Vertex, std::uint32_t> local;
  std::vector<Vertex> order;
  std::vector<std::uint32_t> depth;
  for (Vertex v : k_set) {
    if (local.try_emplace(v, static_cast<std::uint32_t>(order.size())).second) {
      order.push_back(v);
      depth.push_back(0);
    }
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    if (depth[head] >= radius) continue;
    for (Vertex w : g.neighbors(order[head])) {
      if (local.try_emplace(w, static_cast<std::uint32_t>(order.size())).second) {
        order.push_back(w);
        depth.push_back(depth[head] + 1);
      }
    }
  }
  LabeledGraph lg;
  lg.adjacency.resize(order.size());
  lg.labels.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    lg.labels[i] = depth[i] == 0 ? "k" : std::to_string(depth[i]);
    for (Vertex w : g.neighbors(order[i])) {
      auto it = local.find(w);
      if (it != local.end()) lg.adjacency[i].push_back(it->second);
    }
  }
  return "R" + std::to_string(radius) + "|" + canonical_certificate(lg);
}

double LocalCutTable::lookup(const std::string& code) const {
  auto it = rows.find(code);
  if (it != rows.end()) return it->second.p;
  return complete ? 1.0 : 0.0;
}

std::string graph_fingerprint(const BoundedDegreeGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [u, v] : g.edges()) h = fnv1a(h, (static_cast<std::uint64_t>(u) << 32) | v);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::to_string(g.num_vertices()) + ":" + std::to_string(g.num_edges()) + ":" + buf;
}

LocalCutTable build_local_cut_table(const BoundedDegreeGraph& g, const PartitionCut& cut, std::size_t R,
                                    TableMode mode) {
  if (mode == TableMode::positive_only && R == 0) throw Error("positive-only tables need R >= 1");
  std::set<ConnectedSet> components;
  std::unordered_set<std::string> wanted;
  for (const auto& c : cut.components) {
    if (c.size() > cut.k) throw Error("partition component exceeds k");
    components.insert(c);
    wanted.insert(pair_invariant(g, c));
  }
  LocalCutTable table;
  table.R = R;
  table.k = cut.k;
  table.d = g.max_degree();
  table.complete = mode == TableMode::complete;
  table.source = graph_fingerprint(g);
  std::unordered_map<std::string, std::size_t> hits;
  for_each_connected_set(g, cut.k, [&](std::span<const Vertex> s) {
    std::string inv = pair_invariant(g, s);
    if (!table.complete && !wanted.contains(inv)) return;
    auto set = sorted_set(s);
    auto code = pair_type(g, set, R);
    auto& row = table.rows[code];
    if (row.count++ == 0) {
      row.boundary = static_cast<unsigned char>(inv[2]);
      row.invariant = std::move(inv);
    }
    if (components.contains(set)) ++hits[code];
  });
  for (auto it = table.rows.begin(); it != table.rows.end();) {
    const auto h = hits.find(it->first);
    const std::size_t hit = h == hits.end() ? 0 : h->second;
    it->second.p = static_cast<double>(hit) / static_cast<double>(it->second.count);
    if (!table.complete && hit == 0) {
      it = table.rows.erase(it);
    } else {
      ++it;
    }
  }
  return table;
}

double boundary_identity(const LocalCutTable& table) {
  double total = 0;
  for (const auto& [code, row] : table.rows) {
    total += row.p * static_cast<double>(row.count) * static_cast<double>(row.boundary);
  }
  return total;
}

nlohmann::json to_json(const LocalCutTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [code, row] : table.rows) {
    rows.push_back({{"type", to_hex(code)},
                    {"p", row.p},
                    {"count", row.count},
                    {"boundary", row.boundary},
                    {"invariant", to_hex(row.invariant)}});
  }
  return {{"R", table.R},           {"k", table.k},           {"d", table.d},
          {"complete", table.complete}, {"source", table.source}, {"rows", rows}};
}

LocalCutTable local_cut_table_from_json(const nlohmann::json& j) {
  LocalCutTable t;
  try {
    t.R = j.at("R").get<std::size_t>();
    t.k = j.at("k").get<std::size_t>();
    t.d = j.at("d").get<std::size_t>();
    t.complete = j.at("complete").get<bool>();
    t.source = j.at("source").get<std::string>();
    for (const auto& r : j.at("rows")) {
      LocalCutRow row;
      row.p = r.at("p").get<double>();
      row.count = r.at("count").get<std::size_t>();
      row.boundary = r.at("boundary").get<std::size_t>();
      row.invariant = from_hex(r.at("invariant").get<std::string>());
      if (row.p < 0 || row.p > 1) throw Error("p outside [0, 1]");
      t.rows.emplace(from_hex(r.at("type").get<std::string>()), std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("local cut table: ") + e.what());
  }
  return t;
}

WeightedSets weigh_connected_sets(const BoundedDegreeGraph& g, const LocalCutTable& table) {
  if (!table.complete && graph_fingerprint(g) != table.source) {
    throw Error("positive-only table applied to a graph other than its source");
  }
  std::unordered_set<std::string> wanted;
  for (const auto& [code, row] : table.rows) wanted.insert(row.invariant);
  WeightedSets out;
  for_each_connected_set(g, table.k, [&](std::span<const Vertex> s) {
    if (!table.complete && !wanted.contains(pair_invariant(g, s))) return;
    auto set = sorted_set(s);
    const double p = table.lookup(pair_type(g, set, table.R));
    if (p <= 0) return;
    out.vertices.insert(out.vertices.end(), set.begin(), set.end());
    out.offsets.push_back(out.vertices.size());
    out.p.push_back(p);
  });
  return out;
}

QProfile q_profile(const WeightedSets& sets, std::size_t n, std::size_t R) {
  QProfile q;
  q.R = R;
  q.values.assign(n, 0.0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (Vertex v : sets.set(i)) q.values[v] += sets.p[i];
  }
  q.low_count = static_cast<std::size_t>(std::count_if(q.values.begin(), q.values.end(), [](double x) { return x < 0.5; }));
  return q;
}

QProfile q_profile(const BoundedDegreeGraph& g, const LocalCutTable& table) {
  return q_profile(weigh_connected_sets(g, table), g.num_vertices(), table.R);
}

RChoice choose_R(const BoundedDegreeGraph& g, const PartitionCut& cut, double eps, std::size_t max_R,
                 TableMode mode) {
  const std::size_t k = cut.k;
  const double d = static_cast<double>(std::max<std::size_t>(g.max_degree(), 1));
  const double allowed = eps * static_cast<double>(g.num_vertices()) / (2.0 * d);
  QProfile best;
  bool have_best = false;
  for (std::size_t R = k; R <= max_R; R += k) {
    auto table = build_local_cut_table(g, cut, R, mode);
    auto profile = q_profile(g, table);
    if (static_cast<double>(profile.low_count) <= allowed) return {R, std::move(profile), std::move(table)};
    if (!have_best || profile.low_count < best.low_count) {
      best = std::move(profile);
      have_best = true;
    }
  }
  throw NoAdmissibleR("no R in {" + std::to_string(k) + ", " + std::to_string(2 * k) + ", ...} up to " +
                          std::to_string(max_R) + " has low_count <= " + std::to_string(allowed) +
                          (have_best ? "; best low_count " + std::to_string(best.low_count) + " at R = " +
                                           std::to_string(best.R)
                                     : std::string("; no radius tried")),
                      std::move(best));
}

double selection_probability(double p, double eps, std::size_t d) {
  const double x = 2.0 * std::log(2.0 * static_cast<double>(d) / eps) * p;
  return std::clamp(x, 0.0, 1.0);
}

LocalCutSampler::LocalCutSampler(const BoundedDegreeGraph& g, const LocalCutTable& table, double eps, std::size_t d)
    : g_(&g), k_(table.k), sets_(weigh_connected_sets(g, table)) {
  if (!(eps > 0)) throw Error("eps must be positive");
  prob_.reserve(sets_.size());
  for (double p : sets_.p) prob_.push_back(selection_probability(p, eps, d));
}

LocalCut LocalCutSampler::sample(std::uint64_t seed) const {
  const auto& g = *g_;
  Rng rng(mix_seed(seed));
  std::vector<char> in_w(g.num_vertices(), 0);
  std::vector<char> in_k(g.num_vertices(), 0);
  std::vector<Edge> boundary;
  LocalCut out;
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (!(uniform_unit(rng) < prob_[i])) continue;
    ++out.selected;
    const auto set = sets_.set(i);
    for (Vertex v : set) in_k[v] = in_w[v] = 1;
    for (Vertex v : set) {
      for (Vertex w : g.neighbors(v)) {
        if (!in_k[w]) boundary.push_back(make_edge(v, w));
      }
    }
    for (Vertex v : set) in_k[v] = 0;
  }
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  out.boundary_edges = boundary.size();
  out.edges = std::move(boundary);
  for (const auto& [u, v] : g.edges()) {
    if (!in_w[u] && !in_w[v]) {
      out.edges.emplace_back(u, v);
      ++out.leftover_edges;
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.uncovered = static_cast<std::size_t>(std::count(in_w.begin(), in_w.end(), 0));
  std::size_t count = 0;
  const auto label = components_without(g, out.edges, count);
  std::vector<std::size_t> sizes(count, 0);
  for (auto l : label) out.max_component = std::max(out.max_component, ++sizes[l]);
  if (out.max_component > k_) {
    throw Error("local cut left a component of size " + std::to_string(out.max_component) + " > k = " +
                std::to_string(k_));
  }
  return out;
}

LocalCut sample_local_cut(const BoundedDegreeGraph& g, const LocalCutTable& table, double eps, std::size_t d,
                          std::uint64_t seed) {
  return LocalCutSampler(g, table, eps, d).sample(seed);
}

LocalCut transfer_cut(const BoundedDegreeGraph& g0, const LocalCutTable& table, double eps, std::size_t d,
                      std::uint64_t seed) {
  if (!table.complete) throw Error("transfer needs a complete table");
  return LocalCutSampler(g0, table, eps, d).sample(seed);
}

}  // namespace bdtest
