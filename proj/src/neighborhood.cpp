#include "bdtest/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <unordered_map>

#include "bdtest/error.hpp"
#include "bdtest/random.hpp"

namespace bdtest {

LabeledGraph RootedBall::to_labeled_graph() const {
  LabeledGraph lg;
  lg.adjacency.resize(size());
  lg.labels.resize(size());
  for (const auto& [a, b] : edges) {
    lg.adjacency[a].push_back(b);
    lg.adjacency[b].push_back(a);
  }
  // Distance from the root is preserved by rooted isomorphisms, so it is a
  // valid colour; depth 0 singles out the root.
  for (std::size_t v = 0; v < size(); ++v) lg.labels[v] = std::to_string(depth[v]);
  return lg;
}

namespace {

template <typename NeighborsFn>
RootedBall bfs_ball(Vertex root, std::size_t radius, NeighborsFn&& neighbors_of) {
  RootedBall ball;
  ball.radius = radius;
  std::unordered_map<Vertex, std::uint32_t> local;
  ball.vertices.push_back(root);
  ball.depth.push_back(0);
  local.emplace(root, 0);
  std::vector<std::vector<Vertex>> adj;
  for (std::size_t head = 0; head < ball.vertices.size(); ++head) {
    const Vertex u = ball.vertices[head];
    const std::uint32_t du = ball.depth[head];
    adj.push_back(neighbors_of(u));
    if (du == radius) continue;
    for (Vertex w : adj.back()) {
      if (local.emplace(w, static_cast<std::uint32_t>(ball.vertices.size())).second) {
        ball.vertices.push_back(w);
        ball.depth.push_back(du + 1);
      }
    }
  }
  for (std::uint32_t a = 0; a < ball.vertices.size(); ++a) {
    for (Vertex w : adj[a]) {
      auto it = local.find(w);
      if (it != local.end() && a < it->second) ball.edges.emplace_back(a, it->second);
    }
  }
  std::sort(ball.edges.begin(), ball.edges.end());
  return ball;
}

}  // namespace

RootedBall extract_ball(const BoundedDegreeGraph& g, Vertex root, std::size_t radius) {
  if (root >= g.num_vertices()) throw OutOfRange("root " + std::to_string(root) + " out of range");
  return bfs_ball(root, radius, [&](Vertex u) {
    auto nb = g.neighbors(u);
    return std::vector<Vertex>(nb.begin(), nb.end());
  });
}

RootedBall extract_ball(QueryOracle& oracle, Vertex root, std::size_t radius) {
  if (root >= oracle.num_vertices()) throw OutOfRange("root " + std::to_string(root) + " out of range");
  return bfs_ball(root, radius, [&](Vertex u) {
    std::vector<Vertex> nb;
    for (std::size_t i = 1; i <= oracle.max_degree(); ++i) {
      auto w = oracle.neighbor_query(u, i);
      if (!w) break;
      nb.push_back(*w);
    }
    return nb;
  });
}

std::size_t moore_bound(std::size_t d, std::size_t radius) {
  std::size_t total = 1, layer = 1;
  for (std::size_t r = 1; r <= radius; ++r) {
    layer *= (r == 1 ? d : (d == 0 ? 0 : d - 1));
    total += layer;
  }
  return total;
}

BallType canonical_form(const RootedBall& ball, std::size_t degree_bound) {
  BallType t;
  t.radius = ball.radius;
  t.degree_bound = degree_bound;
  t.code = "r" + std::to_string(ball.radius) + "|" + canonical_certificate(ball.to_labeled_graph());
  return t;
}

bool rooted_isomorphic(const RootedBall& a, const RootedBall& b) {
  const std::size_t n = a.size();
  if (n != b.size() || a.edges.size() != b.edges.size()) return false;
  if (n == 0) return true;
  auto adjacency = [n](const RootedBall& x) {
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (const auto& [u, v] : x.edges) m[u][v] = m[v][u] = true;
    return m;
  };
  const auto ma = adjacency(a), mb = adjacency(b);
  auto degrees = [n](const std::vector<std::vector<bool>>& m) {
    std::vector<std::size_t> d(n, 0);
    for (std::size_t u = 0; u < n; ++u) d[u] = static_cast<std::size_t>(std::count(m[u].begin(), m[u].end(), true));
    return d;
  };
  auto distances = [n](const std::vector<std::vector<bool>>& m) {
    std::vector<std::size_t> dist(n, static_cast<std::size_t>(-1));
    std::deque<std::size_t> q{0};
    dist[0] = 0;
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (std::size_t w = 0; w < n; ++w) {
        if (m[u][w] && dist[w] == static_cast<std::size_t>(-1)) {
          dist[w] = dist[u] + 1;
          q.push_back(w);
        }
      }
    }
    return dist;
  };
  const auto da = degrees(ma), db = degrees(mb);
  const auto ha = distances(ma), hb = distances(mb);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return ha[x] < ha[y]; });
  if (order[0] != 0) return false;

  std::vector<std::size_t> map(n, n);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t i) -> bool {
    if (i == n) return true;
    const std::size_t x = order[i];
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y] || da[x] != db[y] || ha[x] != hb[y]) continue;
      if (i == 0 && y != 0) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        const std::size_t xp = order[j];
        ok = ma[x][xp] == mb[y][map[xp]];
      }
      if (!ok) continue;
      map[x] = y;
      used[y] = true;
      if (extend(i + 1)) return true;
      used[y] = false;
      map[x] = n;
    }
    return false;
  };
  return extend(0);
}

FrequencyVector make_frequency_vector(std::size_t radius, const std::map<std::string, std::uint64_t>& counts) {
  FrequencyVector f;
  f.radius = radius;
  for (const auto& [code, c] : counts) f.sample_count += c;
  for (const auto& [code, c] : counts) {
    f.entries.emplace(code, static_cast<double>(c) / static_cast<double>(f.sample_count));
  }
  return f;
}

FrequencyVector exact_frequency(const BoundedDegreeGraph& g, std::size_t radius) {
  std::map<std::string, std::uint64_t> counts;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    ++counts[canonical_form(extract_ball(g, v, radius)).code];
  }
  return make_frequency_vector(radius, counts);
}

FrequencyVector sampled_frequency(QueryOracle& oracle, std::size_t radius, std::size_t samples,
                                  std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  std::map<std::string, std::uint64_t> counts;
  const auto n = oracle.num_vertices();
  if (n == 0) return make_frequency_vector(radius, counts);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto v = static_cast<Vertex>(uniform_below(rng, n));
    ++counts[canonical_form(extract_ball(oracle, v, radius)).code];
  }
  return make_frequency_vector(radius, counts);
}

std::vector<std::pair<std::string, double>> rho_breakdown(const FrequencyVector& a, const FrequencyVector& b) {
  if (a.radius != b.radius) {
    throw RadiusMismatch("radius " + std::to_string(a.radius) + " vs " + std::to_string(b.radius));
  }
  std::vector<std::pair<std::string, double>> out;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() || ib != b.entries.end()) {
    if (ib == b.entries.end() || (ia != a.entries.end() && ia->first < ib->first)) {
      out.emplace_back(ia->first, ia->second);
      ++ia;
    } else if (ia == a.entries.end() || ib->first < ia->first) {
      out.emplace_back(ib->first, ib->second);
      ++ib;
    } else {
      out.emplace_back(ia->first, std::abs(ia->second - ib->second));
      ++ia;
      ++ib;
    }
  }
  return out;
}

double rho_distance(const FrequencyVector& a, const FrequencyVector& b) {
  double total = 0.0;
  for (const auto& [code, diff] : rho_breakdown(a, b)) total += diff;
  return total;
}

double entropy(const FrequencyVector& f) {
  double h = 0.0;
  for (const auto& [code, p] : f.entries) {
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

std::string to_hex(const std::string& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out += kDigits[c >> 4];
    out += kDigits[c & 0xf];
  }
  return out;
}

std::string from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw Error("odd-length hex string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error("invalid hex digit");
  };
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out += static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1]));
  }
  return out;
}

nlohmann::json to_json(const FrequencyVector& f) {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [code, p] : f.entries) entries[to_hex(code)] = p;
  return {{"radius", f.radius}, {"sample_count", f.sample_count}, {"entries", entries}};
}

FrequencyVector frequency_vector_from_json(const nlohmann::json& j) {
  FrequencyVector f;
  f.radius = j.at("radius").get<std::size_t>();
  f.sample_count = j.at("sample_count").get<std::uint64_t>();
  for (const auto& [hex, p] : j.at("entries").items()) f.entries.emplace(from_hex(hex), p.get<double>());
  return f;
}

}  // namespace bdtest
