#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bdtest/canonical.hpp"
#include "bdtest/graph.hpp"

namespace bdtest {

// Induced subgraph on the vertices within distance `radius` of a root.
// Local vertex 0 is the root; vertices are listed in BFS order.
struct RootedBall {
  std::vector<Vertex> vertices;  // source ids, indexed by local id
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // local ids, first < second
  std::vector<std::uint32_t> depth;  // distance from the root
  std::size_t radius = 0;

  std::size_t size() const { return vertices.size(); }
  LabeledGraph to_labeled_graph() const;
};

// Canonical name of a rooted-isomorphism class of balls.
struct BallType {
  std::string code;
  std::size_t radius = 0;
  std::size_t degree_bound = 0;

  friend bool operator==(const BallType& a, const BallType& b) { return a.code == b.code; }
  friend auto operator<=>(const BallType& a, const BallType& b) { return a.code <=> b.code; }
};

RootedBall extract_ball(const BoundedDegreeGraph& g, Vertex root, std::size_t radius);

// Same ball, discovered through neighbor queries only; issues at most
// d * (ball size) queries.
RootedBall extract_ball(QueryOracle& oracle, Vertex root, std::size_t radius);

// Largest possible ball size for degree bound d and the given radius.
std::size_t moore_bound(std::size_t d, std::size_t radius);

BallType canonical_form(const RootedBall& ball, std::size_t degree_bound = 0);

// Backtracking search for a root-preserving isomorphism. Shares no code
// with canonical_form and serves as its oracle.
bool rooted_isomorphic(const RootedBall& a, const RootedBall& b);

// Distribution of ball types, exact (over all vertices) or sampled.
struct FrequencyVector {
  std::size_t radius = 0;
  std::map<std::string, double> entries;  // ball-type code -> frequency
  std::uint64_t sample_count = 0;

  double frequency(const std::string& code) const {
    auto it = entries.find(code);
    return it == entries.end() ? 0.0 : it->second;
  }
  std::size_t support_size() const { return entries.size(); }
};

// Builds a FrequencyVector from raw type counts.
FrequencyVector make_frequency_vector(std::size_t radius, const std::map<std::string, std::uint64_t>& counts);

FrequencyVector exact_frequency(const BoundedDegreeGraph& g, std::size_t radius);

// `samples` vertices drawn uniformly with replacement.
FrequencyVector sampled_frequency(QueryOracle& oracle, std::size_t radius, std::size_t samples,
                                  std::uint64_t seed);

// L1 distance between the two distributions; throws RadiusMismatch.
double rho_distance(const FrequencyVector& a, const FrequencyVector& b);

// Per-type contributions |a(T) - b(T)| over the union of supports.
std::vector<std::pair<std::string, double>> rho_breakdown(const FrequencyVector& a,
                                                          const FrequencyVector& b);

// Shannon entropy (nats) of the distribution.
double entropy(const FrequencyVector& f);

std::string to_hex(const std::string& bytes);
std::string from_hex(const std::string& hex);

nlohmann::json to_json(const FrequencyVector& f);
FrequencyVector frequency_vector_from_json(const nlohmann::json& j);

}  // namespace bdtest
