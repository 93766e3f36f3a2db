#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bdtest/error.hpp"
#include "bdtest/graph.hpp"
#include "json.hpp"

namespace bdtest {

// Cut edges S together with the components of G \ S.
struct PartitionCut {
  std::vector<Edge> cut_edges;                  // sorted, u < v
  std::vector<std::vector<Vertex>> components;  // each sorted; listed by smallest vertex
  std::size_t k = 0;
  double delta = 0.0;  // |S| / n

  std::size_t max_component() const;
};

// Builds the PartitionCut for `cut` and checks every invariant: cut edges
// exist in g, components of g \ cut have at most k vertices and no cut edge
// lies inside one component. Throws Error otherwise.
PartitionCut make_partition_cut(const BoundedDegreeGraph& g, std::vector<Edge> cut, std::size_t k);

// Connected vertex sets of size <= k containing v, each sorted.
using ConnectedSet = std::vector<Vertex>;
std::vector<ConnectedSet> enumerate_connected_sets(const BoundedDegreeGraph& g, Vertex v, std::size_t k);

// Calls f once for every connected set of size <= k in g (unsorted span).
void for_each_connected_set(const BoundedDegreeGraph& g, std::size_t k,
                            const std::function<void(std::span<const Vertex>)>& f);

// Minimum |S| partition by dynamic programming over vertex subsets.
// Throws SearchBudgetExceeded when n exceeds max_vertices.
PartitionCut find_partition_exact(const BoundedDegreeGraph& g, std::size_t k, std::size_t max_vertices = 16);

// Grows components one at a time from the smallest unassigned vertex,
// always adding the frontier vertex with the most edges into the component
// (ties: closer to the seed, then smaller id). With restarts > 0, further
// attempts use seed orders shuffled from `seed` and the smallest cut wins.
PartitionCut find_partition_greedy(const BoundedDegreeGraph& g, std::size_t k, std::uint64_t seed = 0,
                                   std::size_t restarts = 0);

// Isomorphism type of the pair (K, N_R(K)): canonical code of the induced
// R-neighbourhood of K with the vertices of K marked.
std::string pair_type(const BoundedDegreeGraph& g, std::span<const Vertex> k_set, std::size_t radius);

// Cheap isomorphism invariant of (K, N_R(K)) for R >= 1: |K|, edges inside
// K, edges leaving K and the degree histogram of K.
std::string pair_invariant(const BoundedDegreeGraph& g, std::span<const Vertex> k_set);

struct LocalCutRow {
  double p = 0.0;
  std::size_t count = 0;     // realizations in the source graph
  std::size_t boundary = 0;  // |dK| for this type
  std::string invariant;
};

// p_R over pair types. A complete table lists every type of its source graph
// and answers 1 for anything unseen. A positive-only table lists just the
// types with p > 0; it is exact on its source graph (missing means 0) and
// refuses other graphs.
struct LocalCutTable {
  std::size_t R = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  bool complete = true;
  std::string source;  // fingerprint of the source graph
  std::map<std::string, LocalCutRow> rows;

  double lookup(const std::string& code) const;
};

enum class TableMode { complete, positive_only };

std::string graph_fingerprint(const BoundedDegreeGraph& g);

LocalCutTable build_local_cut_table(const BoundedDegreeGraph& g, const PartitionCut& cut, std::size_t R,
                                    TableMode mode = TableMode::complete);

// Sum over rows of p * count * |dK|; equals 2|S| on the source graph.
double boundary_identity(const LocalCutTable& table);

nlohmann::json to_json(const LocalCutTable& table);
LocalCutTable local_cut_table_from_json(const nlohmann::json& j);

// Connected sets of g with p_R > 0 under `table`, flattened.
struct WeightedSets {
  std::vector<Vertex> vertices;
  std::vector<std::size_t> offsets{0};
  std::vector<double> p;

  std::size_t size() const { return p.size(); }
  std::span<const Vertex> set(std::size_t i) const {
    return {vertices.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
};

// Throws Error if the table is positive-only and g is not its source.
WeightedSets weigh_connected_sets(const BoundedDegreeGraph& g, const LocalCutTable& table);

struct QProfile {
  std::size_t R = 0;
  std::vector<double> values;
  std::size_t low_count = 0;  // vertices with q < 1/2
};

QProfile q_profile(const BoundedDegreeGraph& g, const LocalCutTable& table);
QProfile q_profile(const WeightedSets& sets, std::size_t n, std::size_t R);

class NoAdmissibleR : public Error {
 public:
  NoAdmissibleR(const std::string& what, QProfile best) : Error(what), best_(std::move(best)) {}
  const QProfile& best() const { return best_; }

 private:
  QProfile best_;
};

struct RChoice {
  std::size_t R = 0;
  QProfile profile;
  LocalCutTable table;
};

// Smallest R in {k, 2k, ...}, R <= max_R, with low_count <= eps * n / (2d).
RChoice choose_R(const BoundedDegreeGraph& g, const PartitionCut& cut, double eps, std::size_t max_R = 12,
                 TableMode mode = TableMode::positive_only);

struct LocalCut {
  std::vector<Edge> edges;  // S~, sorted
  std::size_t selected = 0;
  std::size_t boundary_edges = 0;  // |S'|
  std::size_t leftover_edges = 0;  // |S''|
  std::size_t uncovered = 0;       // |V \ W|
  std::size_t max_component = 0;
};

// min(2 ln(2d/eps) p, 1), clamped to [0, 1].
double selection_probability(double p, double eps, std::size_t d);

// Reusable sampler of the randomized local cut S~ on one graph.
class LocalCutSampler {
 public:
  LocalCutSampler(const BoundedDegreeGraph& g, const LocalCutTable& table, double eps, std::size_t d);

  // Deterministic per seed. Throws Error if a component exceeds k.
  LocalCut sample(std::uint64_t seed) const;

  const WeightedSets& sets() const { return sets_; }

 private:
  const BoundedDegreeGraph* g_;
  std::size_t k_;
  WeightedSets sets_;
  std::vector<double> prob_;
};

LocalCut sample_local_cut(const BoundedDegreeGraph& g, const LocalCutTable& table, double eps, std::size_t d,
                          std::uint64_t seed);

// Same process on a different graph g0; requires a complete table.
LocalCut transfer_cut(const BoundedDegreeGraph& g0, const LocalCutTable& table, double eps, std::size_t d,
                      std::uint64_t seed);

}  // namespace bdtest
