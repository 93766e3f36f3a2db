#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bdtest/graph.hpp"
#include "bdtest/minor.hpp"
#include "bdtest/neighborhood.hpp"
#include "json.hpp"

namespace bdtest {

// Frequency vectors of admissible graphs at one radius, with provenance.
struct ReferenceNet {
  std::size_t radius = 0;
  double delta = 0.0;
  std::vector<FrequencyVector> points;
  std::vector<std::string> provenance;

  // Number of ball types appearing in any point.
  std::size_t support_size() const;
};

struct NetSource {
  std::string name;  // provenance string, e.g. "grid(40,40)@0"
  BoundedDegreeGraph graph;
};

// Exact vectors of every corpus graph; with thin = true a point is dropped
// when it lies within delta/4 of one already kept (corpus order).
ReferenceNet build_reference_net(const std::vector<NetSource>& corpus, std::size_t radius, double delta,
                                 bool thin = true);

nlohmann::json to_json(const ReferenceNet& net);
ReferenceNet reference_net_from_json(const nlohmann::json& j);

struct TesterVerdict {
  bool accept = false;
  std::string phase;  // "distinguish", "hyperfinite" or "minor"
  std::uint64_t queries_used = 0;
  std::optional<std::string> nearest;  // provenance of the closest net point
  std::optional<double> distance;
  std::optional<Vertex> witness;       // centre of a ball containing a pattern
  std::optional<std::string> pattern;
};

nlohmann::json to_json(const TesterVerdict& v);

// Samples c * h^2 / delta^2 * ln(max(h, 2)), rounded up, h = net support size.
std::size_t distinguisher_samples(std::size_t support, double delta, double c);

// Queries spent on one padded exploration of radius r: d * moore_bound(d, r).
std::uint64_t exploration_cost(std::size_t d, std::size_t radius);

// Ball around v found through the oracle, followed by filler queries so that
// exactly exploration_cost(d, r) queries are spent whatever the graph.
RootedBall explore_padded(QueryOracle& o, Vertex v, std::size_t radius);

struct DistinguishOptions {
  double c = 1e-3;
  // Overrides the formula when set.
  std::optional<std::size_t> samples;
};

// Accepts iff the sampled radius-R frequency vector lies within delta/2 of
// some net point. An empty net rejects without querying.
TesterVerdict distinguish(QueryOracle& o, const ReferenceNet& net, double delta, std::uint64_t seed,
                          const DistinguishOptions& options = {});

// Distinguisher resolution for hyper-finiteness at eps:
// (8 / d) * eps * ln(4/3) * safety_factor.
double hyperfinite_delta(double eps, std::size_t d, double safety_factor);

// Parameters of the two-phase tester, resolved by calibration.
struct CalibrationProfile {
  int version = 1;
  double eps = 0.1;
  std::size_t d = 4;
  double eps0 = 0.0125;
  std::size_t k = 4;              // Phase-2 ball radius and net certification cap
  double safety_factor = 1.0;
  double c = 1e-3;
  std::size_t phase1_samples = 0;  // derived from c and the net
  std::size_t phase2_samples = 0;  // m
  std::vector<std::string> net_corpus;
  std::vector<double> certified_delta;  // greedy (delta, k) certificate per net graph
  ReferenceNet net;

  double delta() const { return hyperfinite_delta(eps, d, safety_factor); }
};

nlohmann::json to_json(const CalibrationProfile& p);
CalibrationProfile calibration_profile_from_json(const nlohmann::json& j);
CalibrationProfile load_profile(const std::string& path);

// True iff 4 eps0 ln(4 d / eps0) < eps / 2.
bool eps0_admissible(double eps0, double eps, std::size_t d);

// Phase 1 alone.
TesterVerdict test_hyperfinite(QueryOracle& o, const CalibrationProfile& profile, std::uint64_t seed);

// Phase 1, then Phase 2: radius-k balls around m sampled vertices are
// searched for every pattern. Both phases always spend their full query
// budget, so queries_used depends only on the profile.
TesterVerdict test_minor_free(QueryOracle& o, const std::vector<BoundedDegreeGraph>& patterns,
                              const CalibrationProfile& profile, std::uint64_t seed,
                              const MinorSearchOptions& search = {});

TesterVerdict test_planarity(QueryOracle& o, const CalibrationProfile& profile, std::uint64_t seed,
                             const MinorSearchOptions& search = {});

// Majority of three independent runs (seeds derived from `seed`); queries
// are summed.
TesterVerdict majority_of_three(const std::function<TesterVerdict(std::uint64_t)>& run, std::uint64_t seed);

// Phase 2 over every vertex of g; returns the first centre whose radius-k
// ball contains a pattern.
std::optional<Vertex> phase2_sweep(const BoundedDegreeGraph& g, const std::vector<BoundedDegreeGraph>& patterns,
                                   std::size_t k, const MinorSearchOptions& search = {});

}  // namespace bdtest
