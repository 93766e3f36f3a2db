#include "bdtest/testers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "bdtest/error.hpp"
#include "bdtest/random.hpp"

namespace bdtest {
namespace {

BoundedDegreeGraph ball_graph(const RootedBall& ball, std::size_t d) {
  std::vector<Edge> edges(ball.edges.begin(), ball.edges.end());
  return BoundedDegreeGraph(ball.size(), d, edges);
}

bool ball_has_pattern(const RootedBall& ball, std::size_t d, const std::vector<BoundedDegreeGraph>& patterns,
                      const MinorSearchOptions& search, std::size_t* which) {
  const auto host = ball_graph(ball, d);
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (has_minor(host, patterns[i], search)) {
      *which = i;
      return true;
    }
  }
  return false;
}

std::string pattern_label(const BoundedDegreeGraph& p) {
  return std::to_string(p.num_vertices()) + "v" + std::to_string(p.num_edges()) + "e";
}

}  // namespace

std::size_t ReferenceNet::support_size() const {
  std::set<std::string> types;
  for (const auto& p : points) {
    for (const auto& [code, f] : p.entries) types.insert(code);
  }
  return types.size();
}

ReferenceNet build_reference_net(const std::vector<NetSource>& corpus, std::size_t radius, double delta, bool thin) {
  ReferenceNet net;
  net.radius = radius;
  net.delta = delta;
  for (const auto& source : corpus) {
    auto f = exact_frequency(source.graph, radius);
    bool covered = false;
    if (thin) {
      for (const auto& kept : net.points) {
        if (rho_distance(kept, f) <= delta / 4) {
          covered = true;
          break;
        }
      }
    }
    if (covered) continue;
    net.points.push_back(std::move(f));
    net.provenance.push_back(source.name);
  }
  return net;
}

nlohmann::json to_json(const ReferenceNet& net) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : net.points) points.push_back(to_json(p));
  return {{"radius", net.radius}, {"delta", net.delta}, {"points", points}, {"provenance", net.provenance}};
}

ReferenceNet reference_net_from_json(const nlohmann::json& j) {
  ReferenceNet net;
  try {
    net.radius = j.at("radius").get<std::size_t>();
    net.delta = j.at("delta").get<double>();
    for (const auto& p : j.at("points")) net.points.push_back(frequency_vector_from_json(p));
    net.provenance = j.at("provenance").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("reference net: ") + e.what());
  }
  if (net.provenance.size() != net.points.size()) throw ParseError(0, "reference net: provenance count mismatch");
  for (const auto& p : net.points) {
    if (p.radius != net.radius) throw RadiusMismatch("reference net point has a different radius");
  }
  return net;
}

nlohmann::json to_json(const TesterVerdict& v) {
  nlohmann::json j{{"decision", v.accept ? "accept" : "reject"}, {"phase", v.phase}, {"queries_used", v.queries_used}};
  if (v.nearest) j["nearest"] = *v.nearest;
  if (v.distance) j["distance"] = *v.distance;
  if (v.witness) j["witness"] = *v.witness;
  if (v.pattern) j["pattern"] = *v.pattern;
  return j;
}

std::size_t distinguisher_samples(std::size_t support, double delta, double c) {
  if (!(delta > 0)) throw Error("delta must be positive");
  const double h = static_cast<double>(support);
  const double s = c * h * h / (delta * delta) * std::log(std::max(h, 2.0));
  return static_cast<std::size_t>(std::ceil(s));
}

std::uint64_t exploration_cost(std::size_t d, std::size_t radius) { return d * moore_bound(d, radius); }

RootedBall explore_padded(QueryOracle& o, Vertex v, std::size_t radius) {
  const std::uint64_t start = o.queries_used();
  auto ball = extract_ball(o, v, radius);
  const std::uint64_t target = start + exploration_cost(o.max_degree(), radius);
  if (o.queries_used() > target) throw Error("exploration exceeded its query budget");
  while (o.queries_used() < target) o.neighbor_query(v, 1);
  return ball;
}

TesterVerdict distinguish(QueryOracle& o, const ReferenceNet& net, double delta, std::uint64_t seed,
                          const DistinguishOptions& options) {
  TesterVerdict verdict;
  verdict.phase = "distinguish";
  if (net.points.empty() || o.num_vertices() == 0) return verdict;
  const std::uint64_t start = o.queries_used();
  const std::size_t s = options.samples ? *options.samples : distinguisher_samples(net.support_size(), delta, options.c);
  Rng rng(mix_seed(seed));
  std::map<std::string, std::uint64_t> counts;
  for (std::size_t i = 0; i < s; ++i) {
    const auto v = static_cast<Vertex>(uniform_below(rng, o.num_vertices()));
    ++counts[canonical_form(explore_padded(o, v, net.radius)).code];
  }
  verdict.queries_used = o.queries_used() - start;
  if (s == 0) return verdict;
  const auto observed = make_frequency_vector(net.radius, counts);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    const double dist = rho_distance(observed, net.points[i]);
    if (dist < best) {
      best = dist;
      verdict.nearest = net.provenance[i];
    }
  }
  verdict.distance = best;
  verdict.accept = best <= delta / 2;
  return verdict;
}

double hyperfinite_delta(double eps, std::size_t d, double safety_factor) {
  return 8.0 / static_cast<double>(d) * eps * std::log(4.0 / 3.0) * safety_factor;
}

bool eps0_admissible(double eps0, double eps, std::size_t d) {
  return eps0 > 0 && 4 * eps0 * std::log(4 * static_cast<double>(d) / eps0) < eps / 2;
}

nlohmann::json to_json(const CalibrationProfile& p) {
  return {{"version", p.version},
          {"eps", p.eps},
          {"d", p.d},
          {"eps0", p.eps0},
          {"k", p.k},
          {"R", p.net.radius},
          {"safety_factor", p.safety_factor},
          {"delta", p.delta()},
          {"c", p.c},
          {"phase1_samples", p.phase1_samples},
          {"phase2_samples", p.phase2_samples},
          {"net_corpus", p.net_corpus},
          {"certified_delta", p.certified_delta},
          {"net", to_json(p.net)}};
}

CalibrationProfile calibration_profile_from_json(const nlohmann::json& j) {
  CalibrationProfile p;
  try {
    p.version = j.at("version").get<int>();
    p.eps = j.at("eps").get<double>();
    p.d = j.at("d").get<std::size_t>();
    p.eps0 = j.at("eps0").get<double>();
    p.k = j.at("k").get<std::size_t>();
    p.safety_factor = j.at("safety_factor").get<double>();
    p.c = j.at("c").get<double>();
    p.phase1_samples = j.at("phase1_samples").get<std::size_t>();
    p.phase2_samples = j.at("phase2_samples").get<std::size_t>();
    p.net_corpus = j.at("net_corpus").get<std::vector<std::string>>();
    p.certified_delta = j.at("certified_delta").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("calibration profile: ") + e.what());
  }
  p.net = reference_net_from_json(j.at("net"));
  return p;
}

CalibrationProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open profile " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("profile is not JSON: ") + e.what());
  }
  return calibration_profile_from_json(j);
}

TesterVerdict test_hyperfinite(QueryOracle& o, const CalibrationProfile& profile, std::uint64_t seed) {
  DistinguishOptions options;
  options.c = profile.c;
  options.samples = profile.phase1_samples;
  auto v = distinguish(o, profile.net, profile.delta(), seed, options);
  v.phase = "hyperfinite";
  return v;
}

TesterVerdict test_minor_free(QueryOracle& o, const std::vector<BoundedDegreeGraph>& patterns,
                              const CalibrationProfile& profile, std::uint64_t seed,
                              const MinorSearchOptions& search) {
  if (patterns.empty()) throw Error("no forbidden patterns given");
  const std::uint64_t start = o.queries_used();
  TesterVerdict verdict = test_hyperfinite(o, profile, derive_seed(seed, 1));
  Rng rng(mix_seed(derive_seed(seed, 2)));
  bool found = false;
  for (std::size_t i = 0; i < profile.phase2_samples && o.num_vertices() > 0; ++i) {
    const auto v = static_cast<Vertex>(uniform_below(rng, o.num_vertices()));
    const auto ball = explore_padded(o, v, profile.k);
    std::size_t which = 0;
    if (verdict.accept && !found && ball_has_pattern(ball, o.max_degree(), patterns, search, &which)) {
      found = true;
      verdict.witness = v;
      verdict.pattern = pattern_label(patterns[which]);
    }
  }
  if (verdict.accept && found) {
    verdict.accept = false;
    verdict.phase = "minor";
  }
  verdict.queries_used = o.queries_used() - start;
  return verdict;
}

TesterVerdict test_planarity(QueryOracle& o, const CalibrationProfile& profile, std::uint64_t seed,
                             const MinorSearchOptions& search) {
  static const std::vector<BoundedDegreeGraph> kuratowski{pattern_from_name("K5"), pattern_from_name("K33")};
  return test_minor_free(o, kuratowski, profile, seed, search);
}

TesterVerdict majority_of_three(const std::function<TesterVerdict(std::uint64_t)>& run, std::uint64_t seed) {
  std::vector<TesterVerdict> runs;
  std::uint64_t queries = 0;
  int accepts = 0;
  for (std::uint64_t j = 0; j < 3; ++j) {
    runs.push_back(run(derive_seed(seed, 100 + j)));
    queries += runs.back().queries_used;
    accepts += runs.back().accept ? 1 : 0;
  }
  const bool accept = accepts >= 2;
  auto it = std::find_if(runs.begin(), runs.end(), [&](const auto& v) { return v.accept == accept; });
  TesterVerdict out = *it;
  out.queries_used = queries;
  return out;
}

std::optional<Vertex> phase2_sweep(const BoundedDegreeGraph& g, const std::vector<BoundedDegreeGraph>& patterns,
                                   std::size_t k, const MinorSearchOptions& search) {
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    std::size_t which = 0;
    if (ball_has_pattern(extract_ball(g, v, k), g.max_degree(), patterns, search, &which)) return v;
  }
  return std::nullopt;
}

}  // namespace bdtest
