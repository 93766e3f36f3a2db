// End-to-end acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "bdtest/generators.hpp"
#include "bdtest/harness.hpp"
#include "bdtest/hyperfinite.hpp"
#include "bdtest/minor.hpp"
#include "bdtest/neighborhood.hpp"
#include "bdtest/random.hpp"
#include "bdtest/testers.hpp"
#include "test_util.hpp"

namespace {

using namespace bdtest;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

const std::string kProfile = std::string(BDTEST_DATA_DIR) + "/profiles/planarity_eps0.1_d4.json";

std::vector<std::string> planar_corpus() { return {"grid(50,50)", "random_planar(2000,4)", "tree(2000,4)"}; }
std::vector<std::string> far_corpus() { return {"random_regular(2000,3)", "union_copies(complete(5),400)"}; }

BoundedDegreeGraph input(const std::string& spec) { return generate(spec, 0).with_degree_bound(4); }

Outcome pseudometric() {
  Rng rng(mix_seed(1));
  std::size_t violations = 0, checked = 0;
  double worst_oracle_gap = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + uniform_below(rng, 4);
    const std::size_t r = 1 + uniform_below(rng, 3);
    BoundedDegreeGraph g[3];
    for (auto& x : g) {
      const std::size_t n = 1 + uniform_below(rng, 200);
      x = testing::random_bounded_graph(n, d, uniform_below(rng, 2 * n * d + 1), rng);
    }
    FrequencyVector f[3], f_next[3];
    for (int i = 0; i < 3; ++i) {
      f[i] = exact_frequency(g[i], r);
      f_next[i] = exact_frequency(g[i], r + 1);
    }
    const double ab = rho_distance(f[0], f[1]), ba = rho_distance(f[1], f[0]);
    const double bc = rho_distance(f[1], f[2]), ac = rho_distance(f[0], f[2]);
    const double tol = 1e-12;
    violations += std::abs(ab - ba) > tol;
    violations += ac > ab + bc + tol;
    violations += rho_distance(f[0], f[0]) != 0.0;
    violations += rho_distance(f_next[0], f_next[1]) + tol < ab;
    checked += 4;
    if (t < 40 && g[0].num_vertices() <= 60 && g[1].num_vertices() <= 60) {
      worst_oracle_gap = std::max(worst_oracle_gap, std::abs(ab - testing::brute_force_rho(g[0], g[1], r)));
    }
  }
  const bool pass = violations == 0 && worst_oracle_gap <= 1e-12;
  return {pass, std::to_string(checked) + " checks, " + std::to_string(violations) +
                    " violations, brute-force gap " + fmt(worst_oracle_gap)};
}

Outcome canonical_equivalence() {
  // Every rooted ball of every connected graph on <= 7 vertices at radii 0..3.
  std::vector<RootedBall> balls;
  for (const auto& g : testing::all_connected_graphs(7)) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      for (std::size_t r = 0; r <= 3; ++r) balls.push_back(extract_ball(g, v, r));
    }
  }
  // Pairs differing in an isomorphism invariant are non-isomorphic, so they
  // only need distinct codes; everything else is compared pairwise.
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::vector<std::uint32_t>, std::vector<std::size_t>>;
  std::map<Key, std::vector<std::size_t>> buckets;
  std::vector<std::string> codes(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const auto& b = balls[i];
    std::vector<std::uint32_t> depth = b.depth;
    std::sort(depth.begin(), depth.end());
    std::vector<std::size_t> deg(b.size(), 0);
    for (auto [x, y] : b.edges) ++deg[x], ++deg[y];
    const std::size_t root_degree = deg.empty() ? 0 : deg[0];
    std::sort(deg.begin(), deg.end());
    buckets[{b.radius, b.edges.size(), root_degree, depth, deg}].push_back(i);
    codes[i] = canonical_form(b).code;
  }
  std::size_t disagreements = 0, pairs = 0;
  std::map<std::string, const Key*> owner;
  for (const auto& [key, members] : buckets) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      const auto [it, fresh] = owner.emplace(codes[members[a]], &key);
      if (!fresh && it->second != &key) ++disagreements;
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        ++pairs;
        const bool same_code = codes[members[a]] == codes[members[b]];
        if (same_code != rooted_isomorphic(balls[members[a]], balls[members[b]])) ++disagreements;
      }
    }
  }
  // Random pairs: half relabelled copies, half independent balls.
  Rng rng(mix_seed(2));
  std::size_t random_disagreements = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 2 + uniform_below(rng, 30), d = 2 + uniform_below(rng, 3), r = uniform_below(rng, 4);
    const auto g = testing::random_bounded_graph(n, d, n * d, rng);
    const auto a = extract_ball(g, static_cast<Vertex>(uniform_below(rng, n)), r);
    RootedBall b;
    if (t % 2 == 0) {
      b = testing::shuffle_ball(a, rng);
    } else {
      b = extract_ball(g, static_cast<Vertex>(uniform_below(rng, n)), r);
    }
    if ((canonical_form(a).code == canonical_form(b).code) != rooted_isomorphic(a, b)) ++random_disagreements;
  }
  return {disagreements == 0 && random_disagreements == 0,
          std::to_string(balls.size()) + " exhaustive balls, " + std::to_string(pairs) + " same-invariant pairs, " +
              std::to_string(disagreements) + " + " + std::to_string(random_disagreements) +
              " disagreements (exhaustive + 10000 random)"};
}

Outcome minor_cross_check() {
  std::size_t disagreements = 0, graphs = 0;
  for (const auto& g : testing::all_connected_graphs(7)) {
    ++graphs;
    if (is_planar_small(g) != testing::planar_by_embedding(g)) ++disagreements;
  }
  const bool petersen = has_minor(generate("petersen()", 0), pattern_from_name("K5"));
  const bool grid = has_minor(generate("grid(4,4)", 0), pattern_from_name("K5"));
  return {disagreements == 0 && petersen && !grid,
          std::to_string(graphs) + " graphs, " + std::to_string(disagreements) + " disagreements; Petersen>K5 " +
              (petersen ? "true" : "false") + ", grid(4,4)>K5 " + (grid ? "true" : "false")};
}

Outcome cut_bound() {
  const auto g = generate("grid(30,30)", 0);
  bool pass = true;
  std::string detail;
  for (std::size_t k : {4, 9}) {
    // R steps by k, and 9 is not admissible here.
    const std::size_t max_R = k == 9 ? 18 : 12;
    const auto ex = cut_experiment(g, k, std::nullopt, 200, 0, max_R);
    std::size_t worst_component = 0;
    for (const auto& t : ex.trials) worst_component = std::max(worst_component, t.max_component);
    const bool ok = ex.within_bound() && worst_component <= k;
    pass = pass && ok;
    detail += "k=" + std::to_string(k) + ": delta_S " + fmt(ex.source.delta) + " R " + std::to_string(ex.choice.R) +
              " mean " + fmt(ex.mean) + " bound " + fmt(ex.bound) + " max component " +
              std::to_string(worst_component) + (k == 4 ? "; " : "");
  }
  return {pass, detail};
}

Outcome balance() {
  const auto g = generate("grid(20,20)", 0);
  const double eps = 0.3;
  const auto cut = find_partition_greedy(g, 9);
  const double limit = eps * static_cast<double>(g.num_vertices()) / (2.0 * 4);
  try {
    const auto choice = choose_R(g, cut, eps, 12);
    const bool ok = choice.R <= 12 && static_cast<double>(choice.profile.low_count) <= limit;
    return {ok, "R " + std::to_string(choice.R) + " low_count " + std::to_string(choice.profile.low_count) +
                    " limit " + fmt(limit)};
  } catch (const NoAdmissibleR& e) {
    return {false, std::string("NoAdmissibleR: ") + e.what()};
  }
}

Outcome transfer() {
  const auto source = generate("cycle(12)", 0);
  bool pass = true;
  std::string detail;
  for (const char* target_spec : {"cycle(24)", "cycle(120)"}) {
    const auto target = generate(target_spec, 0);
    const auto ex = transfer_experiment(source, target, 2, std::nullopt, 500, 0);
    const double exact = testing::brute_force_rho(source, target, ex.r);
    const double diff = std::abs(ex.source_mean_density - ex.target_mean_density);
    const bool ok = ex.rho == 0.0 && exact == 0.0 && diff <= 0.02;
    pass = pass && ok;
    detail += std::string(target_spec) + ": R " + std::to_string(ex.choice.R) + " r " + std::to_string(ex.r) +
              " rho " + fmt(ex.rho) + " diff " + fmt(diff) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome separation() {
  const auto profile = load_profile(kProfile);
  bool pass = true;
  std::string detail;
  auto run = [&](const std::string& spec, bool want_accept) {
    const auto verdicts = run_tester(input(spec), "planarity", {}, profile, 100, 7, 1);
    std::size_t hits = 0;
    for (const auto& v : verdicts) hits += v.accept == want_accept;
    pass = pass && hits >= 67;
    detail += spec + (want_accept ? " accepted " : " rejected ") + std::to_string(hits) + "/100; ";
  };
  for (const auto& s : planar_corpus()) run(s, true);
  for (const auto& s : far_corpus()) run(s, false);
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome constant_queries() {
  const auto profile = load_profile(kProfile);
  const auto small = run_tester(input("grid(50,50)"), "planarity", {}, profile, 100, 8, 1);
  const auto large = run_tester(input("grid(160,160)"), "planarity", {}, profile, 100, 8, 1);
  std::size_t mismatches = 0;
  std::set<std::uint64_t> distinct;
  for (std::size_t i = 0; i < 100; ++i) {
    mismatches += small[i].queries_used != large[i].queries_used;
    distinct.insert(small[i].queries_used);
  }
  std::string values;
  for (auto q : distinct) values += " " + std::to_string(q);
  return {mismatches == 0, std::to_string(mismatches) + " per-seed mismatches over 100 trials; queries_used:" + values};
}

Outcome phase2_soundness() {
  const auto profile = load_profile(kProfile);
  const std::vector<BoundedDegreeGraph> kuratowski{pattern_from_name("K5"), pattern_from_name("K33")};
  std::vector<std::string> specs = planar_corpus();
  for (const auto& name : profile.net_corpus) specs.push_back(name);
  std::size_t hits = 0, vertices = 0;
  for (const auto& spec : specs) {
    const auto g = load_graph_arg(spec).graph.with_degree_bound(4);
    vertices += g.num_vertices();
    if (phase2_sweep(g, kuratowski, profile.k)) ++hits;
  }
  return {hits == 0, std::to_string(specs.size()) + " graphs, " + std::to_string(vertices) + " balls of radius " +
                         std::to_string(profile.k) + ", " + std::to_string(hits) + " with forbidden minors"};
}

Outcome distance_floor() {
  const double floor = 0.05;
  double smallest = 2;
  std::string closest;
  for (const auto& p : planar_corpus()) {
    const auto fp = exact_frequency(input(p), 2);
    for (const auto& f : far_corpus()) {
      const double rho = rho_distance(fp, exact_frequency(input(f), 2));
      if (rho < smallest) {
        smallest = rho;
        closest = p + " vs " + f;
      }
    }
  }
  return {smallest >= floor, "min rho_2 " + fmt(smallest) + " (" + closest + "), floor " + fmt(floor)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"pseudometric properties", pseudometric},
      {"canonical form vs rooted isomorphism", canonical_equivalence},
      {"minor engine cross-check", minor_cross_check},
      {"cut-size bound on grid(30,30)", cut_bound},
      {"R search on grid(20,20)", balance},
      {"transfer between cycles", transfer},
      {"tester separation", separation},
      {"constant query count", constant_queries},
      {"phase-2 soundness", phase2_soundness},
      {"planar vs far distance floor", distance_floor},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("criterion %2d %s  %s: %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
