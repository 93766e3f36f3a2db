#include "bdtest/neighborhood.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "bdtest/error.hpp"
#include "bdtest/generators.hpp"
#include "test_util.hpp"

namespace bdtest {
namespace {

using testing::brute_force_distribution;
using testing::brute_force_rho;

TEST(ExtractBallTest, CycleRadiusOneIsCenteredPath) {
  auto c12 = generate("cycle(12)", 0);
  for (Vertex v = 0; v < 12; ++v) {
    auto b = extract_ball(c12, v, 1);
    EXPECT_EQ(b.size(), 3u);
    EXPECT_EQ(b.edges.size(), 2u);
    EXPECT_EQ(b.vertices[0], v);
  }
}

TEST(ExtractBallTest, RadiusZeroIsSingleVertex) {
  auto g = generate("random_planar(50,4)", 2);
  for (Vertex v = 0; v < 50; ++v) {
    auto b = extract_ball(g, v, 0);
    EXPECT_EQ(b.size(), 1u);
    EXPECT_TRUE(b.edges.empty());
  }
}

TEST(ExtractBallTest, GridCorner) {
  auto g = generate("grid(5,5)", 0);
  auto b = extract_ball(g, 0, 1);
  EXPECT_EQ(b.size(), 3u);
  EXPECT_EQ(b.edges.size(), 2u);
}

TEST(ExtractBallTest, InducedEdgesBetweenOuterLayer) {
  auto tri = generate("complete(3)", 0);
  auto b = extract_ball(tri, 0, 1);
  EXPECT_EQ(b.edges.size(), 3u);  // edge between the two depth-1 vertices
}

TEST(ExtractBallTest, OracleMatchesDirectAndRespectsQueryBound) {
  auto g = generate("random_planar(300,4)", 5);
  for (Vertex v = 0; v < 300; v += 7) {
    for (std::size_t r = 0; r <= 3; ++r) {
      QueryOracle o(g);
      auto via_oracle = extract_ball(o, v, r);
      auto direct = extract_ball(g, v, r);
      EXPECT_EQ(via_oracle.vertices, direct.vertices);
      EXPECT_EQ(via_oracle.edges, direct.edges);
      EXPECT_LE(o.queries_used(), g.max_degree() * direct.size());
    }
  }
}

TEST(CanonicalFormTest, CycleBallsShareCode) {
  auto c12 = generate("cycle(12)", 0);
  auto a = canonical_form(extract_ball(c12, 0, 1));
  auto b = canonical_form(extract_ball(c12, 5, 1));
  EXPECT_EQ(a, b);
}

TEST(CanonicalFormTest, CycleCenterVsPathEnd) {
  auto c12 = generate("cycle(12)", 0);
  auto p12 = generate("path(12)", 0);
  EXPECT_NE(canonical_form(extract_ball(c12, 0, 1)), canonical_form(extract_ball(p12, 0, 1)));
}

TEST(CanonicalFormTest, InvariantUnderRelabeling) {
  Rng rng(11);
  auto g = generate("random_planar(400,4)", 9);
  for (Vertex v = 0; v < 400; v += 13) {
    auto b = extract_ball(g, v, 3);
    auto code = canonical_form(b);
    for (int rep = 0; rep < 3; ++rep) {
      EXPECT_EQ(canonical_form(testing::shuffle_ball(b, rng)), code);
    }
  }
}

TEST(RootedIsomorphicTest, Basics) {
  auto p3 = generate("path(3)", 0);
  auto center = extract_ball(p3, 1, 2);
  auto end = extract_ball(p3, 0, 2);
  EXPECT_TRUE(rooted_isomorphic(center, center));
  EXPECT_FALSE(rooted_isomorphic(center, end));
  auto star = generate("complete_bipartite(1,3)", 0);
  Rng rng(3);
  auto s = extract_ball(star, 0, 1);
  EXPECT_TRUE(rooted_isomorphic(s, testing::shuffle_ball(s, rng)));
}

TEST(ExactFrequencyTest, CycleSingleType) {
  auto c12 = generate("cycle(12)", 0);
  auto f = exact_frequency(c12, 1);
  auto oracle = brute_force_distribution(c12, 1);
  ASSERT_EQ(oracle.mass.size(), 1u);
  ASSERT_EQ(f.support_size(), 1u);
  EXPECT_DOUBLE_EQ(f.entries.begin()->second, 1.0);
  EXPECT_EQ(f.sample_count, 12u);
}

TEST(ExactFrequencyTest, PathTwoTypes) {
  auto p12 = generate("path(12)", 0);
  auto f = exact_frequency(p12, 1);
  auto oracle = brute_force_distribution(p12, 1);
  ASSERT_EQ(oracle.mass.size(), 2u);
  std::vector<double> got;
  for (auto& [code, p] : f.entries) got.push_back(p);
  std::sort(got.begin(), got.end());
  std::sort(oracle.mass.begin(), oracle.mass.end());
  // Frozen from the brute-force enumeration: two endpoints, ten inner vertices.
  EXPECT_NEAR(got[0], 2.0 / 12, 1e-15);
  EXPECT_NEAR(got[1], 10.0 / 12, 1e-15);
  EXPECT_NEAR(oracle.mass[0], 2.0 / 12, 1e-15);
  EXPECT_NEAR(oracle.mass[1], 10.0 / 12, 1e-15);
}

TEST(ExactFrequencyTest, RadiusZeroIsPoint) {
  auto g = generate("random_regular(30,3)", 1);
  auto f = exact_frequency(g, 0);
  ASSERT_EQ(f.support_size(), 1u);
  EXPECT_DOUBLE_EQ(f.entries.begin()->second, 1.0);
}

TEST(ExactFrequencyTest, SumsToOneAndMatchesBruteForce) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto g = testing::random_bounded_graph(40, 3, 60, rng);
    for (std::size_t r = 0; r <= 2; ++r) {
      auto f = exact_frequency(g, r);
      double sum = 0;
      for (auto& [code, p] : f.entries) sum += p;
      EXPECT_NEAR(sum, 1.0, 1e-12);
      EXPECT_EQ(f.support_size(), brute_force_distribution(g, r).mass.size());
    }
  }
}

TEST(ExactFrequencyTest, NeighborOrderDoesNotMatter) {
  Rng rng(17);
  auto g = generate("random_planar(300,4)", 4);
  auto h = testing::relabel(g, rng);
  for (std::size_t r = 1; r <= 3; ++r) {
    EXPECT_EQ(rho_distance(exact_frequency(g, r), exact_frequency(h, r)), 0.0);
  }
}

TEST(SampledFrequencyTest, SingletonSupport) {
  auto c12 = generate("cycle(12)", 0);
  QueryOracle o(c12);
  auto f = sampled_frequency(o, 1, 50, 3);
  ASSERT_EQ(f.support_size(), 1u);
  EXPECT_DOUBLE_EQ(f.entries.begin()->second, 1.0);
  EXPECT_EQ(f.sample_count, 50u);
}

TEST(SampledFrequencyTest, OneSample) {
  auto g = generate("random_planar(100,4)", 1);
  QueryOracle o(g);
  auto f = sampled_frequency(o, 2, 1, 9);
  ASSERT_EQ(f.support_size(), 1u);
  EXPECT_DOUBLE_EQ(f.entries.begin()->second, 1.0);
}

TEST(SampledFrequencyTest, PathEndpointShareConcentrates) {
  auto p12 = generate("path(12)", 0);
  const auto end_code = canonical_form(extract_ball(p12, 0, 1)).code;
  int close = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    QueryOracle o(p12);
    auto f = sampled_frequency(o, 1, 10000, seed);
    EXPECT_LE(o.queries_used(), 10000u * 3u * 2u);
    if (std::abs(f.frequency(end_code) - 2.0 / 12) <= 0.02) ++close;
  }
  EXPECT_GE(close, 95);
}

TEST(SampledFrequencyTest, ConvergesToExact) {
  auto g = generate("random_planar(500,4)", 2);
  auto exact = exact_frequency(g, 1);
  std::vector<double> medians;
  for (std::size_t s : {100u, 1000u, 10000u}) {
    std::vector<double> d;
    for (std::uint64_t seed = 0; seed < 9; ++seed) {
      QueryOracle o(g);
      d.push_back(rho_distance(sampled_frequency(o, 1, s, seed), exact));
    }
    std::nth_element(d.begin(), d.begin() + 4, d.end());
    medians.push_back(d[4]);
  }
  EXPECT_GT(medians[0], medians[1]);
  EXPECT_GT(medians[1], medians[2]);
}

TEST(RhoTest, Identity) {
  auto g = generate("grid(6,6)", 0);
  auto f = exact_frequency(g, 2);
  EXPECT_EQ(rho_distance(f, f), 0.0);
}

TEST(RhoTest, CycleVsPath) {
  auto c12 = generate("cycle(12)", 0);
  auto p12 = generate("path(12)", 0);
  const double expected = 4.0 / 12;  // frozen from brute_force_rho
  EXPECT_NEAR(brute_force_rho(c12, p12, 1), expected, 1e-15);
  EXPECT_NEAR(rho_distance(exact_frequency(c12, 1), exact_frequency(p12, 1)), expected, 1e-12);
}

TEST(RhoTest, DisjointSupportsGiveTwo) {
  auto cyc = exact_frequency(generate("cycle(10)", 0), 1);
  auto k4 = exact_frequency(generate("complete(4)", 0), 1);
  EXPECT_DOUBLE_EQ(rho_distance(cyc, k4), 2.0);
}

TEST(RhoTest, RadiusMismatch) {
  auto g = generate("cycle(10)", 0);
  EXPECT_THROW(rho_distance(exact_frequency(g, 1), exact_frequency(g, 2)), RadiusMismatch);
}

TEST(RhoTest, MatchesBruteForceOnRandomPairs) {
  Rng rng(23);
  for (int t = 0; t < 15; ++t) {
    auto a = testing::random_bounded_graph(30, 3, 45, rng);
    auto b = testing::random_bounded_graph(25, 3, 40, rng);
    for (std::size_t r = 1; r <= 2; ++r) {
      EXPECT_NEAR(rho_distance(exact_frequency(a, r), exact_frequency(b, r)), brute_force_rho(a, b, r), 1e-12);
    }
  }
}

TEST(RhoTest, CyclesAgreeBelowHalfGirth) {
  auto c12 = exact_frequency(generate("cycle(12)", 0), 2);
  auto c24 = exact_frequency(generate("cycle(24)", 0), 2);
  EXPECT_EQ(rho_distance(c12, c24), 0.0);
  auto c12r6 = exact_frequency(generate("cycle(12)", 0), 6);
  auto c24r6 = exact_frequency(generate("cycle(24)", 0), 6);
  EXPECT_GT(rho_distance(c12r6, c24r6), 0.0);
}

TEST(FrequencyVectorJsonTest, RoundTrip) {
  auto f = exact_frequency(generate("random_planar(200,4)", 3), 2);
  auto g = frequency_vector_from_json(nlohmann::json::parse(to_json(f).dump()));
  EXPECT_EQ(g.radius, f.radius);
  EXPECT_EQ(g.sample_count, f.sample_count);
  EXPECT_EQ(g.entries, f.entries);
}

TEST(MooreBoundTest, Values) {
  EXPECT_EQ(moore_bound(3, 0), 1u);
  EXPECT_EQ(moore_bound(3, 2), 10u);
  EXPECT_EQ(moore_bound(4, 3), 53u);
}

}  // namespace
}  // namespace bdtest
