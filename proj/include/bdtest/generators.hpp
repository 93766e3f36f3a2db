#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "bdtest/graph.hpp"

namespace bdtest {

struct GeneratorSpec;

namespace gen {
struct Grid { std::size_t width, height; };
struct Cycle { std::size_t n; };
struct Path { std::size_t n; };
struct RandomRegular { std::size_t n, degree; };
// Random stacked triangulation thinned to max degree `degree`.
struct RandomPlanar { std::size_t n, degree; };
// Random recursive tree with max degree `degree`.
struct Tree { std::size_t n, degree; };
struct Complete { std::size_t n; };
struct CompleteBipartite { std::size_t left, right; };
struct Petersen {};
struct UnionCopies {
  std::shared_ptr<const GeneratorSpec> proto;
  std::size_t copies;
};
}  // namespace gen

struct GeneratorSpec {
  std::variant<gen::Grid, gen::Cycle, gen::Path, gen::RandomRegular, gen::RandomPlanar,
               gen::Tree, gen::Complete, gen::CompleteBipartite, gen::Petersen,
               gen::UnionCopies>
      kind;
};

// Parses strings such as "grid(10,10)", "random_regular(2000,3)" or
// "union_copies(complete(5),8)". Throws InfeasibleSpec on malformed input.
GeneratorSpec parse_generator_spec(std::string_view text);

// Inverse of parse_generator_spec.
std::string to_string(const GeneratorSpec& spec);

// Pure function of (spec, seed). Throws InfeasibleSpec when the family has
// no member with the requested parameters (e.g. odd n*d for regular graphs).
BoundedDegreeGraph generate(const GeneratorSpec& spec, std::uint64_t seed);

inline BoundedDegreeGraph generate(std::string_view spec, std::uint64_t seed) {
  return generate(parse_generator_spec(spec), seed);
}

// Declared degree bound of the family (the d the generated graph carries).
std::size_t declared_degree(const GeneratorSpec& spec);

}  // namespace bdtest
