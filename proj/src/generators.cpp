#include "bdtest/generators.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>
#include <vector>

#include "bdtest/error.hpp"
#include "bdtest/random.hpp"

namespace bdtest {
namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  GeneratorSpec parse_all() {
    GeneratorSpec spec = parse_spec();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return spec;
  }

 private:
  GeneratorSpec parse_spec() {
    const std::string name = parse_name();
    expect('(');
    GeneratorSpec spec;
    if (name == "union_copies") {
      auto proto = std::make_shared<const GeneratorSpec>(parse_spec());
      expect(',');
      spec.kind = gen::UnionCopies{std::move(proto), parse_number()};
      expect(')');
      return spec;
    }
    std::vector<std::size_t> args;
    skip_ws();
    if (peek() != ')') {
      args.push_back(parse_number());
      while (skip_ws(), peek() == ',') {
        ++pos_;
        args.push_back(parse_number());
      }
    }
    expect(')');
    auto need = [&](std::size_t count) {
      if (args.size() != count) fail(name + " takes " + std::to_string(count) + " arguments");
    };
    if (name == "grid") {
      need(2);
      spec.kind = gen::Grid{args[0], args[1]};
    } else if (name == "cycle") {
      need(1);
      spec.kind = gen::Cycle{args[0]};
    } else if (name == "path") {
      need(1);
      spec.kind = gen::Path{args[0]};
    } else if (name == "random_regular") {
      need(2);
      spec.kind = gen::RandomRegular{args[0], args[1]};
    } else if (name == "random_planar") {
      need(2);
      spec.kind = gen::RandomPlanar{args[0], args[1]};
    } else if (name == "tree") {
      need(2);
      spec.kind = gen::Tree{args[0], args[1]};
    } else if (name == "complete") {
      need(1);
      spec.kind = gen::Complete{args[0]};
    } else if (name == "complete_bipartite") {
      need(2);
      spec.kind = gen::CompleteBipartite{args[0], args[1]};
    } else if (name == "petersen") {
      need(0);
      spec.kind = gen::Petersen{};
    } else {
      fail("unknown generator '" + name + "'");
    }
    return spec;
  }

  std::string parse_name() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected generator name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t parse_number() {
    skip_ws();
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail("expected a non-negative integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw InfeasibleSpec("bad generator spec '" + std::string(text_) + "': " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

BoundedDegreeGraph grid(std::size_t w, std::size_t h) {
  std::vector<Edge> e;
  auto id = [w](std::size_t r, std::size_t c) { return static_cast<Vertex>(r * w + c); };
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (c + 1 < w) e.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < h) e.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return BoundedDegreeGraph(w * h, 4, e);
}

BoundedDegreeGraph cycle(std::size_t n) {
  if (n < 3) throw InfeasibleSpec("cycle needs at least 3 vertices");
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back(make_edge(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n)));
  return BoundedDegreeGraph(n, 2, e);
}

BoundedDegreeGraph path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
  return BoundedDegreeGraph(n, 2, e);
}

BoundedDegreeGraph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return BoundedDegreeGraph(n, n == 0 ? 0 : n - 1, e);
}

BoundedDegreeGraph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < a; ++u)
    for (std::size_t v = 0; v < b; ++v) e.emplace_back(u, static_cast<Vertex>(a + v));
  return BoundedDegreeGraph(a + b, std::max(a, b), e);
}

BoundedDegreeGraph petersen() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.push_back(make_edge(i, (i + 1) % 5));
    e.push_back(make_edge(i, i + 5));
    e.push_back(make_edge(i + 5, (i + 2) % 5 + 5));
  }
  return BoundedDegreeGraph(10, 3, e);
}

// Pairing model with rejection of loops and multi-edges; restarts when the
// remaining points admit no legal pair.
BoundedDegreeGraph random_regular(std::size_t n, std::size_t d, Rng& rng) {
  if (d >= n && !(d == 0)) throw InfeasibleSpec("random_regular needs d < n");
  if ((n * d) % 2 != 0) throw InfeasibleSpec("random_regular needs n*d even");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Vertex> points;
    points.reserve(n * d);
    for (Vertex v = 0; v < n; ++v)
      for (std::size_t j = 0; j < d; ++j) points.push_back(v);
    std::set<Edge> chosen;
    bool stuck = false;
    while (!points.empty() && !stuck) {
      std::size_t failures = 0;
      while (true) {
        const auto i = uniform_below(rng, points.size());
        const auto j = uniform_below(rng, points.size());
        const Vertex u = points[i], v = points[j];
        if (i != j && u != v && !chosen.contains(make_edge(u, v))) {
          chosen.insert(make_edge(u, v));
          const auto hi = std::max(i, j), lo = std::min(i, j);
          points[hi] = points.back();
          points.pop_back();
          points[lo] = points.back();
          points.pop_back();
          break;
        }
        if (++failures > 64 + 4 * points.size()) {
          bool any = false;
          for (std::size_t a = 0; a < points.size() && !any; ++a)
            for (std::size_t b = a + 1; b < points.size() && !any; ++b)
              any = points[a] != points[b] && !chosen.contains(make_edge(points[a], points[b]));
          if (!any) {
            stuck = true;
            break;
          }
          failures = 0;
        }
      }
    }
    if (!stuck) {
      std::vector<Edge> e(chosen.begin(), chosen.end());
      return BoundedDegreeGraph(n, d, e);
    }
  }
  throw InfeasibleSpec("random_regular: pairing failed repeatedly");
}

BoundedDegreeGraph random_planar(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<Edge> e;
  if (n <= 3) {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
  } else {
    std::vector<std::array<Vertex, 3>> faces{{0, 1, 2}, {0, 1, 2}};
    e = {{0, 1}, {0, 2}, {1, 2}};
    for (Vertex v = 3; v < n; ++v) {
      const auto f = uniform_below(rng, faces.size());
      const auto [a, b, c] = faces[f];
      e.emplace_back(a, v);
      e.emplace_back(b, v);
      e.emplace_back(c, v);
      faces[f] = {a, b, v};
      faces.push_back({a, c, v});
      faces.push_back({b, c, v});
    }
  }
  shuffle_range(e.begin(), e.end(), rng);
  std::vector<std::size_t> deg(n, 0);
  std::vector<Edge> kept;
  for (const auto& [u, v] : e) {
    if (deg[u] < d && deg[v] < d) {
      ++deg[u];
      ++deg[v];
      kept.push_back(make_edge(u, v));
    }
  }
  return BoundedDegreeGraph(n, d, kept);
}

BoundedDegreeGraph random_tree(std::size_t n, std::size_t d, Rng& rng) {
  if (n > 1 && d == 0) throw InfeasibleSpec("tree with more than one vertex needs d >= 1");
  if (n > 2 && d == 1) throw InfeasibleSpec("tree with more than two vertices needs d >= 2");
  std::vector<Edge> e;
  std::vector<std::size_t> deg(n, 0);
  std::vector<Vertex> open;
  if (n > 0) open.push_back(0);
  for (Vertex v = 1; v < n; ++v) {
    const auto i = uniform_below(rng, open.size());
    const Vertex parent = open[i];
    e.emplace_back(parent, v);
    if (++deg[parent] == d) {
      open[i] = open.back();
      open.pop_back();
    }
    if (++deg[v] < d) open.push_back(v);
  }
  return BoundedDegreeGraph(n, d, e);
}

BoundedDegreeGraph union_copies(const BoundedDegreeGraph& proto, std::size_t copies) {
  const std::size_t m = proto.num_vertices();
  std::vector<Edge> e;
  const auto base = proto.edges();
  for (std::size_t c = 0; c < copies; ++c) {
    const auto off = static_cast<Vertex>(c * m);
    for (const auto& [u, v] : base) e.emplace_back(u + off, v + off);
  }
  return BoundedDegreeGraph(m * copies, proto.max_degree(), e);
}

}  // namespace

GeneratorSpec parse_generator_spec(std::string_view text) { return SpecParser(text).parse_all(); }

std::string to_string(const GeneratorSpec& spec) {
  auto n = [](std::size_t x) { return std::to_string(x); };
  return std::visit(
      Overloaded{
          [&](const gen::Grid& s) { return "grid(" + n(s.width) + "," + n(s.height) + ")"; },
          [&](const gen::Cycle& s) { return "cycle(" + n(s.n) + ")"; },
          [&](const gen::Path& s) { return "path(" + n(s.n) + ")"; },
          [&](const gen::RandomRegular& s) { return "random_regular(" + n(s.n) + "," + n(s.degree) + ")"; },
          [&](const gen::RandomPlanar& s) { return "random_planar(" + n(s.n) + "," + n(s.degree) + ")"; },
          [&](const gen::Tree& s) { return "tree(" + n(s.n) + "," + n(s.degree) + ")"; },
          [&](const gen::Complete& s) { return "complete(" + n(s.n) + ")"; },
          [&](const gen::CompleteBipartite& s) { return "complete_bipartite(" + n(s.left) + "," + n(s.right) + ")"; },
          [&](const gen::Petersen&) { return std::string("petersen()"); },
          [&](const gen::UnionCopies& s) { return "union_copies(" + to_string(*s.proto) + "," + n(s.copies) + ")"; },
      },
      spec.kind);
}

BoundedDegreeGraph generate(const GeneratorSpec& spec, std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  return std::visit(
      Overloaded{
          [&](const gen::Grid& s) { return grid(s.width, s.height); },
          [&](const gen::Cycle& s) { return cycle(s.n); },
          [&](const gen::Path& s) { return path(s.n); },
          [&](const gen::RandomRegular& s) { return random_regular(s.n, s.degree, rng); },
          [&](const gen::RandomPlanar& s) { return random_planar(s.n, s.degree, rng); },
          [&](const gen::Tree& s) { return random_tree(s.n, s.degree, rng); },
          [&](const gen::Complete& s) { return complete(s.n); },
          [&](const gen::CompleteBipartite& s) { return complete_bipartite(s.left, s.right); },
          [&](const gen::Petersen&) { return petersen(); },
          [&](const gen::UnionCopies& s) { return union_copies(generate(*s.proto, seed), s.copies); },
      },
      spec.kind);
}

std::size_t declared_degree(const GeneratorSpec& spec) {
  return std::visit(
      Overloaded{
          [](const gen::Grid&) -> std::size_t { return 4; },
          [](const gen::Cycle&) -> std::size_t { return 2; },
          [](const gen::Path&) -> std::size_t { return 2; },
          [](const gen::RandomRegular& s) { return s.degree; },
          [](const gen::RandomPlanar& s) { return s.degree; },
          [](const gen::Tree& s) { return s.degree; },
          [](const gen::Complete& s) { return s.n == 0 ? std::size_t{0} : s.n - 1; },
          [](const gen::CompleteBipartite& s) { return std::max(s.left, s.right); },
          [](const gen::Petersen&) -> std::size_t { return 3; },
          [](const gen::UnionCopies& s) { return declared_degree(*s.proto); },
      },
      spec.kind);
}

}  // namespace bdtest
