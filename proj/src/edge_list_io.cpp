#include "bdtest/edge_list_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "bdtest/error.hpp"

namespace bdtest {

BoundedDegreeGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t n = 0, d = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long a = 0, b = 0;
    if (!(fields >> a)) {
      if (fields.eof()) continue;  // blank line
      throw ParseError(line_no, "expected two integers");
    }
    if (!(fields >> b)) throw ParseError(line_no, "expected two integers");
    std::string rest;
    if (fields >> rest) throw ParseError(line_no, "unexpected trailing token '" + rest + "'");
    if (a < 0 || b < 0) throw ParseError(line_no, "negative value");
    if (!have_header) {
      n = static_cast<std::size_t>(a);
      d = static_cast<std::size_t>(b);
      have_header = true;
      continue;
    }
    if (static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n) {
      throw ParseError(line_no, "vertex id out of range [0, " + std::to_string(n) + ")");
    }
    if (a >= b) throw ParseError(line_no, "edge must be written as u v with u < v");
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  if (!have_header) throw ParseError(line_no, "missing 'n d' header");
  try {
    return BoundedDegreeGraph(n, d, edges);
  } catch (const InvalidEdge& e) {
    throw ParseError(line_no, e.what());
  }
}

void write_edge_list(const BoundedDegreeGraph& g, std::ostream& out) {
  out << g.num_vertices() << ' ' << g.max_degree() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

BoundedDegreeGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return read_edge_list(in);
}

void save_edge_list(const BoundedDegreeGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_edge_list(g, out);
}

}  // namespace bdtest
