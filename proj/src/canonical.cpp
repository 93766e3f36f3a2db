#include "bdtest/canonical.hpp"

#include <algorithm>
#include <numeric>

namespace bdtest {
namespace {

using Colors = std::vector<std::uint32_t>;

// Core graph in CSR form.
struct Csr {
  std::vector<std::uint32_t> offset;
  std::vector<std::uint32_t> target;
  std::size_t n() const { return offset.size() - 1; }
};

class Labeler {
 public:
  explicit Labeler(const Csr& g) : g_(g), n_(g.n()), nbc_(g.target.size()), order_(n_), scratch_(n_) {}

  // Splits cells until the colouring is equitable. A colour is the index of
  // the first position of its cell in the ordered partition, so refinement
  // only ever splits cells and keeps their relative order.
  void refine(Colors& color) {
    std::size_t cells = count_cells(color);
    while (true) {
      for (std::size_t v = 0; v < n_; ++v) {
        auto first = nbc_.begin() + g_.offset[v];
        auto last = nbc_.begin() + g_.offset[v + 1];
        for (auto i = g_.offset[v]; i < g_.offset[v + 1]; ++i) nbc_[i] = color[g_.target[i]];
        std::sort(first, last);
      }
      std::iota(order_.begin(), order_.end(), 0);
      auto less = [&](std::uint32_t a, std::uint32_t b) { return compare(color, a, b) < 0; };
      std::sort(order_.begin(), order_.end(), less);
      std::uint32_t start = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (i > 0 && compare(color, order_[i - 1], order_[i]) != 0) start = static_cast<std::uint32_t>(i);
        scratch_[order_[i]] = start;
      }
      color.swap(scratch_);
      const std::size_t now = count_cells(color);
      if (now == cells) return;
      cells = now;
    }
  }

  std::string certificate_edges(const std::vector<std::string>& labels, Colors initial) {
    refine(initial);
    path_.clear();
    search(initial);
    std::vector<std::uint32_t> inverse(n_);
    for (std::uint32_t v = 0; v < n_; ++v) inverse[best_lab_[v]] = v;
    std::string out = std::to_string(n_);
    out += '|';
    for (std::uint32_t pos = 0; pos < n_; ++pos) {
      out += labels[inverse[pos]];
      out += ';';
    }
    out += '|';
    for (auto e : best_edges_) {
      out += std::to_string(e >> 32);
      out += ',';
      out += std::to_string(e & 0xffffffffu);
      out += ';';
    }
    return out;
  }

 private:
  int compare(const Colors& color, std::uint32_t a, std::uint32_t b) const {
    if (color[a] != color[b]) return color[a] < color[b] ? -1 : 1;
    const auto da = g_.offset[a + 1] - g_.offset[a];
    const auto db = g_.offset[b + 1] - g_.offset[b];
    if (da != db) return da < db ? -1 : 1;
    for (std::uint32_t i = 0; i < da; ++i) {
      const auto x = nbc_[g_.offset[a] + i], y = nbc_[g_.offset[b] + i];
      if (x != y) return x < y ? -1 : 1;
    }
    return 0;
  }

  std::size_t count_cells(const Colors& color) const {
    std::vector<bool> seen(n_, false);
    std::size_t cells = 0;
    for (auto c : color) {
      if (!seen[c]) {
        seen[c] = true;
        ++cells;
      }
    }
    return cells;
  }

  void search(const Colors& color) {
    // Target cell: smallest non-singleton cell, lowest colour on ties.
    std::vector<std::uint32_t> size(n_, 0);
    for (auto c : color) ++size[c];
    std::uint32_t target = 0, best_size = 0;
    for (std::uint32_t c = 0; c < n_; ++c) {
      if (size[c] > 1 && (best_size == 0 || size[c] < best_size)) {
        best_size = size[c];
        target = c;
      }
    }
    if (best_size == 0) {
      leaf(color);
      return;
    }
    std::vector<std::uint32_t> members;
    for (std::uint32_t v = 0; v < n_; ++v) {
      if (color[v] == target) members.push_back(v);
    }
    std::vector<std::uint32_t> explored;
    for (auto u : members) {
      if (!explored.empty() && same_orbit_as_any(u, explored)) continue;
      Colors child = color;
      for (auto w : members) {
        if (w != u) child[w] = target + 1;
      }
      refine(child);
      path_.push_back(u);
      search(child);
      path_.pop_back();
      explored.push_back(u);
    }
  }

  bool same_orbit_as_any(std::uint32_t u, const std::vector<std::uint32_t>& explored) const {
    std::vector<std::uint32_t> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (const auto& gen : generators_) {
      bool fixes_path = std::all_of(path_.begin(), path_.end(), [&](std::uint32_t p) { return gen[p] == p; });
      if (!fixes_path) continue;
      any = true;
      for (std::uint32_t v = 0; v < n_; ++v) {
        auto a = find(v), b = find(gen[v]);
        if (a != b) parent[a] = b;
      }
    }
    if (!any) return false;
    const auto ru = find(u);
    return std::any_of(explored.begin(), explored.end(), [&](std::uint32_t w) { return find(w) == ru; });
  }

  void leaf(const Colors& lab) {
    std::vector<std::uint64_t> edges;
    edges.reserve(g_.target.size() / 2);
    for (std::uint32_t v = 0; v < n_; ++v) {
      for (auto i = g_.offset[v]; i < g_.offset[v + 1]; ++i) {
        const auto w = g_.target[i];
        if (v < w) {
          const std::uint64_t a = std::min(lab[v], lab[w]), b = std::max(lab[v], lab[w]);
          edges.push_back((a << 32) | b);
        }
      }
    }
    std::sort(edges.begin(), edges.end());
    if (!have_best_ || edges < best_edges_) {
      have_best_ = true;
      best_edges_ = std::move(edges);
      best_lab_ = lab;
      return;
    }
    if (edges == best_edges_) {
      std::vector<std::uint32_t> best_inverse(n_);
      for (std::uint32_t v = 0; v < n_; ++v) best_inverse[best_lab_[v]] = v;
      std::vector<std::uint32_t> gamma(n_);
      bool identity = true;
      for (std::uint32_t v = 0; v < n_; ++v) {
        gamma[v] = best_inverse[lab[v]];
        identity = identity && gamma[v] == v;
      }
      if (!identity) generators_.push_back(std::move(gamma));
    }
  }

  const Csr& g_;
  std::size_t n_;
  std::vector<std::uint32_t> nbc_;
  std::vector<std::uint32_t> order_;
  Colors scratch_;
  std::vector<std::uint32_t> path_;
  std::vector<std::vector<std::uint32_t>> generators_;
  bool have_best_ = false;
  std::vector<std::uint64_t> best_edges_;
  Colors best_lab_;
};

}  // namespace

std::string canonical_certificate(const LabeledGraph& g) {
  const std::size_t n = g.size();
  if (n == 0) return "0||";

  // Fold pendant trees into their attachment vertices, one layer of leaves
  // per round. A leaf whose only neighbour is itself a leaf is kept, so every
  // tree component shrinks to its centre (one vertex or one edge).
  std::vector<std::uint32_t> rdeg(n);
  for (std::size_t v = 0; v < n; ++v) rdeg[v] = static_cast<std::uint32_t>(g.adjacency[v].size());
  std::vector<bool> removed(n, false);
  std::vector<std::vector<std::string>> kids(n);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> round;  // (leaf, attachment)
  while (true) {
    round.clear();
    for (std::uint32_t v = 0; v < n; ++v) {
      if (removed[v] || rdeg[v] != 1) continue;
      std::uint32_t u = 0;
      for (auto w : g.adjacency[v]) {
        if (!removed[w]) u = w;
      }
      if (rdeg[u] != 1) round.emplace_back(v, u);
    }
    if (round.empty()) break;
    std::vector<std::string> codes;
    codes.reserve(round.size());
    for (auto [v, u] : round) {
      std::sort(kids[v].begin(), kids[v].end());
      std::string code = "(" + g.labels[v];
      for (const auto& k : kids[v]) code += k;
      code += ')';
      codes.push_back(std::move(code));
    }
    for (std::size_t i = 0; i < round.size(); ++i) {
      auto [v, u] = round[i];
      removed[v] = true;
      kids[u].push_back(std::move(codes[i]));
      --rdeg[u];
      kids[v].clear();
    }
  }

  std::vector<std::uint32_t> core;
  std::vector<std::uint32_t> index(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!removed[v]) {
      index[v] = static_cast<std::uint32_t>(core.size());
      core.push_back(v);
    }
  }
  std::vector<std::string> labels;
  labels.reserve(core.size());
  for (auto v : core) {
    std::sort(kids[v].begin(), kids[v].end());
    std::string code = "(" + g.labels[v];
    for (const auto& k : kids[v]) code += k;
    code += ')';
    labels.push_back(std::move(code));
  }
  Csr csr;
  csr.offset.push_back(0);
  for (auto v : core) {
    for (auto w : g.adjacency[v]) {
      if (!removed[w]) csr.target.push_back(index[w]);
    }
    csr.offset.push_back(static_cast<std::uint32_t>(csr.target.size()));
  }

  // Initial ordered partition by label.
  std::vector<std::uint32_t> order(core.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return labels[a] < labels[b]; });
  Colors color(core.size());
  std::uint32_t start = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && labels[order[i - 1]] != labels[order[i]]) start = static_cast<std::uint32_t>(i);
    color[order[i]] = start;
  }
  Labeler labeler(csr);
  return labeler.certificate_edges(labels, std::move(color));
}

}  // namespace bdtest
