#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "routesim/common.hpp"

namespace routesim {

struct Edge {
  NodeId u, v;  // canonical u < v
  Weight w;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v && a.w == b.w;
  }
  friend bool operator<(const Edge& a, const Edge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.w < b.w;
  }
};

/// Simple connected undirected graph with positive integer edge weights,
/// nodes 1..n. Immutable after construction; all queries are const and safe
/// for concurrent readers.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Validates and canonicalizes an edge list. Throws ValidationError on
  /// self-loops, duplicate edges, out-of-range endpoints, zero weights,
  /// weights above n^max_weight_exp, or a disconnected result.
  static WeightedGraph from_edges(uint32_t n, std::vector<Edge> edges,
                                  uint32_t max_weight_exp = 3) {
    if (n == 0) throw ValidationError("graph must have at least one node");
    Weight wcap = kInfWeight;
    if (max_weight_exp > 0) {
      wcap = 1;
      for (uint32_t i = 0; i < max_weight_exp; ++i) {
        if (wcap > kInfWeight / n) { wcap = kInfWeight; break; }
        wcap *= n;
      }
      if (wcap < 1) wcap = 1;
    }
    for (auto& e : edges) {
      if (e.u == e.v) throw ValidationError("self-loop at node " + std::to_string(e.u));
      if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
        throw ValidationError("edge endpoint out of range");
      if (e.w < 1) throw ValidationError("edge weight must be >= 1");
      if (e.w > wcap)
        throw ValidationError("edge weight " + std::to_string(e.w) + " exceeds cap");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (size_t i = 1; i < edges.size(); ++i)
      if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
        throw ValidationError("duplicate edge " + std::to_string(edges[i].u) + "-" +
                              std::to_string(edges[i].v));

    WeightedGraph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.build_csr();
    if (!g.connected_()) throw ValidationError("graph is disconnected");
    return g;
  }

  uint32_t n() const { return n_; }
  uint32_t m() const { return static_cast<uint32_t>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(uint32_t idx) const { return edges_[idx]; }

  uint32_t degree(NodeId v) const { return adj_off_[v + 1] - adj_off_[v]; }

  struct Arc {
    NodeId to;
    Weight w;
    uint32_t edge_idx;  // index into edges()
  };

  struct ArcRange {
    const Arc* b;
    const Arc* e;
    const Arc* begin() const { return b; }
    const Arc* end() const { return e; }
    size_t size() const { return static_cast<size_t>(e - b); }
  };

  ArcRange arcs(NodeId v) const {
    return {arcs_.data() + adj_off_[v], arcs_.data() + adj_off_[v + 1]};
  }

  // First directed-arc index of v; v's arcs occupy [arc_base(v), arc_base(v)+degree(v)).
  uint32_t arc_base(NodeId v) const { return adj_off_[v]; }

  // Directed arc index of (v -> to), unique in [0, 2m). Neighbors are sorted
  // by id, so this is a binary search over v's adjacency.
  uint32_t arc_index(NodeId v, NodeId to) const {
    uint32_t lo = adj_off_[v], hi = adj_off_[v + 1];
    while (lo < hi) {
      uint32_t mid = (lo + hi) / 2;
      if (arcs_[mid].to < to) lo = mid + 1; else hi = mid;
    }
    if (lo >= adj_off_[v + 1] || arcs_[lo].to != to)
      throw Error("arc_index: " + std::to_string(to) + " is not a neighbor of " +
                  std::to_string(v));
    return lo;
  }

  bool has_edge(NodeId v, NodeId to) const {
    uint32_t lo = adj_off_[v], hi = adj_off_[v + 1];
    while (lo < hi) {
      uint32_t mid = (lo + hi) / 2;
      if (arcs_[mid].to < to) lo = mid + 1; else hi = mid;
    }
    return lo < adj_off_[v + 1] && arcs_[lo].to == to;
  }

  Weight edge_weight(NodeId v, NodeId to) const { return arcs_[arc_index(v, to)].w; }

  Weight max_weight() const {
    Weight w = 1;
    for (const auto& e : edges_) w = std::max(w, e.w);
    return w;
  }

  /// Serializes in the canonical file format: "n m", then one "u v w" line
  /// per edge with u < v, sorted.
  std::string to_string() const {
    std::ostringstream os;
    os << n_ << ' ' << edges_.size() << '\n';
    for (const auto& e : edges_) os << e.u << ' ' << e.v << ' ' << e.w << '\n';
    return os.str();
  }

 private:
  void build_csr() {
    adj_off_.assign(n_ + 2, 0);
    for (const auto& e : edges_) {
      ++adj_off_[e.u + 1];
      ++adj_off_[e.v + 1];
    }
    for (uint32_t v = 1; v <= n_; ++v) adj_off_[v + 1] += adj_off_[v];
    arcs_.resize(edges_.size() * 2);
    std::vector<uint32_t> pos(adj_off_.begin(), adj_off_.end());
    for (uint32_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      arcs_[pos[e.u]++] = {e.v, e.w, i};
      arcs_[pos[e.v]++] = {e.u, e.w, i};
    }
    for (uint32_t v = 1; v <= n_; ++v) {
      std::sort(arcs_.begin() + adj_off_[v], arcs_.begin() + adj_off_[v + 1],
                [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }
  }

  bool connected_() const {
    if (n_ == 0) return false;
    std::vector<char> seen(n_ + 1, 0);
    std::vector<NodeId> stack{1};
    seen[1] = 1;
    uint32_t cnt = 1;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (const auto& a : arcs(v)) {
        if (!seen[a.to]) {
          seen[a.to] = 1;
          ++cnt;
          stack.push_back(a.to);
        }
      }
    }
    return cnt == n_;
  }

  uint32_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<uint32_t> adj_off_;
  std::vector<Arc> arcs_;
};

/// Parses the edge-list format: first non-comment line "n m", then m lines
/// "u v w". Lines starting with '#' are comments.
inline WeightedGraph parse_graph(std::istream& in, uint32_t max_weight_exp = 3) {
  std::string line;
  uint32_t n = 0;
  size_t m = 0;
  bool header = false;
  std::vector<Edge> edges;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos || line[i] == '#') continue;
    std::istringstream ls(line);
    if (!header) {
      long long nn = -1, mm = -1;
      if (!(ls >> nn >> mm) || nn < 1 || mm < 0)
        throw ParseError("line " + std::to_string(lineno) + ": expected \"n m\" header");
      n = static_cast<uint32_t>(nn);
      m = static_cast<size_t>(mm);
      header = true;
      continue;
    }
    long long u, v, w;
    if (!(ls >> u >> v >> w) || u < 1 || v < 1 || w < 0)
      throw ParseError("line " + std::to_string(lineno) + ": expected \"u v w\"");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), static_cast<Weight>(w)});
  }
  if (!header) throw ParseError("empty graph file");
  if (edges.size() != m)
    throw ParseError("header promised " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  return WeightedGraph::from_edges(n, std::move(edges), max_weight_exp);
}

inline WeightedGraph parse_graph(const std::string& text, uint32_t max_weight_exp = 3) {
  std::istringstream is(text);
  return parse_graph(is, max_weight_exp);
}

inline WeightedGraph load_graph(const std::string& path, uint32_t max_weight_exp = 3) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  return parse_graph(in, max_weight_exp);
}

inline void save_graph(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write graph file: " + path);
  out << g.to_string();
}

}  // namespace routesim
