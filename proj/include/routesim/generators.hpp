#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "routesim/graph.hpp"

namespace routesim {

struct GenParams {
  uint32_t n = 0;
  Weight w_max = 1;       // weights uniform in [1, w_max]
  double p = 0.0;         // random_weighted edge probability; 0 = 2 ln n / n
  uint32_t rows = 0, cols = 0;  // grid
  // lb_diameter
  uint32_t m = 0;
  Weight omega_max = 0;
  std::vector<uint32_t> A, B;  // subsets of {1..m}
};

inline WeightedGraph gen_path(uint32_t n, Weight w_max, Rng& rng) {
  std::vector<Edge> e;
  for (uint32_t i = 1; i < n; ++i)
    e.push_back({i, i + 1, w_max <= 1 ? 1 : rng.range(1, w_max)});
  return WeightedGraph::from_edges(n, std::move(e), 0);
}

inline WeightedGraph gen_star(uint32_t n, Weight w_max, Rng& rng) {
  std::vector<Edge> e;
  for (uint32_t i = 2; i <= n; ++i)
    e.push_back({1, i, w_max <= 1 ? 1 : rng.range(1, w_max)});
  return WeightedGraph::from_edges(n, std::move(e), 0);
}

// Uniform random attachment tree: node i hangs off a uniform node in [1, i-1].
inline WeightedGraph gen_tree(uint32_t n, Weight w_max, Rng& rng) {
  std::vector<Edge> e;
  for (uint32_t i = 2; i <= n; ++i) {
    NodeId parent = static_cast<NodeId>(rng.range(1, i - 1));
    e.push_back({parent, i, w_max <= 1 ? 1 : rng.range(1, w_max)});
  }
  return WeightedGraph::from_edges(n, std::move(e), 0);
}

inline WeightedGraph gen_grid(uint32_t rows, uint32_t cols, Weight w_max, Rng& rng) {
  auto id = [cols](uint32_t r, uint32_t c) { return r * cols + c + 1; };
  std::vector<Edge> e;
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.push_back({id(r, c), id(r, c + 1), w_max <= 1 ? 1 : rng.range(1, w_max)});
      if (r + 1 < rows) e.push_back({id(r, c), id(r + 1, c), w_max <= 1 ? 1 : rng.range(1, w_max)});
    }
  return WeightedGraph::from_edges(rows * cols, std::move(e), 0);
}

/// G(n,p) conditioned on connectivity (reject and resample), weights uniform
/// in [1, w_max].
inline WeightedGraph gen_random_weighted(uint32_t n, double p, Weight w_max, Rng& rng) {
  if (n == 1) return WeightedGraph::from_edges(1, {}, 0);
  if (p <= 0.0) p = std::min(1.0, 2.0 * std::log(static_cast<double>(n)) / n);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Edge> e;
    for (uint32_t u = 1; u <= n; ++u)
      for (uint32_t v = u + 1; v <= n; ++v)
        if (rng.uniform() < p)
          e.push_back({u, v, w_max <= 1 ? 1 : rng.range(1, w_max)});
    try {
      return WeightedGraph::from_edges(n, std::move(e), 0);
    } catch (const ValidationError&) {
      // disconnected sample; try again
    }
  }
  throw ValidationError("gen_random_weighted: could not sample a connected graph");
}

/// The hard instance for weighted-diameter estimation: an m x m array of
/// unit-weight row paths, heavy edges from every column to its hub u_j, a
/// unit-weight binary tree over the hubs, and Alice/Bob stars attached to the
/// first and last columns. Edges from Alice to row i of column 1 are heavy
/// iff i is in A, symmetrically for Bob and column m. With A and B empty the
/// weighted diameter stays near m; if A and B intersect it exceeds omega_max,
/// while the hop diameter is O(log n) either way.
inline WeightedGraph gen_lb_diameter(uint32_t m, Weight omega_max,
                                     const std::vector<uint32_t>& A,
                                     const std::vector<uint32_t>& B) {
  if (m < 2) throw ValidationError("lb_diameter: m must be >= 2");
  for (uint32_t i : A)
    if (i < 1 || i > m) throw ValidationError("lb_diameter: A not a subset of 1..m");
  for (uint32_t i : B)
    if (i < 1 || i > m) throw ValidationError("lb_diameter: B not a subset of 1..m");

  auto vid = [m](uint32_t i, uint32_t j) { return (i - 1) * m + j; };  // 1 <= i,j <= m
  uint32_t next_id = m * m;
  std::vector<Edge> e;

  // row paths
  for (uint32_t i = 1; i <= m; ++i)
    for (uint32_t j = 1; j < m; ++j) e.push_back({vid(i, j), vid(i, j + 1), 1});

  // column hubs
  std::vector<NodeId> hub(m + 1);
  for (uint32_t j = 1; j <= m; ++j) {
    hub[j] = ++next_id;
    for (uint32_t i = 1; i <= m; ++i) e.push_back({vid(i, j), hub[j], omega_max});
  }

  // binary tree over the hubs, pairing consecutive roots until one remains
  std::vector<NodeId> layer(hub.begin() + 1, hub.end());
  while (layer.size() > 1) {
    std::vector<NodeId> up;
    for (size_t i = 0; i + 1 < layer.size(); i += 2) {
      NodeId parent = ++next_id;
      e.push_back({layer[i], parent, 1});
      e.push_back({layer[i + 1], parent, 1});
      up.push_back(parent);
    }
    if (layer.size() % 2 == 1) up.push_back(layer.back());
    layer.swap(up);
  }

  NodeId alice = ++next_id, bob = ++next_id;
  auto weight_of = [](const std::vector<uint32_t>& set, uint32_t i, Weight heavy) {
    return std::find(set.begin(), set.end(), i) != set.end() ? heavy : Weight{1};
  };
  for (uint32_t i = 1; i <= m; ++i) {
    e.push_back({vid(i, 1), alice, weight_of(A, i, omega_max)});
    e.push_back({vid(i, m), bob, weight_of(B, i, omega_max)});
  }
  e.push_back({hub[1], alice, 1});
  e.push_back({hub[m], bob, 1});

  uint32_t n = next_id;
  if (omega_max * omega_max < n)
    throw ValidationError("lb_diameter: omega_max must be >= sqrt(n)");
  return WeightedGraph::from_edges(n, std::move(e), 0);
}

inline WeightedGraph generate(const std::string& family, const GenParams& prm, uint64_t seed) {
  Rng rng(mix(seed, std::hash<std::string>{}(family)));
  if (family == "path") return gen_path(prm.n, prm.w_max, rng);
  if (family == "star") return gen_star(prm.n, prm.w_max, rng);
  if (family == "tree") return gen_tree(prm.n, prm.w_max, rng);
  if (family == "grid") {
    uint32_t r = prm.rows, c = prm.cols;
    if (r == 0 || c == 0) {
      r = static_cast<uint32_t>(std::max(1.0, std::floor(std::sqrt(double(prm.n)))));
      c = (prm.n + r - 1) / r;
    }
    return gen_grid(r, c, prm.w_max, rng);
  }
  if (family == "random_weighted") return gen_random_weighted(prm.n, prm.p, prm.w_max, rng);
  if (family == "lb_diameter") return gen_lb_diameter(prm.m, prm.omega_max, prm.A, prm.B);
  throw ValidationError("unknown graph family: " + family);
}

}  // namespace routesim
