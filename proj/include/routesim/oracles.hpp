#pragma once

#include <algorithm>
#include <queue>
#include <vector>

#include "routesim/graph.hpp"

namespace routesim {

// Centralized exact computations. Everything in this header is the ground
// truth that protocol outputs and built tables are checked against; none of
// it runs through the round engine.

struct DistanceTable {
  NodeId source = kNoNode;
  std::vector<Weight> dist;  // indexed by node id; dist[source] = 0
  std::vector<NodeId> pred;  // predecessor on a shortest path, source/unreached -> kNoNode
};

struct HopBoundedTable {
  NodeId source = kNoNode;
  uint32_t h = 0;
  std::vector<Weight> dist_h;  // kInfWeight where hop distance exceeds h
};

struct GraphMetrics {
  uint32_t hd = 0;   // hop diameter
  Weight wd = 0;     // weighted diameter
  uint32_t spd = 0;  // shortest-paths diameter
};

inline DistanceTable dijkstra(const WeightedGraph& g, NodeId s) {
  DistanceTable t;
  t.source = s;
  t.dist.assign(g.n() + 1, kInfWeight);
  t.pred.assign(g.n() + 1, kNoNode);
  using Item = std::pair<Weight, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  t.dist[s] = 0;
  pq.push({0, s});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > t.dist[v]) continue;
    for (const auto& a : g.arcs(v)) {
      Weight nd = d + a.w;
      if (nd < t.dist[a.to] || (nd == t.dist[a.to] && v < t.pred[a.to])) {
        t.dist[a.to] = nd;
        t.pred[a.to] = v;
        pq.push({nd, a.to});
      }
    }
  }
  return t;
}

/// Dijkstra over the lexicographic key (weight, hops): hops[v] is the fewest
/// edges among minimum-weight s-v paths. This is the oracle behind SPD and
/// behind landmark tie-breaking.
struct HopAwareTable {
  std::vector<Weight> dist;
  std::vector<uint32_t> hops;
};

inline HopAwareTable dijkstra_hops(const WeightedGraph& g, NodeId s) {
  HopAwareTable t;
  t.dist.assign(g.n() + 1, kInfWeight);
  t.hops.assign(g.n() + 1, 0);
  using Key = std::pair<Weight, uint32_t>;
  using Item = std::pair<Key, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  t.dist[s] = 0;
  pq.push({{0, 0}, s});
  while (!pq.empty()) {
    auto [key, v] = pq.top();
    pq.pop();
    if (key > Key{t.dist[v], t.hops[v]}) continue;
    for (const auto& a : g.arcs(v)) {
      Key nk{key.first + a.w, key.second + 1};
      if (t.dist[a.to] == kInfWeight || nk < Key{t.dist[a.to], t.hops[a.to]}) {
        t.dist[a.to] = nk.first;
        t.hops[a.to] = nk.second;
        pq.push({nk, a.to});
      }
    }
  }
  return t;
}

inline std::vector<uint32_t> bfs_depths(const WeightedGraph& g, NodeId s) {
  std::vector<uint32_t> d(g.n() + 1, UINT32_MAX);
  std::queue<NodeId> q;
  d[s] = 0;
  q.push(s);
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    for (const auto& a : g.arcs(v))
      if (d[a.to] == UINT32_MAX) {
        d[a.to] = d[v] + 1;
        q.push(a.to);
      }
  }
  return d;
}

/// wd_h by h rounds of Bellman-Ford relaxation from s.
inline HopBoundedTable hop_bounded_dist(const WeightedGraph& g, NodeId s, uint32_t h) {
  HopBoundedTable t;
  t.source = s;
  t.h = h;
  t.dist_h.assign(g.n() + 1, kInfWeight);
  t.dist_h[s] = 0;
  std::vector<Weight> cur = t.dist_h;
  for (uint32_t it = 0; it < h; ++it) {
    bool changed = false;
    std::vector<Weight> nxt = cur;
    for (const auto& e : g.edges()) {
      if (cur[e.u] != kInfWeight && cur[e.u] + e.w < nxt[e.v]) { nxt[e.v] = cur[e.u] + e.w; changed = true; }
      if (cur[e.v] != kInfWeight && cur[e.v] + e.w < nxt[e.u]) { nxt[e.u] = cur[e.v] + e.w; changed = true; }
    }
    cur.swap(nxt);
    if (!changed) break;
  }
  t.dist_h = std::move(cur);
  return t;
}

/// Multi-source exact distance: dist to the closest node of `set`.
inline std::vector<Weight> multi_source_dist(const WeightedGraph& g,
                                             const std::vector<NodeId>& set) {
  std::vector<Weight> dist(g.n() + 1, kInfWeight);
  using Item = std::pair<Weight, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (NodeId s : set) {
    dist[s] = 0;
    pq.push({0, s});
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const auto& a : g.arcs(v))
      if (d + a.w < dist[a.to]) {
        dist[a.to] = d + a.w;
        pq.push({d + a.w, a.to});
      }
  }
  return dist;
}

/// ball_v(i): the i nodes closest to v in (wd, id) order.
inline std::vector<NodeId> ball(const WeightedGraph& g, NodeId v, uint32_t i) {
  if (i < 1 || i > g.n()) throw ValidationError("ball: i out of range");
  DistanceTable t = dijkstra(g, v);
  std::vector<NodeId> order(g.n());
  for (uint32_t u = 1; u <= g.n(); ++u) order[u - 1] = u;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return std::tie(t.dist[a], a) < std::tie(t.dist[b], b);
  });
  order.resize(i);
  return order;
}

inline GraphMetrics metrics(const WeightedGraph& g) {
  GraphMetrics m;
  for (NodeId v = 1; v <= g.n(); ++v) {
    auto depths = bfs_depths(g, v);
    auto t = dijkstra_hops(g, v);
    for (NodeId u = 1; u <= g.n(); ++u) {
      m.hd = std::max(m.hd, depths[u]);
      m.wd = std::max(m.wd, t.dist[u]);
      m.spd = std::max(m.spd, t.hops[u]);
    }
  }
  return m;
}

/// All-pairs (dist, min-hops-among-shortest-paths) cache. n is desk-scale
/// throughout, so the n^2 tables are the cheapest way to drive validation.
class Apsp {
 public:
  explicit Apsp(const WeightedGraph& g) : n_(g.n()) {
    dist_.resize(static_cast<size_t>(n_ + 1) * (n_ + 1));
    hops_.resize(dist_.size());
    for (NodeId v = 1; v <= n_; ++v) {
      auto t = dijkstra_hops(g, v);
      for (NodeId u = 1; u <= n_; ++u) {
        at_(dist_, v, u) = t.dist[u];
        at_(hops_, v, u) = t.hops[u];
      }
    }
    rank_order_.resize(static_cast<size_t>(n_ + 1));
    for (NodeId v = 1; v <= n_; ++v) {
      auto& ord = rank_order_[v];
      ord.resize(n_);
      for (NodeId u = 1; u <= n_; ++u) ord[u - 1] = u;
      std::sort(ord.begin(), ord.end(), [&](NodeId a, NodeId b) {
        return std::tie(at_c_(dist_, v, a), a) < std::tie(at_c_(dist_, v, b), b);
      });
    }
  }

  Weight dist(NodeId v, NodeId u) const { return at_c_(dist_, v, u); }
  uint32_t hops(NodeId v, NodeId u) const { return static_cast<uint32_t>(at_c_(hops_, v, u)); }

  /// 1-based rank of u in v's (wd, id) order; u is in ball_v(i) iff rank <= i.
  uint32_t rank(NodeId v, NodeId u) const {
    const auto& ord = rank_order_[v];
    auto it = std::lower_bound(ord.begin(), ord.end(), u, [&](NodeId a, NodeId b_id) {
      return std::tie(at_c_(dist_, v, a), a) < std::tie(at_c_(dist_, v, b_id), b_id);
    });
    return static_cast<uint32_t>(it - ord.begin()) + 1;
  }

  const std::vector<NodeId>& order(NodeId v) const { return rank_order_[v]; }

 private:
  template <class T>
  T& at_(std::vector<T>& a, NodeId v, NodeId u) {
    return a[static_cast<size_t>(v) * (n_ + 1) + u];
  }
  template <class T>
  const T& at_c_(const std::vector<T>& a, NodeId v, NodeId u) const {
    return a[static_cast<size_t>(v) * (n_ + 1) + u];
  }

  uint32_t n_;
  std::vector<Weight> dist_;
  std::vector<uint64_t> hops_;
  std::vector<std::vector<NodeId>> rank_order_;
};

}  // namespace routesim
