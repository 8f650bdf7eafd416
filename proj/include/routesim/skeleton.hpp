#pragma once

#include <deque>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "routesim/bfs.hpp"
#include "routesim/bsp.hpp"
#include "routesim/oracles.hpp"

namespace routesim {

struct SkeletonParams {
  std::vector<NodeId> S;   // skeleton nodes, must contain SR
  std::vector<NodeId> SR;  // uniformly random core; the hop range derives from |SR|
  uint32_t k = 1;
  uint32_t h = 0;  // 0 = ceil(c n log2 n / |SR|), clamped to n-1
  double c = 4.0;

  uint32_t range(uint32_t n) const {
    if (h != 0) return h;
    if (SR.empty()) return n > 1 ? n - 1 : 1;
    double hh = std::ceil(c * double(n) * std::log2(std::max<double>(2.0, n)) / double(SR.size()));
    return static_cast<uint32_t>(std::min<double>(hh, n > 1 ? n - 1 : 1));
  }

  uint32_t overlap(uint32_t n) const {
    double d = std::ceil(c * std::pow(double(S.size()), 1.0 / k) *
                         std::log2(std::max<double>(2.0, n)));
    return std::max<uint32_t>(1, static_cast<uint32_t>(std::min<double>(d, double(S.size()))));
  }
};

struct SpannerEdge {
  NodeId s, t;  // s < t
  Weight w;

  friend bool operator==(const SpannerEdge& a, const SpannerEdge& b) {
    return a.s == b.s && a.t == b.t && a.w == b.w;
  }
  friend bool operator<(const SpannerEdge& a, const SpannerEdge& b) {
    return std::tie(a.s, a.t, a.w) < std::tie(b.s, b.t, b.w);
  }
};

struct AnnouncedEdge {
  NodeId owner;      // node that detected and announced the edge
  NodeId ep;         // realizing endpoint in the target cluster
  Weight w;          // = wd_h(owner, ep)
  uint32_t cluster;  // target cluster leader id at announcement time
  uint32_t phase;    // 1..k
};

struct PathPtr {
  NodeId next = kNoNode;
  Weight remaining = 0;
};

// Routing pointers stored at a node for one spanner edge {s,t}, s < t.
struct EdgePointers {
  PathPtr to_s, to_t;
};

inline uint64_t edge_key(NodeId a, NodeId b) {
  NodeId lo = std::min(a, b), hi = std::max(a, b);
  return (static_cast<uint64_t>(lo) << 32) | hi;
}

struct SkeletonBuild {
  SkeletonParams prm;
  uint32_t h_used = 0, delta_used = 0;
  std::vector<SpannerEdge> edges;        // dedup, sorted
  std::vector<AnnouncedEdge> announced;  // one record per broadcast announcement
  std::vector<uint32_t> final_cluster;   // F after the last phase (0 = none)
  // retained per-phase lists; consumed (and released) by reverse_paths
  std::vector<LevelLists> phase_lists;
  std::vector<std::unordered_map<uint64_t, EdgePointers>> pointers;  // per node
  bool reversed = false;
  RoundTrace trace;

  const EdgePointers* pointers_for(NodeId v, NodeId s, NodeId t) const {
    auto it = pointers[v].find(edge_key(s, t));
    return it == pointers[v].end() ? nullptr : &it->second;
  }
};

// Uniformly random size-m subset, by partial Fisher-Yates on a copy. Both
// the simulated construction and the centralized reference draw marks
// through this helper so that shared seeds give shared randomness.
inline std::vector<uint32_t> pick_subset(std::vector<uint32_t> pool, size_t m, Rng& rng) {
  m = std::min(m, pool.size());
  for (size_t i = 0; i < m; ++i) {
    size_t j = i + static_cast<size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

inline size_t marked_count(size_t s_size, uint32_t i, uint32_t k) {
  double target = std::pow(double(s_size), 1.0 - double(i) / k);
  return std::max<size_t>(1, static_cast<size_t>(std::llround(target)));
}

namespace detail {

inline bool in_sorted(const std::vector<uint32_t>& v, uint32_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

// One invocation of the edge-detection subroutine: BSP' with clusters merged
// as sources and a marked-flag tag, then per unmarked-cluster node an
// announcement sweep through its list in ascending order, stopping at the
// first marked cluster.
struct EdgesPhase {
  std::vector<AnnouncedEdge> announced;
  LevelLists lists;
  RoundTrace trace;
};

inline EdgesPhase edges_phase(const WeightedGraph& g, const std::vector<uint32_t>& F,
                              const std::vector<uint32_t>& R, uint32_t h, uint32_t delta,
                              uint32_t phase, SimConfig cfg, uint64_t seed) {
  SourceAssignment src(g.n());
  for (NodeId v = 1; v <= g.n(); ++v)
    if (F[v] != 0) src.set(v, F[v], in_sorted(R, F[v]) ? 1 : 0);
  EdgesPhase out;
  if (!src.any()) {
    out.lists.h = h;
    out.lists.delta = delta;
    return out;
  }
  auto res = run_bsp(g, h, delta, src, cfg, seed, /*endpoints=*/true, /*keep_history=*/true);
  out.lists = std::move(res.lists);
  out.trace = res.trace;
  for (NodeId v = 1; v <= g.n(); ++v) {
    if (F[v] == 0 || in_sorted(R, F[v])) continue;
    for (const auto& r : out.lists.finals[v]) {  // ascending (d, cluster)
      if (r.sid == F[v]) continue;               // clusters are at distance 0 of themselves
      out.announced.push_back({v, r.ep, r.d, r.sid, phase});
      if (r.tag == 1) break;  // closest marked cluster reached
    }
  }
  // every announcement is globally broadcast: (owner, endpoint, weight)
  std::vector<std::vector<Message>> payload(g.n() + 1);
  for (const auto& a : out.announced)
    payload[a.owner].push_back(
        Message::of({a.owner, a.ep, a.w}, static_cast<uint16_t>(cfg.entry_bits())));
  auto bc = broadcast_all(g, std::move(payload), cfg, mix(seed, 0xbcabca));
  out.trace += bc.trace;
  return out;
}

// Cluster update after phase i: nodes of marked clusters stay; others join
// the cluster of their heaviest announced edge if it is marked, else drop.
inline std::vector<uint32_t> update_clusters(uint32_t n, const std::vector<uint32_t>& F,
                                             const std::vector<uint32_t>& R_next,
                                             const std::vector<AnnouncedEdge>& phase_ann) {
  std::vector<uint32_t> F_next(n + 1, 0);
  std::vector<uint32_t> last_cluster(n + 1, 0);
  for (const auto& a : phase_ann) last_cluster[a.owner] = a.cluster;  // last = heaviest
  for (NodeId v = 1; v <= n; ++v) {
    if (F[v] == 0) continue;
    if (in_sorted(R_next, F[v]))
      F_next[v] = F[v];
    else if (last_cluster[v] != 0 && in_sorted(R_next, last_cluster[v]))
      F_next[v] = last_cluster[v];
  }
  return F_next;
}

}  // namespace detail

/// The h-hop skeleton graph over S, materialized exactly (oracle side):
/// dist[i][j] over skeleton indices, edges = wd_h values.
struct SkeletonGraph {
  std::vector<NodeId> nodes;
  std::vector<std::vector<Weight>> edge_w;  // kInfWeight if hop distance > h
  std::vector<std::vector<Weight>> dist;    // shortest paths within the skeleton graph

  uint32_t index(NodeId s) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), s);
    if (it == nodes.end() || *it != s) throw Error("not a skeleton node");
    return static_cast<uint32_t>(it - nodes.begin());
  }
};

inline SkeletonGraph materialize_skeleton(const WeightedGraph& g, std::vector<NodeId> S,
                                          uint32_t h) {
  std::sort(S.begin(), S.end());
  SkeletonGraph sk;
  sk.nodes = std::move(S);
  size_t m = sk.nodes.size();
  sk.edge_w.assign(m, std::vector<Weight>(m, kInfWeight));
  for (size_t i = 0; i < m; ++i) {
    auto hb = hop_bounded_dist(g, sk.nodes[i], h);
    for (size_t j = 0; j < m; ++j)
      if (j != i) sk.edge_w[i][j] = hb.dist_h[sk.nodes[j]];
    sk.edge_w[i][i] = 0;
  }
  // Dijkstra over the dense virtual graph
  sk.dist.assign(m, std::vector<Weight>(m, kInfWeight));
  for (size_t srci = 0; srci < m; ++srci) {
    auto& dist = sk.dist[srci];
    std::vector<char> done(m, 0);
    dist[srci] = 0;
    for (size_t it = 0; it < m; ++it) {
      size_t best = m;
      for (size_t j = 0; j < m; ++j)
        if (!done[j] && dist[j] != kInfWeight && (best == m || dist[j] < dist[best])) best = j;
      if (best == m) break;
      done[best] = 1;
      for (size_t j = 0; j < m; ++j)
        if (sk.edge_w[best][j] != kInfWeight && dist[best] + sk.edge_w[best][j] < dist[j])
          dist[j] = dist[best] + sk.edge_w[best][j];
    }
  }
  return sk;
}

/// All-pairs distances over a spanner edge set, with deterministic
/// predecessor choices for path reconstruction.
struct SpannerMetric {
  std::vector<NodeId> nodes;  // sorted
  std::vector<std::vector<Weight>> dist;
  std::vector<std::vector<uint32_t>> pred;  // pred[src][j] = previous index

  uint32_t index(NodeId s) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), s);
    if (it == nodes.end() || *it != s) throw Error("not a skeleton node: " + std::to_string(s));
    return static_cast<uint32_t>(it - nodes.begin());
  }

  Weight wdk(NodeId s, NodeId t) const { return dist[index(s)][index(t)]; }

  /// Spanner-edge sequence realizing the shortest s-t path in the spanner.
  std::vector<std::pair<NodeId, NodeId>> edge_path(NodeId s, NodeId t) const {
    uint32_t si = index(s), ti = index(t);
    if (dist[si][ti] == kInfWeight) throw Error("spanner is disconnected");
    std::vector<std::pair<NodeId, NodeId>> rev;
    uint32_t cur = ti;
    while (cur != si) {
      uint32_t p = pred[si][cur];
      rev.push_back({nodes[p], nodes[cur]});
      cur = p;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
  }
};

inline SpannerMetric spanner_metric(std::vector<NodeId> S, const std::vector<SpannerEdge>& edges) {
  std::sort(S.begin(), S.end());
  SpannerMetric sm;
  sm.nodes = std::move(S);
  size_t m = sm.nodes.size();
  std::vector<std::vector<std::pair<uint32_t, Weight>>> adj(m);
  for (const auto& e : edges) {
    uint32_t a = sm.index(e.s), b = sm.index(e.t);
    adj[a].push_back({b, e.w});
    adj[b].push_back({a, e.w});
  }
  sm.dist.assign(m, std::vector<Weight>(m, kInfWeight));
  sm.pred.assign(m, std::vector<uint32_t>(m, UINT32_MAX));
  for (uint32_t src = 0; src < m; ++src) {
    auto& dist = sm.dist[src];
    auto& pred = sm.pred[src];
    using Item = std::pair<Weight, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[src] = 0;
    pred[src] = src;
    pq.push({0, src});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (auto [u, w] : adj[v]) {
        Weight nd = d + w;
        if (nd < dist[u] || (nd == dist[u] && v < pred[u])) {
          dist[u] = nd;
          pred[u] = v;
          pq.push({nd, u});
        }
      }
    }
  }
  return sm;
}

struct SpannerOptions {
  uint64_t seed = 0;
  uint32_t max_retries = 5;
  bool validate = true;
  const Apsp* apsp = nullptr;  // for distance preservation; built on demand
};

namespace detail {

inline bool validate_spanner(const WeightedGraph& g, const SkeletonBuild& b, const Apsp* apsp,
                             std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  auto sk = materialize_skeleton(g, b.prm.S, b.h_used);
  size_t m = sk.nodes.size();
  for (const auto& e : b.edges) {
    Weight want = sk.edge_w[sk.index(e.s)][sk.index(e.t)];
    if (e.w != want) return fail("spanner edge weight is not wd_h");
  }
  auto sm = spanner_metric(b.prm.S, b.edges);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      if (sk.dist[i][j] == kInfWeight) return fail("skeleton graph is disconnected");
      if (sm.dist[i][j] == kInfWeight ||
          sm.dist[i][j] > Weight(2 * b.prm.k - 1) * sk.dist[i][j])
        return fail("spanner stretch exceeds 2k-1");
      if (sm.dist[i][j] < sk.dist[i][j]) return fail("spanner shorter than skeleton graph");
      if (apsp && sk.dist[i][j] != apsp->dist(sk.nodes[i], sk.nodes[j]))
        return fail("skeleton-graph distance differs from true distance");
    }
  double bound = 8.0 * b.prm.k * std::pow(double(m), 1.0 + 1.0 / b.prm.k) *
                 std::log2(std::max<double>(2.0, g.n()));
  if (double(b.edges.size()) > bound) return fail("spanner has too many edges");
  return true;
}

}  // namespace detail

/// Algorithm-3 construction: k-1 marking phases plus a final one. All
/// broadcast costs (initial clusters, marks, announcements) go through
/// broadcast_all and are charged to the trace. Validation failures redraw
/// the marks; the random core SR itself is the caller's to resample.
inline SkeletonBuild build_spanner(const WeightedGraph& g, SkeletonParams prm, SimConfig cfg = {},
                                   SpannerOptions opts = {}) {
  cfg.finalize(g.n());
  if (prm.S.empty()) throw ValidationError("skeleton set must be non-empty");
  std::sort(prm.S.begin(), prm.S.end());
  prm.S.erase(std::unique(prm.S.begin(), prm.S.end()), prm.S.end());
  std::sort(prm.SR.begin(), prm.SR.end());
  for (NodeId v : prm.SR)
    if (!detail::in_sorted(prm.S, v)) throw ValidationError("SR must be a subset of S");
  if (prm.k < 1) throw ValidationError("k must be >= 1");

  std::optional<Apsp> own_apsp;
  const Apsp* apsp = opts.apsp;
  if (opts.validate && apsp == nullptr) {
    own_apsp.emplace(g);
    apsp = &*own_apsp;
  }

  uint32_t attempts = 0;
  for (;;) {
    SkeletonBuild b;
    b.prm = prm;
    b.h_used = prm.range(g.n());
    b.delta_used = prm.overlap(g.n());
    b.phase_lists.resize(prm.k + 1);
    b.pointers.assign(g.n() + 1, {});
    Rng marks(mix(opts.seed, 0x5eedul + attempts));

    std::vector<uint32_t> F(g.n() + 1, 0);
    for (NodeId v : prm.S) F[v] = v;
    {
      // R_1 = S is broadcast so every node knows the initial clusters
      std::vector<std::vector<Message>> init(g.n() + 1);
      for (NodeId v : prm.S)
        init[v].push_back(Message::of({v}, static_cast<uint16_t>(cfg.word)));
      auto bc = broadcast_all(g, std::move(init), cfg, mix(opts.seed, 1));
      b.trace += bc.trace;
    }

    std::vector<uint32_t> R(prm.S.begin(), prm.S.end());
    for (uint32_t i = 1; i + 1 <= prm.k; ++i) {
      auto R_next = pick_subset(R, marked_count(prm.S.size(), i, prm.k), marks);
      {
        std::vector<std::vector<Message>> init(g.n() + 1);
        for (uint32_t leader : R_next)
          init[leader].push_back(Message::of({leader}, static_cast<uint16_t>(cfg.word)));
        auto bc = broadcast_all(g, std::move(init), cfg, mix(opts.seed, 100 + i));
        b.trace += bc.trace;
      }
      auto ph = detail::edges_phase(g, F, R_next, b.h_used, b.delta_used, i, cfg,
                                    mix(opts.seed, mix(attempts, i)));
      b.trace += ph.trace;
      b.phase_lists[i] = std::move(ph.lists);
      F = detail::update_clusters(g.n(), F, R_next, ph.announced);
      for (auto& a : ph.announced) b.announced.push_back(a);
      R = std::move(R_next);
    }
    {
      auto ph = detail::edges_phase(g, F, {}, b.h_used, b.delta_used, prm.k, cfg,
                                    mix(opts.seed, mix(attempts, prm.k)));
      b.trace += ph.trace;
      b.phase_lists[prm.k] = std::move(ph.lists);
      for (auto& a : ph.announced) b.announced.push_back(a);
    }
    b.final_cluster = F;

    for (const auto& a : b.announced) {
      SpannerEdge e{std::min(a.owner, a.ep), std::max(a.owner, a.ep), a.w};
      b.edges.push_back(e);
    }
    std::sort(b.edges.begin(), b.edges.end());
    b.edges.erase(std::unique(b.edges.begin(), b.edges.end()), b.edges.end());
    for (size_t i = 1; i < b.edges.size(); ++i)
      if (b.edges[i].s == b.edges[i - 1].s && b.edges[i].t == b.edges[i - 1].t)
        throw ValidationError("same skeleton pair announced with two weights");

    std::string why;
    if (!opts.validate || detail::validate_spanner(g, b, apsp, &why)) {
      b.trace.retries += attempts;
      return b;
    }
    if (why.find("differs from true distance") != std::string::npos ||
        why.find("disconnected") != std::string::npos)
      throw RetryExhausted("skeleton range too small for this skeleton set: " + why);
    if (++attempts > opts.max_retries)
      throw RetryExhausted("spanner validation failed repeatedly: " + why);
  }
}

namespace detail {

// Path reversal as a queued routing protocol: one message per spanner edge,
// traced along the BSP' pointers of its discovery phase, one message per
// directed physical edge per round. Pointer tables fill in as messages pass.
class ReversalProtocol : public Protocol {
 public:
  ReversalProtocol(SkeletonBuild& b) : b_(b) {}

  void begin(Sim& s) override {
    queues_.assign(s.n() + 1, {});
    for (const auto& a : b_.announced) {
      if (a.owner == a.ep) continue;
      const BspFinalRec* rec = b_.phase_lists[a.phase].final_rec(a.owner, a.cluster);
      if (rec == nullptr || rec->d != a.w)
        throw ValidationError("reversal: owner lost its announced entry");
      slot_(a.owner, a.owner, a.ep, a.ep) = {rec->next, a.w};
      Msg m{a.owner, a.ep, a.cluster, a.phase, b_.phase_lists[a.phase].h, a.w};
      queues_[a.owner][rec->next].push_back(m);
    }
    pump_(s);
  }

  void step(Sim& s, NodeId v) override {
    for (const auto& dv : s.inbox(v)) {
      Msg m{static_cast<NodeId>(dv.msg.f[0]), static_cast<NodeId>(dv.msg.f[1]),
            static_cast<uint32_t>(dv.msg.f[2]), static_cast<uint32_t>(dv.msg.f[3]),
            static_cast<uint32_t>(dv.msg.f[4]), dv.msg.f[5]};
      if (v == m.ep) {
        slot_(v, m.owner, m.ep, m.owner) = {dv.from, m.total};
        continue;
      }
      uint32_t lvl = m.lvl - 1;
      const BspEntry* e = nullptr;
      for (const auto& cand : b_.phase_lists[m.phase].level(v, lvl))
        if (cand.sid == m.cluster) { e = &cand; break; }
      if (e == nullptr || e->d == 0)
        throw ValidationError("reversal: intermediate node lost the path entry");
      slot_(v, m.owner, m.ep, m.owner) = {dv.from, m.total - e->d};
      slot_(v, m.owner, m.ep, m.ep) = {e->next, e->d};
      Msg fwd = m;
      fwd.lvl = lvl;
      queues_[v][e->next].push_back(fwd);
    }
    pump_one_(s, v);
  }

  bool done(const Sim& s) const override { return s.quiescent(); }

 private:
  struct Msg {
    NodeId owner, ep;
    uint32_t cluster, phase, lvl;
    Weight total;
  };

  // the directional pointer slot at node v, for spanner edge {a,b}, toward
  // `target` (one of a, b); to_t points toward the larger endpoint id
  PathPtr& slot_(NodeId v, NodeId a, NodeId b, NodeId target) {
    auto& p = b_.pointers[v][edge_key(a, b)];
    return target == std::max(a, b) ? p.to_t : p.to_s;
  }

  void pump_one_(Sim& s, NodeId v) {
    auto& qs = queues_[v];
    for (auto it = qs.begin(); it != qs.end();) {
      auto& dq = it->second;
      if (!dq.empty()) {
        const Msg& m = dq.front();
        Message msg;
        msg.nf = 6;
        msg.f = {m.owner, m.ep, m.cluster, m.phase, m.lvl, m.total};
        msg.bits = static_cast<uint16_t>(s.cfg().entry_bits());
        s.send(v, it->first, msg);
        dq.pop_front();
      }
      if (dq.empty())
        it = qs.erase(it);
      else
        ++it;
    }
  }

  void pump_(Sim& s) {
    for (NodeId v = 1; v <= s.n(); ++v) pump_one_(s, v);
  }

  SkeletonBuild& b_;
  std::vector<std::map<NodeId, std::deque<Msg>>> queues_;
};

}  // namespace detail

/// Installs bidirectional next-hop/remaining-weight pointers on every
/// realizing path, then releases the per-phase list history.
inline void reverse_paths(const WeightedGraph& g, SkeletonBuild& b, SimConfig cfg = {},
                          uint64_t seed = 0) {
  if (b.reversed) return;
  cfg.finalize(g.n());
  Sim sim(g, cfg, seed);
  detail::ReversalProtocol proto(b);
  RoundTrace tr = sim.run(proto);
  b.trace += tr;
  // keys whose ep-side pointer never landed exist only for self-edges
  b.phase_lists.clear();
  b.phase_lists.shrink_to_fit();
  b.reversed = true;
}

/// Wait-free edge key ordering for pointer lookups: the {s,t} key is stored
/// with s < t; to_t points toward the larger id.
inline PathPtr pointer_toward(const SkeletonBuild& b, NodeId v, NodeId s, NodeId t) {
  const EdgePointers* p = b.pointers_for(v, s, t);
  if (p == nullptr) return {};
  return t > s ? p->to_t : p->to_s;
}

// ---- centralized reference (fidelity oracle) -------------------------------

/// Baswana-Sen with the same delta-closest-clusters restriction and mark
/// randomness, run directly on per-node cluster lists computed by the
/// untruncated reference Bellman-Ford. Shares no code with the simulated
/// message dynamics beyond the entry ordering.
inline std::vector<SpannerEdge> bs_reference(const WeightedGraph& g, std::vector<NodeId> S,
                                             uint32_t k, uint32_t h, uint32_t delta,
                                             uint64_t seed, uint32_t attempt = 0) {
  std::sort(S.begin(), S.end());
  Rng marks(mix(seed, 0x5eedul + attempt));
  std::vector<uint32_t> F(g.n() + 1, 0);
  for (NodeId v : S) F[v] = v;
  std::vector<uint32_t> R(S.begin(), S.end());
  std::vector<SpannerEdge> acc;

  auto run_phase = [&](const std::vector<uint32_t>& R_marked, uint32_t phase) {
    SourceAssignment src(g.n());
    for (NodeId v = 1; v <= g.n(); ++v)
      if (F[v] != 0) src.set(v, F[v], detail::in_sorted(R_marked, F[v]) ? 1 : 0);
    std::vector<AnnouncedEdge> ann;
    if (!src.any()) return ann;
    auto ref = reference_bsp(g, src, h);
    for (NodeId v = 1; v <= g.n(); ++v) {
      if (F[v] == 0 || detail::in_sorted(R_marked, F[v])) continue;
      std::vector<BspEntry> lv = ref[v][h - 1];
      if (lv.size() > delta) lv.resize(delta);  // the delta-closest restriction
      for (const auto& e : lv) {
        if (e.sid == F[v]) continue;
        ann.push_back({v, e.ep, e.d, e.sid, phase});
        if (e.tag == 1) break;
      }
    }
    return ann;
  };

  for (uint32_t i = 1; i + 1 <= k; ++i) {
    auto R_next = pick_subset(R, marked_count(S.size(), i, k), marks);
    auto ann = run_phase(R_next, i);
    for (const auto& a : ann) acc.push_back({std::min(a.owner, a.ep), std::max(a.owner, a.ep), a.w});
    F = detail::update_clusters(g.n(), F, R_next, ann);
    R = std::move(R_next);
  }
  auto ann = run_phase({}, k);
  for (const auto& a : ann) acc.push_back({std::min(a.owner, a.ep), std::max(a.owner, a.ep), a.w});
  std::sort(acc.begin(), acc.end());
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  return acc;
}

}  // namespace routesim
