#pragma once

#include <algorithm>
#include <vector>

#include "routesim/bsp.hpp"
#include "routesim/hierarchy.hpp"
#include "routesim/oracles.hpp"

namespace routesim {

struct HEntry {
  NodeId u;      // member of S_{i-1}
  Weight d;      // exact wd(v,u) after validation
  NodeId next;   // neighbor on a least-weight path (self if u == v)
};

struct ChildInterval {
  uint32_t enter, exit;
  NodeId child;
};

/// Per-stage output: closest-landmark pointers, the H sets, and the Voronoi
/// trees with DFS interval labels for center-to-member routing.
struct StageTables {
  uint32_t stage = 0;
  uint32_t h_used = 0, delta_used = 0;
  uint32_t h_bound = 0, delta_bound = 0;

  std::vector<NodeId> Y;         // closest S_i landmark
  std::vector<Weight> dY;        // wd(v, Y_v(i)) == distance to tree root
  std::vector<uint32_t> y_hops;  // hops of the min-hop shortest path to Y
  std::vector<std::vector<HEntry>> H;  // sorted by u (binary-searchable)

  std::vector<NodeId> parent;    // Voronoi tree parent (self at the root)
  std::vector<uint32_t> enter, exit;  // DFS intervals, per-tree numbering
  std::vector<std::vector<ChildInterval>> children;  // sorted by enter

  const HEntry* find_h(NodeId v, NodeId u) const {
    const auto& hv = H[v];
    size_t lo = 0, hi = hv.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (hv[mid].u < u) lo = mid + 1; else hi = mid;
    }
    if (lo < hv.size() && hv[lo].u == u) return &hv[lo];
    return nullptr;
  }

  bool in_subtree(NodeId anc, NodeId v) const {
    return Y[anc] == Y[v] && enter[anc] <= enter[v] && enter[v] <= exit[anc];
  }
};

struct ShortRangeTables {
  Hierarchy hier;
  std::vector<StageTables> stage;  // index 1..L (0 unused)
  RoundTrace trace;

  uint32_t L() const { return hier.L; }
};

struct TreeHop {
  NodeId next;
  Weight dist;
};

/// Next hop and distance within one Voronoi cell, from interval labels only:
/// descend into the unique child interval containing w, otherwise go to the
/// parent. The returned distance is exact whenever one endpoint is an
/// ancestor of the other, and the via-root path weight otherwise; either way
/// it upper-bounds the realized tree path and shrinks by the edge weight at
/// every hop.
inline TreeHop tree_next_hop(const StageTables& st, NodeId v, uint32_t w_enter, uint32_t w_exit,
                             Weight w_droot, NodeId w_cell) {
  if (st.Y[v] != w_cell)
    throw ValidationError("tree_next_hop: label not in this cell");
  (void)w_exit;
  if (st.enter[v] == w_enter) return {v, 0};
  if (st.enter[v] <= w_enter && w_enter <= st.exit[v]) {
    // w is a strict descendant: hop into the child interval holding it
    const auto& ch = st.children[v];
    size_t lo = 0, hi = ch.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (ch[mid].exit < w_enter) lo = mid + 1; else hi = mid;
    }
    if (lo >= ch.size() || w_enter < ch[lo].enter)
      throw ValidationError("tree_next_hop: interval table is inconsistent");
    return {ch[lo].child, w_droot - st.dY[v]};
  }
  if (w_enter <= st.enter[v] && st.enter[v] <= w_exit)
    return {st.parent[v], st.dY[v] - w_droot};  // w is an ancestor
  return {st.parent[v], st.dY[v] + w_droot};
}

inline TreeHop tree_next_hop(const StageTables& st, NodeId v, NodeId w) {
  return tree_next_hop(st, v, st.enter[w], st.exit[w], st.dY[w], st.Y[w]);
}

struct BuildOptions {
  uint64_t seed = 0;
  uint32_t max_retries = 5;
  bool validate = true;
  const Apsp* apsp = nullptr;  // borrowed oracle; built on demand when null
};

namespace detail {

struct StageExtraction {
  StageTables st;
  bool ok = true;
  std::string why;
};

inline StageExtraction extract_stage(const WeightedGraph& g, const Hierarchy& hier, uint32_t i,
                                     const LevelLists& lists, uint32_t h_used,
                                     uint32_t delta_used) {
  uint32_t n = g.n();
  StageExtraction ex;
  StageTables& st = ex.st;
  st.stage = i;
  st.h_used = h_used;
  st.delta_used = delta_used;
  st.h_bound = static_cast<uint32_t>(std::min<double>(hier.h_formula(i), 4e9));
  st.delta_bound = hier.delta_bound(i);
  st.Y.assign(n + 1, kNoNode);
  st.dY.assign(n + 1, 0);
  st.y_hops.assign(n + 1, 0);
  st.H.assign(n + 1, {});
  st.parent.assign(n + 1, kNoNode);

  for (NodeId v = 1; v <= n; ++v) {
    const BspFinalRec* best = nullptr;
    for (const auto& r : lists.finals[v]) {
      if (r.tag < i) continue;
      // ties by (distance, hop count, id), hop count from the first
      // iteration attaining the final distance
      if (best == nullptr || std::tie(r.d, r.t_first, r.sid) <
                                 std::tie(best->d, best->t_first, best->sid))
        best = &r;
    }
    if (best == nullptr) {
      ex.ok = false;
      ex.why = "node " + std::to_string(v) + " found no stage-" + std::to_string(i) +
               " landmark within range";
      return ex;
    }
    st.Y[v] = best->sid;
    st.dY[v] = best->d;
    st.y_hops[v] = best->t_first;
    st.parent[v] = (best->sid == v) ? v : best->next_first;
    auto& hv = st.H[v];
    for (const auto& r : lists.finals[v])
      if (r.d <= best->d) hv.push_back({r.sid, r.d, r.d == 0 ? v : r.next});
    std::sort(hv.begin(), hv.end(), [](const HEntry& a, const HEntry& b) { return a.u < b.u; });
  }

  // Voronoi trees: parents must stay in the cell and reach the root.
  std::vector<std::vector<NodeId>> kids(n + 1);
  for (NodeId v = 1; v <= n; ++v) {
    if (st.Y[v] == v) continue;
    NodeId par = st.parent[v];
    if (par == kNoNode || par == v || st.Y[par] != st.Y[v]) {
      ex.ok = false;
      ex.why = "tree parent of " + std::to_string(v) + " leaves its cell";
      return ex;
    }
    kids[par].push_back(v);
  }
  st.enter.assign(n + 1, 0);
  st.exit.assign(n + 1, 0);
  st.children.assign(n + 1, {});
  std::vector<char> seen(n + 1, 0);
  for (NodeId root = 1; root <= n; ++root) {
    if (st.Y[root] != root) continue;
    uint32_t counter = 0;
    std::vector<std::pair<NodeId, size_t>> stack{{root, 0}};
    st.enter[root] = ++counter;
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [x, idx] = stack.back();
      auto& kx = kids[x];
      if (idx == 0) std::sort(kx.begin(), kx.end());
      if (idx < kx.size()) {
        NodeId c = kx[idx++];
        st.enter[c] = ++counter;
        seen[c] = 1;
        stack.push_back({c, 0});
      } else {
        st.exit[x] = counter;
        stack.pop_back();
      }
    }
  }
  for (NodeId v = 1; v <= n; ++v) {
    if (!seen[v]) {
      ex.ok = false;
      ex.why = "node " + std::to_string(v) + " is not reachable in its Voronoi tree";
      return ex;
    }
    for (NodeId c : kids[v]) st.children[v].push_back({st.enter[c], st.exit[c], c});
    std::sort(st.children[v].begin(), st.children[v].end(),
              [](const ChildInterval& a, const ChildInterval& b) { return a.enter < b.enter; });
  }
  return ex;
}

inline bool validate_stage(const WeightedGraph& g, const Hierarchy& hier, uint32_t i,
                           const StageTables& st, const Apsp& apsp, std::string* why) {
  uint32_t n = g.n();
  auto fail = [&](const std::string& msg) {
    if (why) *why = "stage " + std::to_string(i) + ": " + msg;
    return false;
  };
  for (NodeId v = 1; v <= n; ++v) {
    // oracle landmark: min (wd, hops, id) over S_i
    NodeId best = kNoNode;
    for (NodeId u = 1; u <= n; ++u) {
      if (hier.level[u] < i) continue;
      if (best == kNoNode ||
          std::make_tuple(apsp.dist(v, u), apsp.hops(v, u), u) <
              std::make_tuple(apsp.dist(v, best), apsp.hops(v, best), best))
        best = u;
    }
    if (best == kNoNode) return fail("S_i is empty");
    if (st.Y[v] != best || st.dY[v] != apsp.dist(v, best) || st.y_hops[v] != apsp.hops(v, best))
      return fail("Y mismatch at node " + std::to_string(v));
    // H set equality with exact distances
    Weight thr = st.dY[v];
    size_t count = 0;
    for (NodeId u = 1; u <= n; ++u) {
      if (hier.level[u] < i - 1) continue;
      if (apsp.dist(v, u) > thr) continue;
      ++count;
      const HEntry* e = st.find_h(v, u);
      if (e == nullptr) return fail("H missing " + std::to_string(u) + " at " + std::to_string(v));
      if (e->d != apsp.dist(v, u)) return fail("H distance wrong at " + std::to_string(v));
      if (apsp.rank(v, u) > st.h_bound)
        return fail("H member outside ball_v(h_i)");
    }
    if (st.H[v].size() != count) return fail("H has extra members at " + std::to_string(v));
    if (st.H[v].size() > st.delta_bound) return fail("|H| exceeds Delta_i");
    // next pointers realize least-weight paths hop by hop
    for (const auto& e : st.H[v]) {
      NodeId x = v;
      Weight left = e.d;
      uint32_t guard = 0;
      while (x != e.u) {
        const HEntry* ex = st.find_h(x, e.u);
        if (ex == nullptr || ex->d != left)
          return fail("broken H chain from " + std::to_string(v) + " to " + std::to_string(e.u));
        Weight wstep = g.edge_weight(x, ex->next);
        left -= wstep;
        x = ex->next;
        if (++guard > n) return fail("H chain does not terminate");
      }
      if (left != 0) return fail("H chain weight mismatch");
    }
  }
  return true;
}

}  // namespace detail

/// Runs the staged construction: per stage i a BSP call with sources
/// S_{i-1}, extraction of Y/H/trees, then central validation of the stage
/// properties (exactness, size bounds, ball containment, tree shape). A
/// failing stage is resampled and rerun, bounded by opts.max_retries in
/// total; rounds of failed attempts stay in the trace.
inline ShortRangeTables build_short_range(const WeightedGraph& g, Hierarchy hier,
                                          SimConfig cfg = {}, BuildOptions opts = {}) {
  cfg.finalize(g.n());
  std::optional<Apsp> own_apsp;
  const Apsp* apsp = opts.apsp;
  if (opts.validate && apsp == nullptr) {
    own_apsp.emplace(g);
    apsp = &*own_apsp;
  }

  ShortRangeTables out;
  out.stage.resize(hier.L + 1);
  uint32_t retries = 0;
  for (uint32_t i = 1; i <= hier.L; ++i) {
    for (;;) {
      auto members = hier.set_members(i - 1);
      SourceAssignment src(g.n());
      for (NodeId v : members) src.set(v, v, hier.level[v]);
      uint32_t h_used = hier.h(i);
      uint32_t delta_used =
          std::min<uint32_t>(hier.delta_bound(i), static_cast<uint32_t>(members.size()));
      std::string why;
      bool ok = !members.empty() && hier.set_size(i) > 0;
      if (!ok) why = "stage " + std::to_string(i) + ": empty landmark set";
      if (ok) {
        auto res = run_bsp(g, h_used, delta_used, src, cfg, mix(opts.seed, mix(i, retries)),
                           /*endpoints=*/false, /*keep_history=*/false);
        out.trace += res.trace;
        auto ex = detail::extract_stage(g, hier, i, res.lists, h_used, delta_used);
        ok = ex.ok;
        why = ex.why;
        if (ok && opts.validate) ok = detail::validate_stage(g, hier, i, ex.st, *apsp, &why);
        if (ok) {
          out.stage[i] = std::move(ex.st);
          break;
        }
      }
      ++out.trace.retries;
      if (++retries > opts.max_retries)
        throw RetryExhausted("short-range stage " + std::to_string(i) +
                             " failed validation repeatedly (" + why +
                             "); constants c/c' too small for this n?");
      resample_stage(hier, i);
    }
  }
  out.hier = std::move(hier);
  return out;
}

}  // namespace routesim
