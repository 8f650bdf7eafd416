#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "routesim/sim.hpp"

namespace routesim {

// Source sets: source(v) = 0 means v is not a source; nodes sharing a source
// id act as one source, as if joined by 0-weight edges. The tag is a small
// payload carried with the id (hierarchy level, marked-cluster flag).
struct SourceAssignment {
  std::vector<uint32_t> sid;  // indexed by node, 0 = none
  std::vector<uint8_t> tag;

  explicit SourceAssignment(uint32_t n) : sid(n + 1, 0), tag(n + 1, 0) {}

  void set(NodeId v, uint32_t id, uint8_t t = 0) {
    sid[v] = id;
    tag[v] = t;
  }

  static SourceAssignment singletons(uint32_t n, const std::vector<NodeId>& nodes) {
    SourceAssignment a(n);
    for (NodeId v : nodes) a.set(v, v);
    return a;
  }

  bool any() const {
    for (uint32_t s : sid)
      if (s) return true;
    return false;
  }
};


// Source ids are opaque O(log n)-bit tokens; direct-address tables over them
// are sized from the assignment.
inline uint32_t max_sid(const SourceAssignment& a) {
  uint32_t m = 0;
  for (uint32_t s : a.sid) m = std::max(m, s);
  if (m > (1u << 22))
    throw ValidationError("source ids too large for direct addressing");
  return m;
}

struct BspEntry {
  Weight d = 0;
  uint32_t sid = 0;
  NodeId next = kNoNode;  // self or a neighbor
  NodeId ep = kNoNode;    // realizing endpoint (BSP' only)
  uint8_t tag = 0;
};

// Lexicographic entry order (d, sid, next), exactly the order used for
// truncation and for reading lists back.
inline bool entry_less(const BspEntry& a, const BspEntry& b) {
  return std::tie(a.d, a.sid, a.next) < std::tie(b.d, b.sid, b.next);
}

/// Per-source outcome of a run, extracted from the final list L_v(h).
/// t_first is the earliest iteration at which the final distance was already
/// attained; next_first is the next hop recorded at that iteration, i.e. a
/// hop along a minimum-hop shortest path.
struct BspFinalRec {
  uint32_t sid = 0;
  uint8_t tag = 0;
  Weight d = 0;
  NodeId next = kNoNode;       // next hop in L_v(h)
  NodeId next_first = kNoNode;
  NodeId ep = kNoNode;
  uint32_t t_first = 0;
};

struct LevelLists {
  uint32_t h = 0;
  uint32_t delta = 0;
  bool with_endpoints = false;
  bool with_history = false;
  // history[v][t-1] = L_v(t), sorted by entry_less; only filled when kept.
  std::vector<std::vector<std::vector<BspEntry>>> history;
  // finals[v] = records of L_v(h), sorted by (d, sid, next).
  std::vector<std::vector<BspFinalRec>> finals;

  const std::vector<BspEntry>& level(NodeId v, uint32_t t) const { return history[v][t - 1]; }

  const BspEntry* find(NodeId v, uint32_t t, uint32_t sid) const {
    for (const auto& e : history[v][t - 1])
      if (e.sid == sid) return &e;
    return nullptr;
  }

  const BspFinalRec* final_rec(NodeId v, uint32_t sid) const {
    for (const auto& r : finals[v])
      if (r.sid == sid) return &r;
    return nullptr;
  }
};

namespace detail {

// Algorithm-1 dynamics on the round engine. One iteration spans exactly
// delta rounds: in subround j each node sends the j-th entry of its previous
// list to all neighbors, so one entry is one message and the whole run takes
// h*delta + 1 rounds.
class BspProtocol : public Protocol {
 public:
  BspProtocol(const SourceAssignment& src, uint32_t h, uint32_t delta, bool endpoints,
              bool keep_history)
      : src_(src), h_(h), delta_(delta), endpoints_(endpoints), keep_history_(keep_history) {}

  void begin(Sim& s) override {
    uint32_t n = s.n();
    lists_.assign(n + 1, {});
    recs_.assign(n + 1, {});
    if (keep_history_) history_.assign(n + 1, {});
    sid_cap_ = max_sid(src_) + 1;
    slot_d_.assign(static_cast<size_t>(n + 1) * sid_cap_, 0);
    slot_next_.assign(slot_d_.size(), 0);
    slot_ep_.assign(slot_d_.size(), 0);
    slot_tag_.assign(slot_d_.size(), 0);
    slot_epoch_.assign(slot_d_.size(), 0);
    touched_.assign(n + 1, {});
    n_ = n;
    for (NodeId v = 1; v <= n; ++v)
      if (src_.sid[v]) {
        lists_[v].push_back(own_entry_(v));
        recs_[v].push_back({src_.sid[v], 0, v, 0});
      }
    entry_bits_ = static_cast<uint16_t>(s.cfg().entry_bits());
    // subround 0 of iteration 1
    for (NodeId v = 1; v <= n; ++v)
      if (!lists_[v].empty()) send_entry_(s, v, lists_[v][0]);
  }

  void step(Sim& s, NodeId v) override {
    uint64_t r = s.round();
    // Subround j of iteration t is sent in round (t-1)*delta + j (round 0 is
    // begin), so a message delivered in round r belongs to iteration
    // (r-1)/delta + 1; that index stamps the accumulation slots.
    uint32_t t_of_msgs = static_cast<uint32_t>((r - 1) / delta_) + 1;
    for (const auto& dv : s.inbox(v)) relax_(s, v, dv, t_of_msgs);
    if (r % delta_ == 0 && r / delta_ <= h_) finalize_(v, static_cast<uint32_t>(r / delta_));
    if (r <= static_cast<uint64_t>(h_) * delta_ - 1) {
      uint32_t j = static_cast<uint32_t>(r % delta_);
      if (j < lists_[v].size()) send_entry_(s, v, lists_[v][j]);
    }
  }

  bool done(const Sim& s) const override {
    return s.round() >= static_cast<uint64_t>(h_) * delta_;
  }

  LevelLists take_lists(uint32_t n) {
    LevelLists out;
    out.h = h_;
    out.delta = delta_;
    out.with_endpoints = endpoints_;
    out.with_history = keep_history_;
    if (keep_history_) out.history = std::move(history_);
    out.finals.assign(n + 1, {});
    for (NodeId v = 1; v <= n; ++v) {
      for (const auto& e : lists_[v]) {
        BspFinalRec r;
        r.sid = e.sid;
        r.tag = e.tag;
        r.d = e.d;
        r.next = e.next;
        r.ep = e.ep;
        auto it = find_rec_(v, e.sid);
        r.t_first = it->t_first;
        r.next_first = it->next_first;
        out.finals[v].push_back(r);
      }
    }
    return out;
  }

 private:
  struct Rec {
    uint32_t sid;
    Weight d;
    NodeId next_first;
    uint32_t t_first;
  };

  BspEntry own_entry_(NodeId v) const {
    BspEntry e;
    e.d = 0;
    e.sid = src_.sid[v];
    e.tag = src_.tag[v];
    e.next = v;
    e.ep = v;
    return e;
  }

  void send_entry_(Sim& s, NodeId v, const BspEntry& e) {
    Message m;
    m.nf = 4;
    m.f[0] = e.d;
    m.f[1] = e.sid;
    m.f[2] = e.tag;
    m.f[3] = e.ep;
    m.bits = entry_bits_;
    s.send_all(v, m);
  }

  void relax_(Sim& s, NodeId v, const Delivery& dv, uint32_t t) {
    Weight nd = dv.msg.f[0] + s.graph().edge_weight(v, dv.from);
    uint32_t sid = static_cast<uint32_t>(dv.msg.f[1]);
    size_t slot = static_cast<size_t>(v) * sid_cap_ + sid;
    if (slot_epoch_[slot] != t) {
      slot_epoch_[slot] = t;
      slot_d_[slot] = nd;
      slot_next_[slot] = dv.from;
      slot_ep_[slot] = static_cast<NodeId>(dv.msg.f[3]);
      slot_tag_[slot] = static_cast<uint8_t>(dv.msg.f[2]);
      touched_[v].push_back(sid);
    } else if (std::tie(nd, dv.from) < std::tie(slot_d_[slot], slot_next_[slot])) {
      slot_d_[slot] = nd;
      slot_next_[slot] = dv.from;
      slot_ep_[slot] = static_cast<NodeId>(dv.msg.f[3]);
      slot_tag_[slot] = static_cast<uint8_t>(dv.msg.f[2]);
    }
  }

  void finalize_(NodeId v, uint32_t t) {
    std::vector<BspEntry> next;
    next.reserve(touched_[v].size() + 1);
    uint32_t own = src_.sid[v];
    for (uint32_t sid : touched_[v]) {
      if (sid == own) continue;  // own source entry below, d=0 always wins
      size_t slot = static_cast<size_t>(v) * sid_cap_ + sid;
      BspEntry e;
      e.d = slot_d_[slot];
      e.sid = sid;
      e.tag = slot_tag_[slot];
      e.next = slot_next_[slot];
      e.ep = slot_ep_[slot];
      next.push_back(e);
    }
    if (own) next.push_back(own_entry_(v));
    std::sort(next.begin(), next.end(), entry_less);
    if (next.size() > delta_) next.resize(delta_);
    touched_[v].clear();
    // carry t_first across iterations where the distance did not change
    std::vector<Rec> nrecs;
    nrecs.reserve(next.size());
    for (const auto& e : next) {
      auto it = find_rec_(v, e.sid);
      if (it != nullptr && it->d == e.d)
        nrecs.push_back(*it);
      else
        nrecs.push_back({e.sid, e.d, e.next, t});
    }
    std::sort(nrecs.begin(), nrecs.end(),
              [](const Rec& a, const Rec& b) { return a.sid < b.sid; });
    recs_[v] = std::move(nrecs);
    lists_[v] = std::move(next);
    if (keep_history_) history_[v].push_back(lists_[v]);
  }

  const Rec* find_rec_(NodeId v, uint32_t sid) const {
    const auto& rs = recs_[v];
    size_t lo = 0, hi = rs.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (rs[mid].sid < sid) lo = mid + 1; else hi = mid;
    }
    if (lo < rs.size() && rs[lo].sid == sid) return &rs[lo];
    return nullptr;
  }

  const SourceAssignment& src_;
  uint32_t h_, delta_;
  bool endpoints_, keep_history_;
  uint16_t entry_bits_ = 0;
  uint32_t n_ = 0;
  uint32_t sid_cap_ = 0;

  std::vector<std::vector<BspEntry>> lists_;
  std::vector<std::vector<std::vector<BspEntry>>> history_;
  std::vector<std::vector<Rec>> recs_;
  std::vector<Weight> slot_d_;
  std::vector<NodeId> slot_next_, slot_ep_;
  std::vector<uint8_t> slot_tag_;
  std::vector<uint32_t> slot_epoch_;
  std::vector<std::vector<uint32_t>> touched_;
};

}  // namespace detail

struct BspResult {
  LevelLists lists;
  RoundTrace trace;
};

inline BspResult run_bsp(const WeightedGraph& g, uint32_t h, uint32_t delta,
                         const SourceAssignment& src, SimConfig cfg = {}, uint64_t seed = 0,
                         bool endpoints = false, bool keep_history = true) {
  if (h < 1 || delta < 1) throw ValidationError("bsp: need h >= 1 and delta >= 1");
  if (!src.any()) throw ValidationError("bsp: at least one source required");
  cfg.finalize(g.n());
  Sim sim(g, cfg, seed);
  detail::BspProtocol proto(src, h, delta, endpoints, keep_history);
  RoundTrace tr = sim.run(proto);
  return {proto.take_lists(g.n()), tr};
}

inline BspResult bsp(const WeightedGraph& g, uint32_t h, uint32_t delta,
                     const SourceAssignment& src, SimConfig cfg = {}, uint64_t seed = 0) {
  return run_bsp(g, h, delta, src, cfg, seed, /*endpoints=*/false, /*keep_history=*/true);
}

/// BSP': every communicated triple additionally carries the identifier of
/// the endpoint realizing the path.
inline BspResult bsp_prime(const WeightedGraph& g, uint32_t h, uint32_t delta,
                           const SourceAssignment& src, SimConfig cfg = {}, uint64_t seed = 0) {
  return run_bsp(g, h, delta, src, cfg, seed, /*endpoints=*/true, /*keep_history=*/true);
}

// ---- centralized reference (the oracle for truncation equivalence) --------

/// Untruncated bounded Bellman-Ford with the exact relaxation and tie-break
/// rules of the protocol, computed by plain array iteration. Returns the
/// full per-level lists; compare the delta-smallest prefix against a run.
inline std::vector<std::vector<std::vector<BspEntry>>> reference_bsp(
    const WeightedGraph& g, const SourceAssignment& src, uint32_t h) {
  uint32_t n = g.n();
  std::vector<std::vector<BspEntry>> cur(n + 1);
  for (NodeId v = 1; v <= n; ++v)
    if (src.sid[v]) {
      BspEntry e;
      e.d = 0;
      e.sid = src.sid[v];
      e.tag = src.tag[v];
      e.next = v;
      e.ep = v;
      cur[v].push_back(e);
    }
  std::vector<std::vector<std::vector<BspEntry>>> out(n + 1);
  uint32_t sid_cap = max_sid(src) + 1;
  std::vector<BspEntry> slot(sid_cap);
  std::vector<uint32_t> stamp(sid_cap, 0);
  uint32_t epoch = 0;
  for (uint32_t t = 1; t <= h; ++t) {
    std::vector<std::vector<BspEntry>> nxt(n + 1);
    for (NodeId v = 1; v <= n; ++v) {
      ++epoch;
      std::vector<uint32_t> touched;
      for (const auto& a : g.arcs(v)) {
        for (const auto& e : cur[a.to]) {
          Weight nd = e.d + a.w;
          if (stamp[e.sid] != epoch) {
            stamp[e.sid] = epoch;
            slot[e.sid] = {nd, e.sid, a.to, e.ep, e.tag};
            touched.push_back(e.sid);
          } else if (std::tie(nd, a.to) < std::tie(slot[e.sid].d, slot[e.sid].next)) {
            slot[e.sid] = {nd, e.sid, a.to, e.ep, e.tag};
          }
        }
      }
      auto& lv = nxt[v];
      for (uint32_t sid : touched)
        if (sid != src.sid[v]) lv.push_back(slot[sid]);
      if (src.sid[v]) {
        BspEntry e;
        e.d = 0;
        e.sid = src.sid[v];
        e.tag = src.tag[v];
        e.next = v;
        e.ep = v;
        lv.push_back(e);
      }
      std::sort(lv.begin(), lv.end(), entry_less);
      out[v].push_back(lv);
    }
    cur.swap(nxt);
  }
  return out;
}

// ---- route reconstruction --------------------------------------------------

struct BspRoute {
  std::vector<NodeId> path;  // starts at the querying node, ends in SN(s)
  Weight weight = 0;
};

/// Stateful reconstruction: hop t at the current node looks up the entry for
/// s in its list at level h-(t-1). Requires full history.
inline BspRoute route_stateful(const LevelLists& lists, const WeightedGraph& g, NodeId v,
                               uint32_t sid) {
  if (!lists.with_history) throw Error("route_stateful: lists were kept without history");
  BspRoute r;
  r.path.push_back(v);
  NodeId x = v;
  uint32_t lvl = lists.h;
  for (;;) {
    const BspEntry* e = lists.find(x, lvl, sid);
    if (e == nullptr)
      throw ValidationError("route_stateful: missing entry for source " + std::to_string(sid) +
                            " at node " + std::to_string(x) + " level " + std::to_string(lvl));
    if (e->d == 0) break;
    Weight step = g.edge_weight(x, e->next);
    r.weight += step;
    x = e->next;
    r.path.push_back(x);
    if (e->d == step) break;  // remaining weight 0: x is in SN(s)
    if (lvl == 1) throw ValidationError("route_stateful: exceeded hop budget");
    --lvl;
  }
  return r;
}

/// Stateless reconstruction: at each node follow the entry for s with the
/// smallest recorded distance over all levels.
inline BspRoute route_stateless(const LevelLists& lists, const WeightedGraph& g, NodeId v,
                                uint32_t sid) {
  if (!lists.with_history) throw Error("route_stateless: lists were kept without history");
  BspRoute r;
  r.path.push_back(v);
  NodeId x = v;
  for (;;) {
    const BspEntry* best = nullptr;
    for (uint32_t t = 1; t <= lists.h; ++t) {
      const BspEntry* e = lists.find(x, t, sid);
      if (e && (best == nullptr || e->d < best->d)) best = e;
    }
    if (best == nullptr)
      throw ValidationError("route_stateless: missing entry for source " + std::to_string(sid) +
                            " at node " + std::to_string(x));
    if (best->d == 0) break;
    r.weight += g.edge_weight(x, best->next);
    x = best->next;
    r.path.push_back(x);
  }
  return r;
}

}  // namespace routesim
