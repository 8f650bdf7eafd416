#pragma once

#include <deque>
#include <vector>

#include "routesim/sim.hpp"

namespace routesim {

struct BfsTree {
  NodeId root = kNoNode;
  std::vector<NodeId> parent;                 // parent[root] = root
  std::vector<uint32_t> depth;
  std::vector<std::vector<NodeId>> children;  // sorted by id

  uint32_t height() const {
    uint32_t h = 0;
    for (uint32_t d : depth)
      if (d != UINT32_MAX) h = std::max(h, d);
    return h;
  }
};

namespace detail {

enum MsgKind : uint64_t { kDepth = 0, kAck = 1, kUp = 2, kDown = 3 };

// Distributed BFS flood from the smallest id. Every node announces its
// adopted depth and parent to all neighbors; ties go to the smallest
// announcing neighbor. When with_acks is set, completion is detected by a
// leaf-to-root ack convergecast.
class BfsProtocol : public Protocol {
 public:
  explicit BfsProtocol(bool with_acks) : with_acks_(with_acks) {}

  void begin(Sim& s) override {
    uint32_t n = s.n();
    tree_.root = 1;
    tree_.parent.assign(n + 1, kNoNode);
    tree_.depth.assign(n + 1, UINT32_MAX);
    tree_.children.assign(n + 1, {});
    announced_from_.assign(n + 1, 0);
    acks_.assign(n + 1, 0);
    acked_up_.assign(n + 1, 0);
    pending_.assign(n + 1, {UINT32_MAX, kNoNode});
    tree_.depth[1] = 0;
    tree_.parent[1] = 1;
    root_done_ = s.n() == 1;
    announce_(s, 1);
  }

  void step(Sim& s, NodeId v) override {
    for (const auto& d : s.inbox(v)) {
      switch (d.msg.f[0]) {
        case kDepth: {
          ++announced_from_[v];
          uint32_t du = static_cast<uint32_t>(d.msg.f[1]);
          NodeId chosen = static_cast<NodeId>(d.msg.f[2]);
          if (chosen == v) tree_.children[v].push_back(d.from);
          if (tree_.depth[v] == UINT32_MAX) {
            auto& best = pending_[v];
            if (du + 1 < best.first || (du + 1 == best.first && d.from < best.second))
              best = {du + 1, d.from};
          }
          break;
        }
        case kAck:
          ++acks_[v];
          break;
        default:
          break;
      }
    }
    if (tree_.depth[v] == UINT32_MAX && pending_[v].second != kNoNode) {
      tree_.depth[v] = pending_[v].first;
      tree_.parent[v] = pending_[v].second;
      announce_(s, v);
    }
    if (with_acks_) maybe_ack_(s, v);
  }

  bool done(const Sim& s) const override {
    if (with_acks_) return root_done_;
    return s.quiescent();  // flood-only mode stops on quiescence
  }

  BfsTree take_tree() {
    for (auto& c : tree_.children) std::sort(c.begin(), c.end());
    return std::move(tree_);
  }

 protected:
  void announce_(Sim& s, NodeId v) {
    Message m = Message::of({kDepth, tree_.depth[v], tree_.parent[v]},
                            static_cast<uint16_t>(2 * s.cfg().word + 4));
    s.send_all(v, m);
  }

  void maybe_ack_(Sim& s, NodeId v) {
    if (acked_up_[v] || tree_.depth[v] == UINT32_MAX) return;
    if (announced_from_[v] < s.graph().degree(v)) return;
    if (acks_[v] < tree_.children[v].size()) return;
    acked_up_[v] = 1;
    if (v == tree_.root) {
      root_done_ = true;
    } else {
      s.send(v, tree_.parent[v], Message::of({kAck}, static_cast<uint16_t>(s.cfg().word)));
    }
  }

  bool with_acks_;
  BfsTree tree_;
  std::vector<std::pair<uint32_t, NodeId>> pending_;
  std::vector<uint32_t> announced_from_;
  std::vector<uint32_t> acks_;
  std::vector<char> acked_up_;
  bool root_done_ = false;
};

}  // namespace detail

inline std::pair<BfsTree, RoundTrace> build_bfs_tree(const WeightedGraph& g, SimConfig cfg = {},
                                                     uint64_t seed = 0) {
  cfg.finalize(g.n());
  Sim sim(g, cfg, seed);
  detail::BfsProtocol proto(/*with_acks=*/true);
  RoundTrace tr = sim.run(proto);
  return {proto.take_tree(), tr};
}

namespace detail {

// Lemma-1 style global dissemination: BFS flood, then an overlapped pipelined
// convergecast into the root and broadcast down the tree, one message per
// tree edge per round in each direction. Completes in M + O(HD) rounds.
class BroadcastAllProtocol : public BfsProtocol {
 public:
  explicit BroadcastAllProtocol(std::vector<std::vector<Message>> initial)
      : BfsProtocol(/*with_acks=*/false), initial_(std::move(initial)) {}

  void begin(Sim& s) override {
    BfsProtocol::begin(s);
    uint32_t n = s.n();
    total_ = 0;
    for (const auto& msgs : initial_)
      for (const auto& m : msgs) {
        if (m.bits + 4u > s.cfg().B)
          throw ValidationError("broadcast_all: payload exceeds B");
        ++total_;
      }
    up_.assign(n + 1, {});
    down_.assign(n + 1, {});
    received_.assign(n + 1, {});
    started_.assign(n + 1, 0);
  }

  void step(Sim& s, NodeId v) override {
    BfsProtocol::step(s, v);
    for (const auto& d : s.inbox(v)) {
      if (d.msg.f[0] == kUp) {
        Message payload = unframe_(d.msg);
        if (v == tree_.root) {
          received_[v].push_back(payload);
          down_.at(v).push_back(payload);
        } else {
          up_.at(v).push_back(payload);
        }
      } else if (d.msg.f[0] == kDown) {
        Message payload = unframe_(d.msg);
        received_[v].push_back(payload);
        down_.at(v).push_back(payload);
      }
    }
    if (tree_.depth[v] == UINT32_MAX) return;
    if (!started_[v] && announced_from_[v] >= s.graph().degree(v)) {
      started_[v] = 1;
      if (v == tree_.root) {
        for (const auto& m : initial_[v]) {
          received_[v].push_back(m);
          down_.at(v).push_back(m);
        }
      } else {
        for (const auto& m : initial_[v]) up_.at(v).push_back(m);
      }
    }
    if (!started_[v]) return;
    if (v != tree_.root && !up_[v].empty()) {
      s.send(v, tree_.parent[v], frame_(kUp, up_[v].front()));
      up_[v].pop_front();
    }
    if (!down_[v].empty() && !tree_.children[v].empty()) {
      Message m = frame_(kDown, down_[v].front());
      down_[v].pop_front();
      for (NodeId c : tree_.children[v]) s.send(v, c, m);
    } else if (!down_[v].empty()) {
      down_[v].pop_front();  // leaf: nothing to relay
    }
  }

  bool done(const Sim& s) const override {
    for (NodeId v = 1; v <= s.n(); ++v)
      if (!started_[v] || received_[v].size() < total_) return false;
    return true;
  }

  std::vector<std::vector<Message>> take_received() { return std::move(received_); }

 private:
  static Message frame_(MsgKind kind, const Message& payload) {
    Message m;
    m.f[0] = kind;
    m.nf = static_cast<uint8_t>(payload.nf + 1);
    for (uint8_t i = 0; i < payload.nf; ++i) m.f[i + 1] = payload.f[i];
    m.bits = static_cast<uint16_t>(payload.bits + 4);
    return m;
  }
  static Message unframe_(const Message& framed) {
    Message m;
    m.nf = static_cast<uint8_t>(framed.nf - 1);
    for (uint8_t i = 0; i < m.nf; ++i) m.f[i] = framed.f[i + 1];
    m.bits = static_cast<uint16_t>(framed.bits - 4);
    return m;
  }

  std::vector<std::vector<Message>> initial_;
  std::vector<std::deque<Message>> up_, down_;
  std::vector<std::vector<Message>> received_;
  std::vector<char> started_;
  size_t total_ = 0;
};

}  // namespace detail

struct BroadcastResult {
  std::vector<std::vector<Message>> received;  // per node, all M messages
  RoundTrace trace;
};

/// Every node contributes a (possibly empty) set of messages; afterwards all
/// nodes hold all M of them. Rounds used are within M + 4*HD + O(1).
inline BroadcastResult broadcast_all(const WeightedGraph& g,
                                     std::vector<std::vector<Message>> initial,
                                     SimConfig cfg = {}, uint64_t seed = 0) {
  cfg.finalize(g.n());
  if (initial.size() != g.n() + 1)
    throw ValidationError("broadcast_all: need one message set per node (1..n)");
  Sim sim(g, cfg, seed);
  detail::BroadcastAllProtocol proto(std::move(initial));
  RoundTrace tr = sim.run(proto);
  return {proto.take_received(), tr};
}

}  // namespace routesim
