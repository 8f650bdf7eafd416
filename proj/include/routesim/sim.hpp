#pragma once

#include <array>
#include <vector>

#include "routesim/graph.hpp"

namespace routesim {

// Fixed-capacity message: up to 6 machine-word fields plus the declared bit
// cost that is charged against the per-edge budget. Protocols declare the
// cost of each message from the configured word size; the engine enforces
// the budget, it does not infer it.
struct Message {
  std::array<uint64_t, 6> f{};
  uint8_t nf = 0;
  uint16_t bits = 0;

  static Message of(std::initializer_list<uint64_t> fields, uint16_t bits) {
    Message m;
    for (uint64_t x : fields) m.f[m.nf++] = x;
    m.bits = bits;
    return m;
  }
  friend bool operator==(const Message& a, const Message& b) {
    if (a.nf != b.nf || a.bits != b.bits) return false;
    for (uint8_t i = 0; i < a.nf; ++i)
      if (a.f[i] != b.f[i]) return false;
    return true;
  }
};

struct Delivery {
  NodeId from;
  Message msg;
};

struct SimConfig {
  uint32_t B = 0;           // bits per edge (per direction) per round; 0 = 8*word
  uint32_t word = 0;        // 0 = ceil(log2(n+1))
  uint32_t entry_words = 4; // words charged per BSP entry message
  uint64_t max_rounds = 0;  // 0 = 1<<22

  static SimConfig for_graph(const WeightedGraph& g) {
    SimConfig c;
    c.finalize(g.n());
    return c;
  }

  void finalize(uint32_t n) {
    if (word == 0) word = std::max<uint32_t>(1, ceil_log2(static_cast<uint64_t>(n) + 1));
    if (B == 0) B = 8 * word;
    if (max_rounds == 0) max_rounds = 1ULL << 22;
    if (B < entry_words * word)
      throw ValidationError("SimConfig: B must fit one entry (entry_words*word bits)");
  }

  uint32_t entry_bits() const { return static_cast<uint32_t>(entry_words * word); }
};

struct RoundTrace {
  uint64_t rounds = 0;
  uint64_t messages = 0;
  uint32_t max_bits_edge_round = 0;
  uint32_t retries = 0;

  RoundTrace& operator+=(const RoundTrace& o) {
    rounds += o.rounds;
    messages += o.messages;
    max_bits_edge_round = std::max(max_bits_edge_round, o.max_bits_edge_round);
    retries += o.retries;
    return *this;
  }
};

class Sim;

/// A synchronous protocol: per-round, every node receives the messages sent
/// to it in the previous round, updates local state, and sends. The handler
/// must be deterministic given state, inbox, and the node's seeded stream.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual void begin(Sim& s) = 0;              // round 0: local init, may send
  virtual void step(Sim& s, NodeId v) = 0;     // one node, one round
  virtual bool done(const Sim& s) const = 0;   // checked after each round
};

/// Deterministic lock-step CONGEST(B) engine. A single run is sequential over
/// nodes; simultaneity is modeled by double-buffered inboxes (messages sent
/// in round r are visible in round r+1). Each (edge, direction, round) may
/// carry at most B declared bits.
class Sim {
 public:
  Sim(const WeightedGraph& g, SimConfig cfg, uint64_t seed)
      : g_(g), cfg_(cfg), seed_(seed) {
    cfg_.finalize(g.n());
    inbox_.resize(g.n() + 1);
    outbox_.resize(g.n() + 1);
    arc_bits_.assign(2 * g.m(), 0);
    arc_stamp_.assign(2 * g.m(), UINT64_MAX);
    for (NodeId v = 1; v <= g.n(); ++v) rngs_.emplace_back(mix(seed, v));
  }

  RoundTrace run(Protocol& p) {
    trace_ = RoundTrace{};
    round_ = 0;
    sends_this_round_ = 0;
    p.begin(*this);
    uint64_t last_active = 0;
    while (true) {
      ++round_;
      if (round_ > cfg_.max_rounds)
        throw Error("round cap exceeded at round " + std::to_string(round_));
      delivered_this_round_ = deliver_();
      sends_this_round_ = 0;
      for (NodeId v = 1; v <= g_.n(); ++v) p.step(*this, v);
      if (delivered_this_round_ > 0 || sends_this_round_ > 0) last_active = round_;
      if (p.done(*this)) break;
    }
    trace_.rounds = last_active;
    return trace_;
  }

  const WeightedGraph& graph() const { return g_; }
  uint32_t n() const { return g_.n(); }
  const SimConfig& cfg() const { return cfg_; }
  uint64_t round() const { return round_; }
  uint64_t seed() const { return seed_; }

  const std::vector<Delivery>& inbox(NodeId v) const { return inbox_[v]; }
  Rng& rng(NodeId v) { return rngs_[v - 1]; }

  uint64_t sends_this_round() const { return sends_this_round_; }

  // True once a round saw neither deliveries nor sends; no further activity
  // can occur, so protocols without their own termination handshake may use
  // this from done().
  bool quiescent() const {
    return round_ >= 1 && delivered_this_round_ == 0 && sends_this_round_ == 0;
  }

  void send(NodeId from, NodeId to, const Message& m) {
    charge_(from, g_.arc_index(from, to), m);
    outbox_[to].push_back({from, m});
  }

  /// Sends one message to every neighbor of v (arc order). Cheaper than
  /// looking up each arc separately.
  void send_all(NodeId from, const Message& m) {
    uint32_t arc = g_.arc_base(from);
    for (const auto& a : g_.arcs(from)) {
      charge_(from, arc++, m);
      outbox_[a.to].push_back({from, m});
    }
  }

 private:
  uint64_t deliver_() {
    uint64_t delivered = 0;
    for (NodeId v = 1; v <= g_.n(); ++v) {
      inbox_[v].swap(outbox_[v]);
      outbox_[v].clear();
      delivered += inbox_[v].size();
    }
    return delivered;
  }

  void charge_(NodeId from, uint32_t arc, const Message& m) {
    if (m.bits > cfg_.B)
      throw BudgetError("message of " + std::to_string(m.bits) + " bits exceeds B=" +
                        std::to_string(cfg_.B));
    if (arc_stamp_[arc] != round_) {
      arc_stamp_[arc] = round_;
      arc_bits_[arc] = 0;
    }
    arc_bits_[arc] += m.bits;
    if (arc_bits_[arc] > cfg_.B)
      throw BudgetError("edge budget exceeded in round " + std::to_string(round_) +
                        " from node " + std::to_string(from) + ": " +
                        std::to_string(arc_bits_[arc]) + " > B=" + std::to_string(cfg_.B));
    trace_.max_bits_edge_round = std::max(trace_.max_bits_edge_round, arc_bits_[arc]);
    ++trace_.messages;
    ++sends_this_round_;
  }

  const WeightedGraph& g_;
  SimConfig cfg_;
  uint64_t seed_;
  uint64_t round_ = 0;
  uint64_t sends_this_round_ = 0;
  uint64_t delivered_this_round_ = 0;
  RoundTrace trace_;
  std::vector<std::vector<Delivery>> inbox_, outbox_;
  std::vector<uint32_t> arc_bits_;
  std::vector<uint64_t> arc_stamp_;
  std::vector<Rng> rngs_;
};

}  // namespace routesim
