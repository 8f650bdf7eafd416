#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "routesim/bfs.hpp"
#include "routesim/oracles.hpp"
#include "routesim/sim.hpp"
#include "test_support.hpp"

using namespace routesim;

namespace {

// Forwards one token from a start node through the whole graph.
class FloodProtocol : public Protocol {
 public:
  explicit FloodProtocol(NodeId start) : start_(start) {}

  void begin(Sim& s) override {
    has_.assign(s.n() + 1, 0);
    has_[start_] = 1;
    s.send_all(start_, Message::of({42}, static_cast<uint16_t>(s.cfg().word)));
  }

  void step(Sim& s, NodeId v) override {
    if (!s.inbox(v).empty() && !has_[v]) {
      has_[v] = 1;
      s.send_all(v, Message::of({42}, static_cast<uint16_t>(s.cfg().word)));
    }
  }

  bool done(const Sim& s) const override {
    for (NodeId v = 1; v <= s.n(); ++v)
      if (!has_[v]) return false;
    return true;
  }

  std::vector<char> has_;

 private:
  NodeId start_;
};

// Deliberately exceeds the per-edge budget in round 0.
class OverBudgetProtocol : public Protocol {
 public:
  void begin(Sim& s) override {
    Message m = Message::of({1}, static_cast<uint16_t>(s.cfg().B));
    s.send(1, s.graph().arcs(1).begin()->to, m);
    s.send(1, s.graph().arcs(1).begin()->to, m);  // 2B on one edge
  }
  void step(Sim&, NodeId) override {}
  bool done(const Sim&) const override { return true; }
};

// Emits random payloads for a fixed number of rounds; used for determinism.
class NoiseProtocol : public Protocol {
 public:
  void begin(Sim&) override { log_.clear(); }
  void step(Sim& s, NodeId v) override {
    for (const auto& d : s.inbox(v)) log_.push_back(d.msg.f[0]);
    if (s.round() < 6) {
      uint64_t payload = s.rng(v).below(1u << 20);
      Message m = Message::of({payload}, static_cast<uint16_t>(3 * s.cfg().word));
      s.send_all(v, m);
    }
  }
  bool done(const Sim& s) const override { return s.round() >= 8; }
  std::vector<uint64_t> log_;
};

}  // namespace

TEST_CASE("flooding a token across P_5 takes 4 rounds") {
  auto g = test::unit_path(5);
  Sim sim(g, SimConfig::for_graph(g), 0);
  FloodProtocol p(1);
  RoundTrace tr = sim.run(p);
  REQUIRE(tr.rounds == 4);
  REQUIRE(std::all_of(p.has_.begin() + 1, p.has_.end(), [](char c) { return c == 1; }));
}

TEST_CASE("budget violations are engine errors") {
  auto g = test::unit_path(3);
  Sim sim(g, SimConfig::for_graph(g), 0);
  OverBudgetProtocol p;
  REQUIRE_THROWS_AS(sim.run(p), BudgetError);
}

TEST_CASE("identical seeds give bit-identical traces and outputs") {
  auto g = test::random_graph(24, 5);
  auto run_once = [&](uint64_t seed) {
    Sim sim(g, SimConfig::for_graph(g), seed);
    NoiseProtocol p;
    RoundTrace tr = sim.run(p);
    return std::make_pair(tr, p.log_);
  };
  auto [t1, l1] = run_once(7);
  auto [t2, l2] = run_once(7);
  auto [t3, l3] = run_once(8);
  REQUIRE(t1.rounds == t2.rounds);
  REQUIRE(t1.messages == t2.messages);
  REQUIRE(t1.max_bits_edge_round == t2.max_bits_edge_round);
  REQUIRE(l1 == l2);
  REQUIRE(l1 != l3);
}

TEST_CASE("round cap is enforced") {
  auto g = test::unit_path(3);
  SimConfig cfg = SimConfig::for_graph(g);
  cfg.max_rounds = 4;
  Sim sim(g, cfg, 0);
  NoiseProtocol p;  // wants 8 rounds
  REQUIRE_THROWS_AS(sim.run(p), Error);
}

TEST_CASE("BFS tree on P_5, star, and G1") {
  {
    auto [tree, tr] = build_bfs_tree(test::unit_path(5));
    REQUIRE(tree.root == 1);
    REQUIRE(tree.depth[5] == 4);
    REQUIRE(tr.rounds <= 4u * 4 + 4);
  }
  {
    auto g = test::unit_star(5);
    auto [tree, tr] = build_bfs_tree(g);
    for (NodeId v = 2; v <= 5; ++v) REQUIRE(tree.depth[v] == 1);
  }
  {
    // On G1 node 4 has a single depth-1 neighbor (5); 3 sits at depth 2.
    auto [tree, tr] = build_bfs_tree(test::g1());
    REQUIRE(tree.depth[4] == 2);
    REQUIRE(tree.parent[4] == 5);
  }
  {
    // Genuine parent tie: C_4 reaches node 4 via 2 and 3; smaller id wins.
    auto g = WeightedGraph::from_edges(4, {{1, 2, 1}, {1, 3, 1}, {2, 4, 1}, {3, 4, 1}});
    auto [tree, tr] = build_bfs_tree(g);
    REQUIRE(tree.depth[4] == 2);
    REQUIRE(tree.parent[4] == 2);
  }
}

TEST_CASE("BFS depth equals hop distance on random graphs") {
  for (uint64_t seed : {0ull, 1ull, 2ull}) {
    auto g = test::random_graph(32, seed);
    auto [tree, tr] = build_bfs_tree(g);
    auto oracle = bfs_depths(g, 1);
    for (NodeId v = 1; v <= g.n(); ++v) REQUIRE(tree.depth[v] == oracle[v]);
    uint32_t hd = metrics(g).hd;
    REQUIRE(tr.rounds <= 4 * hd + 4);
  }
}

TEST_CASE("broadcast_all: M=1 on P_5") {
  auto g = test::unit_path(5);
  std::vector<std::vector<Message>> init(g.n() + 1);
  init[3].push_back(Message::of({99, 3}, 16));
  auto res = broadcast_all(g, init);
  for (NodeId v = 1; v <= g.n(); ++v) {
    REQUIRE(res.received[v].size() == 1);
    REQUIRE(res.received[v][0].f[0] == 99);
  }
  uint32_t hd = 4;
  REQUIRE(res.trace.rounds <= 1 + 4 * hd + 8);
}

TEST_CASE("broadcast_all: M=0 is tree construction only") {
  auto g = test::unit_path(6);
  std::vector<std::vector<Message>> init(g.n() + 1);
  auto res = broadcast_all(g, init);
  REQUIRE(res.trace.rounds <= 2 * 5 + 4);
  for (NodeId v = 1; v <= g.n(); ++v) REQUIRE(res.received[v].empty());
}

TEST_CASE("broadcast_all: all nodes hold the same multiset") {
  auto g = test::random_graph(32, 9);
  Rng rng(123);
  std::vector<std::vector<Message>> init(g.n() + 1);
  uint32_t M = 10;
  for (uint32_t i = 0; i < M; ++i) {
    NodeId owner = static_cast<NodeId>(rng.range(1, g.n()));
    init[owner].push_back(Message::of({rng.below(1000), i}, 20));
  }
  auto res = broadcast_all(g, init);
  auto key = [](const Message& m) { return std::make_pair(m.f[0], m.f[1]); };
  std::multiset<std::pair<uint64_t, uint64_t>> expect;
  for (const auto& msgs : init)
    for (const auto& m : msgs) expect.insert(key(m));
  uint32_t hd = metrics(g).hd;
  for (NodeId v = 1; v <= g.n(); ++v) {
    std::multiset<std::pair<uint64_t, uint64_t>> got;
    for (const auto& m : res.received[v]) got.insert(key(m));
    REQUIRE(got == expect);
  }
  REQUIRE(res.trace.rounds <= M + 4 * hd + 8);
}
