#include <catch2/catch_amalgamated.hpp>

#include "routesim/skeleton.hpp"
#include "test_support.hpp"

using namespace routesim;

namespace {

SkeletonParams params(std::vector<NodeId> S, uint32_t k, uint32_t h = 0) {
  SkeletonParams p;
  p.S = S;
  p.SR = std::move(S);
  p.k = k;
  p.h = h;
  return p;
}

std::vector<NodeId> sample_sr(const WeightedGraph& g, uint64_t seed) {
  Rng rng(mix(seed, 0xabcd));
  std::vector<NodeId> out;
  double p = 1.0 / std::sqrt(double(g.n()));
  for (NodeId v = 1; v <= g.n(); ++v)
    if (rng.uniform() < p) out.push_back(v);
  if (out.empty()) out.push_back(1 + static_cast<NodeId>(rng.below(g.n())));
  return out;
}

}  // namespace

TEST_CASE("singleton skeleton has no spanner edges") {
  auto g = test::g1();
  auto b = build_spanner(g, params({3}, 1));
  REQUIRE(b.edges.empty());
}

TEST_CASE("two-node skeleton on G1 discovers the 4-hop edge") {
  auto g = test::g1();
  auto b = build_spanner(g, params({1, 5}, 1, 4));
  REQUIRE(b.edges.size() == 1);
  REQUIRE(b.edges[0] == SpannerEdge{1, 5, 4});  // wd_4(1,5) = 4
}

TEST_CASE("k=1 keeps the whole skeleton graph: stretch exactly 1") {
  auto g = test::random_graph(32, 3);
  auto prm = params(sample_sr(g, 1), 1);
  auto b = build_spanner(g, prm);
  auto sk = materialize_skeleton(g, prm.S, b.h_used);
  auto sm = spanner_metric(prm.S, b.edges);
  for (size_t i = 0; i < sk.nodes.size(); ++i)
    for (size_t j = 0; j < sk.nodes.size(); ++j)
      REQUIRE(sm.dist[i][j] == sk.dist[i][j]);
}

TEST_CASE("S = V with full range reproduces exact distances on G1") {
  auto g = test::g1();
  auto b = build_spanner(g, params({1, 2, 3, 4, 5}, 1, 4));
  auto sm = spanner_metric(b.prm.S, b.edges);
  for (NodeId s = 1; s <= 5; ++s) {
    auto dj = dijkstra(g, s);
    for (NodeId t = 1; t <= 5; ++t) REQUIRE(sm.wdk(s, t) == dj.dist[t]);
  }
}

TEST_CASE("k=2 spanner: stretch at most 3 against the skeleton metric") {
  auto g = test::random_graph(64, 5);
  Apsp apsp(g);
  SpannerOptions opts;
  opts.apsp = &apsp;
  opts.seed = 11;
  auto prm = params(sample_sr(g, 7), 2);
  auto b = build_spanner(g, prm, {}, opts);
  auto sk = materialize_skeleton(g, prm.S, b.h_used);
  auto sm = spanner_metric(prm.S, b.edges);
  size_t m = sk.nodes.size();
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      REQUIRE(sm.dist[i][j] <= 3 * sk.dist[i][j]);
      REQUIRE(sm.dist[i][j] >= sk.dist[i][j]);
      // distance preservation: skeleton-graph metric is the true metric
      REQUIRE(sk.dist[i][j] == apsp.dist(sk.nodes[i], sk.nodes[j]));
    }
  double bound = 8.0 * prm.k * std::pow(double(m), 1.5) * std::log2(double(g.n()));
  REQUIRE(double(b.edges.size()) <= bound);
}

TEST_CASE("reverse_paths installs bidirectional pointers on G1") {
  auto g = test::g1();
  auto b = build_spanner(g, params({1, 5}, 1, 4));
  reverse_paths(g, b);
  // realizing path 1-2-3-4-5; node 3 sits in the middle
  auto to5 = pointer_toward(b, 3, 1, 5);
  REQUIRE(to5.next == 4);
  REQUIRE(to5.remaining == 2);
  auto to1 = pointer_toward(b, 3, 5, 1);
  REQUIRE(to1.next == 2);
  REQUIRE(to1.remaining == 2);
  // endpoints know the full weight
  REQUIRE(pointer_toward(b, 1, 1, 5).remaining == 4);
  REQUIRE(pointer_toward(b, 5, 5, 1).remaining == 4);
}

TEST_CASE("single-hop spanner edge: endpoints point at each other") {
  auto g = test::g1();
  auto b = build_spanner(g, params({4, 5}, 1, 2));
  reverse_paths(g, b);
  REQUIRE(pointer_toward(b, 4, 4, 5).next == 5);
  REQUIRE(pointer_toward(b, 4, 4, 5).remaining == 1);
  REQUIRE(pointer_toward(b, 5, 5, 4).next == 4);
}

TEST_CASE("overlapping realizing paths keep separate pointer sets") {
  // all three skeleton pairs route through node 2
  auto g = WeightedGraph::from_edges(
      4, {{1, 2, 1}, {2, 3, 1}, {2, 4, 1}, {1, 3, 5}, {1, 4, 5}, {3, 4, 5}});
  auto b = build_spanner(g, params({1, 3, 4}, 1, 2));
  reverse_paths(g, b);
  REQUIRE(b.edges.size() == 3);
  REQUIRE(pointer_toward(b, 2, 1, 3).next == 3);
  REQUIRE(pointer_toward(b, 2, 1, 4).next == 4);
  REQUIRE(pointer_toward(b, 2, 3, 4).next == 4);
  REQUIRE(pointer_toward(b, 2, 3, 1).next == 1);
}

TEST_CASE("pointer chains realize every spanner edge in both directions") {
  auto g = test::random_graph(48, 9);
  auto prm = params(sample_sr(g, 3), 2);
  SpannerOptions opts;
  opts.seed = 21;
  auto b = build_spanner(g, prm, {}, opts);
  reverse_paths(g, b);
  for (const auto& e : b.edges) {
    for (auto [from, to] : {std::pair<NodeId, NodeId>{e.s, e.t}, {e.t, e.s}}) {
      NodeId x = from;
      Weight walked = 0;
      uint32_t guard = 0;
      while (x != to) {
        auto p = pointer_toward(b, x, from, to);
        REQUIRE(p.next != kNoNode);
        REQUIRE(p.remaining == e.w - walked);
        walked += g.edge_weight(x, p.next);
        x = p.next;
        REQUIRE(++guard <= g.n());
      }
      REQUIRE(walked == e.w);
    }
  }
}

TEST_CASE("simulation matches centralized Baswana-Sen with shared randomness") {
  for (uint32_t n : {24u, 48u}) {
    for (uint64_t seed : {0ull, 1ull, 2ull}) {
      auto g = test::random_graph(n, seed);
      for (uint32_t k : {1u, 2u, 3u}) {
        auto prm = params(sample_sr(g, seed), k);
        SpannerOptions opts;
        opts.seed = mix(seed, k);
        auto b = build_spanner(g, prm, {}, opts);
        auto ref = bs_reference(g, prm.S, k, b.h_used, b.delta_used, opts.seed,
                                b.trace.retries);
        REQUIRE(b.edges == ref);
      }
    }
  }
}

TEST_CASE("broadcast costs and retries land in the trace") {
  auto g = test::random_graph(32, 4);
  auto b = build_spanner(g, params(sample_sr(g, 5), 2), {}, {});
  REQUIRE(b.trace.rounds > 0);
  REQUIRE(b.trace.messages > 0);
  REQUIRE(b.trace.retries <= 5);
}
