#include <catch2/catch_amalgamated.hpp>

#include "routesim/generators.hpp"
#include "routesim/graph.hpp"
#include "routesim/oracles.hpp"
#include "test_support.hpp"

using namespace routesim;

TEST_CASE("parse_graph accepts the canonical format") {
  WeightedGraph g = parse_graph("3 3\n1 2 1\n2 3 1\n1 3 5\n");
  REQUIRE(g.n() == 3);
  REQUIRE(g.m() == 3);
  REQUIRE(g.edge_weight(1, 3) == 5);
}

TEST_CASE("parse_graph handles comments and canonicalizes orientation") {
  WeightedGraph g = parse_graph("# a triangle\n3 3\n2 1 1\n3 2 1\n# chord\n3 1 5\n");
  REQUIRE(g.edges()[0].u == 1);
  REQUIRE(g.edges()[0].v == 2);
  std::string round_trip = g.to_string();
  REQUIRE(round_trip == "3 3\n1 2 1\n1 3 5\n2 3 1\n");
}

TEST_CASE("graph validation rejects bad inputs") {
  REQUIRE_THROWS_AS(parse_graph("2 1\n1 1 1\n"), ValidationError);        // self-loop
  REQUIRE_THROWS_AS(parse_graph("4 2\n1 2 1\n3 4 1\n"), ValidationError); // disconnected
  REQUIRE_THROWS_AS(parse_graph("2 2\n1 2 1\n2 1 3\n"), ValidationError); // duplicate
  REQUIRE_THROWS_AS(parse_graph("2 1\n1 2 0\n"), ValidationError);        // weight < 1
  REQUIRE_THROWS_AS(parse_graph("2 1\n1 2 99999\n"), ValidationError);    // weight > n^3
  REQUIRE_THROWS_AS(parse_graph("2 1\n1 2\n"), ParseError);               // malformed line
  REQUIRE_THROWS_AS(parse_graph("3 2\n1 2 1\n"), ParseError);             // edge count off
}

TEST_CASE("dijkstra on G1") {
  auto g = test::g1();
  auto t1 = dijkstra(g, 1);
  REQUIRE(t1.dist[5] == 4);  // 4-hop path beats the direct weight-10 edge
  REQUIRE(t1.dist[1] == 0);
  auto t3 = dijkstra(g, 3);
  REQUIRE(t3.dist[5] == 2);
}

TEST_CASE("hop-bounded distances on G1") {
  auto g = test::g1();
  REQUIRE(hop_bounded_dist(g, 1, 1).dist_h[5] == 10);
  REQUIRE(hop_bounded_dist(g, 1, 4).dist_h[5] == 4);
  REQUIRE(hop_bounded_dist(g, 1, 0).dist_h[2] == kInfWeight);
  REQUIRE(hop_bounded_dist(g, 1, 0).dist_h[1] == 0);
}

TEST_CASE("hop-bounded with h = n-1 equals dijkstra") {
  for (uint32_t n : {8u, 16u, 33u}) {
    for (uint64_t seed : {0ull, 1ull}) {
      auto g = test::random_graph(n, seed);
      for (NodeId s = 1; s <= g.n(); ++s) {
        auto hb = hop_bounded_dist(g, s, g.n() - 1);
        auto dj = dijkstra(g, s);
        for (NodeId u = 1; u <= g.n(); ++u) REQUIRE(hb.dist_h[u] == dj.dist[u]);
      }
    }
  }
}

TEST_CASE("balls on G1") {
  auto g = test::g1();
  REQUIRE(ball(g, 1, 1) == std::vector<NodeId>{1});
  REQUIRE(ball(g, 1, 3) == std::vector<NodeId>{1, 2, 3});
  REQUIRE(ball(g, 5, 2) == std::vector<NodeId>{5, 4});
  REQUIRE_THROWS_AS(ball(g, 1, 0), ValidationError);
  REQUIRE_THROWS_AS(ball(g, 1, 6), ValidationError);
}

TEST_CASE("ball/hop consistency: u in ball_v(i) implies wd_j = wd for j >= i-1") {
  for (uint32_t n : {12u, 24u, 48u, 64u}) {
    auto g = test::random_graph(n, 7);
    for (NodeId v = 1; v <= g.n(); ++v) {
      auto dj = dijkstra(g, v);
      auto order = ball(g, v, g.n());
      // precompute wd_j tables once per j
      std::vector<HopBoundedTable> hb;
      for (uint32_t j = 0; j <= g.n(); ++j) hb.push_back(hop_bounded_dist(g, v, j));
      for (uint32_t i = 1; i <= g.n(); ++i) {
        NodeId u = order[i - 1];  // u in ball_v(i)
        for (uint32_t j = i >= 1 ? i - 1 : 0; j <= g.n(); ++j)
          REQUIRE(hb[j].dist_h[u] == dj.dist[u]);
      }
    }
  }
}

TEST_CASE("metrics") {
  auto m1 = metrics(test::g1());
  REQUIRE(m1.hd == 2);
  REQUIRE(m1.wd == 4);
  auto ms = metrics(test::unit_star(5));
  REQUIRE(ms.hd == 2);
  REQUIRE(ms.wd == 2);
  REQUIRE(ms.spd == 2);
  auto mp = metrics(test::unit_path(5));
  REQUIRE(mp.hd == 4);
  REQUIRE(mp.wd == 4);
  REQUIRE(mp.spd == 4);
}

TEST_CASE("generate is reproducible and family shapes are right") {
  GenParams prm;
  prm.n = 5;
  REQUIRE(generate("path", prm, 0).to_string() == "5 4\n1 2 1\n2 3 1\n3 4 1\n4 5 1\n");

  prm.n = 24;
  prm.w_max = 6;
  auto a = generate("random_weighted", prm, 3);
  auto b = generate("random_weighted", prm, 3);
  auto c = generate("random_weighted", prm, 4);
  REQUIRE(a.edges() == b.edges());
  REQUIRE(a.edges() != c.edges());

  auto t = generate("tree", prm, 1);
  REQUIRE(t.m() == t.n() - 1);
}

TEST_CASE("lb_diameter generator matches the hard-instance shape") {
  GenParams prm;
  prm.m = 3;
  prm.omega_max = 16;
  auto g0 = generate("lb_diameter", prm, 0);
  auto m0 = metrics(g0);
  double logn2 = std::log2(double(prm.m) * prm.m);
  // A = B = empty: small weighted diameter, m + C log(m^2) with C = 4
  REQUIRE(m0.wd <= Weight(prm.m + 4.0 * logn2));
  // hop diameter O(log n) by construction
  REQUIRE(m0.hd <= 3 * ceil_log2(g0.n()) + 3);

  prm.A = {2};
  prm.B = {2};
  auto g1 = generate("lb_diameter", prm, 0);
  auto m1 = metrics(g1);
  REQUIRE(m1.wd > prm.omega_max);
  REQUIRE(m1.hd <= 3 * ceil_log2(g1.n()) + 3);

  GenParams bad = prm;
  bad.omega_max = 2;  // below sqrt(n)
  REQUIRE_THROWS_AS(generate("lb_diameter", bad, 0), ValidationError);
}

TEST_CASE("lb_diameter hop diameter stays logarithmic as m grows") {
  for (uint32_t m : {3u, 4u, 5u, 7u}) {
    GenParams prm;
    prm.m = m;
    prm.omega_max = 4 * Weight(m) * m;
    auto g = generate("lb_diameter", prm, 0);
    REQUIRE(metrics(g).hd <= 3 * ceil_log2(g.n()) + 3);
  }
}
