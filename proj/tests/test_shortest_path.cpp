#include <gtest/gtest.h>

#include "psp/oracle.hpp"
#include "psp/random_graph.hpp"
#include "psp/shortest_path.hpp"

using namespace psp;

namespace {

ParametricEdge E(Vertex s, Vertex d, const char* w) { return {s, d, parse_poly(w)}; }

InstantiatedGraph<Rational> at0(std::size_t n, std::vector<ParametricEdge> edges) {
  return instantiate(ParametricGraph(n, std::move(edges)), Rational(0));
}

ExtendedValue X(long v) { return ExtendedValue(Rational(v)); }

ShortestPathResult<Rational> distances(const InstantiatedGraph<Rational>& g, Vertex s) {
  auto res = bellman_ford(g, s);
  EXPECT_TRUE(std::holds_alternative<ShortestPathResult<Rational>>(res));
  return std::get<ShortestPathResult<Rational>>(std::move(res));
}

}  // namespace

TEST(BellmanFord, NegativeEdge) {
  auto sp = distances(at0(2, {E(0, 1, "-3")}), 0);
  EXPECT_EQ(sp.dist[0], X(0));
  EXPECT_EQ(sp.dist[1], X(-3));
}

TEST(BellmanFord, ReturnsNegativeCycle) {
  auto res = bellman_ford(at0(2, {E(0, 1, "1"), E(1, 0, "-2")}), 0);
  ASSERT_TRUE(std::holds_alternative<NegativeCycle>(res));
  auto edges = std::get<NegativeCycle>(res).edges;
  std::sort(edges.begin(), edges.end());
  EXPECT_EQ(edges, (std::vector<EdgeId>{0, 1}));
}

TEST(BellmanFord, Line) {
  auto sp = distances(at0(3, {E(0, 1, "2"), E(1, 2, "3")}), 0);
  EXPECT_EQ(sp.dist[2], X(5));
  EXPECT_EQ(sp.parent[2], std::optional<EdgeId>(1));
}

TEST(BellmanFord, UnreachableCycleIsIgnored) {
  auto sp = distances(at0(3, {E(0, 1, "1"), E(2, 2, "-1")}), 0);
  EXPECT_TRUE(sp.dist[2].is_plus_infinity());
}

TEST(VirtualSource, NonnegativeWeightsGiveZero) {
  auto res = bellman_ford_virtual_source(at0(3, {E(0, 1, "2"), E(1, 2, "0")}));
  EXPECT_EQ(std::get<std::vector<Rational>>(res), (std::vector<Rational>{0, 0, 0}));
}

TEST(VirtualSource, SingleNegativeEdge) {
  auto res = bellman_ford_virtual_source(at0(2, {E(0, 1, "-1")}));
  EXPECT_EQ(std::get<std::vector<Rational>>(res), (std::vector<Rational>{0, -1}));
}

TEST(VirtualSource, DetectsNegativeCycle) {
  auto g = at0(3, {E(0, 1, "1"), E(1, 2, "1"), E(2, 1, "-3")});
  auto res = bellman_ford_virtual_source(g);
  ASSERT_TRUE(std::holds_alternative<NegativeCycle>(res));
  EXPECT_LT(detail::cycle_sum(g, std::get<NegativeCycle>(res)), 0);
}

TEST(Dijkstra, ZeroEdge) {
  auto sp = dijkstra(at0(2, {E(0, 1, "0")}), 0);
  EXPECT_EQ(sp.dist[1], X(0));
}

TEST(Dijkstra, Diamond) {
  auto sp = dijkstra(at0(3, {E(0, 1, "1"), E(0, 2, "4"), E(1, 2, "1")}), 0);
  EXPECT_EQ(sp.dist[2], X(2));
}

TEST(Dijkstra, Unreachable) {
  auto sp = dijkstra(at0(3, {E(0, 1, "1")}), 0);
  EXPECT_TRUE(sp.dist[2].is_plus_infinity());
  EXPECT_FALSE(sp.parent[2].has_value());
}

TEST(Dijkstra, RejectsNegativeEdge) { EXPECT_THROW(dijkstra(at0(2, {E(0, 1, "-1")}), 0), NegativeEdge); }

TEST(HopLimited, TwoVerticesMeansOneEdge) {
  auto g = at0(3, {E(0, 1, "1"), E(1, 2, "1"), E(0, 1, "-2")});
  HopLimitedApsp<Rational> a(g, 2);
  EXPECT_EQ(a.distance(0, 1), X(-2));
  EXPECT_EQ(a.distance(0, 0), X(0));
  EXPECT_TRUE(a.distance(0, 2).is_plus_infinity());
}

TEST(HopLimited, LineNeedsThreeVertices) {
  auto g = at0(3, {E(0, 1, "1"), E(1, 2, "1")});
  EXPECT_TRUE(hop_limited_apsp(g, 2).distance(0, 2).is_plus_infinity());
  EXPECT_EQ(hop_limited_apsp(g, 3).distance(0, 2), X(2));
}

TEST(HopLimited, SingleVertexIsIdentity) {
  auto g = at0(2, {E(0, 1, "1")});
  auto a = hop_limited_apsp(g, 1);
  EXPECT_EQ(a.distance(0, 0), X(0));
  EXPECT_TRUE(a.distance(0, 1).is_plus_infinity());
}

// Properties on random graphs.

TEST(ShortestPathProperties, DijkstraMatchesBellmanFordOnNonnegative) {
  SplitMix64 rng(21);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng.below(12);
    auto g = instantiate(random_poly_graph(rng, n, rng.below(40), 0, {0, 9, 3}), Rational(0));
    for (Vertex s = 0; s < n; ++s) {
      auto bf = distances(g, s);
      auto dj = dijkstra(g, s);
      EXPECT_EQ(bf.dist, dj.dist);
    }
  }
}

TEST(ShortestPathProperties, BellmanFordMatchesPathEnumeration) {
  SplitMix64 rng(22);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 1 + rng.below(7);
    auto pg = random_feasible_linear_graph(rng, n, rng.below(16), Rational(0), Rational(1));
    oracle::BruteForce brute(pg);
    Rational r = random_between(rng, Rational(0), Rational(1));
    auto g = instantiate(pg, r);
    for (Vertex s = 0; s < n; ++s) {
      auto sp = distances(g, s);
      for (Vertex v = 0; v < n; ++v) {
        EXPECT_EQ(sp.dist[v], brute.distance(s, v, r));
        if (sp.dist[v].is_finite()) {
          EXPECT_EQ(evaluate(path_weight(pg, tree_path(pg, sp, v)), r), sp.dist[v].value());
        }
      }
    }
  }
}

TEST(ShortestPathProperties, HopLimitedFullEqualsBellmanFordAndIsMonotone) {
  SplitMix64 rng(23);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 1 + rng.below(9);
    auto pg = random_feasible_linear_graph(rng, n, rng.below(25), Rational(0), Rational(1));
    auto g = instantiate(pg, random_between(rng, Rational(0), Rational(1)));
    std::vector<HopLimitedApsp<Rational>> levels;
    for (std::size_t k = 1; k <= n; ++k) levels.emplace_back(g, k);
    for (Vertex u = 0; u < n; ++u) {
      auto sp = distances(g, u);
      for (Vertex v = 0; v < n; ++v) {
        EXPECT_EQ(levels.back().distance(u, v), sp.dist[v]);
        for (std::size_t k = 1; k < n; ++k) EXPECT_LE(levels[k].distance(u, v), levels[k - 1].distance(u, v));
        for (const auto& a : levels) {
          auto d = a.distance(u, v);
          if (!d.is_finite()) continue;
          auto path = a.path(u, v);
          Rational sum = 0;
          for (EdgeId id : path) sum += g.edges()[id].weight;
          EXPECT_EQ(sum, d.value());
        }
      }
    }
  }
}

TEST(ShortestPathProperties, WorksWithDoubles) {
  SplitMix64 rng(24);
  auto pg = random_feasible_linear_graph(rng, 8, 20, Rational(0), Rational(1));
  auto g = instantiate_with<double>(pg, [](EdgeId, const ParametricEdge& e) { return evaluate_double(e.weight, 0.5); });
  auto res = bellman_ford(g, 0);
  ASSERT_TRUE(std::holds_alternative<ShortestPathResult<double>>(res));
  auto exact = distances(instantiate(pg, Rational(1, 2)), 0);
  const auto& approx = std::get<ShortestPathResult<double>>(res);
  for (Vertex v = 0; v < 8; ++v) {
    EXPECT_EQ(approx.dist[v].is_finite(), exact.dist[v].is_finite());
    if (approx.dist[v].is_finite()) {
      EXPECT_NEAR(approx.dist[v].value(), exact.dist[v].value().get_d(), 1e-9);
    }
  }
}
