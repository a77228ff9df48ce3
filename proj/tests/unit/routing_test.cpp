#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>

#include "esdmesh/dissemination.hpp"
#include "esdmesh/metric.hpp"
#include "esdmesh/routing.hpp"
#include "support/oracles.hpp"

namespace esdmesh {
namespace {

StateTable hotspot_table() {
  StateTable t(0, NodeState{1, 18.0, 0});
  DschMessage m{1, {}};
  for (NodeId k = 1; k < 9; ++k) m.entries.push_back({k, NodeState{k == 4 ? 4u : 1u, 18.0, 1}});
  merge_advertisement(t, m);
  return t;
}

bool is_simple(const std::vector<NodeId>& p) {
  return std::set<NodeId>(p.begin(), p.end()).size() == p.size();
}

TEST(MetricKind, RoundTrip) {
  EXPECT_EQ(parse_metric_kind("esd"), MetricKind::Esd);
  EXPECT_EQ(parse_metric_kind("hopcount"), MetricKind::HopCount);
  EXPECT_EQ(to_string(MetricKind::Esd), "esd");
  EXPECT_THROW(parse_metric_kind("etx"), std::invalid_argument);
}

TEST(LinkWeights, HopCountAndZeroFlows) {
  const MeshGraph g = build_grid(3, 3);
  for (double w : hop_count_weights(g)) EXPECT_EQ(w, 1.0);
  StateTable idle(0, NodeState{0, 18.0, 0});
  DschMessage m{1, {}};
  for (NodeId k = 1; k < 9; ++k) m.entries.push_back({k, NodeState{0, 18.0, 1}});
  merge_advertisement(idle, m);
  for (double w : link_weights(g, idle, MetricKind::Esd)) EXPECT_EQ(w, 0.0);
  EXPECT_THROW(link_weights(g, StateTable(0, {}), MetricKind::Esd), std::out_of_range);
}

TEST(LinkWeights, Hotspot) {
  const MeshGraph g = build_grid(3, 3);
  const auto w = link_weights(g, hotspot_table(), MetricKind::Esd);
  for (std::size_t i = 0; i < g.links().size(); ++i) {
    const Link l = g.links()[i];
    EXPECT_DOUBLE_EQ(w[i], (l.a == 4 || l.b == 4) ? 45.0 : 18.0);
  }
}

TEST(ComputeRoute, HotspotAvoidsCenter) {
  const MeshGraph g = build_grid(3, 3);
  const StateTable t = hotspot_table();
  const auto w = link_weights(g, t, MetricKind::Esd);
  const auto route = compute_route(g, t, MetricKind::Esd, 0, 8);
  EXPECT_EQ(route.nodes, (std::vector<NodeId>{0, 1, 2, 5, 8}));
  EXPECT_DOUBLE_EQ(route_cost(g, w, route.nodes), 72.0);
  EXPECT_DOUBLE_EQ(route_cost(g, w, std::vector<NodeId>{0, 1, 4, 5, 8}), 126.0);

  double best = INFINITY;
  for (const auto& p : testing::all_simple_paths(g, 0, 8)) {
    best = std::min(best, testing::path_weight(g, w, p));
  }
  EXPECT_DOUBLE_EQ(best, 72.0);
  EXPECT_EQ(compute_route(g, t, MetricKind::HopCount, 0, 8).hops(), 4u);
}

TEST(ComputeRoute, ZeroCostFallsBackToFewestHops) {
  const MeshGraph g = build_grid(4, 4);
  const LinkWeights zero(g.links().size(), 0.0);
  const auto hops = bfs_distances(g, 0);
  for (NodeId d = 1; d < 16; ++d) EXPECT_EQ(compute_route(g, zero, 0, d).hops(), hops[d]);
}

TEST(ComputeRoute, Errors) {
  const MeshGraph g(3, {{0, 1}});
  const auto w = hop_count_weights(g);
  EXPECT_THROW(compute_route(g, w, 0, 0), std::invalid_argument);
  EXPECT_THROW(compute_route(g, w, 0, 2), std::runtime_error);
  LinkWeights negative{-1.0};
  EXPECT_THROW(bellman_ford(g, negative, 0), std::invalid_argument);
  LinkWeights nan{NAN};
  EXPECT_THROW(bellman_ford(g, nan, 0), std::invalid_argument);
}

TEST(BellmanFord, TrivialCases) {
  const MeshGraph g = testing::path_graph(3);
  const auto sp = bellman_ford(g, hop_count_weights(g), 0);
  EXPECT_EQ(sp.dist[0], 0.0);
  EXPECT_EQ(sp.path_to(0), (std::vector<NodeId>{0}));
  EXPECT_EQ(sp.dist[2], 2.0);
  EXPECT_EQ(sp.path_to(2), (std::vector<NodeId>{0, 1, 2}));
  const MeshGraph split(2, {});
  const auto none = bellman_ford(split, LinkWeights{}, 0);
  EXPECT_FALSE(none.reachable(1));
  EXPECT_TRUE(std::isinf(none.dist[1]));
  EXPECT_THROW(none.path_to(1), std::runtime_error);
}

TEST(BellmanFord, TieBreakPrefersLexicographicallySmallest) {
  // Square 0-1-3, 0-2-3 with unit weights: both 2 hops, pick via 1.
  const MeshGraph g(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(compute_route(g, hop_count_weights(g), 0, 3).nodes, (std::vector<NodeId>{0, 1, 3}));
  EXPECT_EQ(compute_route(g, hop_count_weights(g), 3, 0).nodes, (std::vector<NodeId>{3, 1, 0}));
  // Equal cost, fewer hops wins over lexicographic order.
  const MeshGraph h(4, {{0, 1}, {1, 2}, {0, 3}, {2, 3}, {0, 2}});
  LinkWeights w(h.links().size(), 1.0);
  w[static_cast<std::size_t>(h.link_index(0, 2))] = 2.0;
  EXPECT_EQ(compute_route(h, w, 0, 2).nodes, (std::vector<NodeId>{0, 2}));
}

class RandomRouting : public ::testing::TestWithParam<int> {};

TEST_P(RandomRouting, MatchesDijkstra) {
  std::mt19937_64 rng(4000 + GetParam());
  const std::size_t n = 2 + rng() % 24;
  const MeshGraph g = testing::random_connected_graph(rng, n, 0.15);
  std::uniform_real_distribution<double> wd(0.0, 100.0);
  LinkWeights w(g.links().size());
  for (auto& x : w) x = (rng() % 5 == 0) ? 0.0 : wd(rng);
  const NodeId src = rng() % n;
  const auto sp = bellman_ford(g, w, src);
  const auto oracle = testing::dijkstra(g, w, src);
  for (NodeId v = 0; v < n; ++v) {
    EXPECT_NEAR(sp.dist[v], oracle[v], 1e-9 * (1.0 + oracle[v]));
    const auto p = sp.path_to(v);
    EXPECT_TRUE(is_simple(p));
    EXPECT_NEAR(testing::path_weight(g, w, p), sp.dist[v], 1e-9 * (1.0 + oracle[v]));
  }
}

TEST_P(RandomRouting, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(5000 + GetParam());
  const std::size_t n = 2 + rng() % 9;
  const MeshGraph g = testing::random_connected_graph(rng, n, 0.3);
  LinkWeights w(g.links().size());
  for (auto& x : w) x = static_cast<double>(rng() % 4);  // many ties
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) continue;
      const auto route = compute_route(g, w, s, d);
      ASSERT_TRUE(is_valid_route(g, route.nodes));
      double best = INFINITY;
      std::size_t best_hops = SIZE_MAX;
      std::vector<NodeId> best_path;
      for (const auto& p : testing::all_simple_paths(g, s, d)) {
        const double c = testing::path_weight(g, w, p);
        const std::size_t h = p.size() - 1;
        if (best_path.empty() || std::tie(c, h, p) < std::tie(best, best_hops, best_path)) {
          best = c;
          best_hops = h;
          best_path = p;
        }
      }
      EXPECT_DOUBLE_EQ(route_cost(g, w, route.nodes), best);
      EXPECT_EQ(route.nodes, best_path);
    }
  }
}

TEST_P(RandomRouting, HopCountEqualsBfs) {
  std::mt19937_64 rng(6000 + GetParam());
  const std::size_t n = 2 + rng() % 20;
  const MeshGraph g = testing::random_connected_graph(rng, n, 0.1);
  const auto w = hop_count_weights(g);
  const NodeId s = rng() % n;
  const auto dist = bfs_distances(g, s);
  for (NodeId d = 0; d < n; ++d) {
    if (d != s) EXPECT_EQ(compute_route(g, w, s, d).hops(), dist[d]);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomRouting, ::testing::Range(0, 40));

TEST(SourceRoute, Reversed) {
  const SourceRoute r{{3, 1, 4}};
  EXPECT_EQ(r.reversed().nodes, (std::vector<NodeId>{4, 1, 3}));
  EXPECT_EQ(r.hops(), 2u);
  EXPECT_EQ(r.source(), 3u);
  EXPECT_EQ(r.destination(), 4u);
}

}  // namespace
}  // namespace esdmesh
