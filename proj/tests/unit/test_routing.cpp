#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "socsearch/error.hpp"
#include "socsearch/routing.hpp"
#include "support.hpp"

using namespace socsearch;
using testing::make_graph;

namespace {

/// Point on the equator at the given distance east of (0, 0).
GeoPoint east_km(double km) { return {0.0, km / (kEarthRadiusKm * std::numbers::pi / 180.0)}; }

/// Every node in community 0. Cached so contexts can keep a reference.
const CommunityAssignment& one_community(std::size_t n) {
  static std::map<std::size_t, CommunityAssignment> cache;
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, CommunityAssignment(std::vector<std::vector<CommunityIndex>>(n, {0}), {0}))
             .first;
  return it->second;
}

const std::vector<Weights> kAllWeights{Weights(0, 0, 0), Weights(1, 0, 0), Weights(0, 1, 0),
                                       Weights(0, 0, 1), Weights(0.25, 0.25, 0.5)};

}  // namespace

TEST_CASE("weights invariants") {
  CHECK_NOTHROW(Weights(0.25, 0.25, 0.5));
  CHECK_NOTHROW(Weights(1.0 / 3, 1.0 / 3, 1.0 / 3));
  CHECK(Weights::random().is_random());
  CHECK_FALSE(Weights(1, 0, 0).is_random());
  CHECK_THROWS_AS(Weights(0.5, 0.5, 0.5), Error);
  CHECK_THROWS_AS(Weights(0.2, 0.2, 0.2), Error);
  CHECK_THROWS_AS(Weights(-0.5, 1.0, 0.5), Error);
  CHECK_THROWS_AS(Weights(1.5, -0.5, 0.0), Error);
}

TEST_CASE("context constants and errors") {
  const auto g = testing::star_graph(16);
  const auto comms = one_community(g.node_count());
  const RoutingContext ctx(g, comms, KnowledgeModel(0, 1), Weights(1, 0, 0));
  CHECK(ctx.p_max() == doctest::Approx(4.0));
  CHECK(ctx.c_max() == std::size_t{17});
  CHECK(ctx.d_max() == doctest::Approx(geographic_diameter(g.locations())));

  RoutingOptions opt;
  opt.d_max_km = 123.0;
  CHECK(RoutingContext(g, comms, KnowledgeModel(0, 1), Weights(1, 0, 0), opt).d_max() == 123.0);

  const auto rebound = ctx.rebind(KnowledgeModel(12, 9), Weights(0.25, 0.25, 0.5));
  CHECK(rebound.d_max() == ctx.d_max());
  CHECK(rebound.knowledge().kappa() == 12);

  SUBCASE("max degree below two") {
    const auto pair = make_graph(2, {{0, 1}});
    CHECK_THROWS_AS(RoutingContext(pair, one_community(2), KnowledgeModel(0, 1), Weights(1, 0, 0)),
                    Error);
  }
  SUBCASE("all nodes at one place") {
    const auto same = make_graph(3, {{0, 1}, {1, 2}}, {{1, 1}, {1, 1}, {1, 1}});
    CHECK_THROWS_AS(RoutingContext(same, one_community(3), KnowledgeModel(0, 1), Weights(1, 0, 0)),
                    Error);
  }
  SUBCASE("community weight without C_max") {
    const CommunityAssignment singletons({{0}, {1}, {2}}, {0, 1, 2});
    const auto path = testing::path_graph(3);
    CHECK_THROWS_AS(RoutingContext(path, singletons, KnowledgeModel(0, 1), Weights(0, 1, 0)),
                    Error);
    const RoutingContext ok(path, singletons, KnowledgeModel(0, 1), Weights(1, 0, 0));
    CHECK_THROWS_AS(community_score(ok, 0, 2), Error);
    CHECK_THROWS_AS(ok.rebind(KnowledgeModel(0, 1), Weights(0.25, 0.25, 0.5)), Error);
  }
  SUBCASE("assignment of the wrong size") {
    CHECK_THROWS_AS(RoutingContext(g, one_community(3), KnowledgeModel(0, 1), Weights(1, 0, 0)),
                    Error);
  }
}

TEST_CASE("distance score") {
  // 0 = current at 1000 km, 1 = target at 0 km, 2 level with current, 3 beyond, 4 at target.
  const auto g = make_graph(5, {{0, 2}, {0, 3}, {0, 4}, {1, 4}},
                            {east_km(1000), east_km(0), {east_km(1000).lat, east_km(1000).lon},
                             east_km(1500), east_km(0)});
  RoutingOptions opt;
  opt.d_max_km = 1000.0;
  const RoutingContext ctx(g, one_community(5), KnowledgeModel(0, 1), Weights(1, 0, 0), opt);
  CHECK(distance_score(ctx, 0, 2, 1) == 0.0);
  CHECK(distance_score(ctx, 0, 3, 1) == 0.0);
  CHECK(distance_score(ctx, 0, 4, 1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("popularity score") {
  // Hub 0 with 16 leaves; node 17 has degree 4.
  std::vector<Edge> edges;
  for (NodeId i = 1; i <= 16; ++i) edges.push_back({0, i});
  for (NodeId i = 1; i <= 3; ++i) edges.push_back({17, i});
  edges.push_back({17, 18});
  const auto g = make_graph(19, edges);
  const RoutingContext ctx(g, one_community(19), KnowledgeModel(0, 1), Weights(0, 0, 1));
  CHECK(popularity_score(ctx, 0) == doctest::Approx(1.0));
  CHECK(popularity_score(ctx, 18) == 0.0);
  CHECK(popularity_score(ctx, 17) == doctest::Approx(0.5));
}

TEST_CASE("community score") {
  // c0 = {0..9} (size 10), c1 = {0, 1, 10..14} (size 7), c2 = {15}, node 16 in nothing.
  std::vector<std::vector<CommunityIndex>> m(17);
  for (NodeId u = 0; u < 10; ++u) m[u].push_back(0);
  for (NodeId u : {0u, 1u, 10u, 11u, 12u, 13u, 14u}) m[u].push_back(1);
  m[15].push_back(2);
  const CommunityAssignment comms(m, {0, 1, 2});
  std::vector<Edge> edges;
  for (NodeId u = 1; u < 17; ++u) edges.push_back({0, u});
  const auto g = make_graph(17, edges);
  const RoutingContext ctx(g, comms, KnowledgeModel(0, 1), Weights(0, 1, 0));

  CHECK(community_score(ctx, 16, 0) == 0.0);
  CHECK(community_score(ctx, 2, 3) == doctest::Approx(1.0 / 10.0));
  CHECK(community_score(ctx, 0, 1) == doctest::Approx(1.0 - 6.0 / 10.0));
  CHECK(community_score(ctx, 15, 15) == 1.0);

  RoutingOptions largest;
  largest.community_metric = CommunityMetric::kLargest;
  const RoutingContext lctx(g, comms, KnowledgeModel(0, 1), Weights(0, 1, 0), largest);
  CHECK(community_score(lctx, 0, 1) == doctest::Approx(1.0 / 10.0));
}

TEST_CASE("utility combines the partial scores") {
  // current 0 at 1000 km, i = 1 at 200 km, target 2 at 0 km; D_max 1000 -> D = 0.8.
  // Node 3 has degree 16, node 1 degree 4 -> P = 0.5.
  // c0 has 10 members, c1 has 7 and holds both 1 and 2 -> C = 1 - 6/10 = 0.4.
  const std::size_t n = 24;
  std::vector<Edge> edges{{0, 1}, {1, 20}, {1, 21}, {1, 22}};
  for (NodeId leaf = 4; leaf < 20; ++leaf) edges.push_back({3, leaf});
  std::vector<GeoPoint> loc(n, east_km(500));
  loc[0] = east_km(1000);
  loc[1] = east_km(200);
  loc[2] = east_km(0);
  std::vector<std::vector<CommunityIndex>> m(n);
  for (NodeId u : {1u, 2u, 4u, 5u, 6u, 7u, 8u, 9u, 10u, 11u}) m[u].push_back(0);
  for (NodeId u : {1u, 2u, 12u, 13u, 14u, 15u, 16u}) m[u].push_back(1);
  const CommunityAssignment comms(m, {0, 1});
  const auto g = make_graph(n, edges, loc);
  RoutingOptions opt;
  opt.d_max_km = 1000.0;
  const RoutingContext ctx(g, comms, KnowledgeModel(0, 1), Weights(0.25, 0.25, 0.5), opt);

  CHECK(distance_score(ctx, 0, 1, 2) == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(community_score(ctx, 1, 2) == doctest::Approx(0.4));
  CHECK(popularity_score(ctx, 1) == doctest::Approx(0.5));
  CHECK(utility(ctx, 0, 1, 2) == doctest::Approx(0.55).epsilon(1e-9));

  const auto dist_only = ctx.rebind(KnowledgeModel(0, 1), Weights(1, 0, 0));
  CHECK(utility(dist_only, 0, 1, 2) == doctest::Approx(distance_score(ctx, 0, 1, 2)));
  const auto random = ctx.rebind(KnowledgeModel(0, 1), Weights::random());
  for (NodeId i = 0; i < n; ++i) CHECK(utility(random, 0, i, 2) == 0.0);
}

TEST_CASE("partial scores stay in [0, 1]") {
  auto rng = make_rng(41, {});
  for (int t = 0; t < 5; ++t) {
    const auto g = giant_component(testing::random_graph(40, 0.12, rng));
    const auto comms = detect_communities(g);
    if (!comms.c_max()) continue;
    const RoutingContext ctx(g, comms, KnowledgeModel(3, 1), Weights(0.25, 0.25, 0.5));
    for (NodeId c = 0; c < g.node_count(); ++c)
      for (NodeId i = 0; i < g.node_count(); ++i)
        for (NodeId target = 0; target < g.node_count(); target += 3) {
          const double d = distance_score(ctx, c, i, target);
          const double cm = community_score(ctx, i, target);
          const double p = popularity_score(ctx, i);
          CHECK((d >= 0.0 && d <= 1.0));
          CHECK((cm >= 0.0 && cm <= 1.0));
          CHECK((p >= 0.0 && p <= 1.0));
        }
  }
}

TEST_CASE("argmax is invariant under common weight scaling") {
  auto rng = make_rng(42, {});
  for (int t = 0; t < 20; ++t) {
    const auto g = giant_component(testing::random_graph(30, 0.15, rng));
    const auto comms = detect_communities(g);
    if (!comms.c_max()) continue;
    RoutingOptions off;
    off.fof_scoring = FofScoring::kOff;
    const RoutingContext ctx(g, comms, KnowledgeModel(0, 1), Weights(0.25, 0.25, 0.5), off);
    const NodeId current = 0, target = static_cast<NodeId>(g.node_count() - 1);
    for (double factor : {0.5, 3.0, 1e3}) {
      std::vector<NodeId> base_best, scaled_best;
      double base_max = -1, scaled_max = -1;
      for (NodeId f : g.neighbors(current)) {
        const double s = 0.25 * distance_score(ctx, current, f, target) +
                         0.25 * community_score(ctx, f, target) +
                         0.5 * popularity_score(ctx, f);
        base_max = std::max(base_max, s);
        scaled_max = std::max(scaled_max, factor * s);
      }
      for (NodeId f : g.neighbors(current)) {
        const double lib = effective_score(ctx, current, f, target, std::vector<NodeId>{current});
        const double s = 0.25 * distance_score(ctx, current, f, target) +
                         0.25 * community_score(ctx, f, target) +
                         0.5 * popularity_score(ctx, f);
        CHECK(lib == doctest::Approx(s).epsilon(1e-12));
        if (s >= base_max - 1e-12) base_best.push_back(f);
        if (factor * s >= scaled_max - 1e-12 * factor) scaled_best.push_back(f);
      }
      CHECK(base_best == scaled_best);
    }
  }
}

TEST_CASE("select_next rules") {
  SUBCASE("a neighbouring target is always chosen") {
    const auto g = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    for (const auto& w : kAllWeights) {
      const RoutingContext ctx(g, one_community(4), KnowledgeModel(12, 1), w);
      auto rng = make_rng(1, {});
      const std::vector<NodeId> visited{0};
      CHECK(select_next(ctx, 0, 3, visited, rng) == NodeId{3});
    }
  }
  SUBCASE("the friend that knows the target carries the folder") {
    // 0 - {1, 2, 3}; only 2 is a friend of the target 4. Node 1 lies right next to the target.
    std::vector<GeoPoint> loc{east_km(2000), east_km(10), east_km(1900), east_km(1900),
                              east_km(0)};
    const auto g = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {2, 4}}, loc);
    for (const auto& w : kAllWeights) {
      const RoutingContext ctx(g, one_community(5), KnowledgeModel(1, 1), w);
      auto rng = make_rng(2, {});
      CHECK(select_next(ctx, 0, 4, std::vector<NodeId>{0}, rng) == NodeId{2});
      // Visited friends are skipped.
      if (!w.is_random()) {
        const auto next = select_next(ctx, 0, 4, std::vector<NodeId>{0, 2}, rng);
        CHECK(next != NodeId{2});
      }
    }
    // Without knowledge the greedy distance rule prefers node 1.
    const RoutingContext blind(g, one_community(5), KnowledgeModel(0, 1), Weights(1, 0, 0));
    auto rng = make_rng(2, {});
    CHECK(select_next(blind, 0, 4, std::vector<NodeId>{0}, rng) == NodeId{1});
  }
  SUBCASE("known FoF raise a friend's score") {
    // Friend 1 is behind the current node but knows 3, which sits next to the target 4.
    std::vector<GeoPoint> loc{east_km(1000), east_km(1200), east_km(500), east_km(50),
                              east_km(0)};
    const auto g = make_graph(5, {{0, 1}, {0, 2}, {1, 3}}, loc);
    RoutingOptions off;
    off.fof_scoring = FofScoring::kOff;
    auto rng = make_rng(3, {});
    const std::vector<NodeId> visited{0};
    const RoutingContext with_max(g, one_community(5), KnowledgeModel(1, 1), Weights(1, 0, 0));
    const RoutingContext without(g, one_community(5), KnowledgeModel(1, 1), Weights(1, 0, 0), off);
    CHECK(select_next(with_max, 0, 4, visited, rng) == NodeId{1});
    CHECK(select_next(without, 0, 4, visited, rng) == NodeId{2});
    CHECK(effective_score(with_max, 0, 1, 4, visited) ==
          doctest::Approx(distance_score(with_max, 0, 3, 4)));
    // A visited FoF does not count.
    CHECK(effective_score(with_max, 0, 1, 4, std::vector<NodeId>{0, 3}) == 0.0);
  }
  SUBCASE("dead end") {
    const auto g = testing::path_graph(3);
    const RoutingContext ctx(g, one_community(3), KnowledgeModel(0, 1), Weights(1, 0, 0));
    auto rng = make_rng(4, {});
    CHECK_FALSE(select_next(ctx, 2, 0, std::vector<NodeId>{1, 2}, rng).has_value());
  }
}

TEST_CASE("ties are broken uniformly") {
  // Friends 1 and 2 mirror each other around the line to the target.
  std::vector<GeoPoint> loc{{0.0, 10.0}, {1.0, 5.0}, {-1.0, 5.0}, {0.0, 0.0}};
  const auto g = make_graph(4, {{0, 1}, {0, 2}}, loc);
  const RoutingContext ctx(g, one_community(4), KnowledgeModel(0, 1), Weights(1, 0, 0));
  REQUIRE(effective_score(ctx, 0, 1, 3, std::vector<NodeId>{0}) ==
          doctest::Approx(effective_score(ctx, 0, 2, 3, std::vector<NodeId>{0})).epsilon(1e-14));
  std::size_t first = 0;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) {
    auto rng = make_rng(static_cast<std::uint64_t>(s), {7});
    if (select_next(ctx, 0, 3, std::vector<NodeId>{0}, rng) == NodeId{1}) ++first;
  }
  CHECK(std::abs(double(first) / draws - 0.5) <= 0.02);

  SUBCASE("a unique best does not consume randomness") {
    auto a = make_rng(1, {});
    auto b = make_rng(1, {});
    // Nodes sit west to east; 2 is strictly closer to the target 3 than 1 is.
    const auto fan = make_graph(4, {{0, 1}, {0, 2}});
    const RoutingContext fctx(fan, one_community(4), KnowledgeModel(0, 1), Weights(1, 0, 0));
    CHECK(select_next(fctx, 0, 3, std::vector<NodeId>{0}, a) == NodeId{2});
    CHECK(a() == b());
  }
}

TEST_CASE("route outcomes") {
  SUBCASE("direct friends") {
    const auto g = make_graph(3, {{0, 1}, {1, 2}});
    const RoutingContext ctx(g, one_community(3), KnowledgeModel(0, 1), Weights(1, 0, 0));
    auto rng = make_rng(1, {});
    const auto r = route(ctx, 0, 1, rng);
    CHECK(r.success);
    CHECK(r.hops == 1);
    CHECK(r.termination == Termination::kDelivered);
  }
  SUBCASE("leaf to leaf through the centre") {
    const auto g = testing::star_graph(6);
    for (const auto& w : kAllWeights) {
      const RoutingContext ctx(g, one_community(7), KnowledgeModel(0, 1), w);
      auto rng = make_rng(2, {});
      const auto r = route(ctx, 2, 5, rng);
      CHECK(r.success);
      CHECK(r.path == std::vector<NodeId>{2, 0, 5});
    }
  }
  SUBCASE("hop limit") {
    RoutingOptions opt;
    opt.hop_limit = 3;
    const auto g = testing::path_graph(8);
    const RoutingContext ctx(g, one_community(8), KnowledgeModel(0, 1), Weights(1, 0, 0), opt);
    auto rng = make_rng(3, {});
    const auto r = route(ctx, 0, 7, rng);
    CHECK_FALSE(r.success);
    CHECK(r.hops == 3);
    CHECK(r.termination == Termination::kHopLimit);
    CHECK(to_string(r.termination) == "hop-limit");
  }
  SUBCASE("dead end") {
    const auto g = make_graph(4, {{0, 1}, {1, 2}});
    const RoutingContext ctx(g, one_community(4), KnowledgeModel(0, 1), Weights(1, 0, 0));
    auto rng = make_rng(4, {});
    const auto r = route(ctx, 0, 3, rng);
    CHECK(r.termination == Termination::kDeadEnd);
    CHECK(r.path == std::vector<NodeId>{0, 1, 2});
  }
  SUBCASE("bad endpoints") {
    const auto g = testing::path_graph(3);
    const RoutingContext ctx(g, one_community(3), KnowledgeModel(0, 1), Weights(1, 0, 0));
    auto rng = make_rng(5, {});
    CHECK_THROWS_AS(route(ctx, 1, 1, rng), Error);
    CHECK_THROWS_AS(route(ctx, 1, 9, rng), Error);
  }
}

TEST_CASE("route invariants on random graphs") {
  auto rng = make_rng(43, {});
  for (int t = 0; t < 20; ++t) {
    const auto g = giant_component(testing::random_graph(60, 0.06, rng));
    if (g.node_count() < 3 || g.max_degree() < 2) continue;
    const auto comms = detect_communities(g);
    for (const auto& w : kAllWeights) {
      if (w.community() > 0 && !comms.c_max()) continue;
      for (std::size_t kappa : {0, 3, 12}) {
        const RoutingContext ctx(g, comms, KnowledgeModel(kappa, 5), w);
        for (int k = 0; k < 10; ++k) {
          const NodeId s = static_cast<NodeId>(uniform_index(rng, g.node_count()));
          NodeId d = static_cast<NodeId>(uniform_index(rng, g.node_count()));
          if (d == s) continue;
          const auto r = route(ctx, s, d, rng);
          auto sorted = r.path;
          std::sort(sorted.begin(), sorted.end());
          CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
          CHECK(r.hops == r.path.size() - 1);
          CHECK(r.hops <= ctx.options().hop_limit);
          CHECK(r.success == (r.path.back() == d));
          for (std::size_t i = 0; i + 1 < r.path.size(); ++i)
            CHECK(g.adjacent(r.path[i], r.path[i + 1]));
          if (r.success) CHECK(r.hops >= *bfs_hops(g, s, d));
        }
      }
    }
  }
}
