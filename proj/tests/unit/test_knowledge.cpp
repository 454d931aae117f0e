#include <doctest.h>

#include <algorithm>
#include <set>

#include "socsearch/error.hpp"
#include "socsearch/knowledge.hpp"
#include "support.hpp"

using namespace socsearch;
using testing::make_graph;

TEST_CASE("fof candidates") {
  SUBCASE("triangle") {
    const auto g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(fof_candidates(g, 0, 1).empty());
  }
  SUBCASE("path") {
    const auto g = testing::path_graph(3);
    CHECK(fof_candidates(g, 0, 1) == std::vector<NodeId>{2});
  }
  SUBCASE("star") {
    const auto g = testing::star_graph(4);  // centre 0, leaves 1..4
    CHECK(fof_candidates(g, 1, 0) == std::vector<NodeId>{2, 3, 4});
  }
  SUBCASE("not a friend") {
    const auto g = testing::path_graph(3);
    CHECK_THROWS_AS(fof_candidates(g, 0, 2), Error);
  }
}

TEST_CASE("known fof sizes") {
  const auto g = testing::star_graph(4);
  CHECK(known_fof(KnowledgeModel(0, 1), g, 1, 0).empty());
  const auto all = known_fof(KnowledgeModel(12, 1), g, 1, 0);
  CHECK(std::set<NodeId>(all.begin(), all.end()) == std::set<NodeId>{2, 3, 4});
  CHECK(known_fof(KnowledgeModel(2, 1), g, 1, 0).size() == 2);
}

TEST_CASE("known fof nesting and determinism") {
  auto rng = make_rng(31, {});
  for (int t = 0; t < 20; ++t) {
    const auto g = testing::random_graph(60, 0.15, rng);
    const std::uint64_t seed = rng();
    for (NodeId n = 0; n < g.node_count(); ++n)
      for (NodeId f : g.neighbors(n)) {
        const auto small = known_fof(KnowledgeModel(3, seed), g, n, f);
        const auto big = known_fof(KnowledgeModel(12, seed), g, n, f);
        REQUIRE(small.size() <= big.size());
        CHECK(std::equal(small.begin(), small.end(), big.begin()));
        CHECK(known_fof(KnowledgeModel(12, seed), g, n, f) == big);
        for (NodeId x : fof_candidates(g, n, f)) {
          const bool listed = std::find(big.begin(), big.end(), x) != big.end();
          CHECK(knows_fof_via(KnowledgeModel(12, seed), g, n, f, x) == listed);
        }
      }
  }
}

TEST_CASE("known fof uniformity") {
  // Centre 0 with leaves 1..5: as seen from leaf 1 there are four candidates.
  const auto g = testing::star_graph(5);
  std::vector<std::size_t> hits(6, 0);
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s)
    for (NodeId x : known_fof(KnowledgeModel(2, static_cast<std::uint64_t>(s)), g, 1, 0)) ++hits[x];
  for (NodeId x = 2; x <= 5; ++x)
    CHECK(std::abs(double(hits[x]) / seeds - 0.5) <= 0.02);
}

TEST_CASE("knows target") {
  SUBCASE("through exactly one friend") {
    const auto g = testing::path_graph(3);
    CHECK(knows_target(KnowledgeModel(1, 4), g, 0, 2) == NodeId{1});
    CHECK_FALSE(knows_target(KnowledgeModel(0, 4), g, 0, 2).has_value());
  }
  SUBCASE("several friends qualify: the smallest wins") {
    // 0 - {2, 7} - 9
    const auto g = make_graph(10, {{0, 2}, {0, 7}, {2, 9}, {7, 9}});
    CHECK(knows_target(KnowledgeModel(12, 4), g, 0, 9) == NodeId{2});
    const auto skip_two = first_friend_knowing(KnowledgeModel(12, 4), g, 0, 9,
                                               [](NodeId f) { return f != 2; });
    CHECK(skip_two == NodeId{7});
  }
  SUBCASE("a direct friend is not a known FoF") {
    const auto g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK_FALSE(knows_target(KnowledgeModel(12, 4), g, 0, 2).has_value());
  }
  SUBCASE("κ=0 never knows") {
    auto rng = make_rng(6, {});
    const auto g = testing::random_graph(40, 0.2, rng);
    for (NodeId n = 0; n < g.node_count(); ++n)
      for (NodeId t = 0; t < g.node_count(); ++t)
        CHECK_FALSE(knows_target(KnowledgeModel(0, 1), g, n, t).has_value());
  }
}
