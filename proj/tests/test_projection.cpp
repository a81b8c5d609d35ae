#include <catch2/catch_amalgamated.hpp>

#include "creditnet/projection.hpp"
#include "creditnet/random.hpp"
#include "oracles.hpp"

using namespace creditnet;
using Catch::Approx;

TEST_CASE("two banks financing the same firm are linked") {
  BipartiteGraphBuilder b;
  b.add_edge("B0", "F", EdgeWeight::from_total(1));
  b.add_edge("B1", "F", EdgeWeight::from_total(2));
  auto p = project(b.build(), Mode::Bank);
  REQUIRE(p.edge_count() == 1);
  CHECK(p.edges()[0] == ProjectedEdge{0, 1, 1});
  CHECK(p.mode() == Mode::Bank);
}

TEST_CASE("shared count equals the number of common counterparties") {
  BipartiteGraphBuilder b;
  for (const char* f : {"F1", "F2", "F3"}) {
    b.add_edge("B0", f, EdgeWeight::from_total(1));
    b.add_edge("B1", f, EdgeWeight::from_total(1));
  }
  b.add_edge("B0", "F4", EdgeWeight::from_total(1));  // not shared
  auto p = project(b.build(), Mode::Bank);
  REQUIRE(p.edge_count() == 1);
  CHECK(p.edges()[0].shared == 3);
}

TEST_CASE("firm projection of a shared bank") {
  BipartiteGraphBuilder b;
  b.add_edge("B", "F0", EdgeWeight::from_total(1));
  b.add_edge("B", "F1", EdgeWeight::from_total(1));
  b.add_edge("B", "F2", EdgeWeight::from_total(1));
  auto p = project(b.build(), Mode::Firm);
  CHECK(p.node_count() == 3);
  CHECK(p.edge_count() == 3);  // triangle
  for (const auto& e : p.edges()) CHECK(e.shared == 1);
}

TEST_CASE("projection matches the all-pairs brute force oracle") {
  Rng rng(112358);
  for (int round = 0; round < 40; ++round) {
    auto g = oracles::random_bipartite(rng, 30);
    for (Mode mode : {Mode::Bank, Mode::Firm}) {
      auto fast = project(g, mode);
      auto slow = oracles::brute_force_projection(g, mode);
      REQUIRE(fast.edge_count() == slow.size());
      for (std::size_t i = 0; i < slow.size(); ++i) CHECK(fast.edges()[i] == slow[i]);
    }
  }
}

TEST_CASE("sum of shared counts equals sum over counterparties of C(d,2)") {
  Rng rng(271);
  for (int round = 0; round < 20; ++round) {
    auto g = oracles::random_bipartite(rng, 25);
    for (Mode mode : {Mode::Bank, Mode::Firm}) {
      auto p = project(g, mode);
      std::uint64_t total_shared = 0;
      for (const auto& e : p.edges()) total_shared += e.shared;
      CHECK(total_shared == estimate_pair_increments(g, mode));
    }
  }
}

TEST_CASE("project_subset") {
  BipartiteGraphBuilder b;
  b.add_edge("B0", "F0", EdgeWeight::from_total(1));
  b.add_edge("B1", "F0", EdgeWeight::from_total(1));
  b.add_edge("B2", "F0", EdgeWeight::from_total(1));
  b.add_edge("B2", "F1", EdgeWeight::from_total(1));
  auto g = b.build();

  SECTION("identity filter equals project") {
    auto all = project_subset(g, Mode::Bank, std::vector<bool>{true, true, true});
    CHECK(all == project(g, Mode::Bank));
  }
  SECTION("single node yields an empty edge set") {
    auto one = project_subset(g, Mode::Bank, std::vector<bool>{true, false, false});
    CHECK(one.node_count() == 1);
    CHECK(one.edge_count() == 0);
  }
  SECTION("counterparty set is unrestricted") {
    auto sub = project_subset(g, Mode::Bank, std::vector<bool>{true, false, true});
    REQUIRE(sub.edge_count() == 1);
    CHECK(sub.node_id(0) == "B0");
    CHECK(sub.node_id(1) == "B2");
    CHECK(sub.edges()[0].shared == 1);  // via F0, even though B1 is filtered out
  }
  SECTION("subset matches brute force on a filtered copy") {
    Rng rng(31337);
    for (int round = 0; round < 15; ++round) {
      auto rg = oracles::random_bipartite(rng, 12);
      std::vector<bool> keep(rg.bank_count());
      std::size_t kept = 0;
      for (std::size_t i = 0; i < keep.size(); ++i) {
        keep[i] = rng.uniform01() < 0.6;
        kept += keep[i];
      }
      if (kept == 0) continue;
      auto sub = project_subset(rg, Mode::Bank, keep);
      // oracle: count common neighbors among kept banks only
      auto full = oracles::brute_force_projection(rg, Mode::Bank);
      std::vector<std::uint32_t> reindex(rg.bank_count(), 0xffffffffu);
      std::uint32_t next = 0;
      for (std::size_t i = 0; i < keep.size(); ++i)
        if (keep[i]) reindex[i] = next++;
      std::vector<ProjectedEdge> expected;
      for (const auto& e : full)
        if (keep[e.a] && keep[e.b])
          expected.push_back({reindex[e.a], reindex[e.b], e.shared});
      REQUIRE(sub.edge_count() == expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(sub.edges()[i] == expected[i]);
    }
  }
  SECTION("empty selection is an error") {
    CHECK_THROWS_AS(
        project_subset(g, Mode::Bank, std::vector<bool>{false, false, false}),
        InvalidArgument);
  }
}

TEST_CASE("degree cap skips oversized counterparties") {
  BipartiteGraphBuilder b;
  for (int i = 0; i < 6; ++i)
    b.add_edge("B" + std::to_string(i), "HUB", EdgeWeight::from_total(1));
  b.add_edge("B0", "SMALL", EdgeWeight::from_total(1));
  b.add_edge("B1", "SMALL", EdgeWeight::from_total(1));
  auto g = b.build();

  auto uncapped = project(g, Mode::Bank);
  std::uint64_t total_uncapped = 0;
  for (const auto& e : uncapped.edges()) total_uncapped += e.shared;
  CHECK(total_uncapped == 15 + 1);  // C(6,2) + C(2,2)
  CHECK(uncapped.capped_counterparties() == 0);

  ProjectionOptions options;
  options.degree_cap = 3;
  auto capped = project(g, Mode::Bank, options);
  CHECK(capped.capped_counterparties() == 1);
  REQUIRE(capped.edge_count() == 1);  // only the SMALL firm contributes
  CHECK(capped.edges()[0] == ProjectedEdge{0, 1, 1});
}

TEST_CASE("projection stats") {
  SECTION("triangle has density 1") {
    std::vector<ProjectedEdge> edges{{0, 1, 1}, {0, 2, 1}, {1, 2, 1}};
    ProjectedGraph p(Mode::Firm, {"a", "b", "c"}, edges, "t");
    auto s = projection_stats(p);
    CHECK(s.density == 1.0);
    CHECK(s.possible_edges == 3);
    CHECK(s.mean_degree == 2.0);
  }
  SECTION("4 nodes, 3 edges") {
    std::vector<ProjectedEdge> edges{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
    ProjectedGraph p(Mode::Firm, {"a", "b", "c", "d"}, edges, "t");
    auto s = projection_stats(p);
    CHECK(s.density == Approx(0.5));
    CHECK(s.mean_degree == Approx(1.5));
  }
  SECTION("2004 firm-network combinatorics check out exactly") {
    CHECK(possible_edge_count(2661) == 3539130ull);
    auto s = projection_metrics(2661, 2881763);
    CHECK(s.possible_edges == 3539130ull);
    CHECK(s.density > 0.80);
  }
  SECTION("density undefined below two nodes") {
    ProjectedGraph p(Mode::Firm, {"only"}, {}, "t");
    CHECK_THROWS_AS(projection_stats(p), InvalidArgument);
  }
}

TEST_CASE("projected graph validates its construction invariants") {
  std::vector<std::string> ids{"x", "y", "z"};
  CHECK_THROWS_AS(ProjectedGraph(Mode::Bank, ids, {{1, 0, 1}}, "t"),
                  InvalidArgument);  // a >= b
  CHECK_THROWS_AS(ProjectedGraph(Mode::Bank, ids, {{0, 3, 1}}, "t"),
                  InvalidArgument);  // out of range
  CHECK_THROWS_AS(ProjectedGraph(Mode::Bank, ids, {{0, 1, 0}}, "t"),
                  InvalidArgument);  // shared < 1
  CHECK_THROWS_AS(
      ProjectedGraph(Mode::Bank, ids, {{0, 1, 1}, {0, 1, 2}}, "t"),
      InvalidArgument);  // duplicate
}

TEST_CASE("projection distance and components") {
  std::vector<ProjectedEdge> edges{{0, 1, 2}, {1, 2, 1}};  // path, plus isolated 3
  ProjectedGraph p(Mode::Bank, {"a", "b", "c", "d"}, edges, "t");
  CHECK(p.distance(0, 2) == 2);
  CHECK(p.distance(2, 0) == 2);
  CHECK_FALSE(p.distance(0, 3).has_value());
  auto cs = p.components();
  CHECK(cs.sizes.size() == 2);
  CHECK(cs.sizes[cs.giant] == 3);
}

TEST_CASE("projection determinism: equal inputs give equal edge vectors") {
  Rng rng(8080);
  auto g = oracles::random_bipartite(rng, 20);
  auto p1 = project(g, Mode::Firm);
  auto p2 = project(g, Mode::Firm);
  CHECK(p1 == p2);
}
