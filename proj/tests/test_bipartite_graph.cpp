#include <catch2/catch_amalgamated.hpp>

#include "creditnet/bipartite_graph.hpp"
#include "creditnet/random.hpp"
#include "oracles.hpp"

using namespace creditnet;

namespace {

// B0 -> {F0, F1, F2}, B1 -> {F1}; weights chosen for the strength fixtures.
BipartiteGraph three_firm_fixture() {
  BipartiteGraphBuilder b;
  b.add_edge("B0", "F0", EdgeWeight::from_split(2, 1));  // total 3
  b.add_edge("B0", "F1", EdgeWeight::from_split(0, 1));  // total 1
  b.add_edge("B0", "F2", EdgeWeight::from_split(1, 1));  // total 2
  b.add_edge("B1", "F1", EdgeWeight::from_total(5));
  return b.build();
}

}  // namespace

TEST_CASE("degree counts distinct counterparties") {
  auto g = three_firm_fixture();
  CHECK(g.degree(bank_ref(0)) == 3);
  CHECK(g.degree(firm_ref(1)) == 2);
  CHECK(g.degree(bank_ref(1)) == 1);

  BipartiteGraphBuilder empty;
  empty.add_bank("B0");
  empty.add_firm("F0");
  auto e = empty.build();
  CHECK(e.degree(bank_ref(0)) == 0);
  CHECK(e.degree(firm_ref(0)) == 0);
}

TEST_CASE("degree rejects out-of-range node references") {
  auto g = three_firm_fixture();
  CHECK_THROWS_AS(g.degree(bank_ref(2)), InvalidArgument);
  CHECK_THROWS_AS(g.degree(firm_ref(3)), InvalidArgument);
  CHECK_THROWS_AS(g.neighbors(firm_ref(99)), InvalidArgument);
  CHECK_THROWS_AS(g.strength(bank_ref(7)), InvalidArgument);
}

TEST_CASE("strength sums the selected component") {
  BipartiteGraphBuilder b;
  b.add_edge("B0", "F0", EdgeWeight::from_split(2, 1));  // total 3
  b.add_edge("B0", "F1", EdgeWeight::from_split(0, 1));  // total 1
  b.add_bank("B9");
  auto g = b.build();
  CHECK(g.strength(bank_ref(0), Term::Total) == 4.0);
  CHECK(g.strength(bank_ref(0), Term::Short) == 2.0);
  CHECK(g.strength(bank_ref(0), Term::Long) == 2.0);
  REQUIRE(g.find_bank("B9") == 1);
  CHECK(g.strength(bank_ref(1)) == 0.0);  // isolated
}

TEST_CASE("split-less edges contribute only to the total term") {
  auto g = three_firm_fixture();
  // F1 borrows 1 (split 0/1) from B0 and 5 (no split) from B1.
  CHECK(g.strength(firm_ref(1), Term::Total) == 6.0);
  CHECK(g.strength(firm_ref(1), Term::Short) == 0.0);
  CHECK(g.strength(firm_ref(1), Term::Long) == 1.0);
  CHECK(g.missing_split_count() == 1);
}

TEST_CASE("neighbors are distinct, opposite-mode, ascending") {
  BipartiteGraphBuilder b;
  b.add_edge("B0", "F0", EdgeWeight::from_total(1));
  b.add_edge("B0", "F2", EdgeWeight::from_total(1));
  b.add_edge("B1", "F2", EdgeWeight::from_total(1));
  b.add_firm("F1");
  auto g = b.build();

  // interning order: F0 -> 0, F2 -> 1, F1 -> 2
  auto nb = g.neighbors(bank_ref(0));
  REQUIRE(nb.size() == 2);
  CHECK(nb[0] == firm_ref(0));
  CHECK(nb[1] == firm_ref(*g.find_firm("F2")));
  // F2 financed by B0 and B1
  auto banks = g.neighbors(firm_ref(*g.find_firm("F2")));
  REQUIRE(banks.size() == 2);
  CHECK(banks[0] == bank_ref(0));
  CHECK(banks[1] == bank_ref(1));
  CHECK(g.neighbors(firm_ref(*g.find_firm("F1"))).empty());
}

TEST_CASE("duplicate rows are merged by summation with a count") {
  BipartiteGraphBuilder b;
  b.add_edge("B0", "F0", EdgeWeight::from_split(1, 2));
  b.add_edge("B0", "F0", EdgeWeight::from_split(3, 4));
  b.add_edge("B0", "F1", EdgeWeight::from_split(1, 0));
  auto g = b.build();
  CHECK(b.stats().duplicate_rows_merged == 1);
  CHECK(g.edge_count() == 2);
  CHECK(g.strength(bank_ref(0), Term::Short) == 5.0);
  CHECK(g.strength(bank_ref(0), Term::Long) == 6.0);

  SECTION("merging a split-less tranche poisons the split") {
    b.add_edge("B0", "F0", EdgeWeight::from_total(10));
    auto g2 = b.build();
    CHECK(g2.missing_split_count() == 1);
    CHECK(g2.strength(bank_ref(0), Term::Total) == 21.0);
  }
}

TEST_CASE("zero-total rows are dropped, negative amounts rejected") {
  BipartiteGraphBuilder b;
  b.add_edge("B0", "F0", EdgeWeight::from_split(0, 0));
  CHECK(b.stats().zero_total_dropped == 1);
  CHECK(b.build().edge_count() == 0);
  CHECK_THROWS_AS(b.add_edge("B0", "F1", EdgeWeight::from_split(-1, 2)),
                  InvalidArgument);
  CHECK_THROWS_AS(b.add_edge("B0", "F1", EdgeWeight::from_total(-3)),
                  InvalidArgument);
  EdgeWeight inconsistent;
  inconsistent.short_term = 1;
  inconsistent.long_term = 1;
  inconsistent.total = 3;
  CHECK_THROWS_AS(b.add_edge("B0", "F2", inconsistent), InvalidArgument);
}

TEST_CASE("distance is BFS hop count with unreachable marker") {
  BipartiteGraphBuilder b;
  b.add_edge("B0", "F0", EdgeWeight::from_total(1));
  b.add_edge("B1", "F0", EdgeWeight::from_total(1));
  b.add_edge("B2", "F9", EdgeWeight::from_total(1));  // second component
  auto g = b.build();

  CHECK(g.distance(bank_ref(0), bank_ref(0)) == 0);
  CHECK(g.distance(bank_ref(0), firm_ref(0)) == 1);
  CHECK(g.distance(bank_ref(0), bank_ref(1)) == 2);  // two banks sharing a firm
  CHECK_FALSE(g.distance(bank_ref(0), bank_ref(2)).has_value());
  CHECK_FALSE(g.distance(bank_ref(0), firm_ref(1)).has_value());
}

TEST_CASE("diameter over the largest component, with component census") {
  SECTION("single edge") {
    BipartiteGraphBuilder b;
    b.add_edge("B0", "F0", EdgeWeight::from_total(1));
    auto d = b.build().diameter();
    CHECK(d.diameter == 1);
    CHECK(d.connected);
    CHECK(d.component_count == 1);
  }
  SECTION("path of 4 nodes: B0-F0-B1-F1") {
    BipartiteGraphBuilder b;
    b.add_edge("B0", "F0", EdgeWeight::from_total(1));
    b.add_edge("B1", "F0", EdgeWeight::from_total(1));
    b.add_edge("B1", "F1", EdgeWeight::from_total(1));
    auto d = b.build().diameter();
    CHECK(d.diameter == 3);
    CHECK(d.giant_size == 4);
  }
  SECTION("star: all leaf pairs at distance 2") {
    BipartiteGraphBuilder b;
    for (int i = 0; i < 5; ++i)
      b.add_edge("HUB", "F" + std::to_string(i), EdgeWeight::from_total(1));
    auto d = b.build().diameter();
    CHECK(d.diameter == 2);
  }
  SECTION("two components reported, not assumed connected") {
    BipartiteGraphBuilder b;
    b.add_edge("B0", "F0", EdgeWeight::from_total(1));
    b.add_edge("B1", "F1", EdgeWeight::from_total(1));
    auto d = b.build().diameter();
    CHECK_FALSE(d.connected);
    CHECK(d.component_count == 2);
    CHECK(d.diameter == 1);
  }
  SECTION("empty graph is an error") {
    BipartiteGraphBuilder b;
    CHECK_THROWS_AS(b.build().diameter(), InvalidArgument);
  }
}

TEST_CASE("handshake and conservation identities on random graphs") {
  Rng rng(2024);
  for (int round = 0; round < 25; ++round) {
    auto g = oracles::random_bipartite(rng, 20, true);
    std::size_t bank_degrees = 0, firm_degrees = 0;
    double bank_strength = 0, firm_strength = 0, edge_total = 0;
    for (std::size_t i = 0; i < g.bank_count(); ++i) {
      bank_degrees += g.degree(bank_ref(i));
      bank_strength += g.strength(bank_ref(i));
    }
    for (std::size_t i = 0; i < g.firm_count(); ++i) {
      firm_degrees += g.degree(firm_ref(i));
      firm_strength += g.strength(firm_ref(i));
    }
    for (const Edge& e : g.edges()) edge_total += e.weight.total;
    CHECK(bank_degrees == g.edge_count());
    CHECK(firm_degrees == g.edge_count());
    CHECK(bank_strength == Catch::Approx(edge_total).epsilon(1e-12));
    CHECK(firm_strength == Catch::Approx(edge_total).epsilon(1e-12));
  }
}

TEST_CASE("distance symmetry, triangle inequality, bipartite parity") {
  Rng rng(99);
  for (int round = 0; round < 8; ++round) {
    auto g = oracles::random_bipartite(rng, 8);
    std::size_t nb = g.bank_count(), nf = g.firm_count();
    auto ref = [&](std::size_t u) {
      return u < nb ? bank_ref(u) : firm_ref(u - nb);
    };
    for (std::size_t u = 0; u < nb + nf; ++u) {
      for (std::size_t v = u; v < nb + nf; ++v) {
        auto duv = g.distance(ref(u), ref(v));
        auto dvu = g.distance(ref(v), ref(u));
        CHECK(duv == dvu);
        if (!duv) continue;
        // parity: odd distances cross modes, even distances stay in-mode
        bool same_mode = (u < nb) == (v < nb);
        CHECK((*duv % 2 == 0) == same_mode);
        for (std::size_t w = 0; w < nb + nf; ++w) {
          auto duw = g.distance(ref(u), ref(w));
          auto dwv = g.distance(ref(w), ref(v));
          if (duw && dwv) CHECK(*duv <= *duw + *dwv);
        }
      }
    }
  }
}

TEST_CASE("string ids map to stable dense indices") {
  auto g = three_firm_fixture();
  CHECK(g.bank_id(0) == "B0");
  CHECK(g.find_bank("B1") == 1);
  CHECK(g.find_firm("F2") == 2);
  CHECK_FALSE(g.find_bank("nope").has_value());
  CHECK(g.node_id(firm_ref(0)) == "F0");
}
