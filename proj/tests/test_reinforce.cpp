#include <set>

#include "doctest.h"
#include "json.hpp"
#include "robnet/graph.hpp"
#include "robnet/partition.hpp"
#include "robnet/reinforce.hpp"

using namespace robnet;

namespace {

Network fig2() {
  return Network::from_arcs(
      5, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 4}, {4, 3}, {1, 4}, {4, 1}});
}

}  // namespace

TEST_CASE("copies per node by model") {
  CHECK(copies_per_node(FaultKind::Omission, 1) == 2);
  CHECK(copies_per_node(FaultKind::Omission, 3) == 4);
  CHECK(copies_per_node(FaultKind::Byzantine, 1) == 3);
  CHECK(copies_per_node(FaultKind::Byzantine, 2) == 5);
}

TEST_CASE("fault kind strings") {
  CHECK(fault_kind_from_string("om") == FaultKind::Omission);
  CHECK(fault_kind_from_string("byz") == FaultKind::Byzantine);
  CHECK(std::string(to_string(FaultKind::Omission)) == "om");
  CHECK_THROWS_AS(fault_kind_from_string("weird"), std::invalid_argument);
}

TEST_CASE("rational arithmetic normalizes") {
  CHECK(Rational(16, 6) == Rational(8, 3));
  CHECK(Rational(-4, -2) == Rational(2, 1));
  CHECK(Rational(3, -9) == Rational(-1, 3));
  CHECK(Rational(0, 7) == Rational(0, 1));
  CHECK(Rational(8, 3).value() == doctest::Approx(2.6666666667));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("copy id mapping round-trips") {
  ReinforcedNetwork rn = reinforce_strong(fig2(), 1, FaultKind::Byzantine);
  CHECK(rn.ell == 3);
  CHECK(rn.copies() == 15);
  for (int v = 0; v < 5; ++v) {
    for (int i = 0; i < rn.ell; ++i) {
      int c = rn.copy_id(v, i);
      CHECK(rn.project(c) == v);
      CHECK(rn.copy_index(c) == i);
    }
  }
}

TEST_CASE("strong build equals partitioned build on singletons") {
  Network g = fig2();
  for (FaultKind kind : {FaultKind::Omission, FaultKind::Byzantine}) {
    ReinforcedNetwork strong = reinforce_strong(g, 1, kind);
    ReinforcedNetwork part = reinforce_partitioned(g, singleton_partition(g), 1, kind);
    CHECK(strong.materialize_arcs() == part.materialize_arcs());
    CHECK(overheads(strong).eta == overheads(part).eta);
  }
}

TEST_CASE("copy arcs follow the exact case split") {
  Network g = fig2();
  Partition p = Partition::from_regions(5, {{0, 1, 2}, {3, 4}});
  ReinforcedNetwork rn = reinforce_partitioned(g, p, 1, FaultKind::Omission);

  std::set<std::pair<int, int>> expected;
  for (auto [u, v] : g.arcs) {
    if (p.region_of[u] == p.region_of[v]) {
      for (int i = 0; i < rn.ell; ++i) expected.insert({rn.copy_id(u, i), rn.copy_id(v, i)});
    } else {
      for (int i = 0; i < rn.ell; ++i)
        for (int j = 0; j < rn.ell; ++j) expected.insert({rn.copy_id(u, i), rn.copy_id(v, j)});
    }
  }
  auto arcs = rn.materialize_arcs();
  CHECK(std::set<std::pair<int, int>>(arcs.begin(), arcs.end()) == expected);
  CHECK(arcs.size() == expected.size());
  CHECK((long long)arcs.size() == rn.copy_arc_count());
}

TEST_CASE("overhead constants") {
  Network g = fig2();

  // Strong builds: every arc crosses regions, eta = ell^2 exactly.
  CHECK(overheads(reinforce_strong(g, 1, FaultKind::Byzantine)).eta == Rational(9, 1));
  CHECK(overheads(reinforce_strong(g, 1, FaultKind::Omission)).eta == Rational(4, 1));
  CHECK(overheads(reinforce_strong(g, 1, FaultKind::Omission)).nu == Rational(2, 1));

  // Example partition: 4 intra + 2 cross of 6 edges.
  Partition p = Partition::from_regions(5, {{0, 1, 2}, {3, 4}});
  CHECK(overheads(reinforce_partitioned(g, p, 1, FaultKind::Omission)).eta == Rational(8, 3));

  // One-fifth cut fraction instance: a 6-path split into halves.
  Network path6 = build_path(6);
  Partition halves = Partition::from_regions(6, {{0, 1, 2}, {3, 4, 5}});
  CHECK(overheads(reinforce_partitioned(path6, halves, 1, FaultKind::Omission)).eta ==
        Rational(12, 5));
  CHECK(overheads(reinforce_partitioned(path6, halves, 1, FaultKind::Byzantine)).eta ==
        Rational(21, 5));

  // Whole-graph region, omission: doubles nodes and edges.
  ReinforcedNetwork naive = reinforce_partitioned(g, whole_partition(g), 1, FaultKind::Omission);
  CHECK(overheads(naive).nu == Rational(2, 1));
  CHECK(overheads(naive).eta == Rational(2, 1));
}

TEST_CASE("reinforce rejects bad parameters") {
  Network g = build_path(3);
  CHECK_THROWS_AS(reinforce_strong(g, 0, FaultKind::Omission), std::invalid_argument);
  CHECK_THROWS_AS(reinforce_partitioned(g, whole_partition(g), -1, FaultKind::Byzantine),
                  std::invalid_argument);
  Partition wrong = Partition::from_regions(4, {{0, 1, 2, 3}});
  CHECK_THROWS_AS(reinforce_partitioned(g, wrong, 1, FaultKind::Omission),
                  std::invalid_argument);
}

TEST_CASE("reinforced network json") {
  Network g = build_path(3);
  ReinforcedNetwork rn = reinforce_strong(g, 1, FaultKind::Omission);
  auto j = nlohmann::json::parse(to_json(rn));
  CHECK(j.at("ell") == 2);
  CHECK(j.at("f") == 1);
  CHECK(j.at("model") == "om");
  CHECK(j.at("base").at("n") == 3);
  CHECK(j.at("partition").at("regions").size() == 3);
  CHECK(j.at("arcs").size() == (std::size_t)rn.copy_arc_count());
  CHECK(j.at("overheads").at("eta").at("num") == 4);
}
