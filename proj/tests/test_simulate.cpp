#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "robnet/graph.hpp"
#include "robnet/programs.hpp"
#include "robnet/reliability.hpp"
#include "robnet/simulate.hpp"

using namespace robnet;

namespace {

Network triangle() {
  return Network::from_arcs(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}});
}

FaultScenario scenario_for(const ReinforcedNetwork& rn, const std::vector<int>& ids,
                           Adversary adv = Adversary::CrashSilent, std::uint64_t seed = 0) {
  FaultScenario sc;
  sc.faulty.assign(rn.copies(), 0);
  for (int id : ids) sc.faulty[id] = 1;
  sc.adversary = adv;
  sc.seed = seed;
  return sc;
}

// Steps normally but throws at one (node, round); for context-propagation tests.
class BoomProgram : public RoutingProgram {
 public:
  std::string init(int, const Network&) const override { return "s"; }
  Step step(int node, int round, const std::string& state,
            const std::vector<std::optional<Message>>&, const Network& g) const override {
    if (node == 2 && round == 3) throw std::runtime_error("boom");
    return {state, std::vector<std::optional<Message>>(g.out_neighbors[node].size())};
  }
};

class WrongOutboxProgram : public RoutingProgram {
 public:
  std::string init(int, const Network&) const override { return "s"; }
  Step step(int, int, const std::string& state, const std::vector<std::optional<Message>>&,
            const Network&) const override {
    return {state, {}};  // always empty, wrong for any node with out-arcs
  }
};

}  // namespace

TEST_CASE("reference trace: flood expands one hop per round") {
  Network g = build_path(4);
  FloodProgram flood(0);
  ReferenceTrace ref = run_reference(g, flood, 4);
  REQUIRE(ref.states.size() == 5);
  // A node relays the token in the same round it first receives it.
  CHECK(ref.states[0] == std::vector<std::string>{"1", "0", "0", "0"});
  CHECK(ref.states[1] == std::vector<std::string>{"1", "0", "0", "0"});
  CHECK(ref.states[2] == std::vector<std::string>{"1", "1", "0", "0"});
  CHECK(ref.states[3] == std::vector<std::string>{"1", "1", "1", "0"});
  CHECK(ref.states[4] == std::vector<std::string>{"1", "1", "1", "1"});
  CHECK(ref.messages[1][*g.arc_id(0, 1)] == Message("T"));
  CHECK_FALSE(ref.messages[1][*g.arc_id(1, 2)].has_value());
  CHECK(ref.messages[2][*g.arc_id(1, 2)] == Message("T"));
}

TEST_CASE("reference trace: path forwarding advances one hop per round") {
  Network g = build_path(5);
  PathForwardProgram fwd({{0, 1, 2, 3, 4}});
  ReferenceTrace ref = run_reference(g, fwd, 5);
  CHECK(ref.states[4][4] == "0");
  CHECK(ref.states[5][4] == "1");  // arrives with the merge-then-send cadence
  CHECK(ref.states[2][1] == "1");
  // The payload rides the forward arcs only.
  CHECK(ref.messages[1][*g.arc_id(0, 1)] == PathForwardProgram::payload(0));
  CHECK_FALSE(ref.messages[1][*g.arc_id(1, 0)].has_value());

  CHECK_THROWS_AS(PathForwardProgram(std::vector<std::vector<int>>{{}}), std::invalid_argument);
  CHECK_THROWS_AS(PathForwardProgram({{0, 1, 0}}), std::invalid_argument);
  PathForwardProgram bad({{0, 2}});  // no such arc; surfaces at init with context
  CHECK_THROWS_WITH_AS(run_reference(g, bad, 1), doctest::Contains("missing arc 0->2"),
                       std::runtime_error);
}

TEST_CASE("program exceptions carry node and round context") {
  Network g = build_path(4);
  BoomProgram boom;
  CHECK_NOTHROW(run_reference(g, boom, 2));
  CHECK_THROWS_WITH_AS(run_reference(g, boom, 3), doctest::Contains("node 2, round 3"),
                       std::runtime_error);
  WrongOutboxProgram wrong;
  CHECK_THROWS_AS(run_reference(g, wrong, 1), std::logic_error);

  // The same contract checks fire through the simulators.
  ReinforcedNetwork om = reinforce_strong(g, 1, FaultKind::Omission);
  ReinforcedNetwork byz = reinforce_strong(g, 1, FaultKind::Byzantine);
  CHECK_THROWS_WITH_AS(run_om(om, boom, scenario_for(om, {}), 3),
                       doctest::Contains("node 2, round 3"), std::runtime_error);
  CHECK_THROWS_WITH_AS(run_byz(byz, boom, scenario_for(byz, {}), 3),
                       doctest::Contains("node 2, round 3"), std::runtime_error);
  CHECK_THROWS_AS(run_byz(byz, wrong, scenario_for(byz, {}), 1), std::logic_error);
}

TEST_CASE("omission hand-traces on the reinforced 4-path") {
  Network g = build_path(4);
  ReinforcedNetwork rn = reinforce_strong(g, 1, FaultKind::Omission);
  FloodProgram flood(0);
  const int c0 = rn.copy_id(2, 0), c1 = rn.copy_id(2, 1), d1 = rn.copy_id(3, 1);

  SUBCASE("one faulty copy per node is harmless") {
    SimOutcome out = run_om(rn, flood, scenario_for(rn, {c0}), 4);
    CHECK(out.success);
    CHECK_FALSE(out.failed_round.has_value());
    // A crash-faulty copy only loses its sends; it still receives, so it
    // remains a witness and the count stays at 2 everywhere.
    for (const auto& round : out.correct_counts)
      for (int count : round) CHECK(count == 2);
  }

  SUBCASE("losing every copy of a cut node kills its neighbors next round") {
    SimOutcome out = run_om(rn, flood, scenario_for(rn, {c0, c1}), 4);
    CHECK_FALSE(out.success);
    CHECK(out.failed_round == 2);
    CHECK(out.correct_counts[0] == std::vector<int>{2, 2, 2, 2});
    // Node 2's copies still hear from nodes 1 and 3, but 1 and 3 lose both
    // witnesses because nothing crosses the arcs out of node 2. The blackout
    // then starves every neighbor-of-a-neighbor a round later.
    CHECK(out.correct_counts[1] == std::vector<int>{2, 0, 2, 0});
    CHECK(out.correct_counts[2] == std::vector<int>{0, 0, 0, 0});
  }

  SUBCASE("faults spread over distinct copy indices stay harmless") {
    SimOutcome out = run_om(rn, flood, scenario_for(rn, {c0, d1}), 6);
    CHECK(out.success);
  }

  SUBCASE("a one-round horizon never sees a resolution step") {
    SimOutcome out = run_om(rn, flood, scenario_for(rn, {c0, c1}), 1);
    CHECK(out.success);
  }

  SUBCASE("crash-silent and corrupt-all are the same omission adversary") {
    for (int mask = 0; mask < 256; mask += 7) {
      std::vector<int> ids;
      for (int c = 0; c < 8; ++c)
        if (mask >> c & 1) ids.push_back(c);
      SimOutcome a = run_om(rn, flood, scenario_for(rn, ids, Adversary::CrashSilent), 4);
      SimOutcome b = run_om(rn, flood, scenario_for(rn, ids, Adversary::CorruptAll), 4);
      CHECK(a.success == b.success);
      CHECK(a.correct_counts == b.correct_counts);
    }
  }

  SUBCASE("know flags are monotone: once lost, never regained") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      FaultScenario sc = sample_faults(rn, 0.35, seed);
      SimOutcome out = run_om(rn, flood, sc, 6);
      for (std::size_t r = 1; r < out.know.size(); ++r)
        for (std::size_t c = 0; c < out.know[r].size(); ++c)
          CHECK(out.know[r][c] <= out.know[r - 1][c]);
    }
  }
}

TEST_CASE("omission corrupt-random drops a keyed subset, not everything") {
  Network g = build_path(4);
  ReinforcedNetwork rn = reinforce_strong(g, 1, FaultKind::Omission);
  FloodProgram flood(0);
  const std::vector<int> both_c = {rn.copy_id(2, 0), rn.copy_id(2, 1)};

  int successes = 0;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    SimOutcome out = run_om(rn, flood, scenario_for(rn, both_c, Adversary::CorruptRandom, seed), 3);
    SimOutcome again =
        run_om(rn, flood, scenario_for(rn, both_c, Adversary::CorruptRandom, seed), 3);
    CHECK(out.success == again.success);  // same seed, same run
    CHECK(out.correct_counts == again.correct_counts);
    if (out.success) ++successes;
  }
  // Under crash-silent this scenario always fails; random drops let roughly
  // (3/4)^4 of seeds through. Both outcomes must occur.
  CHECK(successes > 0);
  CHECK(successes < 64);
}

TEST_CASE("Byzantine hand-traces on the reinforced triangle") {
  Network g = triangle();
  ReinforcedNetwork rn = reinforce_strong(g, 1, FaultKind::Byzantine);
  FloodProgram flood(0);
  REQUIRE(rn.ell == 3);

  SUBCASE("one colluding copy per node is outvoted 2-to-1") {
    std::vector<int> ids = {rn.copy_id(0, 2), rn.copy_id(1, 2), rn.copy_id(2, 2)};
    SimOutcome out = run_byz(rn, flood, scenario_for(rn, ids, Adversary::CorruptAll), 4);
    CHECK(out.success);
    for (const auto& round : out.correct_counts)
      for (int count : round) CHECK(count == 2);
  }

  SUBCASE("two faulty copies of one node break majority immediately") {
    std::vector<int> ids = {rn.copy_id(0, 1), rn.copy_id(0, 2)};
    SimOutcome out = run_byz(rn, flood, scenario_for(rn, ids, Adversary::CorruptAll), 3);
    CHECK_FALSE(out.success);
    CHECK(out.failed_round == 1);
  }

  SUBCASE("silent Byzantine faults also lose to the honest majority") {
    std::vector<int> ids = {rn.copy_id(1, 0), rn.copy_id(2, 1)};
    SimOutcome out = run_byz(rn, flood, scenario_for(rn, ids, Adversary::CrashSilent), 4);
    CHECK(out.success);
  }

  SUBCASE("corrupt-random is deterministic per seed") {
    std::vector<int> ids = {rn.copy_id(0, 0), rn.copy_id(2, 2)};
    SimOutcome a = run_byz(rn, flood, scenario_for(rn, ids, Adversary::CorruptRandom, 9), 4);
    SimOutcome b = run_byz(rn, flood, scenario_for(rn, ids, Adversary::CorruptRandom, 9), 4);
    CHECK(a.success == b.success);
    CHECK(a.correct_counts == b.correct_counts);
    CHECK(a.know == b.know);
  }
}

TEST_CASE("Byzantine intra-region arcs forward a single unchecked vote") {
  // Partition {0,1},{2}: the 0-1 arc is intra-region, so copy i of node 1
  // hears only copy i of node 0 there; cross-region arcs still get the full
  // 3-way vote.
  Network g = triangle();
  Partition part = Partition::from_regions(3, {{0, 1}, {2}});
  ReinforcedNetwork rn = reinforce_partitioned(g, part, 1, FaultKind::Byzantine);
  FloodProgram flood(0);

  std::vector<int> ids = {rn.copy_id(0, 0)};
  SimOutcome out = run_byz(rn, flood, scenario_for(rn, ids, Adversary::CorruptAll), 4);
  CHECK(out.success);
  // Copy 0 of node 1 swallowed the corrupted token and diverged; its two
  // honest siblings carry the round. Node 2 is saved by the cross-arc vote.
  CHECK(out.correct_counts[0] == std::vector<int>{2, 3, 3});
  CHECK(out.know[1][rn.copy_id(1, 0)] == 0);
  CHECK(out.correct_counts[1] == std::vector<int>{2, 2, 3});
  // One round later node 2's copies all flood the token over a cross arc,
  // whose 3-way majority hands it back to the diverged copy: Byzantine
  // correctness can recover, unlike an omission know flag.
  CHECK(out.know[2][rn.copy_id(1, 0)] == 1);
  CHECK(out.correct_counts[2] == std::vector<int>{2, 3, 3});
  CHECK(out.correct_counts[3] == std::vector<int>{2, 3, 3});

  // The same fault under the guaranteed-success condition reads as clean:
  // region {0,1} still has indices 1 and 2 fault-free.
  CHECK(check_lemma_condition(rn, scenario_for(rn, ids)));
  CHECK_FALSE(check_lemma_condition(
      rn, scenario_for(rn, {rn.copy_id(0, 0), rn.copy_id(1, 1)})));
}

TEST_CASE("guaranteed-success condition implies success, exhaustively") {
  FloodProgram flood(0);

  Network p4 = build_path(4);
  ReinforcedNetwork om = reinforce_strong(p4, 1, FaultKind::Omission);
  int om_cond = 0;
  for (int mask = 0; mask < 256; ++mask) {
    std::vector<int> ids;
    for (int c = 0; c < 8; ++c)
      if (mask >> c & 1) ids.push_back(c);
    FaultScenario sc = scenario_for(om, ids);
    if (!check_lemma_condition(om, sc)) continue;
    ++om_cond;
    CHECK(run_om(om, flood, sc, 5).success);
  }
  CHECK(om_cond == 81);  // 3^4 masks leave every node a clean copy

  Network tri = triangle();
  ReinforcedNetwork byz = reinforce_strong(tri, 1, FaultKind::Byzantine);
  int byz_cond = 0;
  for (int mask = 0; mask < 512; ++mask) {
    std::vector<int> ids;
    for (int c = 0; c < 9; ++c)
      if (mask >> c & 1) ids.push_back(c);
    FaultScenario sc = scenario_for(byz, ids, Adversary::CorruptAll);
    if (!check_lemma_condition(byz, sc)) continue;
    ++byz_cond;
    CHECK(run_byz(byz, flood, sc, 4).success);
  }
  CHECK(byz_cond == 64);  // 4^3: at most one faulty copy per node
}

TEST_CASE("exhaustive success matches the closed form on the strong 4-path") {
  Network g = build_path(4);
  ReinforcedNetwork rn = reinforce_strong(g, 1, FaultKind::Omission);
  FloodProgram flood(0);
  // Failure happens exactly when some node loses both copies, and any such
  // loss is visible by round 2, so for horizons >= 2 the success probability
  // is (1 - p^2)^4 on the nose.
  for (double p : {0.0, 0.05, 0.3, 0.8, 1.0}) {
    double expect = std::pow(1.0 - p * p, 4);
    CHECK(exhaustive_success(rn, flood, p, 2) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(exhaustive_success(rn, flood, p, 5) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(exhaustive_success(rn, flood, 0.3, 1) == doctest::Approx(1.0));
  CHECK(exhaustive_success(rn, flood, 0.3, 0) == doctest::Approx(1.0));

  ReinforcedNetwork big = reinforce_strong(build_path(11), 1, FaultKind::Omission);
  CHECK_THROWS_AS(exhaustive_success(big, flood, 0.1, 2), std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with exhaustive enumeration") {
  Network g = build_path(4);
  ReinforcedNetwork rn = reinforce_strong(g, 1, FaultKind::Omission);
  FloodProgram flood(0);
  const double p = 0.2;
  double exact = exhaustive_success(rn, flood, p, 3);
  CHECK(exact == doctest::Approx(std::pow(1.0 - p * p, 4)).epsilon(1e-12));

  MonteCarloEstimate est = monte_carlo(rn, flood, p, 3, 4000, 1234);
  CHECK(est.trials == 4000);
  CHECK(est.successes >= 0);
  CHECK(est.wilson_lo <= exact);
  CHECK(est.wilson_hi >= exact);
  CHECK(std::abs(est.success_rate - exact) < 0.03);

  MonteCarloEstimate again = monte_carlo(rn, flood, p, 3, 4000, 1234);
  CHECK(again.successes == est.successes);  // seed-deterministic

  CHECK(monte_carlo(rn, flood, 0.0, 3, 50, 1).success_rate == 1.0);
  CHECK(monte_carlo(rn, flood, 1.0, 3, 50, 1).success_rate == 0.0);
  CHECK_THROWS_AS(monte_carlo(rn, flood, 0.5, 3, 0, 1), std::invalid_argument);
}

TEST_CASE("fault sampling and scenario serialization") {
  Network g = triangle();
  ReinforcedNetwork om = reinforce_strong(g, 2, FaultKind::Omission);
  ReinforcedNetwork byz = reinforce_strong(g, 1, FaultKind::Byzantine);

  FaultScenario none = sample_faults(om, 0.0, 7);
  CHECK(none.faulty_ids().empty());
  CHECK(none.adversary == Adversary::CrashSilent);
  FaultScenario all = sample_faults(byz, 1.0, 7);
  CHECK(static_cast<int>(all.faulty_ids().size()) == byz.copies());
  CHECK(all.adversary == Adversary::CorruptAll);

  FaultScenario s1 = sample_faults(byz, 0.5, 42);
  CHECK(s1.faulty == sample_faults(byz, 0.5, 42).faulty);
  CHECK(s1.faulty != sample_faults(byz, 0.5, 43).faulty);
  CHECK_THROWS_AS(sample_faults(byz, -0.1, 1), std::invalid_argument);

  FaultScenario sc = scenario_for(byz, {1, 5}, Adversary::CorruptRandom, 99);
  FaultScenario back = scenario_from_json(to_json(sc), byz);
  CHECK(back.faulty == sc.faulty);
  CHECK(back.adversary == Adversary::CorruptRandom);
  CHECK(back.seed == 99);

  CHECK_THROWS_AS(scenario_from_json("{\"faulty\":[99]}", byz), DataError);
  CHECK_THROWS_AS(scenario_from_json("not json", byz), ParseError);
  CHECK_THROWS_AS(scenario_from_json("{\"adversary\":\"gremlin\"}", byz),
                  std::invalid_argument);

  // Model and size guards on the run entry points.
  FloodProgram flood(0);
  CHECK_THROWS_AS(run_om(byz, flood, scenario_for(byz, {}), 2), std::invalid_argument);
  CHECK_THROWS_AS(run_byz(om, flood, scenario_for(om, {}), 2), std::invalid_argument);
  FaultScenario undersized;
  undersized.faulty.assign(om.copies() - 1, 0);
  CHECK_THROWS_AS(run_om(om, flood, undersized, 2), std::invalid_argument);
  CHECK_THROWS_AS(check_lemma_condition(om, undersized), std::invalid_argument);
}

TEST_CASE("wilson interval") {
  auto [lo0, hi0] = wilson_interval(0, 0);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == 1.0);

  auto [lo, hi] = wilson_interval(8, 10);
  CHECK(lo == doctest::Approx(0.4902).epsilon(2e-3));
  CHECK(hi == doctest::Approx(0.9433).epsilon(2e-3));

  auto [zl, zh] = wilson_interval(0, 50);
  CHECK(zl == doctest::Approx(0.0).scale(1.0));
  CHECK(zh > 0.01);
  auto [fl, fh] = wilson_interval(50, 50);
  CHECK(fl < 0.99);
  CHECK(fh == doctest::Approx(1.0));

  // Wider sample, tighter interval around the same rate.
  auto [al, ah] = wilson_interval(80, 100);
  auto [bl, bh] = wilson_interval(800, 1000);
  CHECK(bh - bl < ah - al);
  CHECK(al < 0.8);
  CHECK(ah > 0.8);
}

TEST_CASE("random automaton is a deterministic program") {
  Network g = triangle();
  RandomAutomatonProgram prog(77, 0.8);
  ReferenceTrace a = run_reference(g, prog, 5);
  ReferenceTrace b = run_reference(g, prog, 5);
  CHECK(a.states == b.states);
  CHECK(a.messages == b.messages);
  RandomAutomatonProgram other(78, 0.8);
  CHECK(run_reference(g, other, 5).states != a.states);

  // All copies of a node draw the same randomness, so a fault-free Byzantine
  // run keeps every copy in lockstep with the reference.
  ReinforcedNetwork rn = reinforce_strong(g, 1, FaultKind::Byzantine);
  SimOutcome out = run_byz(rn, prog, scenario_for(rn, {}), 5);
  CHECK(out.success);
  for (const auto& round : out.correct_counts)
    for (int count : round) CHECK(count == 3);

  SilentProgram silent;
  SimOutcome quiet = run_om(reinforce_strong(g, 1, FaultKind::Omission), silent,
                            scenario_for(reinforce_strong(g, 1, FaultKind::Omission), {}), 3);
  CHECK(quiet.success);
}
