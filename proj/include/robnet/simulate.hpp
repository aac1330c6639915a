#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robnet/reinforce.hpp"

namespace robnet {

using Message = std::string;  // opaque bytes; equality is byte equality

// Deterministic per-node automaton executed round-synchronously. In round r
// a node consumes the messages delivered at the end of round r-1 (round 1
// sees an empty inbox), updates its state, and emits this round's messages.
// inbox aligns with g.in_neighbors[node], outbox with g.out_neighbors[node].
// step() must be a pure function of its arguments and total on arbitrary
// inbox bytes; exceptions it throws are re-raised with (node, round) context.
class RoutingProgram {
 public:
  struct Step {
    std::string state;
    std::vector<std::optional<Message>> outbox;
  };

  virtual ~RoutingProgram() = default;
  virtual std::string init(int node, const Network& g) const = 0;
  virtual Step step(int node, int round, const std::string& state,
                    const std::vector<std::optional<Message>>& inbox,
                    const Network& g) const = 0;
};

// Fault-free execution on the base network. states[r] is the state vector
// after round r (states[0] = init); messages[r][arc] is what the arc carried
// in round r (delivered for round r+1). Both are indexed 0..rounds.
struct ReferenceTrace {
  std::vector<std::vector<std::string>> states;
  std::vector<std::vector<std::optional<Message>>> messages;
};

ReferenceTrace run_reference(const Network& g, const RoutingProgram& program, int rounds);

// What faulty copies do with their sends. Under the omission model faults
// can only drop sends: CrashSilent and CorruptAll both drop everything (the
// worst case), CorruptRandom drops a seed-keyed random subset. Under the
// Byzantine model CrashSilent sends nothing, CorruptAll sends one agreed
// wrong message everywhere (colluding worst case), CorruptRandom sends
// seed-keyed garbage or nothing per arc.
enum class Adversary { CrashSilent, CorruptAll, CorruptRandom };

const char* to_string(Adversary a);
Adversary adversary_from_string(const std::string& s);

struct FaultScenario {
  std::vector<char> faulty;  // per copy id, size rn.copies()
  Adversary adversary = Adversary::CrashSilent;
  std::uint64_t seed = 0;

  std::vector<int> faulty_ids() const;
};

// Each copy independently faulty with probability p (counter-based RNG, so
// the scenario depends only on the seed).
FaultScenario sample_faults(const ReinforcedNetwork& rn, double p, std::uint64_t seed);

std::string to_json(const FaultScenario& sc);
FaultScenario scenario_from_json(const std::string& text, const ReinforcedNetwork& rn);

// Outcome of one simulated execution.
//  - correct_counts[r-1][v] = copies of v holding the reference state in
//    round r (omission: copies whose know flag is still up; Byzantine:
//    non-faulty copies whose state matches the reference).
//  - know[r-1][copy]: omission, the copy's know flag; Byzantine, whether the
//    copy is non-faulty and holds the reference state.
//  - success: every node kept the model's witness requirement in every round
//    (omission: at least one copy; Byzantine: a strict majority of the 2f+1).
struct SimOutcome {
  bool success = true;
  std::optional<int> failed_round;
  std::vector<std::vector<int>> correct_counts;
  std::vector<std::vector<char>> know;
};

// Omission-model run. A copy whose know flag is up relays the reference
// message (or an explicit empty marker) on every copy arc each round; faulty
// copies drop sends per the adversary. The flag survives a round only if for
// every base in-neighbor at least one copy message arrived; arriving copies
// for one base arc always agree under pure omission, so coverage is all
// that matters.
SimOutcome run_om(const ReinforcedNetwork& rn, const RoutingProgram& program,
                  const FaultScenario& scenario, int rounds);

// Byzantine-model run. Every copy advances every round; per base in-arc it
// adopts the value a strict majority of the eligible senders transmitted
// (same-index copy inside a region, all copies across regions; ties resolve
// to no message).
SimOutcome run_byz(const ReinforcedNetwork& rn, const RoutingProgram& program,
                   const FaultScenario& scenario, int rounds);

// Sufficient condition for guaranteed success: every region has, under
// omission, at least one copy index untouched by faults; under the Byzantine
// model, at least f+1 such indices.
bool check_lemma_condition(const ReinforcedNetwork& rn, const FaultScenario& scenario);

struct MonteCarloEstimate {
  double success_rate = 0.0;
  double wilson_lo = 0.0, wilson_hi = 1.0;  // 95% score interval
  long long successes = 0, trials = 0;
};

// trials independent scenarios at fault probability p, worst-case adversary
// for the model. Deterministic for a given seed.
MonteCarloEstimate monte_carlo(const ReinforcedNetwork& rn, const RoutingProgram& program,
                               double p, int rounds, long long trials, std::uint64_t seed);

// Exact success probability by enumerating all 2^copies fault sets under the
// worst-case adversary. Requires rn.copies() <= 20.
double exhaustive_success(const ReinforcedNetwork& rn, const RoutingProgram& program,
                          double p, int rounds);

// 95% Wilson score interval for s successes in t trials.
std::pair<double, double> wilson_interval(long long successes, long long trials);

}  // namespace robnet
