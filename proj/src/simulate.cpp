#include "robnet/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "robnet/rng.hpp"

namespace robnet {

namespace {

// Stream tags keeping independent random decisions on disjoint counters.
constexpr std::uint64_t kFaultStream = 0xFA;
constexpr std::uint64_t kOmDropStream = 0x0D;
constexpr std::uint64_t kByzStream = 0xB2;
constexpr std::uint64_t kTrialStream = 0x73;

// Colluding wrong message used by the corrupt-all adversary.
const Message kCorruptMarker = std::string("\x01") + "ADV";

[[noreturn]] void rethrow_with_context(const std::exception& e, int node, int round) {
  throw std::runtime_error("program failed at node " + std::to_string(node) + ", round " +
                           std::to_string(round) + ": " + e.what());
}

}  // namespace

const char* to_string(Adversary a) {
  switch (a) {
    case Adversary::CrashSilent:
      return "crash-silent";
    case Adversary::CorruptAll:
      return "corrupt-all";
    default:
      return "corrupt-random";
  }
}

Adversary adversary_from_string(const std::string& s) {
  if (s == "crash-silent") return Adversary::CrashSilent;
  if (s == "corrupt-all") return Adversary::CorruptAll;
  if (s == "corrupt-random") return Adversary::CorruptRandom;
  throw std::invalid_argument("unknown adversary '" + s + "'");
}

ReferenceTrace run_reference(const Network& g, const RoutingProgram& program, int rounds) {
  if (rounds < 0) throw std::invalid_argument("rounds must be non-negative");
  ReferenceTrace trace;
  trace.states.resize(rounds + 1);
  trace.messages.resize(rounds + 1);
  trace.states[0].resize(g.n);
  for (int v = 0; v < g.n; ++v) {
    try {
      trace.states[0][v] = program.init(v, g);
    } catch (const std::exception& e) {
      rethrow_with_context(e, v, 0);
    }
  }
  std::vector<std::optional<Message>> inbox_pool;
  for (int r = 1; r <= rounds; ++r) {
    trace.states[r].resize(g.n);
    trace.messages[r].assign(g.arcs.size(), std::nullopt);
    for (int v = 0; v < g.n; ++v) {
      // Round r consumes the messages sent in round r-1.
      std::vector<std::optional<Message>> inbox(g.in_neighbors[v].size());
      if (r > 1) {
        for (std::size_t s = 0; s < g.in_arc_ids[v].size(); ++s)
          inbox[s] = trace.messages[r - 1][g.in_arc_ids[v][s]];
      }
      RoutingProgram::Step st;
      try {
        st = program.step(v, r, trace.states[r - 1][v], inbox, g);
      } catch (const std::exception& e) {
        rethrow_with_context(e, v, r);
      }
      if (st.outbox.size() != g.out_neighbors[v].size())
        throw std::logic_error("program outbox size mismatch at node " + std::to_string(v));
      trace.states[r][v] = std::move(st.state);
      for (std::size_t s = 0; s < st.outbox.size(); ++s)
        trace.messages[r][g.out_arc_ids[v][s]] = std::move(st.outbox[s]);
    }
  }
  return trace;
}

std::vector<int> FaultScenario::faulty_ids() const {
  std::vector<int> ids;
  for (int c = 0; c < static_cast<int>(faulty.size()); ++c)
    if (faulty[c]) ids.push_back(c);
  return ids;
}

FaultScenario sample_faults(const ReinforcedNetwork& rn, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  FaultScenario sc;
  sc.seed = seed;
  sc.adversary =
      rn.model == FaultKind::Omission ? Adversary::CrashSilent : Adversary::CorruptAll;
  sc.faulty.resize(rn.copies());
  std::uint64_t stream = rng::key(seed, kFaultStream);
  for (int c = 0; c < rn.copies(); ++c)
    sc.faulty[c] = rng::uniform01(rng::key(stream, static_cast<std::uint64_t>(c))) < p;
  return sc;
}

std::string to_json(const FaultScenario& sc) {
  nlohmann::json j;
  j["faulty"] = sc.faulty_ids();
  j["adversary"] = to_string(sc.adversary);
  j["seed"] = sc.seed;
  return j.dump();
}

FaultScenario scenario_from_json(const std::string& text, const ReinforcedNetwork& rn) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  FaultScenario sc;
  sc.faulty.assign(rn.copies(), 0);
  if (j.contains("faulty"))
    for (int id : j.at("faulty").get<std::vector<int>>()) {
      if (id < 0 || id >= rn.copies())
        throw DataError("faulty copy id " + std::to_string(id) + " out of range");
      sc.faulty[id] = 1;
    }
  if (j.contains("adversary")) sc.adversary = adversary_from_string(j.at("adversary"));
  if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
  return sc;
}

bool check_lemma_condition(const ReinforcedNetwork& rn, const FaultScenario& scenario) {
  if (static_cast<int>(scenario.faulty.size()) != rn.copies())
    throw std::invalid_argument("scenario does not match build size");
  const int need = rn.model == FaultKind::Omission ? 1 : rn.f + 1;
  for (const auto& region : rn.partition.regions) {
    int clean = 0;
    for (int i = 0; i < rn.ell; ++i) {
      bool index_clean = true;
      for (int v : region) {
        if (scenario.faulty[rn.copy_id(v, i)]) {
          index_clean = false;
          break;
        }
      }
      if (index_clean && ++clean >= need) break;
    }
    if (clean < need) return false;
  }
  return true;
}

namespace {

// True when the copy transmits on `arc` in `round` (given its know flag is up).
bool om_send_allowed(const FaultScenario& sc, int copy, int arc, int round) {
  if (!sc.faulty[copy]) return true;
  if (sc.adversary != Adversary::CorruptRandom) return false;  // drop everything
  return rng::uniform01(rng::key_path(sc.seed, {kOmDropStream, static_cast<std::uint64_t>(copy),
                                                static_cast<std::uint64_t>(round),
                                                static_cast<std::uint64_t>(arc)})) >= 0.5;
}

SimOutcome run_om_impl(const ReinforcedNetwork& rn, const FaultScenario& scenario,
                       int rounds) {
  const Network& g = rn.base;
  const int n = g.n, ell = rn.ell;
  SimOutcome out;
  out.correct_counts.assign(rounds, std::vector<int>(n, 0));
  out.know.assign(rounds, std::vector<char>(static_cast<std::size_t>(n) * ell, 0));

  // Copies with the flag up hold the reference state and transmit the
  // reference message (or the explicit no-message marker) on every copy arc;
  // executing the automaton per copy would reproduce ref.states/ref.messages
  // byte for byte, which is the invariant the resolution step asserts.
  std::vector<char> know(static_cast<std::size_t>(n) * ell, 1);

  for (int r = 1; r <= rounds; ++r) {
    for (int v = 0; v < n; ++v) {
      int count = 0;
      for (int i = 0; i < ell; ++i) {
        int c = rn.copy_id(v, i);
        if (know[c]) {
          ++count;
          out.know[r - 1][c] = 1;
        }
      }
      out.correct_counts[r - 1][v] = count;
      if (count == 0 && out.success) {
        out.success = false;
        out.failed_round = r;
      }
    }
    if (r == rounds) break;

    // End-of-round resolution: a copy keeps its flag only if every base
    // in-arc delivered at least one copy message this round.
    std::vector<char> next = know;
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < ell; ++i) {
        int c = rn.copy_id(v, i);
        if (!know[c]) continue;
        for (std::size_t s = 0; s < g.in_arc_ids[v].size() && next[c]; ++s) {
          int arc = g.in_arc_ids[v][s];
          int w = g.in_neighbors[v][s];
          // Omission faults only drop transmissions, so every arriving copy
          // message equals ref.messages[r][arc]; coverage is all that matters.
          bool covered = false;
          auto try_sender = [&](int j) {
            int sender = rn.copy_id(w, j);
            if (know[sender] && om_send_allowed(scenario, sender, arc, r)) covered = true;
          };
          if (rn.arc_cross[arc]) {
            for (int j = 0; j < ell && !covered; ++j) try_sender(j);
          } else {
            try_sender(i);
          }
          if (!covered) next[c] = 0;
        }
      }
    }
    know.swap(next);
  }
  return out;
}

struct ByzCtx {
  const ReinforcedNetwork& rn;
  const RoutingProgram& program;
  const ReferenceTrace& ref;
  const FaultScenario& scenario;
};

std::vector<std::optional<Message>> byz_adversary_outbox(const ByzCtx& ctx, int copy,
                                                         int round) {
  const Network& g = ctx.rn.base;
  int v = ctx.rn.project(copy);
  std::vector<std::optional<Message>> outbox(g.out_neighbors[v].size());
  switch (ctx.scenario.adversary) {
    case Adversary::CrashSilent:
      break;
    case Adversary::CorruptAll:
      for (auto& m : outbox) m = kCorruptMarker;
      break;
    case Adversary::CorruptRandom:
      for (std::size_t s = 0; s < outbox.size(); ++s) {
        int arc = g.out_arc_ids[v][s];
        std::uint64_t h = rng::key_path(
            ctx.scenario.seed, {kByzStream, static_cast<std::uint64_t>(copy),
                                static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(arc)});
        if (rng::uniform01(h) < 1.0 / 3.0) continue;  // send nothing
        std::uint64_t payload = rng::splitmix64(h);
        outbox[s] = Message(reinterpret_cast<const char*>(&payload), sizeof(payload));
      }
      break;
  }
  return outbox;
}

// Strict majority value among per-sender transmissions (absence is a value).
std::optional<Message> majority_value(const std::vector<const std::optional<Message>*>& votes) {
  const int total = static_cast<int>(votes.size());
  for (int i = 0; i < total; ++i) {
    int count = 0;
    for (int j = 0; j < total; ++j)
      if (*votes[i] == *votes[j]) ++count;
    if (2 * count > total) return *votes[i];
  }
  return std::nullopt;
}

SimOutcome run_byz_impl(const ByzCtx& ctx, int rounds) {
  const ReinforcedNetwork& rn = ctx.rn;
  const Network& g = rn.base;
  const int n = g.n, ell = rn.ell;
  const int copies = rn.copies();
  SimOutcome out;
  out.correct_counts.assign(rounds, std::vector<int>(n, 0));
  out.know.assign(rounds, std::vector<char>(copies, 0));

  std::vector<std::string> states(copies);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < ell; ++i) states[rn.copy_id(v, i)] = ctx.ref.states[0][v];
  std::vector<std::vector<std::optional<Message>>> inbox(copies);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < ell; ++i)
      inbox[rn.copy_id(v, i)].assign(g.in_neighbors[v].size(), std::nullopt);
  std::vector<std::vector<std::optional<Message>>> outbox(copies);

  for (int r = 1; r <= rounds; ++r) {
    for (int v = 0; v < n; ++v) {
      int count = 0;
      for (int i = 0; i < ell; ++i) {
        int c = rn.copy_id(v, i);
        if (ctx.scenario.faulty[c]) {
          outbox[c] = byz_adversary_outbox(ctx, c, r);
          continue;
        }
        RoutingProgram::Step st;
        try {
          st = ctx.program.step(v, r, states[c], inbox[c], g);
        } catch (const std::exception& e) {
          rethrow_with_context(e, v, r);
        }
        if (st.outbox.size() != g.out_neighbors[v].size())
          throw std::logic_error("program outbox size mismatch at node " + std::to_string(v));
        states[c] = std::move(st.state);
        outbox[c] = std::move(st.outbox);
        if (states[c] == ctx.ref.states[r][v]) {
          ++count;
          out.know[r - 1][c] = 1;
        }
      }
      out.correct_counts[r - 1][v] = count;
      if (2 * count <= ell && out.success) {
        out.success = false;
        out.failed_round = r;
      }
    }
    if (r == rounds) break;

    // Per base in-arc, adopt the strict-majority transmission among the
    // eligible senders; ties resolve to no message.
    for (int v = 0; v < n; ++v) {
      for (std::size_t s = 0; s < g.in_arc_ids[v].size(); ++s) {
        int arc = g.in_arc_ids[v][s];
        int w = g.in_neighbors[v][s];
        int out_slot = g.arc_out_slot[arc];
        for (int i = 0; i < ell; ++i) {
          int c = rn.copy_id(v, i);
          if (ctx.scenario.faulty[c]) continue;
          std::vector<const std::optional<Message>*> votes;
          if (rn.arc_cross[arc]) {
            votes.reserve(ell);
            for (int j = 0; j < ell; ++j)
              votes.push_back(&outbox[rn.copy_id(w, j)][out_slot]);
          } else {
            votes.push_back(&outbox[rn.copy_id(w, i)][out_slot]);
          }
          inbox[c][s] = majority_value(votes);
        }
      }
    }
  }
  return out;
}

void check_run_args(const ReinforcedNetwork& rn, const FaultScenario& scenario, int rounds) {
  if (rounds < 0) throw std::invalid_argument("rounds must be non-negative");
  if (static_cast<int>(scenario.faulty.size()) != rn.copies())
    throw std::invalid_argument("scenario does not match build size");
}

}  // namespace

SimOutcome run_om(const ReinforcedNetwork& rn, const RoutingProgram& program,
                  const FaultScenario& scenario, int rounds) {
  if (rn.model != FaultKind::Omission)
    throw std::invalid_argument("run_om needs an omission-model build");
  check_run_args(rn, scenario, rounds);
  // Executes the program over the horizon so contract violations surface the
  // same way in both models; the omission dynamics don't depend on payloads,
  // because know-true copies relay exactly the fault-free messages.
  (void)run_reference(rn.base, program, rounds);
  return run_om_impl(rn, scenario, rounds);
}

SimOutcome run_byz(const ReinforcedNetwork& rn, const RoutingProgram& program,
                   const FaultScenario& scenario, int rounds) {
  if (rn.model != FaultKind::Byzantine)
    throw std::invalid_argument("run_byz needs a Byzantine-model build");
  check_run_args(rn, scenario, rounds);
  ReferenceTrace ref = run_reference(rn.base, program, rounds);
  ByzCtx ctx{rn, program, ref, scenario};
  return run_byz_impl(ctx, rounds);
}

std::pair<double, double> wilson_interval(long long successes, long long trials) {
  if (trials <= 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 95%
  double nt = static_cast<double>(trials);
  double phat = static_cast<double>(successes) / nt;
  double z2 = z * z;
  double denom = 1.0 + z2 / nt;
  double center = phat + z2 / (2.0 * nt);
  double spread = z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt));
  return {std::max(0.0, (center - spread) / denom), std::min(1.0, (center + spread) / denom)};
}

MonteCarloEstimate monte_carlo(const ReinforcedNetwork& rn, const RoutingProgram& program,
                               double p, int rounds, long long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (rounds < 0) throw std::invalid_argument("rounds must be non-negative");
  ReferenceTrace ref = run_reference(rn.base, program, rounds);
  long long successes = 0;
  std::uint64_t stream = rng::key(seed, kTrialStream);
  for (long long t = 0; t < trials; ++t) {
    FaultScenario sc = sample_faults(rn, p, rng::key(stream, static_cast<std::uint64_t>(t)));
    SimOutcome outcome;
    if (rn.model == FaultKind::Omission) {
      outcome = run_om_impl(rn, sc, rounds);
    } else {
      ByzCtx ctx{rn, program, ref, sc};
      outcome = run_byz_impl(ctx, rounds);
    }
    if (outcome.success) ++successes;
  }
  MonteCarloEstimate est;
  est.successes = successes;
  est.trials = trials;
  est.success_rate = static_cast<double>(successes) / static_cast<double>(trials);
  std::tie(est.wilson_lo, est.wilson_hi) = wilson_interval(successes, trials);
  return est;
}

double exhaustive_success(const ReinforcedNetwork& rn, const RoutingProgram& program,
                          double p, int rounds) {
  if (rn.copies() > 20)
    throw std::invalid_argument("exhaustive enumeration is limited to 20 copy nodes");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (rounds < 0) throw std::invalid_argument("rounds must be non-negative");
  const int copies = rn.copies();
  ReferenceTrace ref = run_reference(rn.base, program, rounds);

  std::vector<double> pow_p(copies + 1, 1.0), pow_q(copies + 1, 1.0);
  for (int i = 1; i <= copies; ++i) {
    pow_p[i] = pow_p[i - 1] * p;
    pow_q[i] = pow_q[i - 1] * (1.0 - p);
  }

  FaultScenario sc;
  sc.adversary =
      rn.model == FaultKind::Omission ? Adversary::CrashSilent : Adversary::CorruptAll;
  sc.faulty.assign(copies, 0);
  double total = 0.0;
  const std::uint64_t mask_end = 1ULL << copies;
  for (std::uint64_t mask = 0; mask < mask_end; ++mask) {
    for (int c = 0; c < copies; ++c) sc.faulty[c] = (mask >> c) & 1u;
    SimOutcome outcome;
    if (rn.model == FaultKind::Omission) {
      outcome = run_om_impl(rn, sc, rounds);
    } else {
      ByzCtx ctx{rn, program, ref, sc};
      outcome = run_byz_impl(ctx, rounds);
    }
    if (outcome.success) {
      int k = std::popcount(mask);
      total += pow_p[k] * pow_q[copies - k];
    }
  }
  return total;
}

}  // namespace robnet
