#pragma once

#include <cstdint>
#include <vector>

#include "robnet/simulate.hpp"

namespace robnet {

// Repeated flood: the origin holds a token from the start; every node that
// holds it re-sends it on all out-arcs each round. Exercises every arc from
// the moment the token arrives.
class FloodProgram : public RoutingProgram {
 public:
  explicit FloodProgram(int origin = 0, Message token = "T")
      : origin_(origin), token_(std::move(token)) {}
  std::string init(int node, const Network& g) const override;
  Step step(int node, int round, const std::string& state,
            const std::vector<std::optional<Message>>& inbox,
            const Network& g) const override;

 private:
  int origin_;
  Message token_;
};

// Forwards one payload per route along consecutive arcs; a node re-sends a
// payload to the route's next hop every round after first holding it. Routes
// must follow existing arcs. State is the bitmask of payloads held.
class PathForwardProgram : public RoutingProgram {
 public:
  explicit PathForwardProgram(std::vector<std::vector<int>> routes);
  std::string init(int node, const Network& g) const override;
  Step step(int node, int round, const std::string& state,
            const std::vector<std::optional<Message>>& inbox,
            const Network& g) const override;

  static Message payload(int route_index);

 private:
  std::vector<std::vector<int>> routes_;
};

// Seed-keyed random automaton: state and messages are hashes of (seed, node,
// round, state, inbox). All copies of a node draw the same per-(node, round)
// randomness, so the program stays a deterministic function of its inputs.
class RandomAutomatonProgram : public RoutingProgram {
 public:
  explicit RandomAutomatonProgram(std::uint64_t seed, double send_prob = 0.7)
      : seed_(seed), send_prob_(send_prob) {}
  std::string init(int node, const Network& g) const override;
  Step step(int node, int round, const std::string& state,
            const std::vector<std::optional<Message>>& inbox,
            const Network& g) const override;

 private:
  std::uint64_t seed_;
  double send_prob_;
};

// Sends nothing, ever. Degenerate baseline for edge-case tests.
class SilentProgram : public RoutingProgram {
 public:
  std::string init(int node, const Network& g) const override;
  Step step(int node, int round, const std::string& state,
            const std::vector<std::optional<Message>>& inbox,
            const Network& g) const override;
};

}  // namespace robnet
