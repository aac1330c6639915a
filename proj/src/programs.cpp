#include "robnet/programs.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

#include "robnet/rng.hpp"

namespace robnet {

namespace {

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
  return std::string(buf, 16);
}

std::uint64_t mix_bytes(std::uint64_t h, const std::string& s) {
  for (unsigned char ch : s) h = rng::splitmix64(h ^ ch);
  return h;
}

std::vector<std::optional<Message>> empty_outbox(const Network& g, int node) {
  return std::vector<std::optional<Message>>(g.out_neighbors[node].size());
}

}  // namespace

std::string FloodProgram::init(int node, const Network& g) const {
  if (origin_ < 0 || origin_ >= g.n)
    throw std::invalid_argument("flood origin " + std::to_string(origin_) + " out of range");
  return node == origin_ ? "1" : "0";
}

RoutingProgram::Step FloodProgram::step(int node, int /*round*/, const std::string& state,
                                        const std::vector<std::optional<Message>>& inbox,
                                        const Network& g) const {
  bool holds = state == "1";
  for (const auto& m : inbox)
    if (m && *m == token_) holds = true;
  Step st;
  st.state = holds ? "1" : "0";
  st.outbox = empty_outbox(g, node);
  if (holds)
    for (auto& slot : st.outbox) slot = token_;
  return st;
}

PathForwardProgram::PathForwardProgram(std::vector<std::vector<int>> routes)
    : routes_(std::move(routes)) {
  if (routes_.size() > 64) throw std::invalid_argument("at most 64 routes supported");
  for (const auto& route : routes_) {
    if (route.empty()) throw std::invalid_argument("empty route");
    std::unordered_set<int> seen(route.begin(), route.end());
    if (seen.size() != route.size())
      throw std::invalid_argument("route revisits a node");
  }
}

Message PathForwardProgram::payload(int route_index) {
  return "P" + std::to_string(route_index);
}

std::string PathForwardProgram::init(int node, const Network& g) const {
  std::uint64_t held = 0;
  for (std::size_t k = 0; k < routes_.size(); ++k) {
    const auto& route = routes_[k];
    for (int v : route)
      if (v < 0 || v >= g.n)
        throw DataError("route node " + std::to_string(v) + " out of range");
    for (std::size_t i = 0; i + 1 < route.size(); ++i)
      if (!g.arc_id(route[i], route[i + 1]))
        throw DataError("route " + std::to_string(k) + " uses missing arc " +
                        std::to_string(route[i]) + "->" + std::to_string(route[i + 1]));
    if (route.front() == node) held |= 1ULL << k;
  }
  return std::to_string(held);
}

RoutingProgram::Step PathForwardProgram::step(int node, int /*round*/, const std::string& state,
                                              const std::vector<std::optional<Message>>& inbox,
                                              const Network& g) const {
  std::uint64_t held = 0;
  std::from_chars(state.data(), state.data() + state.size(), held);
  for (const auto& m : inbox) {
    if (!m || m->size() < 2 || (*m)[0] != 'P') continue;
    int k = -1;
    auto [ptr, ec] = std::from_chars(m->data() + 1, m->data() + m->size(), k);
    if (ec != std::errc() || ptr != m->data() + m->size()) continue;
    if (k >= 0 && k < static_cast<int>(routes_.size())) held |= 1ULL << k;
  }
  Step st;
  st.state = std::to_string(held);
  st.outbox = empty_outbox(g, node);
  for (std::size_t k = 0; k < routes_.size(); ++k) {
    if (!(held >> k & 1)) continue;
    const auto& route = routes_[k];
    auto it = std::find(route.begin(), route.end(), node);
    if (it == route.end() || it + 1 == route.end()) continue;
    int slot = g.arc_out_slot[*g.arc_id(node, *(it + 1))];
    if (!st.outbox[slot]) st.outbox[slot] = payload(static_cast<int>(k));
  }
  return st;
}

std::string RandomAutomatonProgram::init(int node, const Network& g) const {
  (void)g;
  return hex64(rng::key_path(seed_, {0x1417u, static_cast<std::uint64_t>(node)}));
}

RoutingProgram::Step RandomAutomatonProgram::step(
    int node, int round, const std::string& state,
    const std::vector<std::optional<Message>>& inbox, const Network& g) const {
  std::uint64_t h = rng::key_path(seed_, {0x57E9u, static_cast<std::uint64_t>(node),
                                          static_cast<std::uint64_t>(round)});
  h = mix_bytes(h, state);
  for (const auto& m : inbox) {
    h = rng::splitmix64(h ^ (m ? 0x9E3779B97F4A7C15ULL : 0x2545F4914F6CDD1DULL));
    if (m) h = mix_bytes(h, *m);
  }
  Step st;
  st.state = hex64(h);
  st.outbox = empty_outbox(g, node);
  for (std::size_t s = 0; s < st.outbox.size(); ++s) {
    std::uint64_t hs = rng::key(h, static_cast<std::uint64_t>(s));
    if (rng::uniform01(rng::key(hs, 1)) < send_prob_)
      st.outbox[s] = hex64(rng::key(hs, 2));
  }
  return st;
}

std::string SilentProgram::init(int /*node*/, const Network& /*g*/) const { return ""; }

RoutingProgram::Step SilentProgram::step(int node, int /*round*/, const std::string& /*state*/,
                                         const std::vector<std::optional<Message>>& /*inbox*/,
                                         const Network& g) const {
  Step st;
  st.outbox = empty_outbox(g, node);
  return st;
}

}  // namespace robnet
