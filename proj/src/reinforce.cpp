#include "robnet/reinforce.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace robnet {

const char* to_string(FaultKind kind) {
  return kind == FaultKind::Omission ? "om" : "byz";
}

FaultKind fault_kind_from_string(const std::string& s) {
  if (s == "om" || s == "omission") return FaultKind::Omission;
  if (s == "byz" || s == "byzantine") return FaultKind::Byzantine;
  throw std::invalid_argument("unknown fault model '" + s + "' (expected om or byz)");
}

int copies_per_node(FaultKind kind, int f) {
  if (f < 0) throw std::invalid_argument("f must be non-negative");
  return kind == FaultKind::Omission ? f + 1 : 2 * f + 1;
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::vector<std::pair<int, int>> ReinforcedNetwork::materialize_arcs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(copy_arc_count()));
  const int n = base.n;
  for (int a = 0; a < base.arc_count(); ++a) {
    auto [u, v] = base.arcs[a];
    if (arc_cross[a]) {
      for (int i = 0; i < ell; ++i)
        for (int j = 0; j < ell; ++j) out.emplace_back(u + i * n, v + j * n);
    } else {
      for (int i = 0; i < ell; ++i) out.emplace_back(u + i * n, v + i * n);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

ReinforcedNetwork make_reinforced(const Network& g, const Partition& part, int f,
                                  FaultKind kind, int ell) {
  if (static_cast<int>(part.region_of.size()) != g.n)
    throw std::invalid_argument("partition does not match network size");
  ReinforcedNetwork rn;
  rn.base = g;
  rn.partition = part;
  rn.model = kind;
  rn.f = f;
  rn.ell = ell;
  rn.arc_cross.resize(g.arcs.size());
  for (int a = 0; a < g.arc_count(); ++a) {
    auto [u, v] = g.arcs[a];
    bool cross = part.region_of[u] != part.region_of[v];
    rn.arc_cross[a] = cross;
    (cross ? rn.cross_arc_count : rn.intra_arc_count)++;
  }
  return rn;
}

}  // namespace detail

ReinforcedNetwork reinforce_partitioned(const Network& g, const Partition& part, int f,
                                        FaultKind kind) {
  if (f < 1) throw std::invalid_argument("f must be at least 1");
  if (g.n < 1) throw std::invalid_argument("empty network");
  return detail::make_reinforced(g, part, f, kind, copies_per_node(kind, f));
}

ReinforcedNetwork reinforce_strong(const Network& g, int f, FaultKind kind) {
  return reinforce_partitioned(g, singleton_partition(g), f, kind);
}

Overheads overheads(const ReinforcedNetwork& rn) {
  Overheads o;
  o.nu = Rational(rn.ell, 1);
  long long m = rn.intra_arc_count + rn.cross_arc_count;
  if (m == 0) {
    o.eta = Rational(1, 1);  // no arcs to blow up
  } else {
    o.eta = Rational(rn.copy_arc_count(), m);
  }
  return o;
}

std::string to_json(const ReinforcedNetwork& rn) {
  nlohmann::json j;
  j["base"] = nlohmann::json::parse(to_json(rn.base));
  j["partition"] = nlohmann::json::parse(to_json(rn.partition));
  j["model"] = to_string(rn.model);
  j["f"] = rn.f;
  j["ell"] = rn.ell;
  auto arr = nlohmann::json::array();
  for (auto [u, v] : rn.materialize_arcs()) arr.push_back({u, v});
  j["arcs"] = std::move(arr);
  Overheads o = overheads(rn);
  j["overheads"] = {{"nu", {{"num", o.nu.num}, {"den", o.nu.den}}},
                    {"eta", {{"num", o.eta.num}, {"den", o.eta.den}}}};
  return j.dump();
}

}  // namespace robnet
