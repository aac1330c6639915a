#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "robnet/graph.hpp"
#include "robnet/partition.hpp"

namespace robnet {

enum class FaultKind { Omission, Byzantine };

const char* to_string(FaultKind kind);
FaultKind fault_kind_from_string(const std::string& s);

// Copies per node: omission faults need f+1, Byzantine faults 2f+1.
int copies_per_node(FaultKind kind, int f);

// Exact fraction, normalized with positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

// Replicated build of a base network. Copy i of node v has dense id
// v + i*n; P(copy) = copy % n projects back. The copy arcs follow the
// partition: an arc inside a region connects same-index copies only
// (ell arcs); an arc between regions connects every index pair (ell^2 arcs).
// A singleton partition therefore yields the fully wired (strong) build.
struct ReinforcedNetwork {
  Network base;
  Partition partition;
  FaultKind model = FaultKind::Omission;
  int f = 1;
  int ell = 2;
  std::vector<char> arc_cross;  // per base arc: endpoints in different regions
  long long intra_arc_count = 0, cross_arc_count = 0;

  int copies() const { return base.n * ell; }
  int copy_id(int v, int index) const { return v + index * base.n; }
  int project(int copy) const { return copy % base.n; }
  int copy_index(int copy) const { return copy / base.n; }
  long long copy_arc_count() const {
    return intra_arc_count * ell + cross_arc_count * static_cast<long long>(ell) * ell;
  }
  std::vector<std::pair<int, int>> materialize_arcs() const;
};

// Strong reinforcement: every base arc is wired across all index pairs.
// Requires f >= 1.
ReinforcedNetwork reinforce_strong(const Network& g, int f, FaultKind kind);

// Partition-aware reinforcement per the copy-arc rule above. Requires f >= 1
// and a partition covering the network.
ReinforcedNetwork reinforce_partitioned(const Network& g, const Partition& part, int f,
                                        FaultKind kind);

// Node and edge blow-up as exact rationals:
//   nu  = ell
//   eta = (intra_arcs * ell + cross_arcs * ell^2) / total_arcs
struct Overheads {
  Rational nu, eta;
};

Overheads overheads(const ReinforcedNetwork& rn);

std::string to_json(const ReinforcedNetwork& rn);

namespace detail {
// No f validation; also admits ell=1 so the original network can be run
// through the simulators as a degenerate "build" (used for f=0 baselines).
ReinforcedNetwork make_reinforced(const Network& g, const Partition& part, int f,
                                  FaultKind kind, int ell);
}  // namespace detail

}  // namespace robnet
