#pragma once

#include <string>
#include <vector>

#include "robnet/graph.hpp"

namespace robnet {

// Disjoint cover of the node set. Canonical form: every region's node list is
// ascending, regions are ordered by their smallest node, no region is empty.
struct Partition {
  std::vector<std::vector<int>> regions;
  std::vector<int> region_of;  // node -> region index

  int k() const { return static_cast<int>(regions.size()); }

  // Validates and canonicalizes. Throws std::invalid_argument unless the
  // regions are non-empty and cover 0..n-1 exactly once.
  static Partition from_regions(int n, std::vector<std::vector<int>> regions);
  static Partition from_assignment(const std::vector<int>& region_of);

  bool operator==(const Partition& o) const { return regions == o.regions; }
};

// Cut accounting over the undirected support: an edge slot is cut when its
// endpoints land in different regions. epsilon = cut_edges / total_edges.
struct CutStats {
  long long cut_edges = 0;
  long long total_edges = 0;
  int r_min = 0, r_max = 0;
  double epsilon() const {
    return total_edges == 0 ? 0.0 : static_cast<double>(cut_edges) / static_cast<double>(total_edges);
  }
};

CutStats cut_stats(const Network& g, const Partition& part);

Partition singleton_partition(const Network& g);  // one node per region
Partition whole_partition(const Network& g);      // a single region

// Axis-aligned subcube regions for build_hypercube(q, d, *): h must divide q;
// yields (q/h)^d regions of h^d nodes each, indexed in lexicographic order of
// their subcube coordinates. Cut fraction is at most 1/h.
Partition partition_hypercube(int q, int d, int h);

// Recursive spectral bisection. A region larger than max_region is split by
// the sign of its Fiedler vector (unnormalized Laplacian, deflated power
// iteration on the spectrally shifted matrix, relative tolerance 1e-8, at
// most 10 * region_size iterations, deterministic ramp-plus-jitter start
// vector). Zero entries go to the positive side; if a side comes out empty
// the threshold moves to the median. Disconnected regions are first split
// into connected components. Deterministic for a given input.
Partition partition_spectral(const Network& g, int max_region);

// Exact minimum-cut partition into connected regions of size <= max_region.
// Ties broken by fewer regions, then lexicographically smallest assignment
// vector. Only for n <= 13 (throws std::invalid_argument beyond).
Partition partition_brute_force(const Network& g, int max_region);

// JSON form {"regions": [[...], ...]}.
std::string to_json(const Partition& part);
Partition partition_from_json(const std::string& text);

}  // namespace robnet
