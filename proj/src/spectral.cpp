#include <algorithm>
#include <cmath>
#include <vector>

#include "robnet/graph.hpp"
#include "robnet/rng.hpp"

// Fiedler vector of the undirected support restricted to a node subset.
//
// Uses power iteration on the spectrally shifted matrix B = sigma*I - L
// (sigma above the Gershgorin bound, so B's dominant non-constant eigenvector
// is the Fiedler vector) with the constant eigenvector deflated by mean
// subtraction. The start vector is a node-rank ramp plus a small keyed
// jitter: deterministic, and biased toward smooth low-frequency modes so the
// iteration settles on an axis-like eigenvector when the Fiedler eigenvalue
// is degenerate (e.g. square grids). Relative tolerance 1e-8, at most
// 10 * region_size iterations; the final vector's sign is canonicalized.

namespace robnet {

std::vector<double> fiedler_vector(const Network& g, const std::vector<int>& nodes) {
  const int s = static_cast<int>(nodes.size());
  std::vector<int> local(g.n, -1);
  for (int i = 0; i < s; ++i) local[nodes[i]] = i;

  std::vector<std::vector<int>> adj(s);
  for (auto [u, v] : g.undirected_edges()) {
    int lu = local[u], lv = local[v];
    if (lu >= 0 && lv >= 0) {
      adj[lu].push_back(lv);
      adj[lv].push_back(lu);
    }
  }
  int max_deg = 0;
  for (const auto& a : adj) max_deg = std::max(max_deg, static_cast<int>(a.size()));
  const double sigma = 2.0 * max_deg + 1.0;

  constexpr std::uint64_t kStartSeed = 0x5eedf1ed1e55ULL;
  std::vector<double> x(s), y(s);
  for (int i = 0; i < s; ++i) {
    double jitter = rng::uniform01(rng::key_path(kStartSeed, {static_cast<std::uint64_t>(nodes[i])}));
    x[i] = static_cast<double>(i) + 0.125 * (jitter - 0.5);
  }

  auto deflate_normalize = [&](std::vector<double>& v) {
    double mean = 0.0;
    for (double c : v) mean += c;
    mean /= s;
    double norm = 0.0;
    for (double& c : v) {
      c -= mean;
      norm += c * c;
    }
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& c : v) c /= norm;
    return norm;
  };
  deflate_normalize(x);

  const int max_iters = 10 * s;
  for (int it = 0; it < max_iters; ++it) {
    for (int i = 0; i < s; ++i) {
      double acc = (sigma - static_cast<double>(adj[i].size())) * x[i];
      for (int j : adj[i]) acc += x[j];
      y[i] = acc;
    }
    if (deflate_normalize(y) == 0.0) break;  // start vector had no useful component
    double diff = 0.0;
    for (int i = 0; i < s; ++i) diff = std::max(diff, std::abs(y[i] - x[i]));
    x.swap(y);
    if (diff < 1e-8) break;
  }

  // Canonical orientation: the first entry of largest magnitude is positive.
  int pivot = 0;
  for (int i = 1; i < s; ++i)
    if (std::abs(x[i]) > std::abs(x[pivot])) pivot = i;
  if (x[pivot] < 0.0)
    for (double& c : x) c = -c;
  return x;
}

}  // namespace robnet
