#pragma once

#include <string>
#include <vector>

#include "robnet/reinforce.hpp"

namespace robnet {

// Probability that a partitioned build over regions of the given sizes fails
// to keep every node simulated, when each copy node independently fails with
// probability p. A region of size l is lost under omission when all f+1 of
// its copy sets contain a fault; under the Byzantine model when fewer than
// f+1 of its 2f+1 copy sets are fault-free. Evaluated in log space, so
// results stay meaningful down to p ~ 1e-300. f = 0 degenerates to the
// original network: 1 - (1-p)^n for either model.
double failure_om(const std::vector<int>& sizes, int f, double p);
double failure_byz(const std::vector<int>& sizes, int f, double p);
double failure_prob(const std::vector<int>& sizes, int f, FaultKind kind, double p);

struct MaxP {
  double p = 0.0;
  bool unreachable = false;  // failure(1) <= target, so every p qualifies
};

// Largest p with failure <= target, by bisection over [0, 1] to absolute
// tolerance 1e-12 (at most 200 iterations). target must lie in (0, 1).
MaxP max_tolerable_p(const std::vector<int>& sizes, int f, FaultKind kind, double target);

// Baseline: k independent copies of the whole n-node network, which fails
// only when every copy contains a fault: failure = (1 - (1-p)^n)^k. This is
// exactly the single-region omission build with f = k-1.
MaxP naive_replication_p(long long n, int k_copies, double target);

// How much tolerable-p headroom shrinks when hypercube subcube side h grows,
// per added dimension: h^(d - 1/2).
double hypercube_threshold_degradation(int h, int d);

enum class PartitionMethod { Auto, Spectral, BruteForce };

struct SweepSettings {
  std::vector<int> f_values;     // f = 0 contributes the original-network row
  std::vector<int> max_regions;  // region size grid for f >= 1 rows
  FaultKind model = FaultKind::Omission;
  double target = 0.01;
  PartitionMethod method = PartitionMethod::Auto;  // Auto: brute force up to 13 nodes
  std::vector<int> naive_copies;  // baseline rows; {} = none
};

struct SweepRow {
  int f = 0;
  int k = 1;
  int r_min = 0, r_max = 0;
  long long cut_edges = 0, total_edges = 0;
  double epsilon = 0.0;
  Rational nu{1, 1}, eta{1, 1};
  double max_p = 0.0;
  bool unreachable = false;
};

// One row per (f, max_region) plus baseline rows, deduplicated and sorted by
// (eta, f, k, r_max). Baselines use the single-region equivalence above, so
// every row shares one schema. Empty f_values yields an empty table.
std::vector<SweepRow> pareto_sweep(const Network& g, const SweepSettings& settings);

// CSV with the fixed column set; JSON mirrors the same fields.
extern const char* kSweepCsvHeader;
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string sweep_to_json(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_from_csv(const std::string& text);

}  // namespace robnet
