#include "robnet/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

namespace robnet {

namespace {

void check_inputs(const std::vector<int>& sizes, int f, double p) {
  if (f < 0) throw std::invalid_argument("f must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  for (int l : sizes)
    if (l < 1) throw std::invalid_argument("region sizes must be positive");
}

// C(n, k) for the tiny n used here (n = 2f+1).
double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

double failure_om(const std::vector<int>& sizes, int f, double p) {
  check_inputs(sizes, f, p);
  if (sizes.empty()) return 0.0;
  if (p >= 1.0) return 1.0;
  if (p <= 0.0) return 0.0;
  // log(1 - failure) = sum_i log(1 - A_i^(f+1)), A_i = 1 - (1-p)^l_i.
  double log_ok = 0.0;
  for (int l : sizes) {
    double log_clean = static_cast<double>(l) * std::log1p(-p);
    double a = -std::expm1(log_clean);  // P[some copy set member faulty]
    double region_fail = std::exp(static_cast<double>(f + 1) * std::log(a));
    log_ok += std::log1p(-region_fail);
  }
  return -std::expm1(log_ok);
}

double failure_byz(const std::vector<int>& sizes, int f, double p) {
  check_inputs(sizes, f, p);
  if (sizes.empty()) return 0.0;
  if (p >= 1.0) return 1.0;
  if (p <= 0.0) return 0.0;
  const int ell = 2 * f + 1;
  // A region survives when at least f+1 of its 2f+1 copy sets are fault-free.
  // Accumulate the complement (at most f clean sets), which is the small
  // quantity when p is small.
  double log_ok = 0.0;
  for (int l : sizes) {
    double log_clean = static_cast<double>(l) * std::log1p(-p);
    double q = std::exp(log_clean);  // P[one copy set fault-free]
    double a = -std::expm1(log_clean);
    double region_fail = 0.0;
    for (int j = 0; j <= f; ++j)
      region_fail += binom(ell, j) * std::pow(q, j) * std::pow(a, ell - j);
    region_fail = std::min(region_fail, 1.0);
    log_ok += std::log1p(-region_fail);
  }
  return -std::expm1(log_ok);
}

double failure_prob(const std::vector<int>& sizes, int f, FaultKind kind, double p) {
  return kind == FaultKind::Omission ? failure_om(sizes, f, p) : failure_byz(sizes, f, p);
}

MaxP max_tolerable_p(const std::vector<int>& sizes, int f, FaultKind kind, double target) {
  if (!(target > 0.0 && target < 1.0))
    throw std::invalid_argument("target must lie in (0, 1)");
  check_inputs(sizes, f, 0.0);
  if (failure_prob(sizes, f, kind, 1.0) <= target) return {1.0, true};
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo >= 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    if (failure_prob(sizes, f, kind, mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, false};
}

MaxP naive_replication_p(long long n, int k_copies, double target) {
  if (n < 1 || n > 1'000'000'000) throw std::invalid_argument("n out of range");
  if (k_copies < 1) throw std::invalid_argument("k_copies must be positive");
  // k disjoint copies fail only when each contains a fault:
  // (1 - (1-p)^n)^k, which is the single-region omission build with f = k-1.
  return max_tolerable_p({static_cast<int>(n)}, k_copies - 1, FaultKind::Omission, target);
}

double hypercube_threshold_degradation(int h, int d) {
  if (h < 1 || d < 1) throw std::invalid_argument("h and d must be positive");
  return std::pow(static_cast<double>(h), static_cast<double>(d) - 0.5);
}

namespace {

std::vector<int> region_sizes(const Partition& part) {
  std::vector<int> sizes;
  sizes.reserve(part.regions.size());
  for (const auto& r : part.regions) sizes.push_back(static_cast<int>(r.size()));
  return sizes;
}

SweepRow original_row(const Network& g, const SweepSettings& s) {
  SweepRow row;
  row.f = 0;
  row.k = 1;
  row.r_min = row.r_max = g.n;
  row.total_edges = g.undirected_edge_count();
  MaxP mp = max_tolerable_p({g.n}, 0, s.model, s.target);
  row.max_p = mp.p;
  row.unreachable = mp.unreachable;
  return row;
}

}  // namespace

std::vector<SweepRow> pareto_sweep(const Network& g, const SweepSettings& settings) {
  if (g.n < 1) throw std::invalid_argument("empty network");
  std::vector<SweepRow> rows;

  std::map<int, Partition> partition_cache;
  auto partition_for = [&](int max_region) -> const Partition& {
    auto it = partition_cache.find(max_region);
    if (it != partition_cache.end()) return it->second;
    Partition part =
        settings.method == PartitionMethod::Spectral ||
                (settings.method == PartitionMethod::Auto && g.n > 13)
            ? partition_spectral(g, max_region)
            : partition_brute_force(g, max_region);
    return partition_cache.emplace(max_region, std::move(part)).first->second;
  };

  bool need_original = false;
  for (int f : settings.f_values) {
    if (f < 0) throw std::invalid_argument("f must be non-negative");
    if (f == 0) {
      need_original = true;
      continue;
    }
    for (int max_region : settings.max_regions) {
      const Partition& part = partition_for(max_region);
      ReinforcedNetwork rn = reinforce_partitioned(g, part, f, settings.model);
      Overheads o = overheads(rn);
      CutStats cs = cut_stats(g, part);
      SweepRow row;
      row.f = f;
      row.k = part.k();
      row.r_min = cs.r_min;
      row.r_max = cs.r_max;
      row.cut_edges = cs.cut_edges;
      row.total_edges = cs.total_edges;
      row.epsilon = cs.epsilon();
      row.nu = o.nu;
      row.eta = o.eta;
      MaxP mp = max_tolerable_p(region_sizes(part), f, settings.model, settings.target);
      row.max_p = mp.p;
      row.unreachable = mp.unreachable;
      rows.push_back(row);
    }
  }
  if (need_original) rows.push_back(original_row(g, settings));

  for (int k_copies : settings.naive_copies) {
    if (k_copies < 1) throw std::invalid_argument("naive copy counts must be positive");
    if (k_copies == 1) {
      rows.push_back(original_row(g, settings));
      continue;
    }
    // k disjoint copies = the single-region omission build with f = k-1; the
    // baseline keeps that reading in either sweep model.
    SweepRow row;
    row.f = k_copies - 1;
    row.k = 1;
    row.r_min = row.r_max = g.n;
    row.total_edges = g.undirected_edge_count();
    row.nu = Rational(k_copies, 1);
    row.eta = Rational(k_copies, 1);
    MaxP mp = naive_replication_p(g.n, k_copies, settings.target);
    row.max_p = mp.p;
    row.unreachable = mp.unreachable;
    rows.push_back(row);
  }

  auto key = [](const SweepRow& r) {
    return std::make_tuple(r.eta.value(), r.f, r.k, r.r_max, r.max_p);
  };
  std::sort(rows.begin(), rows.end(),
            [&](const SweepRow& a, const SweepRow& b) { return key(a) < key(b); });
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [&](const SweepRow& a, const SweepRow& b) {
                           return a.f == b.f && a.k == b.k && a.r_min == b.r_min &&
                                  a.r_max == b.r_max && a.nu == b.nu && a.eta == b.eta &&
                                  a.max_p == b.max_p;
                         }),
             rows.end());
  return rows;
}

const char* kSweepCsvHeader = "f,k,r_min,r_max,epsilon,nu,eta,max_p";

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "# sweep csv v1: " << kSweepCsvHeader << "\n" << kSweepCsvHeader << "\n";
  for (const SweepRow& r : rows) {
    os << r.f << ',' << r.k << ',' << r.r_min << ',' << r.r_max << ','
       << format_double(r.epsilon) << ',' << format_double(r.nu.value()) << ','
       << format_double(r.eta.value()) << ',' << format_double(r.max_p) << "\n";
  }
  return os.str();
}

std::string sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    arr.push_back({{"f", r.f},
                   {"k", r.k},
                   {"r_min", r.r_min},
                   {"r_max", r.r_max},
                   {"epsilon", r.epsilon},
                   {"nu", r.nu.value()},
                   {"eta", r.eta.value()},
                   {"max_p", r.max_p},
                   {"unreachable", r.unreachable}});
  }
  return nlohmann::json{{"rows", arr}}.dump();
}

std::vector<SweepRow> sweep_from_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("f,", 0) == 0) continue;  // header
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 8)
      throw ParseError("expected 8 sweep columns, got " + std::to_string(fields.size()),
                       lineno);
    try {
      SweepRow r;
      r.f = std::stoi(fields[0]);
      r.k = std::stoi(fields[1]);
      r.r_min = std::stoi(fields[2]);
      r.r_max = std::stoi(fields[3]);
      r.epsilon = std::stod(fields[4]);
      // CSV carries decimal values; a fixed power-of-two denominator keeps
      // them faithful for the tolerance-based comparisons done on re-read.
      constexpr long long kDen = 1LL << 40;
      r.nu = Rational(std::llround(std::stod(fields[5]) * kDen), kDen);
      r.eta = Rational(std::llround(std::stod(fields[6]) * kDen), kDen);
      r.max_p = std::stod(fields[7]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw ParseError("malformed sweep row", lineno);
    }
  }
  return rows;
}

}  // namespace robnet
