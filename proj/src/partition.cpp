#include "robnet/partition.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "json.hpp"

namespace robnet {

Partition Partition::from_regions(int n, std::vector<std::vector<int>> regions) {
  std::vector<int> assignment(n, -1);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    if (regions[r].empty()) throw std::invalid_argument("empty region");
    for (int v : regions[r]) {
      if (v < 0 || v >= n) throw std::invalid_argument("region node out of range");
      if (assignment[v] != -1) throw std::invalid_argument("node assigned to two regions");
      assignment[v] = static_cast<int>(r);
    }
  }
  for (int v = 0; v < n; ++v)
    if (assignment[v] == -1) throw std::invalid_argument("node missing from partition");

  for (auto& region : regions) std::sort(region.begin(), region.end());
  std::sort(regions.begin(), regions.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  Partition part;
  part.regions = std::move(regions);
  part.region_of.assign(n, -1);
  for (std::size_t r = 0; r < part.regions.size(); ++r)
    for (int v : part.regions[r]) part.region_of[v] = static_cast<int>(r);
  return part;
}

Partition Partition::from_assignment(const std::vector<int>& region_of) {
  int k = 0;
  for (int r : region_of) k = std::max(k, r + 1);
  std::vector<std::vector<int>> regions(k);
  for (int v = 0; v < static_cast<int>(region_of.size()); ++v) {
    if (region_of[v] < 0) throw std::invalid_argument("negative region index");
    regions[region_of[v]].push_back(v);
  }
  std::erase_if(regions, [](const auto& r) { return r.empty(); });
  return from_regions(static_cast<int>(region_of.size()), std::move(regions));
}

CutStats cut_stats(const Network& g, const Partition& part) {
  if (static_cast<int>(part.region_of.size()) != g.n)
    throw std::invalid_argument("partition does not match network size");
  CutStats s;
  for (auto [u, v] : g.undirected_edges()) {
    ++s.total_edges;
    if (part.region_of[u] != part.region_of[v]) ++s.cut_edges;
  }
  s.r_min = g.n;
  for (const auto& region : part.regions) {
    s.r_min = std::min(s.r_min, static_cast<int>(region.size()));
    s.r_max = std::max(s.r_max, static_cast<int>(region.size()));
  }
  if (part.regions.empty()) s.r_min = 0;
  return s;
}

Partition singleton_partition(const Network& g) {
  if (g.n < 1) throw std::invalid_argument("empty network");
  std::vector<int> assignment(g.n);
  std::iota(assignment.begin(), assignment.end(), 0);
  return Partition::from_assignment(assignment);
}

Partition whole_partition(const Network& g) {
  if (g.n < 1) throw std::invalid_argument("empty network");
  return Partition::from_assignment(std::vector<int>(g.n, 0));
}

Partition partition_hypercube(int q, int d, int h) {
  if (q < 2 || d < 1) throw std::invalid_argument("invalid hypercube shape");
  if (h < 1 || q % h != 0)
    throw std::invalid_argument("subcube side must divide the hypercube side");
  long long n = 1, blocks_per_dim = q / h;
  for (int i = 0; i < d; ++i) {
    n *= q;
    if (n > 4'000'000) throw std::invalid_argument("hypercube too large");
  }
  std::vector<int> assignment(static_cast<std::size_t>(n));
  std::vector<int> coord(d, 0);
  for (long long id = 0; id < n; ++id) {
    long long region = 0;
    for (int i = 0; i < d; ++i) region = region * blocks_per_dim + coord[i] / h;
    assignment[static_cast<std::size_t>(id)] = static_cast<int>(region);
    for (int i = d - 1; i >= 0; --i) {
      if (++coord[i] < q) break;
      coord[i] = 0;
    }
  }
  return Partition::from_assignment(assignment);
}

namespace {

// Connected components of the undirected support restricted to `nodes`.
// Components come out ordered by smallest member, members ascending.
std::vector<std::vector<int>> components_within(const Network& g,
                                                const std::vector<int>& nodes) {
  std::vector<char> in_set(g.n, 0), seen(g.n, 0);
  for (int v : nodes) in_set[v] = 1;
  std::vector<std::vector<int>> comps;
  for (int v : nodes) {
    if (seen[v]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(v);
    seen[v] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      comp.push_back(u);
      auto visit = [&](int w) {
        if (in_set[w] && !seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      };
      for (int w : g.out_neighbors[u]) visit(w);
      for (int w : g.in_neighbors[u]) visit(w);
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

struct BruteState {
  const Network* g;
  int n, max_region;
  std::vector<std::vector<int>> adj;  // undirected adjacency
  std::vector<int> best_assignment;
  long long best_cut = -1;
  int best_k = 0;
};

// Undirected edges from `block` to nodes outside both block and `assigned`.
// Edges into `assigned` were counted when the earlier block closed.
long long boundary_edges(const BruteState& st, unsigned block, unsigned assigned) {
  long long cut = 0;
  for (int v = 0; v < st.n; ++v) {
    if (!(block >> v & 1u)) continue;
    for (int w : st.adj[v]) {
      if (block >> w & 1u) continue;
      if (assigned >> w & 1u) continue;
      ++cut;
    }
  }
  return cut;
}

void brute_assign(BruteState& st, unsigned assigned, long long cut_so_far, int k_so_far,
                  std::vector<int>& assignment);

// Enumerates each connected superset of `block` (within the unassigned nodes,
// size <= max_region) exactly once. `ext` holds current extension candidates;
// `excluded` holds nodes barred from this subtree, which is what prevents
// duplicates: after a candidate's branch is explored, the candidate joins
// `excluded` for the branches that follow.
void grow_block(BruteState& st, unsigned assigned, unsigned block, unsigned ext,
                unsigned excluded, long long cut_so_far, int k_so_far,
                std::vector<int>& assignment) {
  {
    long long cut = cut_so_far + boundary_edges(st, block, assigned);
    if (st.best_cut < 0 || cut <= st.best_cut) {
      for (int v = 0; v < st.n; ++v)
        if (block >> v & 1u) assignment[v] = k_so_far;
      brute_assign(st, assigned | block, cut, k_so_far + 1, assignment);
      for (int v = 0; v < st.n; ++v)
        if (block >> v & 1u) assignment[v] = -1;
    }
  }
  if (std::popcount(block) >= st.max_region) return;
  unsigned rem = ext;
  while (rem) {
    int v = std::countr_zero(rem);
    rem &= rem - 1;
    unsigned add = 0;
    for (int w : st.adj[v])
      if (!(assigned >> w & 1u) && !(block >> w & 1u) && !(excluded >> w & 1u) &&
          !(rem >> w & 1u) && w != v)
        add |= 1u << w;
    grow_block(st, assigned, block | (1u << v), rem | add, excluded, cut_so_far, k_so_far,
               assignment);
    excluded |= 1u << v;
  }
}

void brute_assign(BruteState& st, unsigned assigned, long long cut_so_far, int k_so_far,
                  std::vector<int>& assignment) {
  if (st.best_cut >= 0 && cut_so_far > st.best_cut) return;
  int root = -1;
  for (int v = 0; v < st.n; ++v) {
    if (!(assigned >> v & 1u)) {
      root = v;
      break;
    }
  }
  if (root == -1) {
    if (st.best_cut < 0 || cut_so_far < st.best_cut ||
        (cut_so_far == st.best_cut &&
         (k_so_far < st.best_k ||
          (k_so_far == st.best_k && assignment < st.best_assignment)))) {
      st.best_cut = cut_so_far;
      st.best_k = k_so_far;
      st.best_assignment = assignment;
    }
    return;
  }
  unsigned ext = 0;
  for (int w : st.adj[root])
    if (!(assigned >> w & 1u)) ext |= 1u << w;
  grow_block(st, assigned, 1u << root, ext, 0u, cut_so_far, k_so_far, assignment);
}

}  // namespace

Partition partition_brute_force(const Network& g, int max_region) {
  if (max_region < 1) throw std::invalid_argument("max_region must be >= 1");
  if (g.n < 1) throw std::invalid_argument("empty network");
  if (g.n > 13) throw std::invalid_argument("brute-force partitioning is limited to 13 nodes");

  BruteState st;
  st.g = &g;
  st.n = g.n;
  st.max_region = max_region;
  st.adj.assign(g.n, {});
  for (auto [u, v] : g.undirected_edges()) {
    st.adj[u].push_back(v);
    st.adj[v].push_back(u);
  }
  std::vector<int> assignment(g.n, -1);
  brute_assign(st, 0u, 0, 0, assignment);
  return Partition::from_assignment(st.best_assignment);
}

// Fiedler-vector machinery lives in spectral.cpp.
std::vector<double> fiedler_vector(const Network& g, const std::vector<int>& nodes);

Partition partition_spectral(const Network& g, int max_region) {
  if (max_region < 1) throw std::invalid_argument("max_region must be >= 1");
  if (g.n < 1) throw std::invalid_argument("empty network");

  std::vector<std::vector<int>> final_regions;
  std::queue<std::vector<int>> work;
  {
    std::vector<int> all(g.n);
    std::iota(all.begin(), all.end(), 0);
    work.push(std::move(all));
  }
  while (!work.empty()) {
    std::vector<int> region = std::move(work.front());
    work.pop();
    if (static_cast<int>(region.size()) <= max_region) {
      final_regions.push_back(std::move(region));
      continue;
    }
    auto comps = components_within(g, region);
    if (comps.size() > 1) {
      for (auto& c : comps) work.push(std::move(c));
      continue;
    }
    std::vector<double> x = fiedler_vector(g, region);
    std::vector<int> pos, neg;
    for (std::size_t i = 0; i < region.size(); ++i)
      (x[i] < 0.0 ? neg : pos).push_back(region[i]);
    if (pos.empty() || neg.empty()) {
      // Degenerate vector: split at the median value instead.
      std::vector<double> sorted = x;
      std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
      double median = sorted[sorted.size() / 2];
      pos.clear();
      neg.clear();
      for (std::size_t i = 0; i < region.size(); ++i)
        (x[i] < median ? neg : pos).push_back(region[i]);
      if (pos.empty() || neg.empty()) {
        // All values identical: fall back to an index split.
        pos.assign(region.begin(), region.begin() + region.size() / 2);
        neg.assign(region.begin() + region.size() / 2, region.end());
      }
    }
    work.push(std::move(pos));
    work.push(std::move(neg));
  }
  return Partition::from_regions(g.n, std::move(final_regions));
}

std::string to_json(const Partition& part) {
  nlohmann::json j;
  j["regions"] = part.regions;
  return j.dump();
}

Partition partition_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("regions"))
    throw ParseError("partition JSON requires field 'regions'");
  auto regions = j.at("regions").get<std::vector<std::vector<int>>>();
  int n = 0;
  for (const auto& r : regions)
    for (int v : r) n = std::max(n, v + 1);
  try {
    return Partition::from_regions(n, std::move(regions));
  } catch (const std::exception& e) {
    throw DataError(std::string("invalid partition JSON: ") + e.what());
  }
}

}  // namespace robnet
