#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace robnet {

// Input document could not be tokenized or violates the expected shape.
// line() is 1-based; 0 means "no line information".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed input referencing something that does not exist
// (e.g. an edge endpoint that was never declared).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Directed simple graph over dense node ids 0..n-1.
//
// Invariants, enforced by from_arcs():
//  - arcs sorted lexicographically, unique, no self-loops, endpoints in [0, n)
//  - labels empty or exactly n unique strings (node names from a source file)
// Adjacency lists and arc slot tables are derived and kept consistent.
struct Network {
  int n = 0;
  std::vector<std::pair<int, int>> arcs;
  std::vector<std::string> labels;

  // Provenance, not part of value identity: file path or generator spec.
  std::string origin;
  bool undirected_source = false;

  // Derived adjacency. Neighbor lists are sorted; *_arc_ids align with them.
  std::vector<std::vector<int>> out_neighbors, in_neighbors;
  std::vector<std::vector<int>> out_arc_ids, in_arc_ids;
  // Per arc (u,v): position of v in out_neighbors[u] / u in in_neighbors[v].
  std::vector<int> arc_out_slot, arc_in_slot;

  static Network from_arcs(int n, std::vector<std::pair<int, int>> arcs,
                           std::vector<std::string> labels = {});

  int arc_count() const { return static_cast<int>(arcs.size()); }
  // Number of unordered endpoint pairs present in either direction.
  long long undirected_edge_count() const;
  std::vector<std::pair<int, int>> undirected_edges() const;
  bool connected_undirected() const;
  std::optional<int> arc_id(int u, int v) const;

  bool operator==(const Network& o) const {
    return n == o.n && arcs == o.arcs && labels == o.labels;
  }
};

// Directed path 0 -> 1 -> ... -> n-1.
Network build_path(int n);

// d-dimensional grid with q nodes per side; wrap=true closes each line into a
// ring (torus). Nodes are coordinate tuples in lexicographic order
// (id = sum of coord[i] * q^(d-1-i)); two nodes are adjacent (both arc
// directions) when they differ by one in exactly one coordinate.
Network build_hypercube(int q, int d, bool wrap);

// Reads the GraphML subset: graph / node / edge elements, the edgedefault
// attribute, and per-edge directed overrides. Node ids are assigned in
// document order; undirected edges become two opposing arcs; self-loops are
// dropped and parallel edges collapsed. Unknown elements are skipped.
Network parse_graphml(const std::string& text, const std::string& filename = "");

// Canonical JSON form {"arcs": [[u,v],...], "labels": [...], "n": N}.
// Serialization is byte-deterministic; parse(serialize(g)) == g.
std::string to_json(const Network& g);
Network network_from_json(const std::string& text);

}  // namespace robnet
