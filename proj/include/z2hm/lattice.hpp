#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "z2hm/pauli.hpp"

namespace z2hm {

enum class LatticeKind { Flake, Brick, Chain, Custom };

std::string to_string(LatticeKind kind);

struct Site {
  double x = 0;
  double y = 0;
};

struct Link {
  int u = 0;  // u < v
  int v = 0;
};

// Matter sites, gauge links and the qubit map. Matter qubits come first in
// row-major coordinate order (y, then x); gauge qubits follow in sorted
// endpoint order. Immutable after construction.
class LatticeGraph {
 public:
  // Flower-shaped flake: the central hexagon plus R rings, 3R^2+3R+1 hexagons.
  static LatticeGraph flake(int rings);
  // rows x cols hexagons, odd rows shifted by half a plaquette (brick wall).
  static LatticeGraph brick(int rows, int cols);
  // Open (1+1)-D chain of `sites` matter sites; end sites have degree 1.
  static LatticeGraph chain(int sites);
  // Arbitrary connected graph with node degrees in 1..3.
  static LatticeGraph from_edges(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                                 std::vector<Site> coords = {});

  LatticeKind kind() const { return kind_; }
  // Construction parameters: {R} for flakes, {rows, cols} for bricks, {n} for chains.
  const std::vector<int>& params() const { return params_; }
  std::string describe() const;

  int num_nodes() const { return static_cast<int>(sites_.size()); }
  int num_edges() const { return static_cast<int>(links_.size()); }
  int num_qubits() const { return num_nodes() + num_edges(); }

  const std::vector<Site>& sites() const { return sites_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(int e) const { return links_.at(static_cast<std::size_t>(e)); }

  int node_qubit(int node) const;
  int edge_qubit(int edge) const;
  bool is_matter_qubit(int qubit) const { return qubit >= 0 && qubit < num_nodes(); }
  bool is_gauge_qubit(int qubit) const { return qubit >= num_nodes() && qubit < num_qubits(); }
  int node_of_qubit(int qubit) const;
  int edge_of_qubit(int qubit) const;

  int degree(int node) const { return static_cast<int>(incident(node).size()); }
  const std::vector<int>& incident(int node) const;
  std::vector<int> neighbors(int node) const;
  std::optional<int> edge_between(int u, int v) const;
  int other_end(int edge, int node) const;

  int count_degree(int d) const;
  // Independent cycles: N_e - N_n + 1.
  int cycle_rank() const { return num_edges() - num_nodes() + 1; }

  // Matter qubit at `node` plus the gauge qubits of its incident links.
  std::vector<int> gauge_support(int node) const;

  // All-pairs graph distance between matter sites (BFS).
  std::vector<std::vector<int>> node_distances() const;

 private:
  LatticeGraph() = default;
  static LatticeGraph assemble(LatticeKind kind, std::vector<int> params, std::vector<Site> sites,
                               std::vector<std::pair<int, int>> edges, int min_degree);

  LatticeKind kind_ = LatticeKind::Custom;
  std::vector<int> params_;
  std::vector<Site> sites_;
  std::vector<Link> links_;
  std::vector<std::vector<int>> incident_;
};

// G_n = Z on the matter qubit and on every incident gauge qubit, sign +1.
PauliString gauge_generator(const LatticeGraph& lattice, int node);

struct Bipartition {
  std::vector<int> set_a;
  std::vector<int> set_b;
  std::vector<int> side;  // side[node] is 0 for set A, 1 for set B
};

// Two-colouring of the matter sites so that no two sites in the same set
// share a link. Node 0 is always in set A. Throws LatticeError naming the
// conflicting pair when the graph has an odd cycle.
Bipartition matter_bipartition(const LatticeGraph& lattice);

// Proper edge colouring with at most three colours (bipartite graphs of
// maximum degree three always admit one).
std::vector<int> edge_coloring(const LatticeGraph& lattice, const Bipartition& parts);

}  // namespace z2hm
