#include "z2hm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "z2hm/errors.hpp"

namespace z2hm {
namespace {

// Honeycomb vertices on an integer grid: x in units of sqrt(3)/2, y in units
// of 1/2. A pointy-top hexagon centred at (X, Y) has these corner offsets.
constexpr std::array<std::pair<int, int>, 6> kCorners = {
    {{0, 2}, {1, 1}, {1, -1}, {0, -2}, {-1, -1}, {-1, 1}}};

struct HexBuilder {
  std::map<std::pair<int, int>, int> index;  // (Y, X) -> provisional id
  std::vector<std::pair<int, int>> coords;   // provisional id -> (X, Y)
  std::set<std::pair<int, int>> edges;

  int vertex(int x, int y) {
    auto [it, inserted] = index.emplace(std::make_pair(y, x), static_cast<int>(coords.size()));
    if (inserted) coords.emplace_back(x, y);
    return it->second;
  }

  void add_hexagon(int cx, int cy) {
    std::array<int, 6> ids{};
    for (std::size_t k = 0; k < 6; ++k) ids[k] = vertex(cx + kCorners[k].first, cy + kCorners[k].second);
    for (std::size_t k = 0; k < 6; ++k) {
      int a = ids[k], b = ids[(k + 1) % 6];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
  }

  // Relabels vertices in row-major order and returns sites plus edge list.
  std::pair<std::vector<Site>, std::vector<std::pair<int, int>>> finish() const {
    std::vector<int> relabel(coords.size());
    std::vector<Site> sites;
    int next = 0;
    for (const auto& [key, id] : index) {  // map is ordered by (Y, X)
      relabel[static_cast<std::size_t>(id)] = next++;
      sites.push_back({key.second * std::sqrt(3.0) / 2.0, key.first / 2.0});
    }
    std::vector<std::pair<int, int>> out;
    for (const auto& [a, b] : edges) out.emplace_back(relabel[a], relabel[b]);
    return {sites, out};
  }
};

}  // namespace

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Flake: return "flake";
    case LatticeKind::Brick: return "brick";
    case LatticeKind::Chain: return "chain";
    case LatticeKind::Custom: return "custom";
  }
  return "unknown";
}

LatticeGraph LatticeGraph::flake(int rings) {
  if (rings < 0) throw InvalidArgument("flake: R must be non-negative");
  HexBuilder b;
  for (int q = -rings; q <= rings; ++q)
    for (int r = -rings; r <= rings; ++r)
      if (std::abs(q + r) <= rings) b.add_hexagon(2 * q + r, 3 * r);
  auto [sites, edges] = b.finish();
  return assemble(LatticeKind::Flake, {rings}, std::move(sites), std::move(edges), 2);
}

LatticeGraph LatticeGraph::brick(int rows, int cols) {
  if (rows < 1 || cols < 1) throw InvalidArgument("brick: rows and cols must be positive");
  HexBuilder b;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b.add_hexagon(2 * j + (i % 2), 3 * i);
  auto [sites, edges] = b.finish();
  return assemble(LatticeKind::Brick, {rows, cols}, std::move(sites), std::move(edges), 2);
}

LatticeGraph LatticeGraph::chain(int n) {
  if (n < 2) throw InvalidArgument("chain: need at least two sites");
  std::vector<Site> sites;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) sites.push_back({static_cast<double>(i), 0.0});
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return assemble(LatticeKind::Chain, {n}, std::move(sites), std::move(edges), 1);
}

LatticeGraph LatticeGraph::from_edges(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                                      std::vector<Site> coords) {
  if (num_nodes < 2) throw InvalidArgument("custom lattice: need at least two nodes");
  if (coords.empty())
    for (int i = 0; i < num_nodes; ++i) coords.push_back({static_cast<double>(i), 0.0});
  if (static_cast<int>(coords.size()) != num_nodes)
    throw InvalidArgument("custom lattice: coordinate count does not match node count");
  std::vector<std::pair<int, int>> norm;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes || u == v)
      throw LatticeError("custom lattice: invalid edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    norm.emplace_back(std::min(u, v), std::max(u, v));
  }
  return assemble(LatticeKind::Custom, {num_nodes}, std::move(coords), std::move(norm), 1);
}

LatticeGraph LatticeGraph::assemble(LatticeKind kind, std::vector<int> params, std::vector<Site> sites,
                                    std::vector<std::pair<int, int>> edges, int min_degree) {
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw LatticeError("duplicate link in lattice");
  LatticeGraph g;
  g.kind_ = kind;
  g.params_ = std::move(params);
  g.sites_ = std::move(sites);
  g.incident_.assign(g.sites_.size(), {});
  for (auto [u, v] : edges) {
    g.incident_[static_cast<std::size_t>(u)].push_back(static_cast<int>(g.links_.size()));
    g.incident_[static_cast<std::size_t>(v)].push_back(static_cast<int>(g.links_.size()));
    g.links_.push_back({u, v});
  }
  for (int n = 0; n < g.num_nodes(); ++n) {
    const int d = g.degree(n);
    if (d < min_degree || d > 3)
      throw LatticeError("node " + std::to_string(n) + " has degree " + std::to_string(d) +
                         " outside [" + std::to_string(min_degree) + ", 3]");
  }
  // Connectivity.
  std::vector<char> seen(g.sites_.size(), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    int n = queue.front();
    queue.pop_front();
    for (int m : g.neighbors(n))
      if (!seen[static_cast<std::size_t>(m)]) {
        seen[static_cast<std::size_t>(m)] = 1;
        ++count;
        queue.push_back(m);
      }
  }
  if (count != g.num_nodes()) throw LatticeError("lattice is not connected");
  return g;
}

std::string LatticeGraph::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(";
  for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
  os << ")";
  return os.str();
}

int LatticeGraph::node_qubit(int node) const {
  if (node < 0 || node >= num_nodes()) throw InvalidArgument("unknown node id " + std::to_string(node));
  return node;
}

int LatticeGraph::edge_qubit(int edge) const {
  if (edge < 0 || edge >= num_edges()) throw InvalidArgument("unknown edge id " + std::to_string(edge));
  return num_nodes() + edge;
}

int LatticeGraph::node_of_qubit(int qubit) const {
  if (!is_matter_qubit(qubit)) throw InvalidArgument("qubit " + std::to_string(qubit) + " is not a matter qubit");
  return qubit;
}

int LatticeGraph::edge_of_qubit(int qubit) const {
  if (!is_gauge_qubit(qubit)) throw InvalidArgument("qubit " + std::to_string(qubit) + " is not a gauge qubit");
  return qubit - num_nodes();
}

const std::vector<int>& LatticeGraph::incident(int node) const {
  if (node < 0 || node >= num_nodes()) throw InvalidArgument("unknown node id " + std::to_string(node));
  return incident_[static_cast<std::size_t>(node)];
}

std::vector<int> LatticeGraph::neighbors(int node) const {
  std::vector<int> out;
  for (int e : incident(node)) out.push_back(other_end(e, node));
  return out;
}

std::optional<int> LatticeGraph::edge_between(int u, int v) const {
  for (int e : incident(u))
    if (other_end(e, u) == v) return e;
  return std::nullopt;
}

int LatticeGraph::other_end(int edge, int node) const {
  const Link& l = link(edge);
  if (l.u == node) return l.v;
  if (l.v == node) return l.u;
  throw InvalidArgument("node " + std::to_string(node) + " is not an endpoint of edge " + std::to_string(edge));
}

int LatticeGraph::count_degree(int d) const {
  int c = 0;
  for (int n = 0; n < num_nodes(); ++n) c += degree(n) == d;
  return c;
}

std::vector<int> LatticeGraph::gauge_support(int node) const {
  std::vector<int> qs{node_qubit(node)};
  for (int e : incident(node)) qs.push_back(edge_qubit(e));
  return qs;
}

std::vector<std::vector<int>> LatticeGraph::node_distances() const {
  const int n = num_nodes();
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int s = 0; s < n; ++s) {
    auto& d = dist[static_cast<std::size_t>(s)];
    std::deque<int> queue{s};
    d[static_cast<std::size_t>(s)] = 0;
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      for (int b : neighbors(a))
        if (d[static_cast<std::size_t>(b)] < 0) {
          d[static_cast<std::size_t>(b)] = d[static_cast<std::size_t>(a)] + 1;
          queue.push_back(b);
        }
    }
  }
  return dist;
}

PauliString gauge_generator(const LatticeGraph& lattice, int node) {
  return PauliString::z_on(lattice.gauge_support(node));
}

Bipartition matter_bipartition(const LatticeGraph& lattice) {
  const int n = lattice.num_nodes();
  Bipartition parts;
  parts.side.assign(static_cast<std::size_t>(n), -1);
  std::deque<int> queue{0};
  parts.side[0] = 0;
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (int b : lattice.neighbors(a)) {
      auto& sb = parts.side[static_cast<std::size_t>(b)];
      if (sb < 0) {
        sb = 1 - parts.side[static_cast<std::size_t>(a)];
        queue.push_back(b);
      } else if (sb == parts.side[static_cast<std::size_t>(a)]) {
        throw LatticeError("no valid matter bipartition: nodes " + std::to_string(std::min(a, b)) + " and " +
                           std::to_string(std::max(a, b)) + " share a link and land in the same set");
      }
    }
  }
  for (int v = 0; v < n; ++v) (parts.side[static_cast<std::size_t>(v)] == 0 ? parts.set_a : parts.set_b).push_back(v);
  return parts;
}

std::vector<int> edge_coloring(const LatticeGraph& lattice, const Bipartition& parts) {
  constexpr int kColors = 3;
  const int n = lattice.num_nodes();
  std::vector<std::array<int, kColors>> at(static_cast<std::size_t>(n));
  for (auto& a : at) a.fill(-1);
  std::vector<int> color(static_cast<std::size_t>(lattice.num_edges()), -1);
  auto free_color = [&](int node) {
    for (int c = 0; c < kColors; ++c)
      if (at[static_cast<std::size_t>(node)][static_cast<std::size_t>(c)] < 0) return c;
    throw LatticeError("edge colouring: node degree exceeds three");
  };
  for (int e = 0; e < lattice.num_edges(); ++e) {
    const Link& l = lattice.link(e);
    const int u = parts.side[static_cast<std::size_t>(l.u)] == 0 ? l.u : l.v;
    const int v = lattice.other_end(e, u);
    const int a = free_color(u);
    const int b = free_color(v);
    if (at[static_cast<std::size_t>(v)][static_cast<std::size_t>(a)] >= 0) {
      // Flip the a/b alternating path leaving v; bipartiteness keeps it away from u.
      std::vector<int> path;
      int node = v;
      int c = a;
      while (true) {
        const int f = at[static_cast<std::size_t>(node)][static_cast<std::size_t>(c)];
        if (f < 0) break;
        path.push_back(f);
        node = lattice.other_end(f, node);
        c = (c == a) ? b : a;
      }
      for (int f : path) {
        const Link& fl = lattice.link(f);
        at[static_cast<std::size_t>(fl.u)][static_cast<std::size_t>(color[static_cast<std::size_t>(f)])] = -1;
        at[static_cast<std::size_t>(fl.v)][static_cast<std::size_t>(color[static_cast<std::size_t>(f)])] = -1;
      }
      for (int f : path) {
        const Link& fl = lattice.link(f);
        int& cf = color[static_cast<std::size_t>(f)];
        cf = (cf == a) ? b : a;
        at[static_cast<std::size_t>(fl.u)][static_cast<std::size_t>(cf)] = f;
        at[static_cast<std::size_t>(fl.v)][static_cast<std::size_t>(cf)] = f;
      }
    }
    color[static_cast<std::size_t>(e)] = a;
    at[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)] = e;
    at[static_cast<std::size_t>(v)][static_cast<std::size_t>(a)] = e;
  }
  return color;
}

}  // namespace z2hm
