#include <gtest/gtest.h>

#include <set>

#include "z2hm/errors.hpp"
#include "z2hm/lattice.hpp"

using namespace z2hm;

namespace {

void expect_valid_colouring(const LatticeGraph& lat) {
  const auto parts = matter_bipartition(lat);
  for (const auto& l : lat.links()) EXPECT_NE(parts.side[l.u], parts.side[l.v]);
  const auto colour = edge_coloring(lat, parts);
  ASSERT_EQ(static_cast<int>(colour.size()), lat.num_edges());
  for (int n = 0; n < lat.num_nodes(); ++n) {
    std::set<int> seen;
    for (int e : lat.incident(n)) {
      EXPECT_GE(colour[e], 0);
      EXPECT_LT(colour[e], 3);
      EXPECT_TRUE(seen.insert(colour[e]).second) << "node " << n;
    }
  }
}

}  // namespace

TEST(Lattice, FlakeCountsFollowTheRingFormula) {
  // 3R^2+3R+1 hexagons: 6 / 24 / 54 sites and 6 / 30 / 72 links.
  const int nodes[] = {6, 24, 54}, edges[] = {6, 30, 72};
  for (int r = 0; r < 3; ++r) {
    const auto lat = LatticeGraph::flake(r);
    EXPECT_EQ(lat.num_nodes(), nodes[r]);
    EXPECT_EQ(lat.num_edges(), edges[r]);
    EXPECT_EQ(lat.cycle_rank(), 3 * r * r + 3 * r + 1);
  }
}

TEST(Lattice, SingleHexagonIsARingOfDegreeTwo) {
  const auto lat = LatticeGraph::flake(0);
  EXPECT_EQ(lat.num_qubits(), 12);
  EXPECT_EQ(lat.count_degree(2), 6);
  for (int n = 0; n < 6; ++n) EXPECT_EQ(lat.neighbors(n).size(), 2u);
}

TEST(Lattice, BrickSizes) {
  EXPECT_EQ(LatticeGraph::brick(1, 1).num_qubits(), 12);
  EXPECT_EQ(LatticeGraph::brick(2, 2).num_qubits(), 35);
  EXPECT_EQ(LatticeGraph::brick(3, 3).num_qubits(), 68);
  EXPECT_EQ(LatticeGraph::brick(1, 1).cycle_rank(), 1);
  EXPECT_EQ(LatticeGraph::brick(2, 3).cycle_rank(), 6);
}

TEST(Lattice, ChainEndsHaveDegreeOne) {
  const auto lat = LatticeGraph::chain(6);
  EXPECT_EQ(lat.num_nodes(), 6);
  EXPECT_EQ(lat.num_edges(), 5);
  EXPECT_EQ(lat.degree(0), 1);
  EXPECT_EQ(lat.degree(5), 1);
  EXPECT_EQ(lat.cycle_rank(), 0);
  EXPECT_THROW(LatticeGraph::chain(1), InvalidArgument);
}

TEST(Lattice, QubitMapPutsMatterFirst) {
  const auto lat = LatticeGraph::flake(1);
  for (int n = 0; n < lat.num_nodes(); ++n) {
    EXPECT_EQ(lat.node_qubit(n), n);
    EXPECT_TRUE(lat.is_matter_qubit(n));
    EXPECT_EQ(lat.node_of_qubit(n), n);
  }
  for (int e = 0; e < lat.num_edges(); ++e) {
    EXPECT_EQ(lat.edge_qubit(e), lat.num_nodes() + e);
    EXPECT_TRUE(lat.is_gauge_qubit(lat.edge_qubit(e)));
    EXPECT_EQ(lat.edge_of_qubit(lat.edge_qubit(e)), e);
  }
  for (int e = 1; e < lat.num_edges(); ++e) {
    const auto &a = lat.link(e - 1), &b = lat.link(e);
    EXPECT_TRUE(a.u < b.u || (a.u == b.u && a.v < b.v));
  }
}

TEST(Lattice, SitesAreOrderedRowMajor) {
  const auto lat = LatticeGraph::flake(2);
  for (int n = 1; n < lat.num_nodes(); ++n) {
    const auto &a = lat.sites()[n - 1], &b = lat.sites()[n];
    EXPECT_TRUE(a.y < b.y || (a.y == b.y && a.x < b.x));
  }
}

TEST(Lattice, GaugeGeneratorCoversSiteAndIncidentLinks) {
  const auto lat = LatticeGraph::flake(1);
  for (int n = 0; n < lat.num_nodes(); ++n) {
    const auto g = gauge_generator(lat, n);
    EXPECT_TRUE(g.is_diagonal());
    EXPECT_EQ(g.weight(), 1 + lat.degree(n));
    EXPECT_EQ(g.letter(lat.node_qubit(n)), Pauli::Z);
    for (int e : lat.incident(n)) EXPECT_EQ(g.letter(lat.edge_qubit(e)), Pauli::Z);
  }
}

TEST(Lattice, BipartitionAndThreeColouring) {
  for (const auto& lat : {LatticeGraph::flake(0), LatticeGraph::flake(1), LatticeGraph::flake(2),
                          LatticeGraph::brick(2, 3), LatticeGraph::brick(3, 3), LatticeGraph::chain(7)})
    expect_valid_colouring(lat);
  EXPECT_EQ(matter_bipartition(LatticeGraph::flake(0)).side[0], 0);
}

TEST(Lattice, OddCycleIsRejectedByName) {
  const auto tri = LatticeGraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
  try {
    matter_bipartition(tri);
    FAIL() << "expected LatticeError";
  } catch (const LatticeError& e) {
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(Lattice, CustomGraphValidation) {
  EXPECT_THROW(LatticeGraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}), LatticeError);  // degree 4
  EXPECT_THROW(LatticeGraph::from_edges(4, {{0, 1}, {2, 3}}), LatticeError);                  // disconnected
  EXPECT_THROW(LatticeGraph::from_edges(2, {{0, 0}}), LatticeError);                          // self loop
  EXPECT_THROW(LatticeGraph::from_edges(3, {{0, 1}, {1, 0}, {1, 2}}), LatticeError);         // duplicate
  const auto ok = LatticeGraph::from_edges(4, {{1, 0}, {1, 2}, {2, 3}});
  EXPECT_EQ(ok.num_edges(), 3);
  EXPECT_EQ(ok.link(0).u, 0);
  EXPECT_EQ(ok.link(0).v, 1);
}

TEST(Lattice, DistancesOnTheHexagon) {
  const auto d = LatticeGraph::flake(0).node_distances();
  int maxd = 0;
  for (const auto& row : d)
    for (int x : row) maxd = std::max(maxd, x);
  EXPECT_EQ(maxd, 3);
  for (int n = 0; n < 6; ++n) EXPECT_EQ(d[n][n], 0);
}
