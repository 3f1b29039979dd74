#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "z2hm/errors.hpp"
#include "z2hm/model.hpp"
#include "z2hm/rng.hpp"

using namespace z2hm;

namespace {

using Dense = Eigen::MatrixXcd;

Dense dense_matrix(const Hamiltonian& h) {
  const std::size_t dim = std::size_t{1} << h.num_qubits();
  Dense m = Dense::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& term : h.terms()) {
    const PauliAction act(term.pauli);
    for (std::size_t i = 0; i < dim; ++i)
      m(static_cast<Eigen::Index>(i ^ act.x), static_cast<Eigen::Index>(i)) += term.coeff * act.factor(i);
  }
  return m;
}

// e^{-iHt} psi through a full eigendecomposition.
Eigen::VectorXcd dense_evolve(const Dense& h, const Eigen::VectorXcd& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Dense> es(h);
  const Eigen::VectorXcd phases = (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0, -t))
                                      .array()
                                      .exp();
  return es.eigenvectors() * phases.asDiagonal() * (es.eigenvectors().adjoint() * psi);
}

Eigen::VectorXcd to_eigen(const StateVector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dimension()));
  for (std::size_t i = 0; i < s.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

StateVector random_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  StateVector s(n);
  for (auto& a : s.amplitudes()) a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  s.normalize();
  return s;
}

}  // namespace

TEST(Model, HamiltonianTermCounts) {
  const auto lat = LatticeGraph::flake(1);
  const Hamiltonian h(lat, 1.5, 0.5, 2.0);
  EXPECT_EQ(h.terms().size(), static_cast<std::size_t>(lat.num_nodes() + 2 * lat.num_edges()));
  EXPECT_DOUBLE_EQ(h.norm_bound(), 1.5 * 24 + 0.5 * 30 + 2.0 * 30);
  for (const auto& t : h.terms())
    if (t.kind == TermKind::Interaction) {
      const auto& l = lat.link(t.site);
      EXPECT_EQ(t.pauli, PauliString::x_on({lat.node_qubit(l.u), lat.edge_qubit(t.site), lat.node_qubit(l.v)}));
      EXPECT_DOUBLE_EQ(t.coeff, -2.0);
    }
}

TEST(Model, HamiltonianCommutesWithGaussLaw) {
  const auto lat = LatticeGraph::flake(1);
  const PauliSum h = Hamiltonian(lat, 0.7, 1.3, 0.9).as_sum();
  for (int n = 0; n < lat.num_nodes(); ++n) {
    PauliSum g;
    g.add(1.0, gauge_generator(lat, n));
    EXPECT_TRUE(commutator(h, g).simplified().terms().empty()) << "node " << n;
  }
}

TEST(Model, ExactEvolveMatchesDenseOracle) {
  const auto lat = LatticeGraph::chain(3);
  const Hamiltonian h(lat, 0.8, 0.4, 1.1);
  const Dense hd = dense_matrix(h);
  // Generic state: leaves the physical sector, exercises the full-register path.
  const auto psi = random_state(lat.num_qubits(), 7);
  for (double t : {0.3, 2.0, 7.5}) {
    const auto got = to_eigen(exact_evolve(psi, h, t, 1e-12));
    const auto want = dense_evolve(hd, to_eigen(psi), t);
    EXPECT_LT((got - want).norm(), 1e-9) << "t=" << t;
  }
  // Physical basis state: goes through the sector basis.
  const auto s = prepare_string_state(lat, std::vector<int>{0, 1, 2});
  const auto basis = StateVector::from_bits(s.bits);
  const auto got = to_eigen(exact_evolve(basis, h, 3.0, 1e-12));
  EXPECT_LT((got - dense_evolve(hd, to_eigen(basis), 3.0)).norm(), 1e-9);
}

TEST(Model, EvolutionConservesGaussLaw) {
  const auto lat = LatticeGraph::flake(0);
  const Hamiltonian h(lat, 1.0, 0.5, 1.0);
  const auto start = StateVector::from_bits(prepare_string_state(lat, std::vector<int>{0, 1, 3}).bits);
  const auto out = exact_evolve(start, h, 4.0);
  for (int n = 0; n < lat.num_nodes(); ++n)
    EXPECT_NEAR(expectation(out, gauge_generator(lat, n)), expectation(start, gauge_generator(lat, n)), 1e-10);
  EXPECT_NEAR(energy(out, h), energy(start, h), 1e-9);
  EXPECT_NEAR(out.norm(), 1.0, 1e-12);
}

TEST(Model, SectorSpectrumIsPartOfFullSpectrum) {
  const auto lat = LatticeGraph::chain(4);
  const Hamiltonian h(lat, 0.6, 0.3, 1.0);
  const auto sector = physical_spectrum(h);
  EXPECT_EQ(sector.size(), std::size_t{1} << lat.num_edges());
  Eigen::SelfAdjointEigenSolver<Dense> es(dense_matrix(h), Eigen::EigenvaluesOnly);
  const auto full = es.eigenvalues();
  for (double e : sector) {
    double best = 1e9;
    for (Eigen::Index i = 0; i < full.size(); ++i) best = std::min(best, std::abs(full(i) - e));
    EXPECT_LT(best, 1e-9) << e;
  }
}

TEST(Model, GapAtZeroMassIsClosedForm) {
  const auto lat = LatticeGraph::flake(0);
  for (double g : {0.5, 1.0, 2.0}) {
    const auto gap = gap_physical_sector(Hamiltonian(lat, 0.0, g, 1.0));
    EXPECT_NEAR(gap.gap, 2 * std::sqrt(g * g + 1.0), 1e-10);
  }
}

TEST(Model, SectorIndexRoundTrip) {
  const auto lat = LatticeGraph::flake(0);
  const PhysicalSector sec(lat);
  EXPECT_EQ(sec.dimension(), 64u);
  for (std::uint64_t k = 0; k < sec.dimension(); ++k) {
    const auto full = sec.full_index(k);
    EXPECT_TRUE(is_physical(lat, index_to_bits(full, lat.num_qubits())));
    EXPECT_EQ(sec.sector_index(full), k);
  }
  EXPECT_FALSE(sec.sector_index(1).has_value());  // lone charge on node 0
}

TEST(Model, StringStates) {
  const auto lat = LatticeGraph::flake(0);
  const auto open = prepare_string_state(lat, std::vector<int>{0, 1, 3});
  EXPECT_TRUE(open.physical);
  EXPECT_EQ(open.bits[0], 1);
  EXPECT_EQ(open.bits[3], 1);
  EXPECT_EQ(open.bits[1], 0);  // interior node: two string ends cancel
  EXPECT_EQ(popcount(open.bits), 4);
  EXPECT_THROW(prepare_string_state(lat, std::vector<int>{0, 5}), LatticeError);
  EXPECT_THROW(prepare_string_state(lat, std::vector<int>{0, 1, 0}), LatticeError);
  EXPECT_THROW(prepare_string_state(lat, std::vector<int>{2}), LatticeError);
}

TEST(Model, EvolveRespectsQubitCap) {
  const auto lat = LatticeGraph::chain(6);
  const Hamiltonian h(lat, 1, 1, 1);
  EvolveOptions opts;
  opts.qubit_cap = 8;
  EXPECT_THROW(exact_evolve(StateVector(lat.num_qubits()), h, 1.0, 1e-10, opts), CapacityError);
  EXPECT_THROW(exact_evolve(StateVector(4), h, 1.0), InvalidArgument);
}
