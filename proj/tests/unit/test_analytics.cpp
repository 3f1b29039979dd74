#include <gtest/gtest.h>

#include <cmath>

#include "z2hm/analytics.hpp"
#include "z2hm/errors.hpp"
#include "z2hm/model.hpp"

using namespace z2hm;

TEST(Analytics, GlassyAmplitudeLimits) {
  EXPECT_DOUBLE_EQ(glassy_amplitude(0.3, 1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(glassy_amplitude(0.0, 0.0, 5.0), 1.0);
  // g = 0: cos(2 lambda t).
  for (double t : {0.1, 0.7, 2.3}) EXPECT_NEAR(glassy_amplitude(0.0, 1.0, t), std::cos(2 * t), 1e-14);
}

TEST(Analytics, MatterOccupationAtZeroMassFollowsAmplitude) {
  // With m = 0 every link term commutes with the others, so <Z_n(t)> is the
  // product of one amplitude per incident link.
  const auto lat = LatticeGraph::flake(0);
  const double g = 0.4, lambda = 1.0;
  const Hamiltonian h(lat, 0.0, g, lambda);
  const StateVector start(lat.num_qubits());
  for (double t : {0.5, 1.3, 2.9}) {
    const auto s = exact_evolve(start, h, t, 1e-12);
    const double a = glassy_amplitude(g, lambda, t);
    EXPECT_NEAR(expectation(s, PauliString::single(0, Pauli::Z)), a * a, 1e-9) << t;
  }
}

TEST(Analytics, Frequencies) {
  EXPECT_NEAR(bending_frequency(5, 2, 1), 5.0 / 12.0, 1e-15);
  EXPECT_NEAR(2 * M_PI / bending_frequency(5, 2, 1), 15.08, 0.005);
  EXPECT_DOUBLE_EQ(yoyo_frequency(2), 4);
  EXPECT_DOUBLE_EQ(m0_gap(3, 4), 10);
  EXPECT_NEAR(m0_ansatz_angle(1, 1), M_PI / 8, 1e-15);
  EXPECT_DOUBLE_EQ(effective_plaquette(2, 2), 0.25 * 64 / 32);
  EXPECT_THROW(bending_frequency(1, 0, 1), InvalidArgument);
  EXPECT_THROW(effective_plaquette(0, 1), InvalidArgument);
}

TEST(Analytics, ClosedFormTrotterTermsMatchCommutators) {
  for (const auto& lat : {LatticeGraph::flake(0), LatticeGraph::flake(1), LatticeGraph::chain(5),
                          LatticeGraph::brick(1, 2), LatticeGraph::brick(2, 2)}) {
    for (double m : {0.0, 0.5, 5.0})
      for (double g : {0.0, 0.3, 2.0}) {
        const auto a = trotter_terms_closed_form(lat, m, g, 1.0);
        const auto b = trotter_terms_commutator(lat, m, g, 1.0);
        const double scale = 1 + std::abs(b.inner) + std::abs(b.outer_mass);
        EXPECT_NEAR(a.outer_electric, b.outer_electric, 1e-9 * scale) << lat.describe() << " m=" << m << " g=" << g;
        EXPECT_NEAR(a.outer_mass, b.outer_mass, 1e-9 * scale) << lat.describe() << " m=" << m << " g=" << g;
        EXPECT_NEAR(a.inner, b.inner, 1e-9 * scale) << lat.describe() << " m=" << m << " g=" << g;
      }
  }
}

TEST(Analytics, TrotterBoundTableRow) {
  EXPECT_NEAR(trotter_error_bound(LatticeGraph::brick(3, 3), 5, 0.01, 1, 4, 0.125), 60.50, 0.005);
}

TEST(Analytics, TrotterBoundVanishesWithoutFields) {
  EXPECT_DOUBLE_EQ(trotter_error_bound(LatticeGraph::flake(0), 0, 0, 1, 3, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(trotter_error_bound_commutator(LatticeGraph::flake(0), 0, 0, 1, 3, 0.1), 0.0);
}

TEST(Analytics, TrotterBoundScaling) {
  const auto lat = LatticeGraph::flake(0);
  const double b = trotter_error_bound(lat, 1, 1, 1, 2, 0.1);
  EXPECT_NEAR(trotter_error_bound(lat, 1, 1, 1, 4, 0.1), 2 * b, 1e-12);
  EXPECT_NEAR(trotter_error_bound(lat, 1, 1, 1, 2, 0.2), 4 * b, 1e-12);
  EXPECT_THROW(trotter_error_bound(lat, 1, 1, 1, 2, 0.0), InvalidArgument);
}
