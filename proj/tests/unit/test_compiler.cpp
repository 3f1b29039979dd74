#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "z2hm/compiler.hpp"
#include "z2hm/errors.hpp"
#include "z2hm/model.hpp"
#include "z2hm/rng.hpp"
#include "z2hm/simulator.hpp"

using namespace z2hm;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector random_state(int n, std::uint64_t seed) {
  Rng rng(seed);
  StateVector s(n);
  for (auto& a : s.amplitudes()) a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  s.normalize();
  return s;
}

Circuit small_quench(bool gdd = false, double t = 1.0, double dt = 0.25) {
  const auto lat = LatticeGraph::flake(0);
  const auto init = prepare_string_state(lat, std::vector<int>{0, 1, 3}).bits;
  CompileOptions opt;
  opt.gdd = gdd;
  opt.phase_seed = 99;
  return trotter_circuit(lat, {0.7, 0.3, 1.0, t, dt}, opt, init);
}

std::size_t first_core_gate(const Circuit& c, int layer) {
  for (std::size_t i = 0; i < c.gates.size(); ++i)
    if (c.gates[i].role == GateRole::Core && c.gates[i].layer == layer) return i;
  return c.gates.size();
}

}  // namespace

TEST(Compiler, GadgetEqualsPauliExponential) {
  const auto lat = LatticeGraph::chain(2);  // qubits: nodes 0,1; link 2
  const double angle = 0.37;
  const auto psi = random_state(3, 5);
  Circuit c;
  c.num_qubits = 3;
  c.gates = pauli_gadget(lat, 0, angle);
  const auto got = apply_circuit(psi, c);
  StateVector xxx = psi;
  xxx.apply_pauli(PauliString::x_on({0, 1, 2}));
  StateVector want = psi;
  for (std::size_t i = 0; i < want.dimension(); ++i)
    want.amplitudes()[i] = std::cos(angle) * psi[i] + Amplitude(0, std::sin(angle)) * xxx[i];
  EXPECT_NEAR(std::abs(want.inner(got) - Amplitude(1, 0)), 0.0, 1e-13);
}

TEST(Compiler, OneLayerMatchesProductOfExponentials) {
  const auto lat = LatticeGraph::flake(0);
  const double m = 0.9, g = 0.4, lambda = 1.2, dt = 0.3;
  const auto psi = random_state(lat.num_qubits(), 11);
  Circuit c = trotter_circuit(lat, {m, g, lambda, 2 * dt, dt}, {.measure = false});
  ASSERT_EQ(c.meta.layers, 2);
  // Oracle: apply U1(dt/2) U3(dt) U1(dt/2) twice with closed-form exponentials.
  StateVector want = psi;
  auto u1 = [&](StateVector& s) {
    for (int n = 0; n < lat.num_nodes(); ++n) s.apply_rz(lat.node_qubit(n), -m * dt);
    for (int e = 0; e < lat.num_edges(); ++e) s.apply_rz(lat.edge_qubit(e), -g * dt);
  };
  for (int k = 0; k < 2; ++k) {
    u1(want);
    for (int e = 0; e < lat.num_edges(); ++e) {
      const auto& l = lat.link(e);
      StateVector x = want;
      x.apply_pauli(PauliString::x_on({lat.node_qubit(l.u), lat.edge_qubit(e), lat.node_qubit(l.v)}));
      for (std::size_t i = 0; i < want.dimension(); ++i)
        want.amplitudes()[i] = std::cos(lambda * dt) * want[i] + Amplitude(0, std::sin(lambda * dt)) * x[i];
    }
    u1(want);
  }
  EXPECT_NEAR(fidelity(apply_circuit(psi, c), want), 1.0, 1e-12);
}

TEST(Compiler, LayerCountIsEvenAndCoversTime) {
  EXPECT_EQ(trotter_layers(1.0, 0.3), 4);
  EXPECT_EQ(trotter_layers(0.5, 0.25), 2);
  EXPECT_EQ(trotter_layers(0.3, 0.1), 4);
  EXPECT_EQ(trotter_layers(0.0, 0.1), 0);
  EXPECT_EQ(trotter_layers(0.01, 1.0), 2);
  EXPECT_THROW(trotter_layers(1.0, 0.0), InvalidArgument);
  EXPECT_THROW(trotter_layers(-1.0, 0.1), InvalidArgument);
  const auto c = small_quench(false, 1.0, 0.3);
  EXPECT_NEAR(c.meta.dt_eff * c.meta.layers, 1.0, 1e-14);
  EXPECT_LE(c.meta.dt_eff, 0.3);
}

TEST(Compiler, DepthSixPerLayer) {
  for (const auto& lat : {LatticeGraph::flake(0), LatticeGraph::flake(1), LatticeGraph::brick(2, 3)}) {
    const auto c = trotter_circuit(lat, {1, 1, 1, 1.0, 0.25});
    const auto r = depth_report(c);
    EXPECT_EQ(r.layers, 4);
    ASSERT_EQ(r.layer_depths.size(), 4u);
    for (int d : r.layer_depths) EXPECT_EQ(d, 6);
    for (int d : r.block_depths) EXPECT_EQ(d, 3);
    EXPECT_EQ(r.cnot_count, 4L * 4 * lat.num_edges());
    EXPECT_EQ(r.two_qubit_depth, 24);
    EXPECT_EQ(r.slot_volume, 24L * lat.num_edges());
    EXPECT_EQ(r.max_control_uses_per_slot, 1);
  }
}

TEST(Compiler, GddLeavesPhysicalDynamicsUnchanged) {
  const auto plain = apply_circuit(small_quench(false));
  const auto with = small_quench(true);
  EXPECT_TRUE(with.meta.gdd);
  EXPECT_EQ(depth_report(with).layer_depths, depth_report(small_quench(false)).layer_depths);
  EXPECT_NEAR(fidelity(plain, apply_circuit(with)), 1.0, 1e-12);
  for (const auto& row : with.meta.gdd_phases) EXPECT_EQ(row.size(), 6u);
  EXPECT_THROW(insert_gdd(with, 1), InvalidArgument);
}

TEST(Compiler, GddPhasesSumToZero) {
  const auto ph = sample_gdd_phases(8, 5, 3);
  for (int n = 0; n < 5; ++n) {
    double s = 0;
    for (int k = 0; k < 8; ++k) {
      EXPECT_LE(std::abs(ph[k][n]), kPi + 1e-12);
      s += ph[k][n];
    }
    EXPECT_NEAR(std::remainder(s, 2 * kPi), 0.0, 1e-12);
  }
}

TEST(Compiler, TwirlPreservesTheUnitary) {
  const auto base = small_quench();
  const auto ref = apply_circuit(base);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto tw = twirl(base, seed);
    EXPECT_GT(tw.gates.size(), base.gates.size());
    EXPECT_NEAR(fidelity(ref, apply_circuit(tw)), 1.0, 1e-12);
  }
  EXPECT_EQ(twirl(base, 4), twirl(base, 4));
}

TEST(Compiler, MirrorReturnsToStart) {
  for (bool gdd : {false, true}) {
    const auto c = small_quench(gdd);
    const auto mir = mirror_calibration(c);
    EXPECT_EQ(mir.meta.variant, "mirror");
    const auto out = apply_circuit(mir);
    EXPECT_NEAR(fidelity(out, StateVector::from_bits(c.initial)), 1.0, 1e-12);
    EXPECT_EQ(depth_report(mir).two_qubit_depth, depth_report(c).two_qubit_depth);
  }
}

TEST(Compiler, CliffordSnapping) {
  EXPECT_EQ(snap_clifford_angle(0.0), 0.0);
  EXPECT_EQ(snap_clifford_angle(kPi / 4), 0.0);
  EXPECT_EQ(snap_clifford_angle(-kPi / 4), 0.0);
  EXPECT_DOUBLE_EQ(snap_clifford_angle(3 * kPi / 4), kPi / 2);
  EXPECT_DOUBLE_EQ(snap_clifford_angle(0.8), kPi / 2);
  EXPECT_DOUBLE_EQ(snap_clifford_angle(-0.8), -kPi / 2);
  EXPECT_DOUBLE_EQ(snap_clifford_angle(3.0), kPi);
  const auto c = cliffordize(trotter_circuit(LatticeGraph::flake(0), {1.0, 0.5, 2.0, 2.0, 0.5}));
  for (const auto& g : c.gates)
    if (g.is_rotation()) EXPECT_TRUE(is_clifford_angle(g.angle));
  // The stabilizer route agrees with the statevector on every single-qubit Z.
  const auto s = apply_circuit(c);
  for (int q = 0; q < c.num_qubits; ++q) {
    const auto z = PauliString::single(q, Pauli::Z);
    EXPECT_NEAR(clifford_expectation(c, z), s.expectation(z), 1e-12) << q;
  }
  EXPECT_THROW(clifford_expectation(small_quench(), PauliString::single(0, Pauli::Z)), InvalidArgument);
}

TEST(Compiler, CircuitJsonRoundTrip) {
  const auto c = twirl(small_quench(true), 17);
  const auto back = circuit_from_json(circuit_to_json(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(circuit_hash(back), circuit_hash(c));
  EXPECT_NE(circuit_hash(c), circuit_hash(small_quench(true)));
}

TEST(Compiler, FaultPropagation) {
  const auto c = small_quench();
  const int gauge0 = c.meta.num_nodes;
  // Matter Z at the start turns into the Gauss operator across the core and back.
  auto r = propagate_fault(c, 0, 0, Pauli::Z);
  EXPECT_EQ(r.cls, FaultClass::GaugeInvariantRotation);
  EXPECT_EQ(r.terminal, PauliString::single(0, Pauli::Z));
  EXPECT_TRUE(r.crossed_core());
  // Matter X is a single correctable flip.
  r = propagate_fault(c, 0, 0, Pauli::X);
  EXPECT_EQ(r.cls, FaultClass::CorrectableX);
  EXPECT_EQ(r.x_weight, 1);
  // Gauge X between the CNOT blocks leaves as X_u X_e X_v.
  r = propagate_fault(c, first_core_gate(c, c.meta.layers - 1), gauge0, Pauli::X);
  EXPECT_EQ(r.cls, FaultClass::XBurst);
  EXPECT_EQ(r.x_weight, 3);
  // At the measurement boundary.
  EXPECT_EQ(propagate_fault(c, c.unitary_end(), 2, Pauli::X).cls, FaultClass::MeasurementFlip);
  EXPECT_EQ(propagate_fault(c, c.unitary_end(), 2, Pauli::Z).cls, FaultClass::Harmless);
  EXPECT_THROW(propagate_fault(c, 0, 0, Pauli::I), InvalidArgument);
}
