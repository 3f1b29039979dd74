#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "z2hm/analytics.hpp"
#include "z2hm/circuit.hpp"
#include "z2hm/lattice.hpp"
#include "z2hm/rng.hpp"

namespace z2hm {

// CNOT(e->u) CNOT(e->v) RotX_e(-2 angle) CNOT(e->v) CNOT(e->u), which equals
// exp(+i angle X_u X_e X_v).
std::vector<Gate> pauli_gadget(const LatticeGraph& lattice, int edge, double angle);

// L = ceil(t / dt), bumped to the next even number.
int trotter_layers(double t, double dt);

struct CompileOptions {
  bool gdd = false;
  std::uint64_t phase_seed = 0;
  std::optional<std::uint64_t> twirl_seed;
  bool measure = true;  // append terminal Z measurements
};

// Second-order product formula: per layer U1(dt/2) V Core V U1(dt/2), where V
// is the depth-3 block of gauge-to-matter CNOTs and Core the gauge RotX.
// t = 0 yields an empty (L = 0) circuit.
Circuit trotter_circuit(const LatticeGraph& lattice, const QuenchParams& params, const CompileOptions& options = {},
                        const Bitstring& initial = {});

// Per-node phase sequences of length `layers`: uniform in [-pi, pi], mean
// removed and re-wrapped, so each node's phases sum to 0 mod 2 pi.
std::vector<std::vector<double>> sample_gdd_phases(int layers, int nodes, std::uint64_t phase_seed);

// Adds exp(-i phi_{k,n} G_n) for every layer k and node n as RotZ(2 phi) on the
// matter qubit inside the core, where the CNOT blocks map Z_n onto G_n.
Circuit insert_gdd(const Circuit& circuit, std::uint64_t phase_seed);

// Wraps every CNOT with a uniformly drawn Pauli pair and its conjugated
// compensation.
Circuit twirl(const Circuit& circuit, std::uint64_t seed);

// First L/2 layers followed by their inverse.
Circuit mirror_calibration(const Circuit& circuit);

// Nearest multiple of pi/2, ties toward zero.
double snap_clifford_angle(double angle);
Circuit cliffordize(const Circuit& circuit);

}  // namespace z2hm
