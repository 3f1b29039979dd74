#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "z2hm/bits.hpp"
#include "z2hm/circuit.hpp"
#include "z2hm/pauli.hpp"
#include "z2hm/statevector.hpp"

namespace z2hm {

// Stochastic Pauli noise attached to gates, plus readout flips.
struct NoiseModel {
  // After every RotX (and RotZ unless virtual_rz): X, Y, Z with relative weights.
  double p1 = 0;
  std::array<double, 3> p1_weights{1, 1, 1};
  // RotZ is a frame change on the hardware the model mimics: noiseless.
  bool virtual_rz = true;
  // After every CNOT: the 15 non-identity pairs (control letter, target letter)
  // in the order IX, IY, IZ, XI, XX, ..., ZZ, with relative weights.
  double p2 = 0;
  std::array<double, 15> p2_weights = uniform15();
  double p_meas = 0;
  // exp(-i eps/2 Z_c Z_t) after every CNOT, before its noise and compensation.
  double coherent_zz = 0;
  // Pauli channel applied once after the circuit: weight w_i for string P_i.
  std::vector<std::pair<PauliString, double>> terminal_channel;

  static constexpr std::array<double, 15> uniform15() {
    std::array<double, 15> w{};
    for (auto& x : w) x = 1;
    return w;
  }
  void validate() const;
  bool is_noiseless() const;
  // Multiplies every rate (and the coherent angle) by s.
  NoiseModel scaled(double s) const;
  bool operator==(const NoiseModel& o) const = default;
};

struct ShotRecord {
  Bitstring bits;
  std::uint64_t seed = 0;  // error-pattern stream of this shot
  int twirl_index = 0;
  int flips = -1;  // decoder flip count, -1 until decoded
  bool operator==(const ShotRecord& o) const = default;
};

struct ShotTable {
  int num_qubits = 0;
  std::uint64_t circuit_hash = 0;
  std::uint64_t master_seed = 0;
  std::vector<ShotRecord> shots;

  std::size_t size() const { return shots.size(); }
  void append(const ShotTable& other);
  bool operator==(const ShotTable& o) const = default;
};

struct SimulatorOptions {
  int qubit_cap = 22;
  int threads = 0;  // 0: hardware concurrency
};

// Noiseless gate-by-gate application; Measure gates are ignored.
StateVector apply_circuit(const StateVector& state, const Circuit& circuit);
// Starts from the circuit's initial bitstring.
StateVector apply_circuit(const Circuit& circuit);

// Quantum-trajectory sampling. Shot i draws its error pattern from
// derive_seed(seed, {i, 0}) and its measurement from derive_seed(seed, {i, 1}),
// so results do not depend on the thread count.
ShotTable run_trajectories(const Circuit& circuit, const NoiseModel& noise, int shots, std::uint64_t seed,
                           const SimulatorOptions& options = {});

inline constexpr int kDensityOracleCap = 10;

// tr(rho_f O) by exact density-matrix evolution; readout flips act as a
// bit-flip channel before measurement.
double exact_channel_expectation(const Circuit& circuit, const NoiseModel& noise, const PauliString& obs);

}  // namespace z2hm
