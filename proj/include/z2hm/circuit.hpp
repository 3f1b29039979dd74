#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "z2hm/bits.hpp"
#include "z2hm/pauli.hpp"

namespace z2hm {

enum class GateKind { RotZ, RotX, CNOT, PauliInsert, Measure };

// Where a gate sits inside a Trotter layer.
enum class GateRole {
  Field,        // U1 half steps (mass and electric rotations)
  Interaction,  // CNOT blocks around the core
  Core,         // gauge-qubit RotX carrying the interaction angle
  Gdd,          // gauge dynamical decoupling phases
  Twirl,        // randomizing Pauli frames around CNOTs
  Injected,     // deliberate test faults
  Readout,
};

std::string to_string(GateKind kind);
std::string to_string(GateRole role);
GateKind gate_kind_from_string(const std::string& s);
GateRole gate_role_from_string(const std::string& s);

struct Gate {
  GateKind kind = GateKind::RotZ;
  int q0 = 0;
  int q1 = -1;  // CNOT target
  double angle = 0;
  Pauli letter = Pauli::I;  // PauliInsert only
  GateRole role = GateRole::Field;
  int layer = -1;
  int block = -1;  // CNOT block index, -1 outside interaction blocks
  int slot = -1;   // depth slot inside the block

  static Gate rz(int q, double angle, GateRole role = GateRole::Field, int layer = -1);
  static Gate rx(int q, double angle, GateRole role = GateRole::Core, int layer = -1);
  static Gate cnot(int control, int target, int layer = -1, int block = -1, int slot = -1);
  static Gate pauli(int q, Pauli letter, GateRole role = GateRole::Twirl, int layer = -1);
  static Gate measure(int q);

  bool is_rotation() const { return kind == GateKind::RotZ || kind == GateKind::RotX; }
  bool operator==(const Gate& o) const = default;
};

struct CircuitMetadata {
  std::string variant = "trotter";  // trotter | mirror | clifford | custom
  std::string lattice;
  int num_nodes = 0;
  int num_edges = 0;
  double m = 0, g = 0, lambda = 0;
  double t = 0;
  double dt = 0;      // requested step
  double dt_eff = 0;  // t / L
  int layers = 0;
  bool gdd = false;
  std::optional<std::uint64_t> phase_seed;
  std::vector<std::vector<double>> gdd_phases;  // [layer][node]
  std::optional<std::uint64_t> twirl_seed;
  int twirl_index = 0;
  bool operator==(const CircuitMetadata& o) const = default;
};

struct Circuit {
  int num_qubits = 0;
  Bitstring initial;  // prepared basis state, all zeros when empty
  std::vector<Gate> gates;
  CircuitMetadata meta;

  void append(const Gate& g) { gates.push_back(g); }
  // Index one past the last unitary gate (terminal measurements excluded).
  std::size_t unitary_end() const;
  Bitstring initial_bits() const;
  bool operator==(const Circuit& o) const = default;
};

// Two-qubit depth accounting.
struct DepthReport {
  int layers = 0;
  std::vector<int> layer_depths;  // CNOT depth of each Trotter layer
  std::vector<int> block_depths;  // CNOT depth of each interaction block
  int two_qubit_depth = 0;
  long cnot_count = 0;
  long slot_volume = 0;  // two_qubit_depth * N_e: one lane per gauge link
  int max_control_uses_per_slot = 0;
};

DepthReport depth_report(const Circuit& circuit);

// Heisenberg-picture expectation of a Pauli observable for an all-Clifford
// circuit on its initial basis state. Throws when a rotation angle is not a
// multiple of pi/2.
double clifford_expectation(const Circuit& circuit, const PauliString& obs);

// Conjugation through a single gate; Clifford angles only.
PauliString conjugate_forward(const Gate& g, const PauliString& p);

bool is_clifford_angle(double angle);

enum class FaultClass {
  Harmless,                // terminal Z-only, no rotation induced
  CorrectableX,            // terminal X weight 1
  XBurst,                  // terminal X weight 2 or 3 (or more)
  GaugeInvariantRotation,  // Z-only at the end, but it crossed interaction cores
  MeasurementFlip,         // bit flip at the measurement boundary
};

std::string to_string(FaultClass c);

struct RotationEvent {
  std::size_t gate = 0;
  GateRole role = GateRole::Field;
  int qubit = 0;
};

struct FaultReport {
  FaultClass cls = FaultClass::Harmless;
  PauliString terminal;
  int x_weight = 0;
  std::vector<RotationEvent> events;  // non-Clifford rotations the fault anticommuted with
  bool crossed_core() const;
  bool crossed_field() const;
};

// Inserts `letter` on `qubit` just before gates[location] and pushes it to the
// end of the circuit.
FaultReport propagate_fault(const Circuit& circuit, std::size_t location, int qubit, Pauli letter);

std::uint64_t circuit_hash(const Circuit& circuit);
std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

}  // namespace z2hm
