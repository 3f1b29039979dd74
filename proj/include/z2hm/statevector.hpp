#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <vector>

#include "z2hm/bits.hpp"
#include "z2hm/pauli.hpp"

namespace z2hm {

using Amplitude = std::complex<double>;

// Dense amplitude array over 2^Q basis states; basis index bit q is qubit q.
class StateVector {
 public:
  static constexpr int kMaxQubits = 30;

  // |0...0>.
  explicit StateVector(int num_qubits);
  static StateVector basis(int num_qubits, std::uint64_t index);
  static StateVector from_bits(const Bitstring& bits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  std::vector<Amplitude>& amplitudes() { return amps_; }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  Amplitude operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  void normalize();

  // exp(-i theta Z / 2).
  void apply_rz(int q, double theta);
  // exp(-i theta X / 2).
  void apply_rx(int q, double theta);
  void apply_cnot(int control, int target);
  // Applies the Pauli string including its phase.
  void apply_pauli(const PauliString& p);
  // exp(-i theta Z_a Z_b / 2).
  void apply_zz(int a, int b, double theta);
  // Elementwise multiply by a full diagonal.
  void apply_diagonal(const std::vector<Amplitude>& diag);

  Amplitude expectation_complex(const PauliString& p) const;
  // Real part of <P>; P must be Hermitian.
  double expectation(const PauliString& p) const;
  std::vector<double> probabilities() const;
  // <this|other>.
  Amplitude inner(const StateVector& other) const;

 private:
  void check_qubit(int q) const;

  int num_qubits_;
  std::vector<Amplitude> amps_;
};

double fidelity(const StateVector& a, const StateVector& b);

// P|i> = factor(i) |i ^ x_mask>; factor includes the string's phase and Y letters.
struct PauliAction {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  Amplitude base{1, 0};  // i^(phase + #Y)
  explicit PauliAction(const PauliString& p);
  Amplitude factor(std::uint64_t index) const {
    return (std::popcount(index & z) & 1) ? -base : base;
  }
};

}  // namespace z2hm
