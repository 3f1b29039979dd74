#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "z2hm/bits.hpp"
#include "z2hm/lattice.hpp"
#include "z2hm/pauli.hpp"
#include "z2hm/statevector.hpp"

namespace z2hm {

enum class TermKind { Mass, Electric, Interaction };

struct HamiltonianTerm {
  double coeff = 0;
  PauliString pauli;
  TermKind kind = TermKind::Mass;
  int site = 0;  // node id for mass terms, edge id otherwise
};

// H = -m sum_n Z_n - g sum_e Z_e - lambda sum_e X_u X_e X_v.
class Hamiltonian {
 public:
  Hamiltonian(const LatticeGraph& lattice, double m, double g, double lambda);

  const LatticeGraph& lattice() const { return lattice_; }
  double m() const { return m_; }
  double g() const { return g_; }
  double lambda() const { return lambda_; }
  int num_qubits() const { return lattice_.num_qubits(); }

  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  PauliSum as_sum() const;
  PauliSum part(TermKind kind) const;
  // Sum of |coeff|; bounds the spectral radius.
  double norm_bound() const;

 private:
  LatticeGraph lattice_;
  double m_, g_, lambda_;
  std::vector<HamiltonianTerm> terms_;
};

Hamiltonian build_hamiltonian(const LatticeGraph& lattice, double m, double g, double lambda);

struct BasisConfig {
  Bitstring bits;
  bool physical = true;
};

// True when every Gauss check G_n has even parity on the bitstring.
bool is_physical(const LatticeGraph& lattice, const Bitstring& bits);

// Electric strings along node paths. Each path is a simple walk over
// adjacent nodes; charges sit wherever an odd number of strings end.
BasisConfig prepare_string_state(const LatticeGraph& lattice, const std::vector<int>& path);
BasisConfig prepare_string_state(const LatticeGraph& lattice, const std::vector<std::vector<int>>& paths);

// <psi|P|psi>; throws when P reaches outside the register.
double expectation(const StateVector& state, const PauliString& obs);
double energy(const StateVector& state, const Hamiltonian& h);

// Gauss-law sector: physical configurations are labelled by their gauge bits,
// with each matter bit fixed to the parity of its incident links.
class PhysicalSector {
 public:
  explicit PhysicalSector(const LatticeGraph& lattice);

  std::size_t dimension() const { return std::size_t{1} << num_edges_; }
  std::uint64_t full_index(std::uint64_t gauge_bits) const;
  // Gauge bits of a physical full-register index, nullopt when unphysical.
  std::optional<std::uint64_t> sector_index(std::uint64_t full_index) const;

  // Diagonal of H and the single-link flip amplitude (-lambda) in this basis.
  std::vector<double> diagonal(const Hamiltonian& h) const;

 private:
  int num_nodes_;
  int num_edges_;
  std::vector<std::uint64_t> matter_of_edge_;  // matter mask flipped by each link
};

struct EvolveOptions {
  int qubit_cap = 22;
  // Chebyshev argument per chunk; larger chunks need more terms.
  double chunk = 40.0;
};

// e^{-iHt}|psi> by Chebyshev expansion. States inside the physical sector
// are propagated in the 2^{N_e}-dimensional sector basis.
StateVector exact_evolve(const StateVector& state, const Hamiltonian& h, double t, double tol = 1e-10,
                         const EvolveOptions& options = {});

struct GapResult {
  double gap = 0;  // 0 when the ground state is degenerate
  double e0 = 0;
  double e1 = 0;   // lowest level above the ground multiplet
  int multiplicity = 1;
};

// Dense diagonalization inside the physical sector.
GapResult gap_physical_sector(const Hamiltonian& h, std::size_t max_dimension = 4096);

// Lowest eigenvector of the sector Hamiltonian, embedded in the full register.
StateVector physical_ground_state(const Hamiltonian& h, std::size_t max_dimension = 4096);

// Full sector spectrum, ascending.
std::vector<double> physical_spectrum(const Hamiltonian& h, std::size_t max_dimension = 4096);

}  // namespace z2hm
