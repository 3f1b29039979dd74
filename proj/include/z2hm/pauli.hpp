#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace z2hm {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

// Signed tensor product of single-qubit Pauli letters over an unbounded
// register. Stored in symplectic form (x bits, z bits; Y sets both) with a
// global factor i^phase, so products stay closed under multiplication.
class PauliString {
 public:
  PauliString() = default;

  static PauliString single(int qubit, Pauli p);
  static PauliString z_on(const std::vector<int>& qubits);
  static PauliString x_on(const std::vector<int>& qubits);

  // Accepts "I", "Z3", "X1 X4 X2", "-Z0 Z1", "+i X2". Repeated qubits multiply.
  static PauliString parse(std::string_view text);

  Pauli letter(int qubit) const;
  void set(int qubit, Pauli p);

  // Global factor is i^phase(), phase in {0,1,2,3}.
  int phase() const { return phase_; }
  std::complex<double> coefficient() const;
  bool is_hermitian() const { return phase_ % 2 == 0; }
  // +1 or -1; throws for the anti-Hermitian phases.
  int sign() const;
  PauliString negated() const;
  PauliString with_phase(int phase) const;

  std::vector<int> support() const;
  int weight() const;
  // Largest qubit with a non-identity letter, or -1.
  int max_qubit() const;
  bool is_identity() const { return x_.empty() && z_.empty(); }
  bool is_diagonal() const { return x_.empty(); }

  bool commutes_with(const PauliString& other) const;
  // Number of qubits where both act non-trivially with different letters.
  int anticommuting_overlap(const PauliString& other) const;

  friend PauliString operator*(const PauliString& a, const PauliString& b);

  // Masks for registers below 64 qubits (the statevector paths).
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;

  // Letters sorted by qubit, sign prefixed only when not +1.
  std::string str() const;

  bool same_letters(const PauliString& other) const { return x_ == other.x_ && z_ == other.z_; }
  bool operator==(const PauliString& other) const = default;
  // Orders by letters first, then phase; lets PauliString key a std::map.
  bool operator<(const PauliString& other) const;

 private:
  void trim();

  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
  int phase_ = 0;
};

// Weighted sum of Pauli strings with like terms combined.
struct PauliTerm {
  std::complex<double> coeff;
  PauliString pauli;  // phase folded into coeff, stored with phase 0
};

class PauliSum {
 public:
  void add(std::complex<double> coeff, const PauliString& p);
  const std::vector<PauliTerm>& terms() const { return terms_; }
  // Combines like terms and drops those below tol in magnitude.
  PauliSum simplified(double tol = 1e-14) const;
  // Sum of |coeff| over terms: a triangle-inequality bound on the spectral norm.
  double one_norm() const;

  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);
  friend PauliSum operator+(const PauliSum& a, const PauliSum& b);
  friend PauliSum operator-(const PauliSum& a, const PauliSum& b);
  friend PauliSum operator*(std::complex<double> s, const PauliSum& a);

 private:
  std::vector<PauliTerm> terms_;
};

PauliSum commutator(const PauliSum& a, const PauliSum& b);

}  // namespace z2hm
