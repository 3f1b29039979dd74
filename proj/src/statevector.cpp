#include "z2hm/statevector.hpp"

#include <cmath>

#include "z2hm/errors.hpp"

namespace z2hm {

PauliAction::PauliAction(const PauliString& p) : x(p.x_mask()), z(p.z_mask()) {
  static constexpr Amplitude kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  base = kPowers[(p.phase() + std::popcount(x & z)) % 4];
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 0) throw InvalidArgument("negative register size");
  if (num_qubits > kMaxQubits)
    throw CapacityError("statevector of " + std::to_string(num_qubits) + " qubits exceeds the " +
                        std::to_string(kMaxQubits) + "-qubit limit");
  amps_.assign(std::size_t{1} << num_qubits, Amplitude{0, 0});
  amps_[0] = 1;
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.dimension()) throw InvalidArgument("basis index outside register");
  s.amps_[0] = 0;
  s.amps_[index] = 1;
  return s;
}

StateVector StateVector::from_bits(const Bitstring& bits) {
  return basis(static_cast<int>(bits.size()), bits_to_index(bits));
}

void StateVector::check_qubit(int q) const {
  if (q < 0 || q >= num_qubits_)
    throw InvalidArgument("qubit " + std::to_string(q) + " outside " + std::to_string(num_qubits_) +
                          "-qubit register");
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0) throw InvalidArgument("cannot normalize the zero vector");
  for (auto& a : amps_) a /= n;
}

void StateVector::apply_rz(int q, double theta) {
  check_qubit(q);
  const Amplitude e0 = std::polar(1.0, -theta / 2), e1 = std::polar(1.0, theta / 2);
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & bit) ? e1 : e0;
}

void StateVector::apply_rx(int q, double theta) {
  check_qubit(q);
  const double c = std::cos(theta / 2);
  const Amplitude s{0, -std::sin(theta / 2)};
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const Amplitude a0 = amps_[i], a1 = amps_[i | bit];
    amps_[i] = c * a0 + s * a1;
    amps_[i | bit] = s * a0 + c * a1;
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw InvalidArgument("CNOT control equals target");
  const std::size_t cb = std::size_t{1} << control, tb = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if ((i & cb) && !(i & tb)) std::swap(amps_[i], amps_[i | tb]);
}

void StateVector::apply_pauli(const PauliString& p) {
  if (p.max_qubit() >= num_qubits_) throw InvalidArgument("Pauli string " + p.str() + " outside register");
  const PauliAction act(p);
  if (act.x == 0) {
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= act.factor(i);
    return;
  }
  std::vector<Amplitude> out(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) out[i ^ act.x] = act.factor(i) * amps_[i];
  amps_.swap(out);
}

void StateVector::apply_zz(int a, int b, double theta) {
  check_qubit(a);
  check_qubit(b);
  const Amplitude same = std::polar(1.0, -theta / 2), diff = std::polar(1.0, theta / 2);
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (((i >> a) ^ (i >> b)) & 1U) ? diff : same;
}

void StateVector::apply_diagonal(const std::vector<Amplitude>& diag) {
  if (diag.size() != amps_.size()) throw InvalidArgument("diagonal size does not match register");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= diag[i];
}

Amplitude StateVector::expectation_complex(const PauliString& p) const {
  if (p.max_qubit() >= num_qubits_) throw InvalidArgument("Pauli string " + p.str() + " outside register");
  const PauliAction act(p);
  Amplitude s{0, 0};
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i ^ act.x]) * act.factor(i) * amps_[i];
  return s;
}

double StateVector::expectation(const PauliString& p) const {
  if (!p.is_hermitian()) throw InvalidArgument("expectation of non-Hermitian Pauli string " + p.str());
  return expectation_complex(p).real();
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> out(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) out[i] = std::norm(amps_[i]);
  return out;
}

Amplitude StateVector::inner(const StateVector& other) const {
  if (other.num_qubits_ != num_qubits_) throw InvalidArgument("register size mismatch");
  Amplitude s{0, 0};
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(a.inner(b)); }

}  // namespace z2hm
