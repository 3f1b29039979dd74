#include "z2hm/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <sstream>

#include "z2hm/errors.hpp"

namespace z2hm {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw InvalidArgument(std::string("not a Pauli letter: '") + c + "'");
}

PauliString PauliString::single(int qubit, Pauli p) {
  PauliString s;
  s.set(qubit, p);
  return s;
}

PauliString PauliString::z_on(const std::vector<int>& qubits) {
  PauliString s;
  for (int q : qubits) s = s * single(q, Pauli::Z);
  return s;
}

PauliString PauliString::x_on(const std::vector<int>& qubits) {
  PauliString s;
  for (int q : qubits) s = s * single(q, Pauli::X);
  return s;
}

PauliString PauliString::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tok;
  PauliString out;
  int phase = 0;
  bool first = true;
  while (in >> tok) {
    if (first && (tok == "-" || tok == "+" || tok == "i" || tok == "-i" || tok == "+i")) {
      if (tok == "-") phase = 2;
      if (tok == "i" || tok == "+i") phase = 1;
      if (tok == "-i") phase = 3;
      first = false;
      continue;
    }
    first = false;
    if (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) {
      if (tok[0] == '-') phase = (phase + 2) % 4;
      tok.erase(0, 1);
    }
    if (tok == "I") continue;
    if (tok.size() < 2) throw InvalidArgument("malformed Pauli token '" + tok + "'");
    const Pauli p = pauli_from_char(tok[0]);
    int q = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(tok[i])))
        throw InvalidArgument("malformed Pauli token '" + tok + "'");
      q = q * 10 + (tok[i] - '0');
    }
    out = out * single(q, p);
  }
  return out.with_phase((out.phase_ + phase) % 4);
}

Pauli PauliString::letter(int qubit) const {
  const std::size_t w = static_cast<std::size_t>(qubit) / 64;
  const int b = qubit % 64;
  const bool x = w < x_.size() && ((x_[w] >> b) & 1U);
  const bool z = w < z_.size() && ((z_[w] >> b) & 1U);
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

void PauliString::set(int qubit, Pauli p) {
  if (qubit < 0) throw InvalidArgument("negative qubit index");
  const std::size_t w = static_cast<std::size_t>(qubit) / 64;
  const std::uint64_t bit = std::uint64_t{1} << (qubit % 64);
  if (x_.size() <= w) x_.resize(w + 1, 0);
  if (z_.size() <= w) z_.resize(w + 1, 0);
  const bool x = p == Pauli::X || p == Pauli::Y;
  const bool z = p == Pauli::Z || p == Pauli::Y;
  x_[w] = x ? (x_[w] | bit) : (x_[w] & ~bit);
  z_[w] = z ? (z_[w] | bit) : (z_[w] & ~bit);
  trim();
}

void PauliString::trim() {
  while (!x_.empty() && x_.back() == 0) x_.pop_back();
  while (!z_.empty() && z_.back() == 0) z_.pop_back();
}

std::complex<double> PauliString::coefficient() const {
  static constexpr std::complex<double> kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[phase_];
}

int PauliString::sign() const {
  if (!is_hermitian()) throw InvalidArgument("Pauli string " + str() + " has an imaginary phase");
  return phase_ == 0 ? 1 : -1;
}

PauliString PauliString::negated() const { return with_phase((phase_ + 2) % 4); }

PauliString PauliString::with_phase(int phase) const {
  PauliString s = *this;
  s.phase_ = ((phase % 4) + 4) % 4;
  return s;
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  const std::size_t n = std::max(x_.size(), z_.size());
  for (std::size_t w = 0; w < n; ++w) {
    std::uint64_t bits = (w < x_.size() ? x_[w] : 0) | (w < z_.size() ? z_[w] : 0);
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(static_cast<int>(w * 64) + b);
      bits &= bits - 1;
    }
  }
  return out;
}

int PauliString::weight() const {
  int n = 0;
  const std::size_t words = std::max(x_.size(), z_.size());
  for (std::size_t w = 0; w < words; ++w)
    n += std::popcount((w < x_.size() ? x_[w] : 0) | (w < z_.size() ? z_[w] : 0));
  return n;
}

int PauliString::max_qubit() const {
  const auto s = support();
  return s.empty() ? -1 : s.back();
}

bool PauliString::commutes_with(const PauliString& other) const {
  return anticommuting_overlap(other) % 2 == 0;
}

int PauliString::anticommuting_overlap(const PauliString& o) const {
  int n = 0;
  const std::size_t words = std::max({x_.size(), z_.size(), o.x_.size(), o.z_.size()});
  auto at = [](const std::vector<std::uint64_t>& v, std::size_t w) { return w < v.size() ? v[w] : 0; };
  for (std::size_t w = 0; w < words; ++w)
    n += std::popcount((at(x_, w) & at(o.z_, w)) ^ (at(z_, w) & at(o.x_, w)));
  return n;
}

PauliString operator*(const PauliString& a, const PauliString& b) {
  const std::size_t words = std::max({a.x_.size(), a.z_.size(), b.x_.size(), b.z_.size()});
  auto at = [](const std::vector<std::uint64_t>& v, std::size_t w) { return w < v.size() ? v[w] : 0; };
  PauliString out;
  out.x_.resize(words);
  out.z_.resize(words);
  int phase = a.phase_ + b.phase_;
  for (std::size_t w = 0; w < words; ++w) {
    const std::uint64_t x1 = at(a.x_, w), z1 = at(a.z_, w), x2 = at(b.x_, w), z2 = at(b.z_, w);
    // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
    const std::uint64_t plus = (x1 & ~z1 & x2 & z2) | (x1 & z1 & ~x2 & z2) | (~x1 & z1 & x2 & ~z2);
    const std::uint64_t minus = (x1 & z1 & x2 & ~z2) | (~x1 & z1 & x2 & z2) | (x1 & ~z1 & ~x2 & z2);
    phase += std::popcount(plus) - std::popcount(minus);
    out.x_[w] = x1 ^ x2;
    out.z_[w] = z1 ^ z2;
  }
  out.phase_ = ((phase % 4) + 4) % 4;
  out.trim();
  return out;
}

std::uint64_t PauliString::x_mask() const {
  if (x_.size() > 1) throw InvalidArgument("Pauli string exceeds 64-qubit mask");
  return x_.empty() ? 0 : x_[0];
}

std::uint64_t PauliString::z_mask() const {
  if (z_.size() > 1) throw InvalidArgument("Pauli string exceeds 64-qubit mask");
  return z_.empty() ? 0 : z_[0];
}

std::string PauliString::str() const {
  std::string prefix;
  switch (phase_) {
    case 1: prefix = "i "; break;
    case 2: prefix = "-"; break;
    case 3: prefix = "-i "; break;
    default: break;
  }
  const auto sup = support();
  if (sup.empty()) return prefix + "I";
  std::string body;
  for (int q : sup) {
    if (!body.empty()) body += ' ';
    body += pauli_char(letter(q));
    body += std::to_string(q);
  }
  return prefix + body;
}

bool PauliString::operator<(const PauliString& o) const {
  if (x_ != o.x_) return x_ < o.x_;
  if (z_ != o.z_) return z_ < o.z_;
  return phase_ < o.phase_;
}

void PauliSum::add(std::complex<double> coeff, const PauliString& p) {
  terms_.push_back({coeff * p.coefficient(), p.with_phase(0)});
}

PauliSum PauliSum::simplified(double tol) const {
  std::map<PauliString, std::complex<double>> acc;
  for (const auto& t : terms_) acc[t.pauli] += t.coeff;
  PauliSum out;
  for (const auto& [p, c] : acc)
    if (std::abs(c) > tol) out.terms_.push_back({c, p});
  return out;
}

double PauliSum::one_norm() const {
  double s = 0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) out.add(ta.coeff * tb.coeff, ta.pauli * tb.pauli);
  return out;
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) {
  PauliSum out = a;
  for (const auto& t : b.terms_) out.terms_.push_back(t);
  return out;
}

PauliSum operator*(std::complex<double> s, const PauliSum& a) {
  PauliSum out = a;
  for (auto& t : out.terms_) t.coeff *= s;
  return out;
}

PauliSum operator-(const PauliSum& a, const PauliSum& b) { return a + std::complex<double>(-1.0) * b; }

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  // Commuting pairs cancel exactly, so only anticommuting pairs contribute 2AB.
  PauliSum out;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms())
      if (!ta.pauli.commutes_with(tb.pauli)) out.add(2.0 * ta.coeff * tb.coeff, ta.pauli * tb.pauli);
  return out.simplified();
}

}  // namespace z2hm
