#include "z2hm/bits.hpp"

#include "z2hm/errors.hpp"

namespace z2hm {

std::uint64_t bits_to_index(const Bitstring& bits) {
  if (bits.size() > 64) throw InvalidArgument("bitstring longer than 64 qubits has no index form");
  std::uint64_t idx = 0;
  for (std::size_t q = 0; q < bits.size(); ++q)
    if (bits[q]) idx |= std::uint64_t{1} << q;
  return idx;
}

Bitstring index_to_bits(std::uint64_t index, int num_qubits) {
  Bitstring bits(static_cast<std::size_t>(num_qubits), 0);
  for (int q = 0; q < num_qubits && q < 64; ++q) bits[static_cast<std::size_t>(q)] = (index >> q) & 1U;
  return bits;
}

std::string bits_to_string(const Bitstring& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t q = 0; q < bits.size(); ++q)
    if (bits[q]) s[bits.size() - 1 - q] = '1';
  return s;
}

Bitstring bits_from_string(std::string_view text) {
  Bitstring bits(text.size(), 0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[text.size() - 1 - i];
    if (c != '0' && c != '1') throw InvalidArgument("bitstring contains '" + std::string(1, c) + "'");
    bits[i] = c == '1';
  }
  return bits;
}

int popcount(const Bitstring& bits) {
  int n = 0;
  for (auto b : bits) n += b != 0;
  return n;
}

}  // namespace z2hm
