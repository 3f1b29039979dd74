#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace z2hm {

// One byte per qubit, value 0 or 1. Bit q of a basis index is qubit q.
using Bitstring = std::vector<std::uint8_t>;

std::uint64_t bits_to_index(const Bitstring& bits);
Bitstring index_to_bits(std::uint64_t index, int num_qubits);

// Text form is little-endian: the rightmost character is qubit 0.
std::string bits_to_string(const Bitstring& bits);
Bitstring bits_from_string(std::string_view text);

int popcount(const Bitstring& bits);

}  // namespace z2hm
