#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "z2hm/bits.hpp"
#include "z2hm/lattice.hpp"
#include "z2hm/simulator.hpp"

namespace z2hm {

struct Syndrome {
  std::vector<int> defects;  // ascending node ids with odd Gauss parity
  bool empty() const { return defects.empty(); }
  bool operator==(const Syndrome& o) const = default;
};

struct Correction {
  std::vector<int> matter_flips;  // node ids
  std::vector<int> gauge_flips;   // edge ids
  // Set when the matching fell back to the greedy heuristic.
  bool approximate = false;
  int weight() const { return static_cast<int>(matter_flips.size() + gauge_flips.size()); }
  bool empty() const { return matter_flips.empty() && gauge_flips.empty(); }
};

Syndrome compute_syndrome(const Bitstring& bits, const LatticeGraph& lattice);

// Minimum-weight correction. A matter flip clears one defect at cost 1, so
// gauge flips only pay off between adjacent defects: the result pairs a
// maximum matching of the adjacency graph among defects and flips the rest
// on the matter side.
Correction decode(const Syndrome& syndrome, const LatticeGraph& lattice);

Bitstring apply_correction(const Bitstring& bits, const LatticeGraph& lattice, const Correction& correction);

struct DecodedShot {
  std::vector<int> defects;
  int flips = 0;
  bool approximate = false;
};

struct DecoderReport {
  std::vector<DecodedShot> shots;
  std::map<int, long> histogram;  // flip count -> shots
  double mean_flips() const;
  bool any_approximate() const;
};

// Decodes every shot, writes the corrected bitstring and its flip count back
// into the table and returns the per-shot report.
DecoderReport decode_table(ShotTable& table, const LatticeGraph& lattice, int threads = 0);

// Keeps whole flip-count classes in ascending order until at least min_keep
// shots are retained.
ShotTable postselect(const ShotTable& table, long min_keep);

struct DistanceResult {
  int distance = 0;
  bool lower_bound = false;  // true: nothing found up to max_weight, distance = max_weight + 1
};

// Smallest nonzero X pattern with an empty syndrome, by exhaustive search.
DistanceResult code_distance(const LatticeGraph& lattice, int max_weight);

}  // namespace z2hm
