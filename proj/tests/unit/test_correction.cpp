#include <gtest/gtest.h>

#include <map>

#include "z2hm/correction.hpp"
#include "z2hm/errors.hpp"
#include "z2hm/model.hpp"

using namespace z2hm;

namespace {

Bitstring flip(Bitstring b, std::initializer_list<int> qubits) {
  for (int q : qubits) b[static_cast<std::size_t>(q)] ^= 1;
  return b;
}

// Smallest X pattern producing each syndrome, by enumeration up to weight 3.
std::map<std::vector<int>, int> min_weight_by_syndrome(const LatticeGraph& lat) {
  const int q = lat.num_qubits();
  const Bitstring zero(static_cast<std::size_t>(q), 0);
  std::map<std::vector<int>, int> best;
  auto record = [&](const Bitstring& b, int w) {
    const auto s = compute_syndrome(b, lat).defects;
    auto it = best.find(s);
    if (it == best.end() || it->second > w) best[s] = w;
  };
  record(zero, 0);
  for (int a = 0; a < q; ++a) {
    record(flip(zero, {a}), 1);
    for (int b = a + 1; b < q; ++b) {
      record(flip(zero, {a, b}), 2);
      for (int c = b + 1; c < q; ++c) record(flip(zero, {a, b, c}), 3);
    }
  }
  return best;
}

ShotTable table_with_flips(const std::vector<int>& flips) {
  ShotTable t;
  t.num_qubits = 2;
  for (std::size_t i = 0; i < flips.size(); ++i) t.shots.push_back({Bitstring{0, 0}, i, 0, flips[i]});
  return t;
}

}  // namespace

TEST(Correction, SyndromeExamples) {
  const auto lat = LatticeGraph::flake(0);
  const Bitstring clean(12, 0);
  EXPECT_TRUE(compute_syndrome(clean, lat).empty());
  EXPECT_EQ(compute_syndrome(flip(clean, {2}), lat).defects, (std::vector<int>{2}));
  const int e = 0;
  const auto& l = lat.link(e);
  EXPECT_EQ(compute_syndrome(flip(clean, {lat.edge_qubit(e)}), lat).defects, (std::vector<int>{l.u, l.v}));
  // A full string state is clean.
  EXPECT_TRUE(compute_syndrome(prepare_string_state(lat, std::vector<int>{0, 1, 3, 5}).bits, lat).empty());
  EXPECT_THROW(compute_syndrome(Bitstring(5, 0), lat), InvalidArgument);
}

TEST(Correction, AdjacentDefectsPairThroughTheirLink) {
  const auto lat = LatticeGraph::flake(0);
  const auto& l = lat.link(3);
  const auto c = decode(Syndrome{{l.u, l.v}}, lat);
  EXPECT_EQ(c.gauge_flips, (std::vector<int>{3}));
  EXPECT_TRUE(c.matter_flips.empty());
  EXPECT_FALSE(c.approximate);
}

TEST(Correction, DistantDefectsFlipMatter) {
  const auto lat = LatticeGraph::chain(5);
  const auto c = decode(Syndrome{{0, 4}}, lat);
  EXPECT_EQ(c.matter_flips, (std::vector<int>{0, 4}));
  EXPECT_TRUE(c.gauge_flips.empty());
  // Three defects in a row: one link plus one matter flip.
  const auto d = decode(Syndrome{{1, 2, 3}}, lat);
  EXPECT_EQ(d.weight(), 2);
  EXPECT_EQ(d.gauge_flips.size(), 1u);
}

TEST(Correction, EveryWeightOneErrorIsReverted) {
  const auto lat = LatticeGraph::flake(0);
  const auto start = prepare_string_state(lat, std::vector<int>{0, 1, 3}).bits;
  for (int q = 0; q < lat.num_qubits(); ++q) {
    const auto noisy = flip(start, {q});
    const auto fixed = apply_correction(noisy, lat, decode(compute_syndrome(noisy, lat), lat));
    EXPECT_EQ(fixed, start) << "qubit " << q;
  }
}

TEST(Correction, MinimumWeightAgainstBruteForce) {
  for (const auto& lat : {LatticeGraph::flake(0), LatticeGraph::chain(6), LatticeGraph::brick(1, 2)}) {
    const auto best = min_weight_by_syndrome(lat);
    const int q = lat.num_qubits();
    const Bitstring zero(static_cast<std::size_t>(q), 0);
    for (int a = 0; a < q; ++a)
      for (int b = a; b < q; ++b) {
        const auto noisy = a == b ? flip(zero, {a}) : flip(zero, {a, b});
        const auto syn = compute_syndrome(noisy, lat);
        const auto corr = decode(syn, lat);
        EXPECT_EQ(corr.weight(), best.at(syn.defects)) << lat.describe() << " " << a << "," << b;
        EXPECT_TRUE(compute_syndrome(apply_correction(noisy, lat, corr), lat).empty());
      }
  }
}

TEST(Correction, DecodingIsIdempotent) {
  const auto lat = LatticeGraph::flake(1);
  Bitstring b(static_cast<std::size_t>(lat.num_qubits()), 0);
  b = flip(b, {0, 5, 7, lat.edge_qubit(4), lat.edge_qubit(20)});
  const auto once = apply_correction(b, lat, decode(compute_syndrome(b, lat), lat));
  EXPECT_TRUE(compute_syndrome(once, lat).empty());
  EXPECT_TRUE(decode(compute_syndrome(once, lat), lat).empty());
}

TEST(Correction, DecodeTableFillsFlipCounts) {
  const auto lat = LatticeGraph::flake(0);
  ShotTable t;
  t.num_qubits = lat.num_qubits();
  const Bitstring clean(12, 0);
  t.shots = {{clean, 1, 0, -1}, {flip(clean, {0}), 2, 0, -1}, {flip(clean, {0, 3}), 3, 0, -1}};
  const auto report = decode_table(t, lat, 2);
  EXPECT_EQ(t.shots[0].flips, 0);
  EXPECT_EQ(t.shots[1].flips, 1);
  EXPECT_EQ(t.shots[2].flips, 2);
  for (const auto& s : t.shots) EXPECT_EQ(s.bits, clean);
  EXPECT_EQ(report.histogram.at(1), 1);
  EXPECT_DOUBLE_EQ(report.mean_flips(), 1.0);
  EXPECT_FALSE(report.any_approximate());
}

TEST(Correction, PostselectKeepsWholeClasses) {
  const auto t = table_with_flips({0, 1, 1, 2, 0, 1, 3, 1, 0, 2, 1});  // classes 3 / 5 / 2 / 1
  EXPECT_EQ(postselect(t, 3).size(), 3u);
  EXPECT_EQ(postselect(t, 4).size(), 8u);
  EXPECT_EQ(postselect(t, 9).size(), 10u);
  EXPECT_EQ(postselect(t, 0).size(), 3u);
  EXPECT_THROW(postselect(t, 12), InvalidArgument);
  EXPECT_THROW(postselect(table_with_flips({0, -1}), 1), InvalidArgument);
  const auto kept = postselect(t, 4);
  for (const auto& s : kept.shots) EXPECT_LE(s.flips, 1);
}

TEST(Correction, CodeDistance) {
  EXPECT_EQ(code_distance(LatticeGraph::flake(0), 4).distance, 3);
  EXPECT_EQ(code_distance(LatticeGraph::chain(4), 4).distance, 3);
  EXPECT_EQ(code_distance(LatticeGraph::flake(1), 3).distance, 3);
  const auto lb = code_distance(LatticeGraph::flake(0), 2);
  EXPECT_TRUE(lb.lower_bound);
  EXPECT_EQ(lb.distance, 3);
}
