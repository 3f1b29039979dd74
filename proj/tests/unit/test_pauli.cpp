#include <gtest/gtest.h>

#include "z2hm/errors.hpp"
#include "z2hm/pauli.hpp"

using namespace z2hm;

namespace {

PauliString P(const char* s) { return PauliString::parse(s); }

}  // namespace

TEST(Pauli, SingleQubitProductTable) {
  EXPECT_EQ(P("X0") * P("Y0"), P("i Z0"));
  EXPECT_EQ(P("Y0") * P("Z0"), P("i X0"));
  EXPECT_EQ(P("Z0") * P("X0"), P("i Y0"));
  EXPECT_EQ(P("Y0") * P("X0"), P("-i Z0"));
  EXPECT_EQ(P("X3") * P("X3"), PauliString());
}

TEST(Pauli, ParseAndPrintRoundTrip) {
  for (const char* s : {"I", "Z0", "-Z0 Z1", "X1 Y4 Z70", "i X2", "-i Y0 Y1"}) EXPECT_EQ(P(s), P(P(s).str().c_str())) << s;
  EXPECT_EQ(P("-Z0 Z1").str(), "-Z0 Z1");
  EXPECT_EQ(P("Z1 Z1"), PauliString());
  EXPECT_THROW(P("Q1"), InvalidArgument);
  EXPECT_THROW(P("Xa"), InvalidArgument);
}

TEST(Pauli, CommutationCountsAnticommutingSites) {
  EXPECT_TRUE(P("X0 X1").commutes_with(P("Z0 Z1")));
  EXPECT_FALSE(P("X0 X1").commutes_with(P("Z0")));
  EXPECT_EQ(P("X0 X1 X2").anticommuting_overlap(P("Z0 Z1 Y2")), 3);
  EXPECT_TRUE(P("X0 Z100").commutes_with(P("X0 X5")));
}

TEST(Pauli, SupportWeightAndMasks) {
  const auto p = P("X0 Y2 Z5");
  EXPECT_EQ(p.support(), (std::vector<int>{0, 2, 5}));
  EXPECT_EQ(p.weight(), 3);
  EXPECT_EQ(p.max_qubit(), 5);
  EXPECT_EQ(p.x_mask(), 0b101u);
  EXPECT_EQ(p.z_mask(), 0b100100u);
}

TEST(PauliSum, CommutatorOfSingleLetters) {
  PauliSum x, z;
  x.add(1.0, P("X0"));
  z.add(1.0, P("Z0"));
  // [X, Z] = -2i Y.
  const auto c = commutator(x, z).simplified();
  ASSERT_EQ(c.terms().size(), 1u);
  EXPECT_EQ(c.terms()[0].pauli, P("Y0"));
  EXPECT_NEAR(c.terms()[0].coeff.real(), 0.0, 1e-15);
  EXPECT_NEAR(c.terms()[0].coeff.imag(), -2.0, 1e-15);
}

TEST(PauliSum, CommutingTermsVanishAndNormAdds) {
  PauliSum a, b;
  a.add(2.0, P("Z0"));
  a.add(-3.0, P("Z1"));
  b.add(0.5, P("Z0 Z1"));
  EXPECT_TRUE(commutator(a, b).simplified().terms().empty());
  EXPECT_DOUBLE_EQ(a.one_norm(), 5.0);
  PauliSum c = a + a;
  EXPECT_DOUBLE_EQ(c.simplified().one_norm(), 10.0);
  EXPECT_TRUE((a - a).simplified().terms().empty());
}
