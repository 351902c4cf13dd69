#include "support.hpp"

#include "diracalg/algebroid.hpp"

using namespace diracalg;
using namespace testing_support;

TEST(DirectSum, Ranks) {
  TrivialBundle tm{xy(), 2, "TM"}, ts{xy(), 2, "T*M"}, a{xy(), 2, "A"}, z{xy(), 0, "0"};
  EXPECT_EQ(direct_sum(tm, ts).rank, 4u);
  EXPECT_EQ(direct_sum(a, ts).rank, 4u);
  EXPECT_EQ(direct_sum(tm, z).rank, 2u);
  EXPECT_THROW(direct_sum(tm, TrivialBundle{xyz(), 1, "B"}), ShapeError);
}

TEST(CanonicalPairing, Examples) {
  SplitDims tm{2, 2};
  EXPECT_EQ(canonical_pairing(S({"1", "0", "0", "0"}), S({"0", "0", "1", "0"}), tm), ScalarField(1));
  EXPECT_TRUE(canonical_pairing(S({"1", "0", "0", "0"}), S({"x", "y^2", "0", "0"}), tm).is_zero());
  // X = x d_y, alpha = (1, 0); a = (y, 0), theta = dy.
  EXPECT_EQ(canonical_pairing(S({"0", "x", "1", "0"}), S({"y", "0", "0", "1"}), tm), P("x + y"));
  EXPECT_THROW(canonical_pairing(S({"1"}), S({"1", "0", "0", "0"}), tm), ShapeError);
}

TEST(DegeneratePairing, Examples) {
  DullAlgebroid tm = tangent_algebroid(xy());
  EXPECT_TRUE(pairing_d(tm, S({"x", "y", "0", "0"}), S({"1", "x", "0", "0"})).is_zero());
  EXPECT_EQ(pairing_d(tm, S({"1", "0", "0", "0"}), S({"0", "0", "1", "0"})), ScalarField(1));
  DullAlgebroid zero(xy(), 2, Matrix(2, 2), {});
  EXPECT_TRUE(pairing_d(zero, S({"x", "1", "y", "x"}), S({"1", "x", "2", "y"})).is_zero());
}

TEST(Annihilator, BlockCases) {
  SplitDims sd{2, 2};
  Subbundle tm(4, {unit_section(4, 0), unit_section(4, 1)});
  Subbundle ann = annihilator_qb(tm, sd);
  EXPECT_EQ(ann.rank(), 2u);
  EXPECT_TRUE(ann.contains(S({"x", "y", "0", "0"})));
  EXPECT_FALSE(ann.contains(S({"0", "0", "1", "0"})));

  std::vector<Section> all;
  for (std::size_t i = 0; i < 4; ++i) all.push_back(unit_section(4, i));
  EXPECT_EQ(annihilator_qb(Subbundle(4, all), sd).rank(), 0u);
}

TEST(Annihilator, GraphOfSymplecticForm) {
  // omega = dx^dy, sigma(d_x) = dy, sigma(d_y) = -dx; -sigma^t = sigma.
  SplitDims sd{2, 2};
  Subbundle u(4, {S({"1", "0", "0", "1"}), S({"0", "1", "-1", "0"})});
  Subbundle k = annihilator_qb(u, sd);
  Subbundle graph_sigma(4, {S({"1", "0", "0", "1"}), S({"0", "1", "-1", "0"})});
  EXPECT_TRUE(same_span(k, graph_sigma));
}

TEST(Membership, Examples) {
  Subbundle u(4, {unit_section(4, 0)});
  auto m = u.membership(unit_section(4, 0));
  EXPECT_TRUE(m.member);
  EXPECT_EQ(m.coefficients, S({"1"}));
  auto z = u.membership(Section(4));
  EXPECT_TRUE(z.member);
  EXPECT_EQ(z.coefficients, S({"0"}));
  auto no = u.membership(unit_section(4, 1));
  EXPECT_FALSE(no.member);
  ASSERT_EQ(no.witness.size(), 4u);
  EXPECT_TRUE(no.witness[0].is_zero());
  EXPECT_FALSE(no.witness[1].is_zero());
}

TEST(Membership, RationalCoefficients) {
  Subbundle u(3, {S({"x", "1", "0"}), S({"0", "y", "1"})});
  auto m = u.membership(S({"x^2", "x + y/(x+1)", "1/(x+1)"}));
  ASSERT_TRUE(m.member);
  EXPECT_EQ(m.coefficients, S({"x", "1/(x+1)"}));
  // Lowest-index pivots certify the minor on rows 1 and 2.
  EXPECT_EQ(u.certificate().minor, P("x*y", xyz()));
}

TEST(Complement, Greedy) {
  EXPECT_EQ(complement(Subbundle(2, {unit_section(2, 0)})), std::vector<Section>{unit_section(2, 1)});
  EXPECT_EQ(complement(Subbundle(2, {})), (std::vector<Section>{unit_section(2, 0), unit_section(2, 1)}));
  EXPECT_EQ(complement(Subbundle(2, {S({"1", "x"})})), std::vector<Section>{unit_section(2, 0)});
  EXPECT_EQ(complement(Subbundle(2, {S({"1", "x"})}), true), std::vector<Section>{unit_section(2, 1)});
}

TEST(Subbundle, RejectsDependentFrames) {
  EXPECT_THROW(Subbundle(2, {S({"1", "x"}), S({"y", "x*y"})}), RankError);
}

class BundleProperties : public ::testing::TestWithParam<int> {};

TEST_P(BundleProperties, AnnihilatorLaws) {
  Sampler s(derive_seed(3, "annihilator") + std::uint64_t(GetParam()), 2, 1);
  SplitDims sd{2, 2};
  std::size_t p = 1 + std::size_t(GetParam() % 3);
  std::vector<Section> frame;
  for (std::size_t i = 0; i < p; ++i) frame.push_back(s.section(4));
  if (rank(frame, 4) < p) GTEST_SKIP();
  Subbundle u(4, frame);
  Subbundle k = annihilator_qb(u, sd);
  EXPECT_EQ(u.rank() + k.rank(), 4u);
  for (const auto& a : u.frame())
    for (const auto& b : k.frame()) EXPECT_TRUE(canonical_pairing(a, b, sd).is_zero());
  EXPECT_TRUE(same_span(annihilator_bq(k, sd), u));

  std::vector<Section> full = u.frame();
  for (const auto& w : complement(u)) full.push_back(w);
  EXPECT_FALSE(determinant(Matrix::from_columns(full, 4)).is_zero());

  Section inside = s.combination(u.frame(), 4);
  auto m = u.membership(inside);
  ASSERT_TRUE(m.member);
  EXPECT_EQ(u.combine(m.coefficients), inside);
  if (p < 4) {
    Section outside = inside + complement(u).front();
    auto n = u.membership(outside);
    EXPECT_FALSE(n.member);
    EXPECT_FALSE(dot(n.witness, outside).is_zero());
    for (const auto& a : u.frame()) EXPECT_TRUE(dot(n.witness, a).is_zero());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, BundleProperties, ::testing::Range(0, 12));
