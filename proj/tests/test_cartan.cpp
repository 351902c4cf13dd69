#include "support.hpp"

#include "diracalg/cartan.hpp"
#include "diracalg/check.hpp"

using namespace diracalg;
using namespace testing_support;

TEST(LieBracket, Examples) {
  EXPECT_TRUE(is_zero(lie_bracket(S({"1", "0"}), S({"0", "1"}))));
  EXPECT_EQ(lie_bracket(S({"0", "x"}), S({"1", "0"})), S({"0", "-1"}));
  VectorField x = S({"x*y", "y^2 + 1"});
  EXPECT_TRUE(is_zero(lie_bracket(x, x)));
}

TEST(ExteriorDerivative, Examples) {
  EXPECT_EQ(d(P("x*y"), 2), S({"y", "x"}));
  TwoForm w = d(S({"0", "x"}));
  EXPECT_EQ(w(0, 1), ScalarField(1));
  EXPECT_EQ(w(1, 0), ScalarField(-1));
  EXPECT_TRUE(w(0, 0).is_zero());
}

TEST(LieDerivative, Examples) {
  EXPECT_EQ(lie_derivative(S({"0", "x"}), S({"0", "1"})), S({"1", "0"}));
  EXPECT_TRUE(is_zero(lie_derivative(S({"1", "0"}), S({"0", "1"}))));
  EXPECT_EQ(interior(S({"1", "0"}), d(S({"0", "x"}))), S({"0", "1"}));
}

TEST(TwoForms, ThreeDimensionalDifferential) {
  // omega = z dx^dy has d omega = dz^dx^dy.
  TwoForm w(3, 3);
  w(0, 1) = P("z", xyz());
  w(1, 0) = -w(0, 1);
  EXPECT_EQ(d2_component(w, 0, 1, 2), ScalarField(1));
  EXPECT_EQ(evaluate2(w, S({"1", "0", "0"}, xyz()), S({"0", "1", "0"}, xyz())), P("z", xyz()));
}

class CartanProperties : public ::testing::TestWithParam<int> {};

TEST_P(CartanProperties, Identities) {
  Sampler s(derive_seed(5, "cartan") + std::uint64_t(GetParam()), 3, 2);
  ScalarField f = s.polynomial();
  VectorField x = s.section(3), y = s.section(3), z = s.section(3);
  OneForm th = s.section(3);
  TwoForm dd = d(d(f, 3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(dd(i, j).is_zero());
  EXPECT_EQ(lie_derivative(x, f * th), act(x, f) * th + f * lie_derivative(x, th));
  EXPECT_EQ(lie_derivative(lie_bracket(x, y), th),
            lie_derivative(x, lie_derivative(y, th)) - lie_derivative(y, lie_derivative(x, th)));
  Section jac = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y));
  EXPECT_TRUE(is_zero(jac));
}

INSTANTIATE_TEST_SUITE_P(Seeds, CartanProperties, ::testing::Range(0, 10));
