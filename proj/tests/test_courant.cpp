#include "support.hpp"

#include "diracalg/courant.hpp"

using namespace diracalg;
using namespace testing_support;

namespace {

Matrix pi_xy() {
  Matrix pi(2, 2);
  pi(0, 1) = P("x");
  pi(1, 0) = P("-x");
  return pi;
}

TwoForm omega(const Patch& p, const std::string& coeff) {
  TwoForm w(p.dim(), p.dim());
  w(0, 1) = parse_scalar(coeff, p);
  w(1, 0) = -w(0, 1);
  return w;
}

/// Phi(a, theta) = (rho a, sigma a + theta) from A + T*M to TM + T*M.
Matrix im_morphism(const DullAlgebroid& A, const TwoForm& w) {
  const std::size_t n = A.dim(), r = A.rank();
  Matrix phi(2 * n, r + n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t k = 0; k < r; ++k) {
      phi(mu, k) = A.anchor_matrix()(mu, k);
      phi(n + mu, k) = w(k, mu);
    }
  for (std::size_t mu = 0; mu < n; ++mu) phi(n + mu, r + mu) = ScalarField(1);
  return phi;
}

}  // namespace

TEST(StandardCourant, Examples) {
  CourantPresentation C = standard_courant(xy());
  EXPECT_TRUE(is_zero(C.bracket(unit_section(4, 0), unit_section(4, 1))));
  EXPECT_EQ(C.bracket(S({"0", "x", "0", "0"}), S({"1", "0", "0", "1"})), S({"0", "-1", "1", "0"}));
  EXPECT_EQ(C.pairing(unit_section(4, 0), unit_section(4, 2)), ScalarField(1));
}

TEST(DegenerateCourant, Examples) {
  DullAlgebroid ct(xy(), 2, pi_xy().transpose(), {S({"0", "0"}), S({"1", "0"}), S({"-1", "0"}), S({"0", "0"})});
  CourantPresentation C = degenerate_courant(ct);
  Section a = S({"x", "y", "0", "0"}), b = S({"1", "x*y", "0", "0"});
  EXPECT_EQ(C.bracket(a, b), concat(ct.bracket(slice(a, 0, 2), slice(b, 0, 2)), Section(2)));
  DullAlgebroid ab(xy(), 2, Matrix(2, 2), {S({"0", "0"}), S({"0", "1"}), S({"0", "-1"}), S({"0", "0"})});
  CourantPresentation Z = degenerate_courant(ab);
  EXPECT_EQ(Z.bracket(S({"1", "0", "x", "y"}), S({"0", "1", "y^2", "1"})), S({"0", "1", "0", "0"}));
  CourantPresentation T = degenerate_courant(tangent_algebroid(xy())), St = standard_courant(xy());
  Sampler s(3, 2, 2);
  for (int t = 0; t < 4; ++t) {
    Section c1 = s.section(4), c2 = s.section(4);
    EXPECT_EQ(T.bracket(c1, c2), St.bracket(c1, c2));
    EXPECT_EQ(T.pairing(c1, c2), St.pairing(c1, c2));
  }
}

TEST(CourantAxioms, StandardAndDegeneratePass) {
  Report r = check_courant_axioms(standard_courant(xy()), {.seed = 0, .trials = 4});
  EXPECT_TRUE(all_passed(r)) << show(r);
  CourantPresentation T = degenerate_courant(tangent_algebroid(xy()));
  Report t = check_courant_axioms(T, {.seed = 0, .trials = 4});
  EXPECT_TRUE(all_passed(t)) << show(t);
  EXPECT_EQ(find_check(t, "courant.nondegenerate")->detail, "degenerate pairing allowed");
}

TEST(CourantAxioms, DroppedTermKeepsMetricAxiomButBreaksSymmetry) {
  // Dropping i_{X2} d theta1 changes the bracket by a skew term, which the metric axiom cannot see.
  CourantPresentation C = standard_courant(xy());
  C.bracket = [](const Section& a, const Section& b) {
    VectorField x1 = slice(a, 0, 2), x2 = slice(b, 0, 2);
    return concat(lie_bracket(x1, x2), lie_derivative(x1, slice(b, 2, 2)));
  };
  Report r = check_courant_axioms(C, {.seed = 0, .trials = 4});
  EXPECT_TRUE(find_check(r, "courant.metric")->passed);
  EXPECT_TRUE(find_check(r, "courant.jacobi")->passed);
  const CheckResult* sym = find_check(r, "courant.symmetric");
  ASSERT_FALSE(sym->passed);
  EXPECT_FALSE(sym->witnesses.empty());
}

TEST(Dirac, ClassicalExamplesAreCertified) {
  CourantPresentation C = standard_courant(xy());
  Report p = check_dirac(C, dirac_from_poisson(pi_xy()), {});
  EXPECT_TRUE(all_passed(p)) << show(p);
  Report w = check_dirac(C, dirac_from_2form(omega(xy(), "1")), {});
  EXPECT_TRUE(all_passed(w)) << show(w);
  Report f = check_dirac(C, dirac_from_foliation(Subbundle(2, {unit_section(2, 0)})), {});
  EXPECT_TRUE(all_passed(f)) << show(f);
  EXPECT_EQ(dirac_from_poisson(pi_xy())[0], S({"0", "x", "1", "0"}));
  EXPECT_EQ(dirac_from_poisson(pi_xy())[1], S({"-x", "0", "0", "1"}));
}

TEST(Dirac, NonClosedFormFailsInvolutivity) {
  CourantPresentation C = standard_courant(xyz());
  Report r = check_dirac(C, dirac_from_2form(omega(xyz(), "z")), {});
  EXPECT_TRUE(find_check(r, "dirac.isotropic")->passed);
  EXPECT_TRUE(find_check(r, "dirac.maximal")->passed);
  const CheckResult* closed = find_check(r, "dirac.closed");
  ASSERT_FALSE(closed->passed);
  // [[(d_x, z dy), (d_y, -z dx)]] = (0, dz).
  EXPECT_EQ(closed->witnesses[0].context, "frame(1,2)");
  EXPECT_EQ(closed->witnesses[0].residual, (std::vector<std::string>{"0", "0", "0", "0", "0", "1"}));
}

TEST(Dirac, Rejections) {
  CourantPresentation T = degenerate_courant(tangent_algebroid(xy()));
  EXPECT_THROW(check_dirac(T, {}, {}), Error);
}

TEST(Dirac, Constructors) {
  CourantPresentation C = standard_courant(xy());
  auto g0 = dirac_from_poisson(Matrix(2, 2));
  EXPECT_TRUE(same_span(Subbundle(4, g0), Subbundle(4, {unit_section(4, 2), unit_section(4, 3)})));
  auto w0 = dirac_from_2form(Matrix(2, 2));
  EXPECT_TRUE(same_span(Subbundle(4, w0), Subbundle(4, {unit_section(4, 0), unit_section(4, 1)})));
  auto f0 = dirac_from_foliation(Subbundle(2, {unit_section(2, 0), unit_section(2, 1)}));
  EXPECT_TRUE(same_span(Subbundle(4, f0), Subbundle(4, {unit_section(4, 0), unit_section(4, 1)})));
}

TEST(CourantMorphism, IdentityAndImForms) {
  CourantPresentation C = standard_courant(xy());
  EXPECT_TRUE(all_passed(check_courant_morphism(Matrix::identity(4), C, C, {})));
  DullAlgebroid tm = tangent_algebroid(xy());
  Report r = check_courant_morphism(im_morphism(tm, omega(xy(), "1")), degenerate_courant(tm), C, {});
  EXPECT_TRUE(all_passed(r)) << show(r);
  DullAlgebroid tm3 = tangent_algebroid(xyz());
  Report bad = check_courant_morphism(im_morphism(tm3, omega(xyz(), "z")), degenerate_courant(tm3), standard_courant(xyz()), {});
  EXPECT_TRUE(find_check(bad, "morphism.anchor")->passed);
  EXPECT_TRUE(find_check(bad, "morphism.pairing")->passed);
  EXPECT_FALSE(find_check(bad, "morphism.bracket")->passed);
}

TEST(BottDorfman, TangentDirac) {
  CourantPresentation C = standard_courant(xy());
  BottDorfman bd(C, {unit_section(4, 0), unit_section(4, 1)});
  EXPECT_TRUE(all_passed(bd.check({})));
  VectorField x = S({"x*y", "1"});
  OneForm th = S({"y", "x^2"});
  EXPECT_EQ(bd.eval(concat(x, Section(2)), concat(Section(2), th)), lie_derivative(x, th));
  BottDorfman bp(C, dirac_from_poisson(pi_xy()));
  EXPECT_TRUE(all_passed(bp.check({})));
  EXPECT_TRUE(is_zero(bp.eval(dirac_from_poisson(pi_xy())[0], dirac_from_poisson(pi_xy())[1])));
}

TEST(BottDorfman, ConstantIsotropicDataGivesZeroConnection) {
  CourantPresentation C = standard_courant(xy());
  BottDorfman bd(C, {unit_section(4, 0), unit_section(4, 3)});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_TRUE(is_zero(bd.eval(unit_section(4, 0), unit_section(4, i))));
}

class CourantProperties : public ::testing::TestWithParam<int> {};

TEST_P(CourantProperties, SymmetricPartAndDOperator) {
  Sampler s(derive_seed(31, "courant") + std::uint64_t(GetParam()), 2, 2);
  CourantPresentation C = standard_courant(xy());
  Section c1 = s.section(4), c2 = s.section(4);
  ScalarField f = s.polynomial();
  EXPECT_EQ(C.bracket(c1, c2) + C.bracket(c2, c1), concat(Section(2), d(C.pairing(c1, c2), 2)));
  EXPECT_EQ(C.pairing(C.dcal(f), c1), act(C.anchor(c1), f));
}

INSTANTIATE_TEST_SUITE_P(Seeds, CourantProperties, ::testing::Range(0, 8));
