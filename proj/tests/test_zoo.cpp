#include "support.hpp"

#include "diracalg/zoo.hpp"

using namespace diracalg;
using namespace testing_support;

namespace {

Matrix pi_xy() {
  Matrix pi(2, 2);
  pi(0, 1) = P("x");
  pi(1, 0) = P("-x");
  return pi;
}

/// d_x ^ d_y - y d_y ^ d_z + x d_z ^ d_x: v . curl v = 2 for v = (-y, x, 1).
Matrix pi_non_poisson() {
  Matrix pi(3, 3);
  pi(0, 1) = P("1", xyz());
  pi(1, 2) = P("-y", xyz());
  pi(2, 0) = P("x", xyz());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (pi(i, j).is_zero()) pi(i, j) = -pi(j, i);
      else pi(j, i) = -pi(i, j);
  return pi;
}

TwoForm omega(const Patch& p, const std::string& coeff) {
  TwoForm w(p.dim(), p.dim());
  w(0, 1) = parse_scalar(coeff, p);
  w(1, 0) = -w(0, 1);
  return w;
}

IISData foliation_x() {
  return {tangent_algebroid(xy()), Subbundle(2, {unit_section(2, 0)}), Subbundle(2, {unit_section(2, 0)}), LinearConnection(xy(), 2)};
}

IISData curved_negative() {
  std::vector<Section> table(4, Section(2));
  table[0 * 2 + 1] = S({"0", "y"});
  return {tangent_algebroid(xy()), Subbundle(2, standard_frame(2)), Subbundle(2, {unit_section(2, 0)}), LinearConnection(xy(), 2, table)};
}

DullAlgebroid aff1() {
  std::vector<Section> c(4, Section(2));
  c[0 * 2 + 1] = S({"0", "1"}, point_patch());
  c[1 * 2 + 0] = S({"0", "-1"}, point_patch());
  return lie_algebra(2, c, "aff(1)");
}

DiracBialgebraData aff1_with(std::size_t dual_index) {
  Matrix iota(2, 1);
  iota(dual_index, 0) = ScalarField(1);
  return {aff1(), lie_algebra(1, {Section(1)}, "p"), iota};
}

}  // namespace

TEST(LieBialgebroid, PoissonDoubleIsCourant) {
  LieBialgebroidData lb = poisson_bialgebroid(xy(), pi_xy());
  Report r = check_lie_bialgebroid(lb, {.trials = 3});
  EXPECT_TRUE(all_passed(r)) << show(r);
  EXPECT_TRUE(check_anchor_anomaly(lb, {}).passed);
  EXPECT_TRUE(check_cotangent_identity(lb, {}).passed);
  EXPECT_TRUE(check_cotangent_identity({tangent_algebroid(xy()), trivial_dual(tangent_algebroid(xy()))}, {}).passed);
  // [dx, dy] = dx for pi = x d_x ^ d_y.
  EXPECT_EQ(lb.Astar.bracket(unit_section(2, 0), unit_section(2, 1)), S({"1", "0"}));
}

TEST(LieBialgebroid, NonPoissonBivectorFails) {
  LieBialgebroidData lb = poisson_bialgebroid(xyz(), pi_non_poisson());
  Report r = check_lie_bialgebroid(lb, {.trials = 2});
  EXPECT_TRUE(find_check(r, "lie_bialgebroid.Astar.skew")->passed);
  EXPECT_FALSE(find_check(r, "lie_bialgebroid.Astar.jacobi")->passed);
  EXPECT_FALSE(all_passed(r));
}

TEST(LieBialgebroid, BialgebroidAndManinPair) {
  LieBialgebroidData lb = poisson_bialgebroid(xy(), pi_xy());
  BialgebroidAndManin bm = bialgebroid_from_lie_bialgebroid(lb);
  EXPECT_NO_THROW(validate(bm.db));
  Report r = check_manin_pair(bm.mp, {.trials = 3});
  EXPECT_TRUE(all_passed(r)) << show(r);
}

TEST(Poisson, AdaptedTripleIsLADirac) {
  LieBialgebroidData lb = poisson_bialgebroid(xy(), pi_xy());
  LinearConnection flat(xy(), 2);
  DorfmanConnection D = adapted_dorfman_poisson(lb, flat);
  EXPECT_TRUE(check_poisson_restriction(lb, D, {.trials = 3}).passed);
  LADiracTriple T = poisson_triple(lb, flat);
  Report r = check_la_dirac(T, {.trials = 3});
  EXPECT_TRUE(all_passed(r)) << show(r);
  DiracBialgebroid from_t = bialgebroid_from_triple(T, "U");
  Report eq = bialgebroids_equivalent(from_t, bialgebroid_from_lie_bialgebroid(lb).db, {.trials = 3});
  EXPECT_TRUE(all_passed(eq)) << show(eq);
}

TEST(Poisson, AdaptedTripleWithCurvedConnection) {
  LieBialgebroidData lb = poisson_bialgebroid(xy(), pi_xy());
  std::vector<Section> table(4, Section(2));
  table[1 * 2 + 0] = S({"x", "y^2"});
  LinearConnection nabla(xy(), 2, table);
  Report r = check_la_dirac(poisson_triple(lb, nabla), {.trials = 2});
  EXPECT_TRUE(all_passed(r)) << show(r);
}

TEST(Im2Form, SymplecticPasses) {
  DullAlgebroid tm = tangent_algebroid(xy());
  Matrix sigma = sigma_from_2form(omega(xy(), "1"));
  EXPECT_TRUE(all_passed(check_im2form(tm, sigma, {})));
  BialgebroidAndManin bm = bialgebroid_from_im2form(tm, sigma);
  EXPECT_NO_THROW(validate(bm.db));
  Report r = check_manin_pair(bm.mp, {.trials = 3});
  EXPECT_TRUE(all_passed(r)) << show(r);
}

TEST(Im2Form, NonClosedFormFails) {
  DullAlgebroid tm = tangent_algebroid(xyz());
  Matrix sigma = sigma_from_2form(omega(xyz(), "z"));
  Report r = check_im2form(tm, sigma, {});
  EXPECT_TRUE(find_check(r, "im2form.condition1")->passed);
  const CheckResult* c2 = find_check(r, "im2form.condition2");
  ASSERT_FALSE(c2->passed);
  EXPECT_EQ(c2->witnesses[0].context, "frame(1,2)");
  Report m = check_manin_pair(bialgebroid_from_im2form(tm, sigma).mp, {.trials = 2});
  EXPECT_FALSE(find_check(m, "manin.morphism.bracket")->passed);
}

TEST(Presymplectic, AdaptedTripleMatchesNegatedForm) {
  DullAlgebroid tm = tangent_algebroid(xy());
  Matrix sigma = sigma_from_2form(omega(xy(), "1 + x^2"));
  LinearConnection flat(xy(), 2);
  EXPECT_TRUE(check_presymplectic_restriction(sigma, adapted_dorfman_presymplectic(tm, sigma, flat), {.trials = 3}).passed);
  LADiracTriple T = presymplectic_triple(tm, sigma, flat);
  Report r = check_la_dirac(T, {.trials = 3});
  EXPECT_TRUE(all_passed(r)) << show(r);
  Matrix neg = sigma_from_2form(omega(xy(), "-1 - x^2"));
  Report eq = bialgebroids_equivalent(bialgebroid_from_triple(T, "U"), bialgebroid_from_im2form(tm, neg).db, {.trials = 2});
  EXPECT_TRUE(all_passed(eq)) << show(eq);
}

TEST(Iis, FoliationPasses) {
  IISData iis = foliation_x();
  Report r = check_iis(iis, {});
  EXPECT_TRUE(all_passed(r)) << show(r);
  QuotientAlgebroid Q(iis);
  EXPECT_EQ(Q.rank(), 2u);
  Report a = check_abar(Q, {.trials = 3});
  EXPECT_TRUE(all_passed(a)) << show(a);
  DullAlgebroid abar = Q.algebroid();
  EXPECT_TRUE(all_passed(check_lie(abar.space(), {}, "abar")));
  BialgebroidAndManin bm = bialgebroid_from_iis(iis, Q);
  EXPECT_NO_THROW(validate(bm.db));
  Report m = check_manin_pair(bm.mp, {.trials = 3});
  EXPECT_TRUE(all_passed(m)) << show(m);
}

TEST(Iis, CurvedConnectionFailsBothCharacterizations) {
  IISData iis = curved_negative();
  Report r = check_iis(iis, {});
  const CheckResult* flat = find_check(r, "iis.basic.flat");
  ASSERT_FALSE(flat->passed);
  // R(d_x, d_y) d_y = -d_y.
  EXPECT_EQ(flat->witnesses[0].residual, (std::vector<std::string>{"0", "-1"}));
  EXPECT_FALSE(find_check(r, "iis.definition.flat")->passed);
  EXPECT_TRUE(find_check(r, "iis.characterizations_agree")->passed);
  // [[d_x, d_y], eps2] + c.p. = eps2 for nabla*_{d_x} eps2 = -y eps2.
  EXPECT_FALSE(find_check(r, "iis.u.jacobi")->passed);
}

TEST(Iis, PreconditionViolationsThrow) {
  IISData bad = foliation_x();
  bad.FM = Subbundle(2, {unit_section(2, 1)});
  EXPECT_THROW(check_iis(bad, {}), Error);
}

TEST(Iis, ParallelSections) {
  // Classes parallel along d_x: a^y independent of x; degree <= 1 gives a^x in {1,x,y}, a^y in {1,y}.
  EXPECT_EQ(parallel_sections(foliation_x(), 1).size(), 5u);
  EXPECT_EQ(parallel_sections(curved_negative(), 1).size(), 3u);
}

TEST(DiracBialgebra, AsBialgebroid) {
  DiracBialgebroid db = dirac_bialgebroid(aff1_with(0));
  EXPECT_NO_THROW(validate(db));
  LADiracTriple T = triple_from_bialgebroid(db);
  Report r = check_la_dirac(T, {.trials = 2});
  EXPECT_TRUE(all_passed(r)) << show(r);
}

TEST(DiracBialgebra, Aff1) {
  Report ok = check_dirac_bialgebra(aff1_with(0), {.trials = 3});
  EXPECT_TRUE(all_passed(ok)) << show(ok);
  Report bad = check_dirac_bialgebra(aff1_with(1), {.trials = 3});
  const CheckResult* ideal = find_check(bad, "bialgebra.ideal");
  ASSERT_NE(ideal, nullptr);
  EXPECT_FALSE(ideal->passed);
  EXPECT_EQ(ideal->witnesses[0].context, "frame(2) with p° 1");
}
