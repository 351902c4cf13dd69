#include "support.hpp"

#include "diracalg/zoo.hpp"

using namespace diracalg;
using namespace testing_support;

namespace {

LieBialgebroidData poisson_xy() {
  Matrix pi(2, 2);
  pi(0, 1) = P("x");
  pi(1, 0) = P("-x");
  return poisson_bialgebroid(xy(), pi);
}

LADiracTriple poisson() { return poisson_triple(poisson_xy(), LinearConnection(xy(), 2)); }

Matrix sigma_dxdy() {
  TwoForm w(2, 2);
  w(0, 1) = ScalarField(1);
  w(1, 0) = ScalarField(-1);
  return sigma_from_2form(w);
}

LADiracTriple presymplectic() { return presymplectic_triple(tangent_algebroid(xy()), sigma_dxdy(), LinearConnection(xy(), 2)); }

/// Delta_{d_x} e_1 gains y e_1; the basic curvature leaves K.
LADiracTriple condition5_mutant() {
  LADiracTriple T = poisson();
  std::vector<Section> t = T.dorfman().entries();
  t[0] += S({"y", "0", "0", "0"});
  return LADiracTriple(T.algebroid(), T.U, DorfmanConnection(xy(), 2, t));
}

}  // namespace

TEST(LADirac, ZooTriplesPass) {
  for (const LADiracTriple& T : {poisson(), presymplectic()}) {
    Report r = check_la_dirac(T, {.trials = 3});
    EXPECT_TRUE(all_passed(r)) << show(r);
  }
}

TEST(LADirac, NonCoisotropicUFailsCondition1) {
  LADiracTriple T = poisson();
  LADiracTriple small(T.algebroid(), Subbundle(4, {T.U.frame()[0]}), T.dorfman(), T.K);
  Report r = check_la_dirac(small, {.trials = 2});
  EXPECT_FALSE(find_check(r, "la_dirac.condition1")->passed);
}

TEST(LADirac, NonClosedFormFailsCondition4) {
  TwoForm w(3, 3);
  w(0, 1) = P("z", xyz());
  w(1, 0) = -w(0, 1);
  LADiracTriple T = presymplectic_triple(tangent_algebroid(xyz()), sigma_from_2form(w), LinearConnection(xyz(), 3));
  Report r = check_la_dirac(T, {.trials = 2});
  EXPECT_TRUE(find_check(r, "la_dirac.condition3.jacobi")->passed);
  const CheckResult* c4 = find_check(r, "la_dirac.condition4");
  ASSERT_FALSE(c4->passed);
  EXPECT_EQ(c4->witnesses[0].context, "frame(1,2)");
  EXPECT_THROW(build_courant_C(T), Error);
}

TEST(Lemmas, HoldOnValidTriples) {
  for (const LADiracTriple& T : {poisson(), presymplectic()}) {
    Report r = verify_appendix_lemmas(T, {.trials = 3});
    EXPECT_TRUE(all_passed(r)) << show(r);
  }
}

TEST(Lemmas, Condition5MutantFailsBialgebroid1) {
  LADiracTriple T = condition5_mutant();
  Report r = verify_appendix_lemmas(T, {.trials = 2});
  EXPECT_FALSE(find_check(r, "lemmas.condition5")->passed);
  EXPECT_FALSE(find_check(r, "lemmas.bialgebroid1")->passed);
  EXPECT_TRUE(find_check(r, "lemmas.bialgebroid1_iff_condition5")->passed);
  EXPECT_FALSE(find_check(check_la_dirac(T, {.trials = 2}), "la_dirac.condition5")->passed);
}

TEST(Lemmas, PhiIsSkew) {
  LADiracTriple T = poisson();
  EXPECT_TRUE(verify_phi_skew(T, S({"x", "y^2"}), {}).passed);
  EXPECT_TRUE(verify_phi_skew(presymplectic(), S({"1 + x*y", "x"}), {}).passed);
}

TEST(CourantC, PoissonTripleIsCourant) {
  AManinPair mp = build_courant_C(poisson());
  Report r = check_courant_axioms(mp.C, {.trials = 2});
  EXPECT_TRUE(all_passed(r)) << show(r);
  Report m = check_manin_pair(mp, {.trials = 2});
  EXPECT_TRUE(all_passed(m)) << show(m);
}

TEST(CourantC, PresymplecticTripleIsCourant) {
  AManinPair mp = build_courant_C(presymplectic());
  Report r = check_courant_axioms(mp.C, {.trials = 2});
  EXPECT_TRUE(all_passed(r)) << show(r);
}

TEST(CourantC, RelationsAreZeroClasses) {
  LADiracTriple T = poisson();
  AManinPair mp = build_courant_C(T);
  ASSERT_TRUE(mp.C.relations);
  for (const auto& g : mp.C.relations->frame()) EXPECT_TRUE(quotient_equal(mp.C, g, Section(g.size())));
  Section b0 = mp.C.basis[0];
  QuotientComparison q = quotient_compare(mp.C, b0, Section(b0.size()));
  EXPECT_FALSE(q.equal);
  EXPECT_FALSE(q.witness.empty());
}

TEST(CourantC, IndependentOfExtension) {
  DiracBialgebroid db = bialgebroid_from_lie_bialgebroid(poisson_xy()).db;
  LADiracTriple T1 = triple_from_bialgebroid(db);
  LADiracTriple T2 = triple_from_bialgebroid(db, complement(Subbundle(4, db.image()), true));
  ASSERT_NE(T1.dorfman().entries(), T2.dorfman().entries());
  AManinPair m1 = build_courant_C(T1), m2 = build_courant_C(T2);
  Sampler s(derive_seed(0, "extension"), 2, 2);
  for (int t = 0; t < 10; ++t) {
    Section a = s.combination(m1.C.basis, m1.C.rep_rank), b = s.combination(m1.C.basis, m1.C.rep_rank);
    EXPECT_TRUE(quotient_equal(m1.C, m1.C.bracket(a, b), m2.C.bracket(a, b))) << "pair " << t;
  }
}

TEST(Equivalence, RescaledFrameAndInequivalentStructures) {
  LADiracTriple T = poisson();
  DiracBialgebroid db = bialgebroid_from_triple(T);
  std::vector<Section> frame = T.U.frame();
  frame[0] = P("x^2 + 1") * frame[0];
  LADiracTriple scaled(T.algebroid(), Subbundle(4, frame), T.dorfman());
  Report same = bialgebroids_equivalent(db, bialgebroid_from_triple(scaled), {});
  EXPECT_TRUE(all_passed(same)) << show(same);
  Report diff = bialgebroids_equivalent(db, bialgebroid_from_triple(presymplectic()), {});
  EXPECT_FALSE(find_check(diff, "equivalence.span")->passed);
}

TEST(RoundTrip, BialgebroidToTripleAndBack) {
  std::vector<DiracBialgebroid> zoo = {bialgebroid_from_lie_bialgebroid(poisson_xy()).db,
                                       bialgebroid_from_im2form(tangent_algebroid(xy()), sigma_dxdy()).db};
  for (const auto& db : zoo) {
    LADiracTriple T = triple_from_bialgebroid(db);
    EXPECT_TRUE(all_passed(check_la_dirac(T, {.trials = 2})));
    Report r = bialgebroids_equivalent(db, bialgebroid_from_triple(T), {});
    EXPECT_TRUE(all_passed(r)) << show(r);
  }
}
