#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "courant.hpp"

namespace diracalg {

/// (U, K, Delta) over a Lie algebroid A: U in TM + A*, K in A + T*M, Delta a Dorfman connection.
/// K defaults to the annihilator of U.
struct LADiracTriple {
  LADiracTriple(DullAlgebroid A, Subbundle U_, DorfmanConnection D, std::optional<Subbundle> K_ = std::nullopt)
      : calc(std::move(A), std::move(D)), U(std::move(U_)) {
    const SplitDims& dm = calc.dims();
    if (U.ambient() != dm.qrank()) throw ShapeError("triple: U is not a subbundle of TM + A*");
    K = K_ ? *K_ : annihilator_qb(U, dm);
    if (K.ambient() != dm.brank()) throw ShapeError("triple: K is not a subbundle of A + T*M");
  }

  const DullAlgebroid& algebroid() const { return calc.algebroid(); }
  const DorfmanConnection& dorfman() const { return calc.dorfman(); }
  const SplitDims& dims() const { return calc.dims(); }
  const Patch& patch() const { return calc.patch(); }

  BasicCalculus calc;
  Subbundle U;
  Subbundle K;
};

namespace detail {

inline void membership_check(CheckResult& r, const Subbundle& S, const Section& v, const std::string& ctx, const Patch& patch) {
  if (!S.contains(v)) r.fail(ctx, v, patch);
}

inline CheckResult condition5(const LADiracTriple& T, const CheckOptions& opts, const std::string& name) {
  return run_check(name, opts, [&](CheckResult& r) {
    const std::size_t rk = T.dims().r;
    const auto& U = T.U.frame();
    for (std::size_t a = 0; a < rk; ++a)
      for (std::size_t b = a + 1; b < rk; ++b)
        for (std::size_t k = 0; k < U.size(); ++k)
          membership_check(r, T.K, T.calc.basic_curvature(unit_section(rk, a), unit_section(rk, b), U[k]),
                           frame_label({a, b, k}), T.patch());
  });
}

}  // namespace detail

/// Conditions (1)-(5) for (U, K, Delta) to describe an LA-Dirac structure, plus Delta_U K in K
/// and flatness of the induced U-connection on (A + T*M)/K.
inline Report check_la_dirac(const LADiracTriple& T, const CheckOptions& opts, const std::string& prefix = "la_dirac") {
  const BasicCalculus& c = T.calc;
  const SplitDims& dm = T.dims();
  const Patch& patch = T.patch();
  const auto& U = T.U.frame();
  const auto& K = T.K.frame();
  const std::size_t N = dm.qrank(), rk = dm.r;
  Report rep;
  rep.push_back(run_check(prefix + ".precondition", opts, [&](CheckResult& r) {
    for (std::size_t i = 0; i < U.size(); ++i)
      for (std::size_t j = 0; j < K.size(); ++j) detail::membership_check(r, T.K, c.delta(U[i], K[j]), frame_label({i, j}), patch);
  }));
  rep.push_back(run_check(prefix + ".condition1", opts, [&](CheckResult& r) {
    if (U.size() + K.size() != N)
      r.fail("rank", {std::to_string(U.size()) + " + " + std::to_string(K.size()) + " != " + std::to_string(N)});
    for (std::size_t i = 0; i < U.size(); ++i)
      for (std::size_t j = 0; j < K.size(); ++j) {
        ScalarField v = c.pairing(U[i], K[j]);
        if (!v.is_zero()) r.fail(frame_label({i, j}), v, patch);
      }
  }));
  rep.push_back(run_check(prefix + ".condition2", opts, [&](CheckResult& r) {
    for (std::size_t j = 0; j < K.size(); ++j) detail::membership_check(r, T.U, c.rho_rhot(K[j]), frame_label({j}), patch);
  }));
  rep.push_back(run_check(prefix + ".condition3.closed", opts, [&](CheckResult& r) {
    for (std::size_t i = 0; i < U.size(); ++i)
      for (std::size_t j = 0; j < U.size(); ++j) detail::membership_check(r, T.U, c.bracket_q(U[i], U[j]), frame_label({i, j}), patch);
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials && !U.empty(); ++t)
      detail::membership_check(r, T.U, c.bracket_q(s.combination(U, N), s.combination(U, N)), trial_label(t), patch);
  }));
  BracketSpace space;
  space.patch = patch;
  space.rep_rank = N;
  space.basis = U;
  space.bracket = [&c](const Section& a, const Section& b) { return c.bracket_q(a, b); };
  space.anchor = [&dm](const Section& a) { return dm.q_tm(a); };
  append(rep, check_lie(space, opts, prefix + ".condition3"));
  rep.push_back(run_check(prefix + ".condition3.flat", opts, [&](CheckResult& r) {
    for (std::size_t i = 0; i < U.size(); ++i)
      for (std::size_t j = i + 1; j < U.size(); ++j)
        for (std::size_t m = 0; m < N; ++m)
          detail::membership_check(r, T.K, c.curvature(U[i], U[j], unit_section(N, m)), frame_label({i, j, m}), patch);
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials && !U.empty(); ++t)
      detail::membership_check(r, T.K, c.curvature(s.combination(U, N), s.combination(U, N), s.section(N)), trial_label(t), patch);
  }));
  rep.push_back(run_check(prefix + ".condition4", opts, [&](CheckResult& r) {
    for (std::size_t a = 0; a < rk; ++a)
      for (std::size_t k = 0; k < U.size(); ++k)
        detail::membership_check(r, T.U, c.nabla_q(unit_section(rk, a), U[k]), frame_label({a, k}), patch);
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials && !U.empty(); ++t)
      detail::membership_check(r, T.U, c.nabla_q(s.section(rk), s.combination(U, N)), trial_label(t), patch);
  }));
  rep.push_back(detail::condition5(T, opts, prefix + ".condition5"));
  return rep;
}

/// A-Manin pair: Courant algebroid C, the image of U in C and in TM + A*, and Phi: A + T*M -> C.
struct AManinPair {
  DullAlgebroid A;
  CourantPresentation C;
  std::vector<Section> u_in_c;
  std::vector<Section> u_in_q;
  Matrix phi;
};

/// C = U + (A + T*M) modulo graph(-(rho, rho^t)|K), with representatives (nu, tau) in (TM + A*) + (A + T*M).
inline AManinPair build_courant_C(const LADiracTriple& T, bool require_valid = true) {
  if (require_valid) {
    Report r = check_la_dirac(T, {.seed = 0, .trials = 2});
    for (const auto& c : r)
      if (!c.passed) throw Error("build_courant_C: triple fails " + c.name);
  }
  auto calc = std::make_shared<BasicCalculus>(T.calc);
  const SplitDims dm = T.dims();
  const std::size_t N = dm.qrank(), n = dm.n;
  CourantPresentation C;
  C.name = "C";
  C.patch = T.patch();
  C.rep_rank = 2 * N;
  for (const auto& u : T.U.frame()) C.basis.push_back(concat(u, Section(N)));
  for (const auto& w : complement(T.K)) C.basis.push_back(concat(Section(N), w));
  std::vector<Section> graph;
  for (const auto& k : T.K.frame()) graph.push_back(concat(-calc->rho_rhot(k), k));
  if (!graph.empty()) C.relations = std::make_shared<Subbundle>(2 * N, graph);
  C.anchor = [calc, N, n](const Section& s) {
    return slice(s, 0, n) + calc->algebroid().anchor(calc->pr_a(slice(s, N, N)));
  };
  C.pairing = [calc, N](const Section& a, const Section& b) {
    Section u1 = slice(a, 0, N), t1 = slice(a, N, N), u2 = slice(b, 0, N), t2 = slice(b, N, N);
    return calc->pairing(u1, t2) + calc->pairing(u2, t1) + calc->pairing(calc->rho_rhot(t2), t1);
  };
  C.bracket = [calc, N](const Section& a, const Section& b) {
    Section u1 = slice(a, 0, N), t1 = slice(a, N, N), u2 = slice(b, 0, N), t2 = slice(b, N, N);
    Section a1 = calc->pr_a(t1), a2 = calc->pr_a(t2);
    Section top = calc->bracket_q(u1, u2) + calc->nabla_q(a1, u2) - calc->nabla_q(a2, u1);
    Section bottom = calc->bracket_d(t1, t2) + calc->delta(u1, t2) - calc->delta(u2, t1) + calc->d_b(calc->pairing(u2, t1));
    return concat(top, bottom);
  };
  C.dcal = [calc, N](const ScalarField& f) { return concat(Section(N), calc->d_b(f)); };

  AManinPair mp{T.algebroid(), std::move(C), {}, T.U.frame(), Matrix(2 * N, N)};
  for (const auto& u : T.U.frame()) mp.u_in_c.push_back(concat(u, Section(N)));
  for (std::size_t j = 0; j < N; ++j) mp.phi(N + j, j) = ScalarField(1);
  return mp;
}

struct QuotientComparison {
  bool equal = false;
  Section difference;
  Section witness;  ///< kills the relations but not the difference
};

inline QuotientComparison quotient_compare(const CourantPresentation& C, const Section& a, const Section& b) {
  QuotientComparison q;
  q.difference = a - b;
  if (!C.relations) {
    q.equal = is_zero(q.difference);
    if (!q.equal) q.witness = q.difference;
    return q;
  }
  Membership m = C.relations->membership(q.difference);
  q.equal = m.member;
  q.witness = m.witness;
  return q;
}

inline bool quotient_equal(const CourantPresentation& C, const Section& a, const Section& b) {
  return quotient_compare(C, a, b).equal;
}

/// U is Dirac in C, Phi is a Courant morphism from the degenerate A + T*M, Phi(A + T*M) + U = C,
/// and <u, Phi(tau)>_C = <iota u, tau>.
inline Report check_manin_pair(const AManinPair& mp, const CheckOptions& opts, const std::string& prefix = "manin") {
  const CourantPresentation& C = mp.C;
  const Patch& patch = C.patch;
  SplitDims dm{mp.A.dim(), mp.A.rank()};
  Report rep;
  append(rep, check_dirac(C, mp.u_in_c, opts, prefix + ".dirac"));
  append(rep, check_courant_morphism(mp.phi, degenerate_courant(mp.A), C, opts, prefix + ".morphism"));
  rep.push_back(run_check(prefix + ".spanning", opts, [&](CheckResult& r) {
    std::vector<Section> gens = mp.u_in_c;
    for (const auto& col : mp.phi.columns()) gens.push_back(col);
    Subbundle S = C.span(gens);
    for (std::size_t j = 0; j < C.basis.size(); ++j)
      if (!S.contains(C.basis[j])) r.fail("basis " + std::to_string(j + 1), C.basis[j], patch);
  }));
  rep.push_back(run_check(prefix + ".iota_anchor", opts, [&](CheckResult& r) {
    for (std::size_t i = 0; i < mp.u_in_c.size(); ++i) {
      VectorField v = C.anchor(mp.u_in_c[i]) - dm.q_tm(mp.u_in_q[i]);
      if (!is_zero(v)) r.fail(frame_label({i}), v, patch);
    }
  }));
  rep.push_back(run_check(prefix + ".pairing_compat", opts, [&](CheckResult& r) {
    for (std::size_t i = 0; i < mp.u_in_c.size(); ++i)
      for (std::size_t j = 0; j < dm.brank(); ++j) {
        ScalarField v = C.pairing(mp.u_in_c[i], mp.phi.column(j)) - canonical_pairing(mp.u_in_q[i], unit_section(dm.brank(), j), dm);
        if (!v.is_zero()) r.fail(frame_label({i, j}), v, patch);
      }
  }));
  return rep;
}

/// Residuals of the identities used in the proof that C is a Courant algebroid.
inline Report verify_appendix_lemmas(const LADiracTriple& T, const CheckOptions& opts, const std::string& prefix = "lemmas") {
  const BasicCalculus& c = T.calc;
  const SplitDims& dm = T.dims();
  const Patch& patch = T.patch();
  const std::size_t N = dm.qrank(), rk = dm.r;
  const auto& U = T.U.frame();
  const auto& K = T.K.frame();
  Report rep;
  rep.push_back(run_check(prefix + ".basic_like_eqq", opts, [&](CheckResult& r) {
    auto test = [&](const Section& t1, const Section& t2, const std::string& ctx) {
      Section v = c.bracket_d(t1, t2) - c.delta(c.rho_rhot(t1), t2) + c.nabla_b(c.pr_a(t2), t1);
      if (!is_zero(v)) r.fail(ctx, v, patch);
    };
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) test(unit_section(N, i), unit_section(N, j), frame_label({i, j}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) test(s.section(N), s.section(N), trial_label(t));
  }));
  rep.push_back(run_check(prefix + ".complicated_eqq", opts, [&](CheckResult& r) {
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section nu = s.section(N), tau = s.section(N), tau2 = s.section(N);
      Section lhs = c.rho_rhot(c.delta(nu, tau)) - c.bracket_q(nu, c.rho_rhot(tau)) - c.nabla_q(c.pr_a(tau), nu);
      ScalarField v = c.pairing(lhs, tau2) - c.pairing(c.nabla_q(c.pr_a(tau2), nu), tau);
      if (!v.is_zero()) r.fail(trial_label(t), v, patch);
    }
  }));
  rep.push_back(run_check(prefix + ".eq_for_morphism", opts, [&](CheckResult& r) {
    auto test = [&](const Section& u, const Section& k, const std::string& ctx) {
      Section v = c.rho_rhot(c.delta(u, k)) - c.bracket_q(u, c.rho_rhot(k)) - c.nabla_q(c.pr_a(k), u);
      if (!is_zero(v)) r.fail(ctx, v, patch);
    };
    for (std::size_t i = 0; i < U.size(); ++i)
      for (std::size_t j = 0; j < K.size(); ++j) test(U[i], K[j], frame_label({i, j}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials && !U.empty() && !K.empty(); ++t) test(s.combination(U, N), s.combination(K, N), trial_label(t));
  }));
  rep.push_back(run_check(prefix + ".intertwine_bas", opts, [&](CheckResult& r) {
    auto test = [&](const Section& a, const Section& tau, const std::string& ctx) {
      Section v = c.nabla_q(a, c.rho_rhot(tau)) - c.rho_rhot(c.nabla_b(a, tau));
      if (!is_zero(v)) r.fail(ctx, v, patch);
    };
    for (std::size_t a = 0; a < rk; ++a)
      for (std::size_t j = 0; j < N; ++j) test(unit_section(rk, a), unit_section(N, j), frame_label({a, j}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) test(s.section(rk), s.section(N), trial_label(t));
  }));
  CheckResult b1 = run_check(prefix + ".bialgebroid1", opts, [&](CheckResult& r) {
    auto test = [&](const Section& u, const Section& v, const Section& tau, const std::string& ctx) {
      Section a = c.pr_a(tau);
      Section res = c.nabla_q(a, c.bracket_q(u, v)) - c.bracket_q(c.nabla_q(a, u), v) - c.bracket_q(u, c.nabla_q(a, v)) +
                    c.nabla_q(c.pr_a(c.delta(u, tau)), v) - c.nabla_q(c.pr_a(c.delta(v, tau)), u) +
                    c.rho_rhot(c.curvature(u, v, tau));
      if (!is_zero(res)) r.fail(ctx, res, patch);
    };
    for (std::size_t i = 0; i < U.size(); ++i)
      for (std::size_t j = 0; j < U.size(); ++j)
        for (std::size_t m = 0; m < N; ++m) test(U[i], U[j], unit_section(N, m), frame_label({i, j, m}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials && !U.empty(); ++t) test(s.combination(U, N), s.combination(U, N), s.section(N), trial_label(t));
  });
  rep.push_back(b1);
  rep.push_back(run_check(prefix + ".bialgebroid2", opts, [&](CheckResult& r) {
    auto test = [&](const Section& u, const Section& t1, const Section& t2, const std::string& ctx) {
      Section a1 = c.pr_a(t1), a2 = c.pr_a(t2);
      Section n1 = c.nabla_q(a1, u), n2 = c.nabla_q(a2, u);
      Section res = c.delta(u, c.bracket_d(t1, t2)) - c.bracket_d(c.delta(u, t1), t2) - c.bracket_d(t1, c.delta(u, t2)) +
                    c.delta(n1, t2) - c.delta(n2, t1) + c.d_b(c.pairing(n2, t1)) + c.basic_curvature(a1, a2, u);
      if (!is_zero(res)) r.fail(ctx, res, patch);
    };
    for (std::size_t k = 0; k < U.size(); ++k)
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) test(U[k], unit_section(N, i), unit_section(N, j), frame_label({k, i, j}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials && !U.empty(); ++t) test(s.combination(U, N), s.section(N), s.section(N), trial_label(t));
  }));
  CheckResult c5 = detail::condition5(T, opts, prefix + ".condition5");
  rep.push_back(c5);
  rep.push_back(run_check(prefix + ".bialgebroid1_iff_condition5", opts, [&](CheckResult& r) {
    r.detail = std::string("bialgebroid1 ") + (b1.passed ? "holds" : "fails") + ", condition (5) " + (c5.passed ? "holds" : "fails");
    if (b1.passed != c5.passed) r.fail("consistency", {r.detail});
  }));
  return rep;
}

/// phi_a(u) = class of Omega_u a is skew: <Omega_{u1} a, u2> + <Omega_{u2} a, u1> = 0 on U-frames.
inline CheckResult verify_phi_skew(const LADiracTriple& T, const Section& a, const CheckOptions& opts,
                                   const std::string& name = "phi_skew") {
  return run_check(name, opts, [&](CheckResult& r) {
    const auto& U = T.U.frame();
    for (std::size_t i = 0; i < U.size(); ++i)
      for (std::size_t j = i; j < U.size(); ++j) {
        ScalarField v = T.calc.pairing(U[j], T.calc.omega(U[i], a)) + T.calc.pairing(U[i], T.calc.omega(U[j], a));
        if (!v.is_zero()) r.fail(frame_label({i, j}), v, T.patch());
      }
  });
}

/// (A, U, iota): a Lie algebroid U with an anchored embedding iota: U -> TM + A*.
struct DiracBialgebroid {
  DullAlgebroid A;
  DullAlgebroid U;
  Matrix iota;

  std::vector<Section> image() const { return iota.columns(); }
};

/// Throws unless pr_TM o iota = rho_U and iota has full rank.
inline void validate(const DiracBialgebroid& db) {
  const std::size_t n = db.A.dim(), N = n + db.A.rank(), p = db.U.rank();
  if (db.iota.rows() != N || db.iota.cols() != p) throw ShapeError("bialgebroid: iota has wrong shape");
  if (rank(db.iota) != p) throw RankError("bialgebroid: iota is not injective");
  for (std::size_t k = 0; k < p; ++k)
    if (!is_zero(slice(db.iota.column(k), 0, n) - db.U.anchor(unit_section(p, k))))
      throw Error("bialgebroid: anchor mismatch on " + frame_label({k}));
}

/// Steps 1-3 of the recipe: embed U, extend its bracket to a dull bracket, dualize.
inline LADiracTriple triple_from_bialgebroid(const DiracBialgebroid& db,
                                             std::optional<std::vector<Section>> complement_frame = std::nullopt) {
  validate(db);
  Subbundle U(db.iota.rows(), db.image());
  DorfmanConnection D = extend_lie_bracket_to_dull(db.A.patch(), db.A.rank(), U, db.U.structure_table(), complement_frame);
  return LADiracTriple(db.A, std::move(U), std::move(D));
}

/// Reads (U, [[., .]]_Delta restricted to U) off a triple.
inline DiracBialgebroid bialgebroid_from_triple(const LADiracTriple& T, const std::string& name = "U") {
  const auto& F = T.U.frame();
  const std::size_t p = F.size(), n = T.dims().n, N = T.dims().qrank();
  std::vector<Section> c(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      Membership m = T.U.membership(T.calc.bracket_q(F[i], F[j]));
      if (!m.member) throw Error("bialgebroid_from_triple: U is not closed at " + frame_label({i, j}));
      c[i * p + j] = m.coefficients;
    }
  Matrix anchor(n, p), iota = Matrix::from_columns(F, N);
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t mu = 0; mu < n; ++mu) anchor(mu, k) = F[k][mu];
  return {T.algebroid(), DullAlgebroid(T.patch(), p, anchor, c, name), iota};
}

/// Same image in TM + A* and the same bracket there.
inline Report bialgebroids_equivalent(const DiracBialgebroid& db1, const DiracBialgebroid& db2, const CheckOptions& opts,
                                      const std::string& prefix = "equivalence") {
  const Patch& patch = db1.A.patch();
  const std::size_t n = db1.A.dim(), N = db1.iota.rows();
  Subbundle U1(N, db1.image()), U2(N, db2.image());
  Report rep;
  bool same = false;
  rep.push_back(run_check(prefix + ".span", opts, [&](CheckResult& r) {
    if (db1.A.rank() != db2.A.rank() || !(db1.A.patch() == db2.A.patch())) {
      r.fail("algebroid", {"different base algebroids"});
      return;
    }
    for (std::size_t k = 0; k < U2.rank(); ++k)
      if (!U1.contains(U2.frame()[k])) r.fail("second frame " + std::to_string(k + 1), U2.frame()[k], patch);
    for (std::size_t k = 0; k < U1.rank(); ++k)
      if (!U2.contains(U1.frame()[k])) r.fail("first frame " + std::to_string(k + 1), U1.frame()[k], patch);
    same = r.passed;
  }));
  rep.push_back(run_check(prefix + ".bracket", opts, [&](CheckResult& r) {
    if (!same) {
      r.fail("span", {"images differ"});
      return;
    }
    const std::size_t p = U2.rank();
    std::vector<Section> coeff;
    for (const auto& v : U2.frame()) coeff.push_back(U1.membership(v).coefficients);
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t l = 0; l < p; ++l) {
        Section v = db2.iota.apply(db2.U.structure(k, l)) - subbundle_bracket(U1, db1.U.structure_table(), n, coeff[k], coeff[l]);
        if (!is_zero(v)) r.fail(frame_label({k, l}), v, patch);
      }
  }));
  return rep;
}

}  // namespace diracalg
