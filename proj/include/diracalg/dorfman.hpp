#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "algebroid.hpp"

namespace diracalg {

/// Dorfman connection Delta: Gamma(TM + A*) x Gamma(A + T*M) -> Gamma(A + T*M), stored as the
/// table Delta_{q_i} f_j on standard frames and extended by the Leibniz laws.
class DorfmanConnection {
 public:
  DorfmanConnection() = default;
  DorfmanConnection(Patch patch, std::size_t r, std::vector<Section> table = {})
      : patch_(std::move(patch)), dims_{patch_.dim(), r}, table_(std::move(table)) {
    const std::size_t N = dims_.qrank() * dims_.brank();
    if (table_.empty()) table_.assign(N, Section(dims_.brank()));
    if (table_.size() != N) throw ShapeError("dorfman: table has wrong size");
    for (const auto& s : table_)
      if (s.size() != dims_.brank()) throw ShapeError("dorfman: table entry has wrong rank");
  }

  /// Tabulates a formula on the standard frames.
  static DorfmanConnection from_formula(const Patch& patch, std::size_t r,
                                        const std::function<Section(const Section&, const Section&)>& delta) {
    SplitDims d{patch.dim(), r};
    std::vector<Section> t;
    for (std::size_t i = 0; i < d.qrank(); ++i)
      for (std::size_t j = 0; j < d.brank(); ++j) t.push_back(delta(unit_section(d.qrank(), i), unit_section(d.brank(), j)));
    return DorfmanConnection(patch, r, std::move(t));
  }

  const Patch& patch() const { return patch_; }
  const SplitDims& dims() const { return dims_; }
  const Section& table(std::size_t i, std::size_t j) const { return table_[i * dims_.brank() + j]; }
  const std::vector<Section>& entries() const { return table_; }

  ScalarField pairing(const Section& q, const Section& b) const { return canonical_pairing(q, b, dims_); }

  /// d_B f = (0, df).
  Section d_b(const ScalarField& f) const { return concat(Section(dims_.r), d(f, dims_.n)); }

  Section eval(const Section& q, const Section& b) const {
    if (q.size() != dims_.qrank() || b.size() != dims_.brank()) throw ShapeError("dorfman eval: rank mismatch");
    Section out(dims_.brank());
    for (std::size_t i = 0; i < dims_.qrank(); ++i) {
      if (q[i].is_zero()) continue;
      for (std::size_t j = 0; j < dims_.brank(); ++j) {
        if (b[j].is_zero()) continue;
        const Section& t = table(i, j);
        if (!is_zero(t)) add_scaled(out, q[i] * b[j], t);
      }
    }
    VectorField x = dims_.q_tm(q);
    for (std::size_t j = 0; j < dims_.brank(); ++j) out[j] += act(x, b[j]);
    for (std::size_t i = 0; i < dims_.qrank(); ++i) {
      if (q[i].is_constant()) continue;
      const ScalarField& pb = b[dual_index_qb(i, dims_)];
      if (pb.is_zero()) continue;
      OneForm dq = d(q[i], dims_.n);
      for (std::size_t mu = 0; mu < dims_.n; ++mu) out[dims_.r + mu] += pb * dq[mu];
    }
    return out;
  }

  friend bool operator==(const DorfmanConnection& a, const DorfmanConnection& b) {
    return a.patch_ == b.patch_ && a.dims_.r == b.dims_.r && a.table_ == b.table_;
  }

 private:
  Patch patch_;
  SplitDims dims_;
  std::vector<Section> table_;
};

/// Checks the three laws: derivation in b, C-linearity up to <q,b> d_B f in q, and
/// compatibility with d_B.
inline Report check_dorfman_axioms(const DorfmanConnection& D, const CheckOptions& opts) {
  const auto& dm = D.dims();
  const Patch& patch = D.patch();
  Report rep;
  rep.push_back(run_check("dorfman.law1", opts, [&](CheckResult& r) {
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section q = s.section(dm.qrank()), b = s.section(dm.brank());
      ScalarField f = s.polynomial();
      Section res = D.eval(q, f * b) - f * D.eval(q, b) - act(dm.q_tm(q), f) * b;
      if (!is_zero(res)) r.fail(trial_label(t), res, patch);
    }
  }));
  rep.push_back(run_check("dorfman.law2", opts, [&](CheckResult& r) {
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section q = s.section(dm.qrank()), b = s.section(dm.brank());
      ScalarField f = s.polynomial();
      Section res = D.eval(f * q, b) - f * D.eval(q, b) - D.pairing(q, b) * D.d_b(f);
      if (!is_zero(res)) r.fail(trial_label(t), res, patch);
    }
  }));
  rep.push_back(run_check("dorfman.law3", opts, [&](CheckResult& r) {
    std::vector<ScalarField> fs;
    for (std::size_t mu = 0; mu < dm.n; ++mu) fs.push_back(ScalarField::variable(mu));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) fs.push_back(s.polynomial());
    for (std::size_t i = 0; i < dm.qrank(); ++i) {
      Section q = unit_section(dm.qrank(), i);
      for (std::size_t k = 0; k < fs.size(); ++k) {
        Section res = D.eval(q, D.d_b(fs[k])) - D.d_b(act(dm.q_tm(q), fs[k]));
        if (!is_zero(res)) {
          std::string ctx = "q_" + std::to_string(i + 1) + ", f = " + to_string(fs[k], patch);
          r.fail(ctx, res, patch);
        }
      }
    }
  }));
  return rep;
}

/// Dull bracket on TM + A* dual to Delta:
/// <[[q1,q2]], tau> = rho(q1)<q2,tau> - <q2, Delta_{q1} tau>, anchored by the TM projection.
inline DullAlgebroid dual_dull_bracket(const DorfmanConnection& D) {
  const auto& dm = D.dims();
  const std::size_t N = dm.qrank();
  Matrix anchor(dm.n, N);
  for (std::size_t mu = 0; mu < dm.n; ++mu) anchor(mu, mu) = ScalarField(1);
  std::vector<Section> c(N * N, Section(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t l = 0; l < N; ++l) c[i * N + j][l] = -D.table(i, dual_index_qb(l, dm))[dual_index_qb(j, dm)];
  return DullAlgebroid(D.patch(), N, std::move(anchor), std::move(c), "Q");
}

/// Dorfman connection dual to a dull bracket on TM + A* anchored by the TM projection.
inline DorfmanConnection dorfman_from_dull(const DullAlgebroid& Q, std::size_t r) {
  SplitDims dm{Q.dim(), r};
  if (Q.rank() != dm.qrank()) throw ShapeError("dorfman_from_dull: rank mismatch");
  const std::size_t N = dm.qrank();
  std::vector<Section> t(N * N, Section(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t m = 0; m < N; ++m)
      for (std::size_t s = 0; s < N; ++s) t[i * N + m][s] = -Q.structure(i, dual_index_bq(s, dm))[dual_index_bq(m, dm)];
  return DorfmanConnection(Q.patch(), r, std::move(t));
}

/// Derived maps of a Lie algebroid A together with a Dorfman connection on TM + A*, A + T*M.
class BasicCalculus {
 public:
  BasicCalculus(DullAlgebroid A, DorfmanConnection D) : A_(std::move(A)), D_(std::move(D)), Q_(dual_dull_bracket(D_)) {
    if (!(A_.patch() == D_.patch()) || A_.rank() != D_.dims().r) throw ShapeError("calculus: algebroid and connection disagree");
  }

  const DullAlgebroid& algebroid() const { return A_; }
  const DorfmanConnection& dorfman() const { return D_; }
  const DullAlgebroid& dull() const { return Q_; }
  const SplitDims& dims() const { return D_.dims(); }
  const Patch& patch() const { return A_.patch(); }

  Section delta(const Section& q, const Section& b) const { return D_.eval(q, b); }
  Section bracket_q(const Section& q1, const Section& q2) const { return Q_.bracket(q1, q2); }
  ScalarField pairing(const Section& q, const Section& b) const { return D_.pairing(q, b); }
  Section rho_rhot(const Section& tau) const { return diracalg::rho_rhot(A_, tau); }
  Section embed_a(const Section& a) const { return concat(a, Section(dims().n)); }
  Section pr_a(const Section& tau) const { return dims().b_a(tau); }
  Section bracket_d(const Section& t1, const Section& t2) const { return diracalg::bracket_d(A_, t1, t2); }
  Section d_b(const ScalarField& f) const { return D_.d_b(f); }

  /// Omega_{(X,alpha)} a = Delta_{(X,alpha)}(a,0) - (0, d<alpha,a>).
  Section omega(const Section& v, const Section& a) const {
    return delta(v, embed_a(a)) - d_b(dot(dims().q_astar(v), a));
  }

  /// nabla^bas_a nu = (rho, rho^t)(Omega_nu a) + L_a nu on TM + A*.
  Section nabla_q(const Section& a, const Section& nu) const { return rho_rhot(omega(nu, a)) + ldr_q(A_, a, nu); }

  /// nabla^bas_a tau = Omega_{(rho,rho^t) tau} a + L_a tau on A + T*M.
  Section nabla_b(const Section& a, const Section& tau) const { return omega(rho_rhot(tau), a) + ldr_b(A_, a, tau); }

  /// Basic curvature R^bas_Delta(a1, a2) nu, a section of A + T*M.
  Section basic_curvature(const Section& a1, const Section& a2, const Section& nu) const {
    Section out = -omega(nu, A_.bracket(a1, a2));
    out += ldr_b(A_, a1, omega(nu, a2));
    out -= ldr_b(A_, a2, omega(nu, a1));
    out += omega(nabla_q(a2, nu), a1);
    out -= omega(nabla_q(a1, nu), a2);
    return out;
  }

  /// R_Delta(u1, u2) tau = Delta_{u1} Delta_{u2} tau - Delta_{u2} Delta_{u1} tau - Delta_{[[u1,u2]]} tau.
  Section curvature(const Section& u1, const Section& u2, const Section& tau) const {
    return delta(u1, delta(u2, tau)) - delta(u2, delta(u1, tau)) - delta(bracket_q(u1, u2), tau);
  }

 private:
  DullAlgebroid A_;
  DorfmanConnection D_;
  DullAlgebroid Q_;
};

/// Extends a Lie bracket on U (given in a frame of U) to a dull bracket on TM + A*.
/// A complement W of U is chosen (greedy by default); brackets involving W are the lifts
/// ([pr p, pr q], 0), and the result is expanded in the standard frame by the Leibniz rule.
inline DorfmanConnection extend_lie_bracket_to_dull(const Patch& patch, std::size_t r, const Subbundle& U,
                                                    const std::vector<Section>& u_structure,
                                                    std::optional<std::vector<Section>> complement_frame = std::nullopt) {
  SplitDims dm{patch.dim(), r};
  const std::size_t N = dm.qrank(), p = U.rank();
  if (U.ambient() != N) throw ShapeError("extend: U is not a subbundle of TM + A*");
  if (u_structure.size() != p * p) throw ShapeError("extend: U structure table has wrong size");
  std::vector<Section> W = complement_frame ? *complement_frame : complement(U);
  std::vector<Section> F = U.frame();
  F.insert(F.end(), W.begin(), W.end());
  if (F.size() != N) throw RankError("extend: complement has wrong rank");
  Matrix M = inverse(Matrix::from_columns(F, N));  // column l: coordinates of e_l in the frame F

  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t kk = 0; kk < p; ++kk) {
      VectorField res = dm.q_tm(U.combine(u_structure[k * p + kk])) - lie_bracket(dm.q_tm(U.frame()[k]), dm.q_tm(U.frame()[kk]));
      if (!is_zero(res)) throw Error("extend: bracket on U is not anchored by the TM projection at " + frame_label({k, kk}));
    }

  auto frame_bracket = [&](std::size_t k, std::size_t kk) -> Section {
    if (k < p && kk < p) return U.combine(u_structure[k * p + kk]);
    return concat(lie_bracket(dm.q_tm(F[k]), dm.q_tm(F[kk])), Section(r));
  };
  std::vector<Section> G(N * N);
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t kk = 0; kk < N; ++kk) G[k * N + kk] = frame_bracket(k, kk);

  std::vector<VectorField> rhoF;
  for (const auto& f : F) rhoF.push_back(dm.q_tm(f));
  std::vector<Section> c(N * N, Section(N));
  for (std::size_t l = 0; l < N; ++l)
    for (std::size_t m = 0; m < N; ++m) {
      Section out(N);
      for (std::size_t k = 0; k < N; ++k) {
        if (M(k, l).is_zero()) continue;
        for (std::size_t kk = 0; kk < N; ++kk)
          if (!M(kk, m).is_zero()) add_scaled(out, M(k, l) * M(kk, m), G[k * N + kk]);
      }
      for (std::size_t k = 0; k < N; ++k) {
        if (!M(k, l).is_zero())
          for (std::size_t kk = 0; kk < N; ++kk) add_scaled(out, M(k, l) * act(rhoF[k], M(kk, m)), F[kk]);
        if (!M(k, m).is_zero())
          for (std::size_t kk = 0; kk < N; ++kk) add_scaled(out, -(M(k, m) * act(rhoF[k], M(kk, l))), F[kk]);
      }
      c[l * N + m] = std::move(out);
    }
  Matrix anchor(dm.n, N);
  for (std::size_t mu = 0; mu < dm.n; ++mu) anchor(mu, mu) = ScalarField(1);
  return dorfman_from_dull(DullAlgebroid(patch, N, std::move(anchor), std::move(c), "Q"), r);
}

/// Bracket on U given by structure functions in the frame of U, extended by Leibniz.
inline Section subbundle_bracket(const Subbundle& U, const std::vector<Section>& u_structure, std::size_t n,
                                 const Section& c1, const Section& c2) {
  const std::size_t p = U.rank();
  Section out(U.ambient());
  for (std::size_t k = 0; k < p; ++k) {
    if (c1[k].is_zero()) continue;
    for (std::size_t kk = 0; kk < p; ++kk)
      if (!c2[kk].is_zero()) add_scaled(out, c1[k] * c2[kk], U.combine(u_structure[k * p + kk]));
  }
  VectorField x1 = slice(U.combine(c1), 0, n), x2 = slice(U.combine(c2), 0, n);
  for (std::size_t k = 0; k < p; ++k) {
    add_scaled(out, act(x1, c2[k]), U.frame()[k]);
    add_scaled(out, -act(x2, c1[k]), U.frame()[k]);
  }
  return out;
}

/// Postconditions of an extension: the dual bracket is anchored by the TM projection, restricts
/// to the bracket of U, and Delta preserves the annihilator of U along U.
inline Report check_extension(const DorfmanConnection& D, const Subbundle& U, const std::vector<Section>& u_structure,
                              const CheckOptions& opts) {
  const auto& dm = D.dims();
  const Patch& patch = D.patch();
  DullAlgebroid Q = dual_dull_bracket(D);
  Subbundle K = annihilator_qb(U, dm);
  std::vector<Section> qbasis;
  for (std::size_t i = 0; i < dm.qrank(); ++i) qbasis.push_back(unit_section(dm.qrank(), i));
  Report rep;
  rep.push_back(check_anchor_compat(Q.space(), opts, "extension.anchor"));
  rep.push_back(run_check("extension.restricts", opts, [&](CheckResult& r) {
    const std::size_t p = U.rank();
    auto test = [&](const Section& c1, const Section& c2, const std::string& ctx) {
      Section res = Q.bracket(U.combine(c1), U.combine(c2)) - subbundle_bracket(U, u_structure, dm.n, c1, c2);
      if (!is_zero(res)) r.fail(ctx, res, patch);
    };
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t kk = 0; kk < p; ++kk) test(unit_section(p, k), unit_section(p, kk), frame_label({k, kk}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials && p; ++t) test(s.section(p), s.section(p), trial_label(t));
  }));
  rep.push_back(run_check("extension.preserves_annihilator", opts, [&](CheckResult& r) {
    for (std::size_t k = 0; k < U.rank(); ++k)
      for (std::size_t l = 0; l < K.rank(); ++l) {
        Section v = D.eval(U.frame()[k], K.frame()[l]);
        auto m = K.membership(v);
        if (!m.member) r.fail(frame_label({k, l}), v, patch);
      }
  }));
  return rep;
}

}  // namespace diracalg
