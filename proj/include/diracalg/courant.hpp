#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dorfman.hpp"

namespace diracalg {

/// Courant algebroid presented on representatives: a trivial bundle, optionally divided by a
/// relation subbundle, with anchor, symmetric pairing, bracket and D = rho^t d.
struct CourantPresentation {
  std::string name = "C";
  Patch patch;
  std::size_t rep_rank = 0;
  std::vector<Section> basis;                  ///< frame of C by representatives
  std::shared_ptr<const Subbundle> relations;  ///< null for an honest trivial bundle
  std::function<VectorField(const Section&)> anchor;
  std::function<ScalarField(const Section&, const Section&)> pairing;
  std::function<Section(const Section&, const Section&)> bracket;
  std::function<Section(const ScalarField&)> dcal;
  bool degenerate = false;
  bool axioms_checked = false;

  std::size_t rank() const { return basis.size(); }
  bool is_zero(const Section& s) const { return relations ? relations->contains(s) : diracalg::is_zero(s); }
  bool equal(const Section& a, const Section& b) const { return is_zero(a - b); }

  BracketSpace space() const {
    BracketSpace s;
    s.patch = patch;
    s.rep_rank = rep_rank;
    s.basis = basis;
    s.relations = relations;
    s.bracket = bracket;
    s.anchor = anchor;
    return s;
  }

  Matrix gram() const {
    Matrix g(rank(), rank());
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) g(i, j) = pairing(basis[i], basis[j]);
    return g;
  }

  /// Span of the given representatives together with the relations; dependent generators are dropped.
  Subbundle span(const std::vector<Section>& gens) const {
    std::vector<Section> all;
    if (relations) all = relations->frame();
    for (const auto& g : gens) {
      all.push_back(g);
      if (diracalg::rank(all, rep_rank) < all.size()) all.pop_back();
    }
    return Subbundle(rep_rank, all);
  }
};

inline std::vector<Section> standard_frame(std::size_t n) {
  std::vector<Section> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(unit_section(n, i));
  return b;
}

/// TM + T*M with the Courant-Dorfman bracket.
inline CourantPresentation standard_courant(const Patch& patch) {
  const std::size_t n = patch.dim();
  CourantPresentation c;
  c.name = "TM+T*M";
  c.patch = patch;
  c.rep_rank = 2 * n;
  c.basis = standard_frame(2 * n);
  c.anchor = [n](const Section& s) { return slice(s, 0, n); };
  c.pairing = [n](const Section& a, const Section& b) {
    return dot(slice(a, n, n), slice(b, 0, n)) + dot(slice(b, n, n), slice(a, 0, n));
  };
  c.bracket = [n](const Section& a, const Section& b) {
    VectorField x1 = slice(a, 0, n), x2 = slice(b, 0, n);
    OneForm t1 = slice(a, n, n), t2 = slice(b, n, n);
    return concat(lie_bracket(x1, x2), lie_derivative(x1, t2) - interior(x2, d(t1)));
  };
  c.dcal = [n](const ScalarField& f) { return concat(Section(n), d(f, n)); };
  return c;
}

/// A + T*M with the degenerate bracket and pairing induced by a Lie algebroid.
inline CourantPresentation degenerate_courant(const DullAlgebroid& A) {
  auto alg = std::make_shared<DullAlgebroid>(A);
  const std::size_t n = A.dim(), r = A.rank();
  CourantPresentation c;
  c.name = "A+T*M";
  c.patch = A.patch();
  c.rep_rank = r + n;
  c.basis = standard_frame(r + n);
  c.anchor = [alg, r](const Section& s) { return alg->anchor(slice(s, 0, r)); };
  c.pairing = [alg](const Section& a, const Section& b) { return pairing_d(*alg, a, b); };
  c.bracket = [alg](const Section& a, const Section& b) { return bracket_d(*alg, a, b); };
  c.dcal = [r, n](const ScalarField& f) { return concat(Section(r), d(f, n)); };
  c.degenerate = true;
  return c;
}

/// On a quotient presentation, anchor, pairing and bracket must not see the relations.
inline CheckResult check_well_defined(const CourantPresentation& C, const CheckOptions& opts) {
  return run_check("courant.well_defined", opts, [&](CheckResult& r) {
    const auto& G = C.relations->frame();
    const Patch& patch = C.patch;
    auto test = [&](const Section& g, const Section& c, const std::string& ctx) {
      VectorField x = C.anchor(g);
      if (!is_zero(x)) r.fail(ctx + " anchor", x, patch);
      ScalarField p = C.pairing(g, c);
      if (!p.is_zero()) r.fail(ctx + " pairing", p, patch);
      Section left = C.bracket(g, c), right = C.bracket(c, g);
      if (!C.is_zero(left)) r.fail(ctx + " left", left, patch);
      if (!C.is_zero(right)) r.fail(ctx + " right", right, patch);
    };
    for (std::size_t i = 0; i < G.size(); ++i)
      for (std::size_t j = 0; j < C.basis.size(); ++j) test(G[i], C.basis[j], "relation " + std::to_string(i + 1) + ", basis " + std::to_string(j + 1));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) test(s.combination(G, C.rep_rank), s.combination(C.basis, C.rep_rank), trial_label(t));
  });
}

/// Axioms (1)-(3), the derived (4)-(5), the identity <D f, c> = rho(c) f and nondegeneracy.
inline Report check_courant_axioms(const CourantPresentation& C, const CheckOptions& opts) {
  const auto& B = C.basis;
  const Patch& patch = C.patch;
  auto sample = [&](Sampler& s) { return s.combination(B, C.rep_rank); };
  Report rep;
  rep.push_back(run_check("courant.jacobi", opts, [&](CheckResult& r) {
    auto test = [&](const Section& a, const Section& b, const Section& c, const std::string& ctx) {
      Section res = C.bracket(a, C.bracket(b, c)) - C.bracket(C.bracket(a, b), c) - C.bracket(b, C.bracket(a, c));
      if (!C.is_zero(res)) r.fail(ctx, res, patch);
    };
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = 0; j < B.size(); ++j)
        for (std::size_t k = 0; k < B.size(); ++k) test(B[i], B[j], B[k], frame_label({i, j, k}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section a = sample(s), b = sample(s), c = sample(s);
      test(a, b, c, trial_label(t));
    }
  }));
  rep.push_back(run_check("courant.metric", opts, [&](CheckResult& r) {
    auto test = [&](const Section& a, const Section& b, const Section& c, const std::string& ctx) {
      ScalarField res = act(C.anchor(a), C.pairing(b, c)) - C.pairing(C.bracket(a, b), c) - C.pairing(b, C.bracket(a, c));
      if (!res.is_zero()) r.fail(ctx, res, patch);
    };
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = 0; j < B.size(); ++j)
        for (std::size_t k = j; k < B.size(); ++k) test(B[i], B[j], B[k], frame_label({i, j, k}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section a = sample(s), b = sample(s), c = sample(s);
      test(a, b, c, trial_label(t));
    }
  }));
  rep.push_back(run_check("courant.symmetric", opts, [&](CheckResult& r) {
    auto test = [&](const Section& a, const Section& b, const std::string& ctx) {
      Section res = C.bracket(a, b) + C.bracket(b, a) - C.dcal(C.pairing(a, b));
      if (!C.is_zero(res)) r.fail(ctx, res, patch);
    };
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = i; j < B.size(); ++j) test(B[i], B[j], frame_label({i, j}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section a = sample(s), b = sample(s);
      test(a, b, trial_label(t));
    }
  }));
  rep.push_back(check_anchor_compat(C.space(), opts, "courant.anchor"));
  rep.push_back(run_check("courant.leibniz", opts, [&](CheckResult& r) {
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section a = sample(s), b = sample(s);
      ScalarField f = s.polynomial();
      Section res = C.bracket(a, f * b) - f * C.bracket(a, b) - act(C.anchor(a), f) * b;
      if (!C.is_zero(res)) r.fail(trial_label(t), res, patch);
    }
  }));
  rep.push_back(run_check("courant.d_operator", opts, [&](CheckResult& r) {
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      ScalarField f = s.polynomial();
      Section c = sample(s);
      ScalarField res = C.pairing(C.dcal(f), c) - act(C.anchor(c), f);
      if (!res.is_zero()) r.fail(trial_label(t), res, patch);
    }
  }));
  if (C.relations) rep.push_back(check_well_defined(C, opts));
  rep.push_back(run_check("courant.nondegenerate", opts, [&](CheckResult& r) {
    if (C.degenerate) {
      r.detail = "degenerate pairing allowed";
      return;
    }
    ScalarField det = determinant(C.gram());
    if (det.is_zero()) r.fail("gram determinant", det, patch);
    else r.detail = "gram determinant " + to_string(det, patch);
  }));
  return rep;
}

/// Dirac structure test for a subbundle given by representatives.
inline Report check_dirac(const CourantPresentation& C, const std::vector<Section>& D_frame, const CheckOptions& opts,
                          const std::string& prefix = "dirac") {
  if (C.degenerate) throw Error("check_dirac: the pairing of " + C.name + " is degenerate");
  if (C.rank() % 2) throw Error("check_dirac: " + C.name + " has odd rank");
  const Patch& patch = C.patch;
  Subbundle Dspan = C.span(D_frame);
  Report rep;
  rep.push_back(run_check(prefix + ".half_rank", opts, [&](CheckResult& r) {
    if (2 * D_frame.size() != C.rank())
      r.fail("rank", {std::to_string(D_frame.size()) + " of " + std::to_string(C.rank())});
  }));
  rep.push_back(run_check(prefix + ".isotropic", opts, [&](CheckResult& r) {
    for (std::size_t i = 0; i < D_frame.size(); ++i)
      for (std::size_t j = i; j < D_frame.size(); ++j) {
        ScalarField v = C.pairing(D_frame[i], D_frame[j]);
        if (!v.is_zero()) r.fail(frame_label({i, j}), v, patch);
      }
  }));
  rep.push_back(run_check(prefix + ".maximal", opts, [&](CheckResult& r) {
    // D-perp in the frame of C, then membership in D.
    Matrix m(D_frame.size(), C.rank());
    for (std::size_t i = 0; i < D_frame.size(); ++i)
      for (std::size_t j = 0; j < C.rank(); ++j) m(i, j) = C.pairing(D_frame[i], C.basis[j]);
    std::vector<Section> perp;
    if (D_frame.empty()) perp = standard_frame(C.rank());
    else perp = nullspace(m);
    for (std::size_t k = 0; k < perp.size(); ++k) {
      Section c(C.rep_rank);
      for (std::size_t j = 0; j < C.rank(); ++j) add_scaled(c, perp[k][j], C.basis[j]);
      if (!Dspan.contains(c)) r.fail("perp " + std::to_string(k + 1), c, patch);
    }
  }));
  rep.push_back(run_check(prefix + ".closed", opts, [&](CheckResult& r) {
    for (std::size_t i = 0; i < D_frame.size(); ++i)
      for (std::size_t j = 0; j < D_frame.size(); ++j) {
        Section b = C.bracket(D_frame[i], D_frame[j]);
        if (!Dspan.contains(b)) r.fail(frame_label({i, j}), b, patch);
      }
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section a = s.combination(D_frame, C.rep_rank), b = s.combination(D_frame, C.rep_rank);
      Section v = C.bracket(a, b);
      if (!Dspan.contains(v)) r.fail(trial_label(t), v, patch);
    }
  }));
  BracketSpace restricted = C.space();
  restricted.basis = D_frame;
  append(rep, check_lie(restricted, opts, prefix + ".restricted"));
  return rep;
}

/// graph(pi^#) in TM + T*M, with pi^#(theta)^nu = sum theta_mu pi^{mu nu}.
inline std::vector<Section> dirac_from_poisson(const Matrix& pi) {
  const std::size_t n = pi.rows();
  std::vector<Section> f;
  for (std::size_t mu = 0; mu < n; ++mu) f.push_back(concat(pi.row(mu), unit_section(n, mu)));
  return f;
}

/// graph(omega^b) in TM + T*M, omega^b(X) = i_X omega.
inline std::vector<Section> dirac_from_2form(const TwoForm& w) {
  const std::size_t n = w.rows();
  std::vector<Section> f;
  for (std::size_t mu = 0; mu < n; ++mu) f.push_back(concat(unit_section(n, mu), interior(unit_section(n, mu), w)));
  return f;
}

/// F + F° in TM + T*M.
inline std::vector<Section> dirac_from_foliation(const Subbundle& F) {
  const std::size_t n = F.ambient();
  std::vector<Section> f;
  for (const auto& x : F.frame()) f.push_back(concat(x, Section(n)));
  for (const auto& a : F.dual_annihilator()) f.push_back(concat(Section(n), a));
  return f;
}

/// Checks that a linear map between representatives is a Courant morphism C1 -> C2.
inline Report check_courant_morphism(const Matrix& phi, const CourantPresentation& C1, const CourantPresentation& C2,
                                     const CheckOptions& opts, const std::string& prefix = "morphism") {
  if (phi.cols() != C1.rep_rank || phi.rows() != C2.rep_rank) throw ShapeError("courant morphism: matrix has wrong shape");
  const Patch& patch = C1.patch;
  const auto& B = C1.basis;
  Report rep;
  if (C1.relations)
    rep.push_back(run_check(prefix + ".well_defined", opts, [&](CheckResult& r) {
      for (std::size_t i = 0; i < C1.relations->rank(); ++i) {
        Section v = phi.apply(C1.relations->frame()[i]);
        if (!C2.is_zero(v)) r.fail("relation " + std::to_string(i + 1), v, patch);
      }
    }));
  rep.push_back(run_check(prefix + ".anchor", opts, [&](CheckResult& r) {
    for (std::size_t i = 0; i < B.size(); ++i) {
      VectorField res = C2.anchor(phi.apply(B[i])) - C1.anchor(B[i]);
      if (!is_zero(res)) r.fail(frame_label({i}), res, patch);
    }
  }));
  rep.push_back(run_check(prefix + ".pairing", opts, [&](CheckResult& r) {
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = i; j < B.size(); ++j) {
        ScalarField res = C2.pairing(phi.apply(B[i]), phi.apply(B[j])) - C1.pairing(B[i], B[j]);
        if (!res.is_zero()) r.fail(frame_label({i, j}), res, patch);
      }
  }));
  rep.push_back(run_check(prefix + ".bracket", opts, [&](CheckResult& r) {
    auto test = [&](const Section& a, const Section& b, const std::string& ctx) {
      Section res = phi.apply(C1.bracket(a, b)) - C2.bracket(phi.apply(a), phi.apply(b));
      if (!C2.is_zero(res)) r.fail(ctx, res, patch);
    };
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = 0; j < B.size(); ++j) test(B[i], B[j], frame_label({i, j}));
    Sampler s(r.seed, patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) test(s.combination(B, C1.rep_rank), s.combination(B, C1.rep_rank), trial_label(t));
  }));
  return rep;
}

/// Bott-Dorfman connection of a Dirac structure D on C/D: Delta_d c = class of [[d, c]].
class BottDorfman {
 public:
  BottDorfman(CourantPresentation C, std::vector<Section> D_frame)
      : C_(std::move(C)), D_frame_(std::move(D_frame)), Dspan_(C_.span(D_frame_)), W_(complement(Dspan_)) {
    std::vector<Section> all = Dspan_.frame();
    all.insert(all.end(), W_.begin(), W_.end());
    split_ = Subbundle(C_.rep_rank, all);
  }

  const std::vector<Section>& complement_frame() const { return W_; }

  /// Coordinates of the class of s in the complement frame.
  Section quotient_coords(const Section& s) const {
    Membership m = split_.membership(s);
    return slice(m.coefficients, Dspan_.rank(), W_.size());
  }

  Section eval(const Section& d, const Section& c) const { return quotient_coords(C_.bracket(d, c)); }

  /// [[d, d']] stays in D for D-sections, so the class of [[d, c]] only depends on the class of c.
  Report check(const CheckOptions& opts) const {
    Report rep;
    rep.push_back(run_check("bott.well_defined", opts, [&](CheckResult& r) {
      for (std::size_t i = 0; i < D_frame_.size(); ++i)
        for (std::size_t j = 0; j < D_frame_.size(); ++j) {
          Section v = eval(D_frame_[i], D_frame_[j]);
          if (!is_zero(v)) r.fail(frame_label({i, j}), v, C_.patch);
        }
      Sampler s(r.seed, C_.patch.dim(), opts.max_degree);
      for (int t = 0; t < opts.trials; ++t) {
        Section dd = s.combination(D_frame_, C_.rep_rank), c = s.combination(C_.basis, C_.rep_rank);
        Section k = s.combination(D_frame_, C_.rep_rank);
        Section v = eval(dd, c + k) - eval(dd, c);
        if (!is_zero(v)) r.fail(trial_label(t), v, C_.patch);
      }
    }));
    rep.push_back(run_check("bott.linear", opts, [&](CheckResult& r) {
      Sampler s(r.seed, C_.patch.dim(), opts.max_degree);
      for (int t = 0; t < opts.trials; ++t) {
        Section dd = s.combination(D_frame_, C_.rep_rank), c = s.combination(C_.basis, C_.rep_rank);
        ScalarField f = s.polynomial();
        Section v = eval(f * dd, c) - f * eval(dd, c) - quotient_coords(C_.pairing(dd, c) * C_.dcal(f));
        if (!is_zero(v)) r.fail(trial_label(t), v, C_.patch);
      }
    }));
    return rep;
  }

 private:
  CourantPresentation C_;
  std::vector<Section> D_frame_;
  Subbundle Dspan_;
  std::vector<Section> W_;
  Subbundle split_;
};

}  // namespace diracalg
