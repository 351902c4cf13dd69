#pragma once

#include <string>
#include <vector>

#include "bialgebroid.hpp"

namespace diracalg {

// ---------------------------------------------------------------------------
// Lie bialgebroids.

/// A pair of algebroids in duality; Astar is written in the frame dual to the frame of A.
struct LieBialgebroidData {
  DullAlgebroid A;
  DullAlgebroid Astar;
};

/// A* with zero anchor and zero bracket.
inline DullAlgebroid trivial_dual(const DullAlgebroid& A, const std::string& name = "A*") {
  return DullAlgebroid(A.patch(), A.rank(), Matrix(A.dim(), A.rank()), {}, name);
}

/// A + A* with anchor rho + rho_*, pairing alpha(b) + beta(a) and the double bracket.
inline CourantPresentation courant_double(const LieBialgebroidData& lb) {
  if (!(lb.A.patch() == lb.Astar.patch()) || lb.A.rank() != lb.Astar.rank()) throw ShapeError("double: A and A* do not match");
  auto A = std::make_shared<DullAlgebroid>(lb.A);
  auto S = std::make_shared<DullAlgebroid>(lb.Astar);
  const std::size_t r = A->rank(), n = A->dim();
  CourantPresentation c;
  c.name = "A+A*";
  c.patch = A->patch();
  c.rep_rank = 2 * r;
  c.basis = standard_frame(2 * r);
  c.anchor = [A, S, r](const Section& s) { return A->anchor(slice(s, 0, r)) + S->anchor(slice(s, r, r)); };
  c.pairing = [r](const Section& x, const Section& y) {
    return dot(slice(x, r, r), slice(y, 0, r)) + dot(slice(y, r, r), slice(x, 0, r));
  };
  c.bracket = [A, S, r](const Section& x, const Section& y) {
    Section a = slice(x, 0, r), al = slice(x, r, r), b = slice(y, 0, r), be = slice(y, r, r);
    Section top = A->bracket(a, b) + lie_derivative_dual(*S, al, b) - interior_d_dual(*S, be, a);
    Section bottom = S->bracket(al, be) + lie_derivative_dual(*A, a, be) - interior_d_dual(*A, b, al);
    return concat(top, bottom);
  };
  c.dcal = [A, S, n](const ScalarField& f) {
    OneForm df = d(f, n);
    return concat(rho_transpose(*S, df), rho_transpose(*A, df));
  };
  return c;
}

/// Both sides are Lie algebroids and the double is a Courant algebroid.
inline Report check_lie_bialgebroid(const LieBialgebroidData& lb, const CheckOptions& opts, const std::string& prefix = "lie_bialgebroid") {
  Report rep;
  append(rep, check_lie(lb.A.space(), opts, prefix + ".A"));
  append(rep, check_lie(lb.Astar.space(), opts, prefix + ".Astar"));
  append(rep, check_courant_axioms(courant_double(lb), opts), prefix);
  return rep;
}

/// Cotangent algebroid of a bivector: anchor pi^#, [dx^mu, dx^nu] = d pi^{mu nu}.
inline DullAlgebroid koszul_algebroid(const Patch& patch, const Matrix& pi) {
  const std::size_t n = patch.dim();
  if (pi.rows() != n || pi.cols() != n) throw ShapeError("koszul: bivector has wrong shape");
  std::vector<Section> c(n * n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) c[mu * n + nu] = d(pi(mu, nu), n);
  return DullAlgebroid(patch, n, pi.transpose(), std::move(c), "T*M");
}

inline LieBialgebroidData poisson_bialgebroid(const Patch& patch, const Matrix& pi) {
  return {tangent_algebroid(patch), koszul_algebroid(patch, pi)};
}

/// rho rho_*^t + rho_* rho^t as an n x n matrix; zero for Lie bialgebroids.
inline Matrix anchor_anomaly(const LieBialgebroidData& lb) {
  Matrix a = lb.A.anchor_matrix() * lb.Astar.anchor_matrix().transpose();
  Matrix b = lb.Astar.anchor_matrix() * lb.A.anchor_matrix().transpose();
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

inline CheckResult check_anchor_anomaly(const LieBialgebroidData& lb, const CheckOptions& opts,
                                        const std::string& name = "lie_bialgebroid.anchor_anomaly") {
  return run_check(name, opts, [&](CheckResult& r) {
    Matrix m = anchor_anomaly(lb);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (!is_zero(m.row(i))) r.fail("row " + std::to_string(i + 1), m.row(i), lb.A.patch());
  });
}

/// rho_*^t L_a theta = [a, rho_*^t theta]_A - i_{rho^t theta} d_{A*} a, with L_a theta = L_{rho(a)} theta.
inline CheckResult check_cotangent_identity(const LieBialgebroidData& lb, const CheckOptions& opts,
                                            const std::string& name = "lie_bialgebroid.cotangent_identity") {
  return run_check(name, opts, [&](CheckResult& r) {
    const DullAlgebroid& A = lb.A;
    const DullAlgebroid& S = lb.Astar;
    const std::size_t rk = A.rank(), n = A.dim();
    auto test = [&](const Section& a, const OneForm& theta, const std::string& ctx) {
      Section v = rho_transpose(S, lie_derivative(A.anchor(a), theta)) - A.bracket(a, rho_transpose(S, theta)) +
                  interior_d_dual(S, rho_transpose(A, theta), a);
      if (!is_zero(v)) r.fail(ctx, v, A.patch());
    };
    for (std::size_t i = 0; i < rk; ++i)
      for (std::size_t mu = 0; mu < n; ++mu) test(unit_section(rk, i), unit_section(n, mu), frame_label({i, mu}));
    Sampler s(r.seed, n, opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) test(s.section(rk), s.section(n), trial_label(t));
  });
}

struct BialgebroidAndManin {
  DiracBialgebroid db;
  AManinPair mp;
};

/// (A, A*, (rho_*, id)) with the Manin pair (A + A*, A*) and Phi(a, theta) = (a + rho_*^t theta, rho^t theta).
inline BialgebroidAndManin bialgebroid_from_lie_bialgebroid(const LieBialgebroidData& lb) {
  const std::size_t r = lb.A.rank(), n = lb.A.dim();
  Matrix iota(n + r, r), phi(2 * r, r + n);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t mu = 0; mu < n; ++mu) iota(mu, k) = lb.Astar.anchor_matrix()(mu, k);
    iota(n + k, k) = ScalarField(1);
    phi(k, k) = ScalarField(1);
    for (std::size_t mu = 0; mu < n; ++mu) {
      phi(k, r + mu) = lb.Astar.anchor_matrix()(mu, k);
      phi(r + k, r + mu) = lb.A.anchor_matrix()(mu, k);
    }
  }
  AManinPair mp{lb.A, courant_double(lb), {}, iota.columns(), phi};
  for (std::size_t k = 0; k < r; ++k) mp.u_in_c.push_back(unit_section(2 * r, r + k));
  return {{lb.A, lb.Astar, iota}, std::move(mp)};
}

/// Delta_{(X,alpha)}(a,theta) = (<a, nabla*bas_. alpha> + nabla_X a - rho_*^t <nabla*_. alpha, a>, L_X theta + <nabla*_. alpha, a>).
inline DorfmanConnection adapted_dorfman_poisson(const LieBialgebroidData& lb, const LinearConnection& nabla) {
  const DullAlgebroid& A = lb.A;
  const DullAlgebroid& S = lb.Astar;
  const std::size_t r = A.rank(), n = A.dim();
  SplitDims dm{n, r};
  return DorfmanConnection::from_formula(A.patch(), r, [&](const Section& q, const Section& b) {
    VectorField x = dm.q_tm(q);
    Section alpha = dm.q_astar(q), a = dm.b_a(b);
    OneForm theta = dm.b_tstar(b);
    OneForm w(n);
    for (std::size_t mu = 0; mu < n; ++mu) w[mu] = dot(nabla.dual_covariant(unit_section(n, mu), alpha), a);
    VectorField rs_alpha = S.anchor(alpha);
    Section p(r);
    for (std::size_t k = 0; k < r; ++k) {
      Section ek = unit_section(r, k);
      p[k] = dot(a, nabla.dual_covariant(rs_alpha, ek) + S.bracket(ek, alpha));
    }
    Section top = p + nabla.covariant(x, a) - rho_transpose(S, w);
    return concat(top, lie_derivative(x, theta) + w);
  });
}

/// [[(rho_* a1, a1), (rho_* a2, a2)]]_Delta = (rho_* [a1,a2], [a1,a2]) on the frame of A*.
inline CheckResult check_poisson_restriction(const LieBialgebroidData& lb, const DorfmanConnection& D, const CheckOptions& opts,
                                             const std::string& name = "poisson.restriction") {
  return run_check(name, opts, [&](CheckResult& r) {
    DullAlgebroid Q = dual_dull_bracket(D);
    const std::size_t rk = lb.A.rank();
    auto graph = [&](const Section& al) { return concat(lb.Astar.anchor(al), al); };
    auto test = [&](const Section& a1, const Section& a2, const std::string& ctx) {
      Section v = Q.bracket(graph(a1), graph(a2)) - graph(lb.Astar.bracket(a1, a2));
      if (!is_zero(v)) r.fail(ctx, v, lb.A.patch());
    };
    for (std::size_t i = 0; i < rk; ++i)
      for (std::size_t j = 0; j < rk; ++j) test(unit_section(rk, i), unit_section(rk, j), frame_label({i, j}));
    Sampler s(r.seed, lb.A.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) test(s.section(rk), s.section(rk), trial_label(t));
  });
}

/// (A, graph(rho_*), adapted Delta).
inline LADiracTriple poisson_triple(const LieBialgebroidData& lb, const LinearConnection& nabla) {
  BialgebroidAndManin bm = bialgebroid_from_lie_bialgebroid(lb);
  return LADiracTriple(lb.A, Subbundle(lb.A.dim() + lb.A.rank(), bm.db.image()), adapted_dorfman_poisson(lb, nabla));
}

// ---------------------------------------------------------------------------
// IM-2-forms. sigma is n x r: column k is the one-form sigma(e_k).

inline Matrix sigma_from_2form(const TwoForm& w) {
  Matrix s(w.rows(), w.cols());
  for (std::size_t mu = 0; mu < w.rows(); ++mu)
    for (std::size_t k = 0; k < w.cols(); ++k) s(mu, k) = w(k, mu);
  return s;
}

inline OneForm apply_sigma(const Matrix& sigma, const Section& a) { return sigma.apply(a); }

/// sigma^t X, the section of A* with components <sigma(e_k), X>.
inline Section sigma_transpose(const Matrix& sigma, const VectorField& x) { return sigma.transpose().apply(x); }

inline Report check_im2form(const DullAlgebroid& A, const Matrix& sigma, const CheckOptions& opts, const std::string& prefix = "im2form") {
  const std::size_t r = A.rank(), n = A.dim();
  if (sigma.rows() != n || sigma.cols() != r) throw ShapeError("im2form: sigma has wrong shape");
  const Patch& patch = A.patch();
  Report rep;
  rep.push_back(run_check(prefix + ".condition1", opts, [&](CheckResult& res) {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i; j < r; ++j) {
        ScalarField v = dot(A.anchor(unit_section(r, i)), sigma.column(j)) + dot(A.anchor(unit_section(r, j)), sigma.column(i));
        if (!v.is_zero()) res.fail(frame_label({i, j}), v, patch);
      }
  }));
  rep.push_back(run_check(prefix + ".condition2", opts, [&](CheckResult& res) {
    auto test = [&](const Section& a1, const Section& a2, const std::string& ctx) {
      OneForm v = apply_sigma(sigma, A.bracket(a1, a2)) - lie_derivative(A.anchor(a1), apply_sigma(sigma, a2)) +
                  interior(A.anchor(a2), d(apply_sigma(sigma, a1)));
      if (!is_zero(v)) res.fail(ctx, v, patch);
    };
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) test(unit_section(r, i), unit_section(r, j), frame_label({i, j}));
    Sampler s(res.seed, n, opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) test(s.section(r), s.section(r), trial_label(t));
  }));
  return rep;
}

/// Phi(a, theta) = (rho a, sigma a + theta) from A + T*M to TM + T*M.
inline Matrix im_morphism(const DullAlgebroid& A, const Matrix& sigma) {
  const std::size_t n = A.dim(), r = A.rank();
  Matrix phi(2 * n, r + n);
  for (std::size_t mu = 0; mu < n; ++mu) {
    for (std::size_t k = 0; k < r; ++k) {
      phi(mu, k) = A.anchor_matrix()(mu, k);
      phi(n + mu, k) = sigma(mu, k);
    }
    phi(n + mu, r + mu) = ScalarField(1);
  }
  return phi;
}

/// (A, TM, (id, sigma^t)) with the Manin pair (TM + T*M, TM).
inline BialgebroidAndManin bialgebroid_from_im2form(const DullAlgebroid& A, const Matrix& sigma) {
  const std::size_t n = A.dim(), r = A.rank();
  Matrix iota(n + r, n);
  for (std::size_t mu = 0; mu < n; ++mu) {
    iota(mu, mu) = ScalarField(1);
    for (std::size_t k = 0; k < r; ++k) iota(n + k, mu) = sigma(mu, k);
  }
  AManinPair mp{A, standard_courant(A.patch()), {}, iota.columns(), im_morphism(A, sigma)};
  for (std::size_t mu = 0; mu < n; ++mu) mp.u_in_c.push_back(unit_section(2 * n, mu));
  return {{A, tangent_algebroid(A.patch()), iota}, std::move(mp)};
}

/// Delta_{(X,alpha)}(a,theta) = (nabla_X a, L_X(theta - sigma a) + <nabla*_.(sigma^t X + alpha), a> + sigma(nabla_X a)).
inline DorfmanConnection adapted_dorfman_presymplectic(const DullAlgebroid& A, const Matrix& sigma, const LinearConnection& nabla) {
  const std::size_t r = A.rank(), n = A.dim();
  SplitDims dm{n, r};
  return DorfmanConnection::from_formula(A.patch(), r, [&](const Section& q, const Section& b) {
    VectorField x = dm.q_tm(q);
    Section alpha = dm.q_astar(q), a = dm.b_a(b);
    OneForm theta = dm.b_tstar(b);
    Section beta = sigma_transpose(sigma, x) + alpha;
    OneForm w(n);
    for (std::size_t mu = 0; mu < n; ++mu) w[mu] = dot(nabla.dual_covariant(unit_section(n, mu), beta), a);
    Section na = nabla.covariant(x, a);
    return concat(na, lie_derivative(x, theta - apply_sigma(sigma, a)) + w + apply_sigma(sigma, na));
  });
}

/// (A, graph(-sigma^t), adapted Delta).
inline LADiracTriple presymplectic_triple(const DullAlgebroid& A, const Matrix& sigma, const LinearConnection& nabla) {
  const std::size_t n = A.dim();
  std::vector<Section> u;
  for (std::size_t mu = 0; mu < n; ++mu) u.push_back(concat(unit_section(n, mu), -sigma_transpose(sigma, unit_section(n, mu))));
  return LADiracTriple(A, Subbundle(n + A.rank(), u), adapted_dorfman_presymplectic(A, sigma, nabla));
}

/// [[(X1, -sigma^t X1), (X2, -sigma^t X2)]]_Delta = ([X1,X2], -sigma^t [X1,X2]).
inline CheckResult check_presymplectic_restriction(const Matrix& sigma, const DorfmanConnection& D, const CheckOptions& opts,
                                                   const std::string& name = "presymplectic.restriction") {
  return run_check(name, opts, [&](CheckResult& r) {
    DullAlgebroid Q = dual_dull_bracket(D);
    const std::size_t n = D.dims().n;
    auto graph = [&](const VectorField& x) { return concat(x, -sigma_transpose(sigma, x)); };
    Sampler s(r.seed, n, opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      VectorField x1 = s.section(n), x2 = s.section(n);
      Section v = Q.bracket(graph(x1), graph(x2)) - graph(lie_bracket(x1, x2));
      if (!is_zero(v)) r.fail(trial_label(t), v, D.patch());
    }
  });
}

// ---------------------------------------------------------------------------
// Infinitesimal ideal systems.

/// (F_M, J, nabla) in A, where nabla is a TM-connection on A extending the partial connection on A/J.
struct IISData {
  DullAlgebroid A;
  Subbundle FM;
  Subbundle J;
  LinearConnection nabla;
};

/// Throws unless rho(J) is in F_M, F_M is involutive and nabla_X J is in J for X in F_M.
inline void validate(const IISData& iis) {
  const std::size_t n = iis.A.dim(), r = iis.A.rank();
  if (iis.FM.ambient() != n || iis.J.ambient() != r || iis.nabla.rank() != r) throw ShapeError("iis: data has wrong shape");
  const auto& F = iis.FM.frame();
  const auto& J = iis.J.frame();
  for (std::size_t l = 0; l < J.size(); ++l)
    if (!iis.FM.contains(iis.A.anchor(J[l]))) throw Error("iis: rho(J) is not contained in F_M at " + frame_label({l}));
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t j = 0; j < F.size(); ++j)
      if (!iis.FM.contains(lie_bracket(F[i], F[j]))) throw Error("iis: F_M is not involutive at " + frame_label({i, j}));
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t l = 0; l < J.size(); ++l)
      if (!iis.J.contains(iis.nabla.covariant(F[i], J[l]))) throw Error("iis: the connection does not preserve J at " + frame_label({i, l}));
}

namespace detail {

inline std::vector<Monomial> monomials_up_to(std::size_t dim, unsigned degree) {
  std::vector<Monomial> out{Monomial()};
  for (std::size_t v = 0; v < dim; ++v) {
    std::vector<Monomial> next;
    for (const auto& m : out)
      for (unsigned e = 0; m.degree() + e <= degree; ++e) next.push_back(e ? m * Monomial::variable(v, e) : m);
    out = std::move(next);
  }
  return out;
}

/// Q-basis of the polynomial sections of degree <= degree killed by a Q-linear operator with values in Q(x)^k.
inline std::vector<Section> polynomial_kernel(std::size_t dim, std::size_t rank, unsigned degree,
                                              const std::function<std::vector<ScalarField>(const Section&)>& op) {
  std::vector<Section> gens;
  for (std::size_t k = 0; k < rank; ++k)
    for (const auto& m : monomials_up_to(dim, degree)) {
      Section s(rank);
      s[k] = ScalarField(Polynomial::term(m, Rational(1)));
      gens.push_back(s);
    }
  std::vector<std::vector<ScalarField>> images;
  for (const auto& g : gens) images.push_back(op(g));
  const std::size_t eqs = images.empty() ? 0 : images[0].size();
  std::vector<Section> rows;
  for (std::size_t e = 0; e < eqs; ++e) {
    Polynomial den(1);
    for (const auto& im : images) {
      const Polynomial& dd = im[e].denominator();
      den = *divide_exact(den * dd, gcd(den, dd));
    }
    std::map<std::uint64_t, Section> by_mono;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      ScalarField v = images[g][e] * ScalarField(den);
      for (const auto& t : v.numerator().terms()) {
        auto [it, fresh] = by_mono.try_emplace(t.mono.key(), Section(gens.size()));
        it->second[g] = ScalarField(t.coef);
      }
    }
    for (auto& [key, row] : by_mono) rows.push_back(std::move(row));
  }
  std::vector<Section> kernel;
  if (rows.empty()) kernel = standard_frame(gens.size());
  else kernel = nullspace(Matrix::from_rows(rows, gens.size()));
  std::vector<Section> out;
  for (const auto& c : kernel) {
    Section s(rank);
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (!c[g].is_zero()) add_scaled(s, c[g], gens[g]);
    out.push_back(s);
  }
  return out;
}

}  // namespace detail

/// Polynomial sections of A of degree <= degree whose class in A/J is parallel along F_M.
inline std::vector<Section> parallel_sections(const IISData& iis, unsigned degree) {
  const auto& ann = iis.J.dual_annihilator();
  return detail::polynomial_kernel(iis.A.dim(), iis.A.rank(), degree, [&](const Section& a) {
    std::vector<ScalarField> out;
    for (const auto& x : iis.FM.frame()) {
      Section v = iis.nabla.covariant(x, a);
      for (const auto& l : ann) out.push_back(dot(l, v));
    }
    return out;
  });
}

/// Bracket ([X1,X2], nabla*_{X1} a2 - nabla*_{X2} a1) on TM + A*.
inline Section iis_u_bracket(const IISData& iis, const Section& u1, const Section& u2) {
  const std::size_t n = iis.A.dim(), r = iis.A.rank();
  VectorField x1 = slice(u1, 0, n), x2 = slice(u2, 0, n);
  return concat(lie_bracket(x1, x2), iis.nabla.dual_covariant(x1, slice(u2, n, r)) - iis.nabla.dual_covariant(x2, slice(u1, n, r)));
}

/// F_M + J° in TM + A* with the bracket above; Jacobi holds exactly when the data is an ideal system.
inline BracketSpace iis_u_space(const IISData& iis) {
  const std::size_t n = iis.A.dim(), r = iis.A.rank();
  BracketSpace sp;
  sp.patch = iis.A.patch();
  sp.rep_rank = n + r;
  for (const auto& x : iis.FM.frame()) sp.basis.push_back(concat(x, Section(r)));
  for (const auto& al : iis.J.dual_annihilator()) sp.basis.push_back(concat(Section(n), al));
  auto data = std::make_shared<IISData>(iis);
  sp.bracket = [data](const Section& a, const Section& b) { return iis_u_bracket(*data, a, b); };
  sp.anchor = [n](const Section& a) { return slice(a, 0, n); };
  return sp;
}

/// Both characterizations: the definition on parallel sections, and the basic-connection form.
inline Report check_iis(const IISData& iis, const CheckOptions& opts, const std::string& prefix = "iis") {
  validate(iis);
  const DullAlgebroid& A = iis.A;
  const Patch& patch = A.patch();
  const std::size_t r = A.rank();
  const auto& F = iis.FM.frame();
  const auto& J = iis.J.frame();
  Report def, bas;
  auto flat = [&](CheckResult& res) {
    for (std::size_t i = 0; i < F.size(); ++i)
      for (std::size_t j = i + 1; j < F.size(); ++j)
        for (std::size_t k = 0; k < r; ++k)
          detail::membership_check(res, iis.J, iis.nabla.curvature(F[i], F[j], unit_section(r, k)), frame_label({i, j, k}), patch);
  };
  def.push_back(run_check(prefix + ".definition.flat", opts, flat));
  std::vector<Section> par = parallel_sections(iis, unsigned(std::max(opts.max_degree, 0)));
  def.push_back(run_check(prefix + ".definition.condition1", opts, [&](CheckResult& res) {
    res.detail = std::to_string(par.size()) + " parallel sections";
    for (std::size_t s = 0; s < par.size(); ++s)
      for (std::size_t l = 0; l < J.size(); ++l)
        detail::membership_check(res, iis.J, A.bracket(par[s], J[l]), "parallel " + std::to_string(s + 1) + ", " + frame_label({l}), patch);
  }));
  def.push_back(run_check(prefix + ".definition.condition2", opts, [&](CheckResult& res) {
    for (std::size_t s = 0; s < par.size(); ++s)
      for (std::size_t t = s + 1; t < par.size(); ++t) {
        Section b = A.bracket(par[s], par[t]);
        for (std::size_t i = 0; i < F.size(); ++i)
          detail::membership_check(res, iis.J, iis.nabla.covariant(F[i], b),
                                   "parallel " + std::to_string(s + 1) + "," + std::to_string(t + 1) + " along " + frame_label({i}), patch);
      }
  }));
  def.push_back(run_check(prefix + ".definition.condition3", opts, [&](CheckResult& res) {
    for (std::size_t s = 0; s < par.size(); ++s)
      for (std::size_t i = 0; i < F.size(); ++i)
        detail::membership_check(res, iis.FM, lie_bracket(F[i], A.anchor(par[s])),
                                 "parallel " + std::to_string(s + 1) + " along " + frame_label({i}), patch);
  }));
  bas.push_back(run_check(prefix + ".basic.flat", opts, flat));
  bas.push_back(run_check(prefix + ".basic.condition2", opts, [&](CheckResult& res) {
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t i = 0; i < F.size(); ++i)
        detail::membership_check(res, iis.FM, basic_on_tm(A, iis.nabla, unit_section(r, k), F[i]), frame_label({k, i}), patch);
  }));
  bas.push_back(run_check(prefix + ".basic.condition3", opts, [&](CheckResult& res) {
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t l = 0; l < J.size(); ++l)
        detail::membership_check(res, iis.J, basic_on_a(A, iis.nabla, unit_section(r, k), J[l]), frame_label({k, l}), patch);
  }));
  bas.push_back(run_check(prefix + ".basic.condition4", opts, [&](CheckResult& res) {
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = a + 1; b < r; ++b)
        for (std::size_t i = 0; i < F.size(); ++i)
          detail::membership_check(res, iis.J, basic_curvature(A, iis.nabla, unit_section(r, a), unit_section(r, b), F[i]),
                                   frame_label({a, b, i}), patch);
  }));
  Report rep = def;
  append(rep, bas);
  bool d_ok = all_passed(def), b_ok = all_passed(bas);
  rep.push_back(run_check(prefix + ".characterizations_agree", opts, [&](CheckResult& res) {
    res.detail = std::string("definition ") + (d_ok ? "holds" : "fails") + ", basic form " + (b_ok ? "holds" : "fails");
    if (d_ok != b_ok) res.fail("consistency", {res.detail});
  }));
  append(rep, check_lie(iis_u_space(iis), opts, prefix + ".u"));
  return rep;
}

/// Abar = (F_M + A)/graph(-rho|J), presented on representatives (X, a) in TM + A.
class QuotientAlgebroid {
 public:
  explicit QuotientAlgebroid(IISData iis) : iis_(std::move(iis)) {
    const std::size_t n = iis_.A.dim(), r = iis_.A.rank();
    for (const auto& j : iis_.J.frame()) graph_.push_back(concat(-iis_.A.anchor(j), j));
    std::vector<Section> gens;
    for (const auto& x : iis_.FM.frame()) gens.push_back(concat(x, Section(r)));
    for (std::size_t k = 0; k < r; ++k) gens.push_back(concat(Section(n), unit_section(r, k)));
    std::vector<Section> all = graph_;
    for (const auto& g : gens) {
      all.push_back(g);
      if (diracalg::rank(all, n + r) < all.size()) all.pop_back();
      else basis_.push_back(g);
    }
    split_ = Subbundle(n + r, all);
    if (!graph_.empty()) relations_ = std::make_shared<Subbundle>(n + r, graph_);
  }

  const IISData& data() const { return iis_; }
  std::size_t rep_rank() const { return iis_.A.dim() + iis_.A.rank(); }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<Section>& basis() const { return basis_; }
  const std::vector<Section>& graph() const { return graph_; }

  VectorField anchor(const Section& s) const {
    const std::size_t n = iis_.A.dim();
    return slice(s, 0, n) + iis_.A.anchor(slice(s, n, iis_.A.rank()));
  }

  Section bracket(const Section& s1, const Section& s2) const {
    const std::size_t n = iis_.A.dim(), r = iis_.A.rank();
    const DullAlgebroid& A = iis_.A;
    VectorField x1 = slice(s1, 0, n), x2 = slice(s2, 0, n);
    Section a1 = slice(s1, n, r), a2 = slice(s2, n, r);
    VectorField top = lie_bracket(x1, x2) + basic_on_tm(A, iis_.nabla, a1, x2) - basic_on_tm(A, iis_.nabla, a2, x1);
    Section bottom = A.bracket(a1, a2) + iis_.nabla.covariant(x1, a2) - iis_.nabla.covariant(x2, a1);
    return concat(top, bottom);
  }

  /// (-rho j) + j with j = [R^bas(a1,a2) X3 - R(X1,X2) a3] + cyclic permutations.
  Section jacobiator_correction(const Section& s1, const Section& s2, const Section& s3) const {
    const std::size_t n = iis_.A.dim(), r = iis_.A.rank();
    const Section* s[3] = {&s1, &s2, &s3};
    Section j(r);
    for (int c = 0; c < 3; ++c) {
      const Section& p = *s[c];
      const Section& q = *s[(c + 1) % 3];
      const Section& t = *s[(c + 2) % 3];
      j += basic_curvature(iis_.A, iis_.nabla, slice(p, n, r), slice(q, n, r), slice(t, 0, n));
      j -= iis_.nabla.curvature(slice(p, 0, n), slice(q, 0, n), slice(t, n, r));
    }
    return concat(-iis_.A.anchor(j), j);
  }

  /// Coordinates of the class of a representative in the basis; throws outside F_M + A.
  Section coords(const Section& s) const {
    Membership m = split_.membership(s);
    if (!m.member) throw Error("Abar: representative is not in F_M + A");
    return slice(m.coefficients, graph_.size(), basis_.size());
  }

  bool is_zero_class(const Section& s) const { return relations_ ? relations_->contains(s) : diracalg::is_zero(s); }

  BracketSpace space() const {
    BracketSpace sp;
    sp.patch = iis_.A.patch();
    sp.rep_rank = rep_rank();
    sp.basis = basis_;
    sp.relations = relations_;
    sp.bracket = [this](const Section& a, const Section& b) { return bracket(a, b); };
    sp.anchor = [this](const Section& a) { return anchor(a); };
    return sp;
  }

  /// Abar as an honest algebroid in the chosen basis.
  DullAlgebroid algebroid() const {
    const std::size_t k = rank(), n = iis_.A.dim();
    Matrix anc(n, k);
    for (std::size_t i = 0; i < k; ++i) {
      VectorField v = anchor(basis_[i]);
      for (std::size_t mu = 0; mu < n; ++mu) anc(mu, i) = v[mu];
    }
    std::vector<Section> c(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) c[i * k + j] = coords(bracket(basis_[i], basis_[j]));
    return DullAlgebroid(iis_.A.patch(), k, anc, c, "Abar");
  }

 private:
  IISData iis_;
  std::vector<Section> graph_;
  std::vector<Section> basis_;
  Subbundle split_;
  std::shared_ptr<const Subbundle> relations_;
};

/// Jacobi and well-definedness of the Abar bracket, plus the Jacobiator identity on representatives.
inline Report check_abar(const QuotientAlgebroid& Q, const CheckOptions& opts, const std::string& prefix = "abar") {
  const IISData& iis = Q.data();
  const Patch& patch = iis.A.patch();
  const std::size_t n = iis.A.dim(), r = iis.A.rank();
  Report rep;
  rep.push_back(run_check(prefix + ".well_defined", opts, [&](CheckResult& res) {
    for (std::size_t l = 0; l < Q.graph().size(); ++l)
      for (std::size_t b = 0; b < Q.rank(); ++b) {
        Section v = Q.bracket(Q.basis()[b], Q.graph()[l]);
        if (!Q.is_zero_class(v)) res.fail(frame_label({b, l}), v, patch);
      }
  }));
  append(rep, check_lie(Q.space(), opts, prefix));
  rep.push_back(run_check(prefix + ".jacobiator_identity", opts, [&](CheckResult& res) {
    Sampler s(res.seed, n, opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section p[3];
      for (auto& x : p) x = concat(s.combination(iis.FM.frame(), n), s.section(r));
      Section jac = Q.bracket(Q.bracket(p[0], p[1]), p[2]) + Q.bracket(Q.bracket(p[1], p[2]), p[0]) + Q.bracket(Q.bracket(p[2], p[0]), p[1]);
      Section v = jac - Q.jacobiator_correction(p[0], p[1], p[2]);
      if (!is_zero(v)) res.fail(trial_label(t), v, patch);
    }
  }));
  return rep;
}

/// F_M + J° with its bracket, and the Manin pair (Abar + Abar*, F_M + J°) for the trivial structure on Abar*.
inline BialgebroidAndManin bialgebroid_from_iis(const IISData& iis, const QuotientAlgebroid& Q) {
  const std::size_t n = iis.A.dim(), r = iis.A.rank(), k = Q.rank(), N = n + r;
  DullAlgebroid abar = Q.algebroid();
  LieBialgebroidData lb{abar, trivial_dual(abar, "Abar*")};
  std::vector<Section> uq, uc;
  for (const auto& x : iis.FM.frame()) {
    uq.push_back(concat(x, Section(r)));
    uc.push_back(concat(Q.coords(concat(x, Section(r))), Section(k)));
  }
  for (const auto& al : iis.J.dual_annihilator()) {
    uq.push_back(concat(Section(n), al));
    Section lam(k);
    for (std::size_t i = 0; i < k; ++i) lam[i] = dot(al, slice(Q.basis()[i], n, r));
    uc.push_back(concat(Section(k), lam));
  }
  Matrix phi(2 * k, r + n);
  for (std::size_t j = 0; j < r; ++j) {
    Section c = Q.coords(concat(Section(n), unit_section(r, j)));
    for (std::size_t i = 0; i < k; ++i) phi(i, j) = c[i];
  }
  for (std::size_t i = 0; i < k; ++i) {
    VectorField v = Q.anchor(Q.basis()[i]);
    for (std::size_t mu = 0; mu < n; ++mu) phi(k + i, r + mu) = v[mu];
  }
  Subbundle U(N, uq);
  const std::size_t p = uq.size();
  std::vector<Section> c(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      Membership m = U.membership(iis_u_bracket(iis, uq[i], uq[j]));
      if (!m.member) throw Error("bialgebroid_from_iis: F_M + J° is not closed at " + frame_label({i, j}));
      c[i * p + j] = m.coefficients;
    }
  Matrix anc(n, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t mu = 0; mu < n; ++mu) anc(mu, i) = uq[i][mu];
  DiracBialgebroid db{iis.A, DullAlgebroid(iis.A.patch(), p, anc, c, "FM+J°"), Matrix::from_columns(uq, N)};
  return {std::move(db), AManinPair{iis.A, courant_double(lb), uc, uq, phi}};
}

// ---------------------------------------------------------------------------
// Dirac bialgebras: Dirac bialgebroids over a point, modelled on a one-dimensional dummy patch.

inline const Patch& point_patch() {
  static const Patch p({"t"});
  return p;
}

/// Lie algebra with structure constants c[i*dim+j] = [e_i, e_j].
inline DullAlgebroid lie_algebra(std::size_t dim, std::vector<Section> c, const std::string& name = "g") {
  return DullAlgebroid(point_patch(), dim, Matrix(1, dim), std::move(c), name);
}

/// g, p and an injective iota: p -> g* (columns are iota of the basis of p).
struct DiracBialgebraData {
  DullAlgebroid g;
  DullAlgebroid p;
  Matrix iota;
};

struct IdealAndBialgebra {
  std::vector<Section> p_perp;      ///< frame of the annihilator of iota(p) in g
  std::vector<Section> lift;        ///< b_k in g with iota(xi_l)(b_k) = delta_kl
  LieBialgebroidData bialgebra;     ///< (g/p°, p) in the frames b, xi
};

inline IdealAndBialgebra ideal_and_bialgebra_from(const DiracBialgebraData& db) {
  const std::size_t m = db.g.rank(), q = db.p.rank();
  if (db.iota.rows() != m || db.iota.cols() != q) throw ShapeError("bialgebra: iota has wrong shape");
  if (rank(db.iota) != q) throw RankError("bialgebra: iota is not injective");
  Matrix it = db.iota.transpose();
  IdealAndBialgebra out;
  out.p_perp = q == 0 ? standard_frame(m) : nullspace(it);
  Matrix lift = db.iota * inverse(it * db.iota);
  out.lift = lift.columns();
  std::vector<Section> c(q * q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) c[i * q + j] = it.apply(db.g.bracket(out.lift[i], out.lift[j]));
  out.bialgebra = {lie_algebra(q, std::move(c), "g/p°"), db.p};
  return out;
}

/// delta(x)(xi, eta) = <x, [xi, eta]_p> is a 1-cocycle of g/p° with values in its exterior square.
inline CheckResult check_bialgebra_cocycle(const LieBialgebroidData& lb, const CheckOptions& opts, const std::string& name) {
  return run_check(name, opts, [&](CheckResult& r) {
    const std::size_t q = lb.A.rank();
    auto delta = [&](const Section& x, const Section& xi, const Section& eta) { return dot(x, lb.Astar.bracket(xi, eta)); };
    auto coad = [&](const Section& x, const Section& xi) {  // xi o ad_x
      Section out(q);
      for (std::size_t l = 0; l < q; ++l) out[l] = dot(xi, lb.A.bracket(x, unit_section(q, l)));
      return out;
    };
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = i + 1; j < q; ++j)
        for (std::size_t a = 0; a < q; ++a)
          for (std::size_t b = a + 1; b < q; ++b) {
            Section x = unit_section(q, i), y = unit_section(q, j), xi = unit_section(q, a), eta = unit_section(q, b);
            ScalarField v = delta(lb.A.bracket(x, y), xi, eta) - delta(y, coad(x, xi), eta) - delta(y, xi, coad(x, eta)) +
                            delta(x, coad(y, xi), eta) + delta(x, xi, coad(y, eta));
            if (!v.is_zero()) r.fail(frame_label({i, j, a, b}), v, point_patch());
          }
  });
}

/// The Manin pair (g/p° x p, p) with Phi(x) = class of x.
inline AManinPair bialgebra_manin_pair(const DiracBialgebraData& db, const IdealAndBialgebra& ib) {
  const std::size_t m = db.g.rank(), q = db.p.rank();
  AManinPair mp{db.g, courant_double(ib.bialgebra), {}, {}, Matrix(2 * q, m + 1)};
  Matrix it = db.iota.transpose();
  for (std::size_t l = 0; l < q; ++l) {
    mp.u_in_c.push_back(unit_section(2 * q, q + l));
    mp.u_in_q.push_back(concat(Section(1), db.iota.column(l)));
    for (std::size_t i = 0; i < m; ++i) mp.phi(l, i) = it(l, i);
  }
  return mp;
}

/// (g, p, (0, iota)) as a Dirac bialgebroid over the dummy patch.
inline DiracBialgebroid dirac_bialgebroid(const DiracBialgebraData& db) {
  const std::size_t m = db.g.rank(), q = db.p.rank();
  Matrix iota(1 + m, q);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < q; ++l) iota(1 + i, l) = db.iota(i, l);
  return {db.g, db.p, iota};
}

inline Report check_dirac_bialgebra(const DiracBialgebraData& db, const CheckOptions& opts, const std::string& prefix = "bialgebra") {
  Report rep;
  append(rep, check_lie(db.g.space(), opts, prefix + ".g"));
  append(rep, check_lie(db.p.space(), opts, prefix + ".p"));
  IdealAndBialgebra ib = ideal_and_bialgebra_from(db);
  const std::size_t m = db.g.rank();
  CheckResult ideal = run_check(prefix + ".ideal", opts, [&](CheckResult& r) {
    Subbundle P(m, ib.p_perp);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t l = 0; l < ib.p_perp.size(); ++l) {
        Section v = db.g.bracket(unit_section(m, i), ib.p_perp[l]);
        if (!P.contains(v)) r.fail(frame_label({i}) + " with p° " + std::to_string(l + 1), v, point_patch());
      }
  });
  rep.push_back(ideal);
  if (!ideal.passed) return rep;
  rep.push_back(check_bialgebra_cocycle(ib.bialgebra, opts, prefix + ".cocycle"));
  append(rep, check_courant_axioms(courant_double(ib.bialgebra), opts), prefix + ".double");
  append(rep, check_manin_pair(bialgebra_manin_pair(db, ib), opts, prefix + ".manin"));
  return rep;
}

}  // namespace diracalg
