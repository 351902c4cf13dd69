#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cartan.hpp"
#include "check.hpp"

namespace diracalg {

/// A bracket and anchor on representatives of a (possibly quotient) bundle, used by
/// the generic skew, anchor and Jacobi checkers.
struct BracketSpace {
  Patch patch;
  std::size_t rep_rank = 0;
  std::vector<Section> basis;                  ///< generators for frame checks and sampling
  std::shared_ptr<const Subbundle> relations;  ///< quotient relations, or null
  std::function<Section(const Section&, const Section&)> bracket;
  std::function<VectorField(const Section&)> anchor;

  bool is_zero(const Section& s) const { return relations ? relations->contains(s) : diracalg::is_zero(s); }
};

/// Anchored bundle with a bracket given by structure functions on the standard frame,
/// extended by the Leibniz rule in both slots.
class DullAlgebroid {
 public:
  DullAlgebroid() = default;
  DullAlgebroid(Patch patch, std::size_t rank, Matrix anchor, std::vector<Section> structure, std::string name = "A")
      : patch_(std::move(patch)), rank_(rank), anchor_(std::move(anchor)), structure_(std::move(structure)), name_(std::move(name)) {
    if (anchor_.rows() != patch_.dim() || anchor_.cols() != rank_) throw ShapeError("algebroid: anchor has wrong shape");
    if (structure_.empty()) structure_.assign(rank_ * rank_, Section(rank_));
    if (structure_.size() != rank_ * rank_) throw ShapeError("algebroid: structure table has wrong size");
    for (const auto& s : structure_)
      if (s.size() != rank_) throw ShapeError("algebroid: structure entry has wrong rank");
  }

  const Patch& patch() const { return patch_; }
  std::size_t dim() const { return patch_.dim(); }
  std::size_t rank() const { return rank_; }
  const std::string& name() const { return name_; }
  const Matrix& anchor_matrix() const { return anchor_; }
  const Section& structure(std::size_t i, std::size_t j) const { return structure_[i * rank_ + j]; }
  const std::vector<Section>& structure_table() const { return structure_; }

  VectorField anchor(const Section& a) const { return anchor_.apply(a); }

  Section bracket(const Section& a, const Section& b) const {
    if (a.size() != rank_ || b.size() != rank_) throw ShapeError("bracket: section has wrong rank");
    Section out(rank_);
    for (std::size_t i = 0; i < rank_; ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < rank_; ++j) {
        if (b[j].is_zero()) continue;
        const Section& c = structure(i, j);
        if (diracalg::is_zero(c)) continue;
        add_scaled(out, a[i] * b[j], c);
      }
    }
    VectorField ra = anchor(a), rb = anchor(b);
    for (std::size_t j = 0; j < rank_; ++j) {
      out[j] += act(ra, b[j]);
      out[j] -= act(rb, a[j]);
    }
    return out;
  }

  BracketSpace space() const {
    BracketSpace s;
    s.patch = patch_;
    s.rep_rank = rank_;
    for (std::size_t i = 0; i < rank_; ++i) s.basis.push_back(unit_section(rank_, i));
    auto self = std::make_shared<DullAlgebroid>(*this);
    s.bracket = [self](const Section& a, const Section& b) { return self->bracket(a, b); };
    s.anchor = [self](const Section& a) { return self->anchor(a); };
    return s;
  }

  friend bool operator==(const DullAlgebroid& a, const DullAlgebroid& b) {
    return a.patch_ == b.patch_ && a.rank_ == b.rank_ && a.anchor_ == b.anchor_ && a.structure_ == b.structure_;
  }

  bool skew_checked = false;
  bool anchor_checked = false;
  bool jacobi_checked = false;
  bool is_lie() const { return skew_checked && anchor_checked && jacobi_checked; }

 private:
  Patch patch_;
  std::size_t rank_ = 0;
  Matrix anchor_;
  std::vector<Section> structure_;
  std::string name_;
};

inline DullAlgebroid tangent_algebroid(const Patch& patch) {
  DullAlgebroid a(patch, patch.dim(), Matrix::identity(patch.dim()), {}, "TM");
  a.skew_checked = a.anchor_checked = a.jacobi_checked = true;
  return a;
}

/// Checks [a,b] + [b,a] = 0.
inline CheckResult check_skew(const BracketSpace& s, const CheckOptions& opts, const std::string& name = "skew") {
  return run_check(name, opts, [&](CheckResult& r) {
    const auto& B = s.basis;
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = i; j < B.size(); ++j) {
        Section res = s.bracket(B[i], B[j]) + s.bracket(B[j], B[i]);
        if (!s.is_zero(res)) r.fail(frame_label({i, j}), res, s.patch);
      }
    Sampler smp(r.seed, s.patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section a = smp.combination(B, s.rep_rank), b = smp.combination(B, s.rep_rank);
      Section res = s.bracket(a, b) + s.bracket(b, a);
      if (!s.is_zero(res)) r.fail(trial_label(t), res, s.patch);
    }
  });
}

/// Checks rho[a,b] = [rho a, rho b].
inline CheckResult check_anchor_compat(const BracketSpace& s, const CheckOptions& opts, const std::string& name = "anchor") {
  return run_check(name, opts, [&](CheckResult& r) {
    const auto& B = s.basis;
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = 0; j < B.size(); ++j) {
        VectorField res = s.anchor(s.bracket(B[i], B[j])) - lie_bracket(s.anchor(B[i]), s.anchor(B[j]));
        if (!is_zero(res)) r.fail(frame_label({i, j}), res, s.patch);
      }
    Sampler smp(r.seed, s.patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section a = smp.combination(B, s.rep_rank), b = smp.combination(B, s.rep_rank);
      VectorField res = s.anchor(s.bracket(a, b)) - lie_bracket(s.anchor(a), s.anchor(b));
      if (!is_zero(res)) r.fail(trial_label(t), res, s.patch);
    }
  });
}

/// Cyclic Jacobiator [[a,b],c] + [[b,c],a] + [[c,a],b].
inline Section jacobiator(const BracketSpace& s, const Section& a, const Section& b, const Section& c) {
  return s.bracket(s.bracket(a, b), c) + s.bracket(s.bracket(b, c), a) + s.bracket(s.bracket(c, a), b);
}

inline CheckResult check_jacobi(const BracketSpace& s, const CheckOptions& opts, const std::string& name = "jacobi") {
  return run_check(name, opts, [&](CheckResult& r) {
    const auto& B = s.basis;
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = i + 1; j < B.size(); ++j)
        for (std::size_t k = j + 1; k < B.size(); ++k) {
          Section res = jacobiator(s, B[i], B[j], B[k]);
          if (!s.is_zero(res)) r.fail(frame_label({i, j, k}), res, s.patch);
        }
    Sampler smp(r.seed, s.patch.dim(), opts.max_degree);
    for (int t = 0; t < opts.trials; ++t) {
      Section a = smp.combination(B, s.rep_rank), b = smp.combination(B, s.rep_rank), c = smp.combination(B, s.rep_rank);
      Section res = jacobiator(s, a, b, c);
      if (!s.is_zero(res)) r.fail(trial_label(t), res, s.patch);
    }
  });
}

/// Skew, anchor and Jacobi checks; name prefix applied to each.
inline Report check_lie(const BracketSpace& s, const CheckOptions& opts, const std::string& prefix) {
  return {check_skew(s, opts, prefix + ".skew"), check_anchor_compat(s, opts, prefix + ".anchor"),
          check_jacobi(s, opts, prefix + ".jacobi")};
}

/// Runs the three checks and records the outcome in the algebroid's flags.
inline Report certify(DullAlgebroid& a, const CheckOptions& opts = {}) {
  Report r = check_lie(a.space(), opts, a.name());
  a.skew_checked = r[0].passed;
  a.anchor_checked = r[1].passed;
  a.jacobi_checked = r[2].passed;
  return r;
}

// ---------------------------------------------------------------------------
// Calculus of a Lie algebroid A, its dual and the bundles TM + A*, A + T*M.

/// rho^t theta, the section of A* with components theta(rho e_k).
inline Section rho_transpose(const DullAlgebroid& A, const OneForm& theta) {
  Section out(A.rank());
  for (std::size_t k = 0; k < A.rank(); ++k)
    for (std::size_t mu = 0; mu < A.dim(); ++mu)
      if (!theta[mu].is_zero() && !A.anchor_matrix()(mu, k).is_zero()) out[k] += theta[mu] * A.anchor_matrix()(mu, k);
  return out;
}

/// (a, theta) in A + T*M to (rho a, rho^t theta) in TM + A*.
inline Section rho_rhot(const DullAlgebroid& A, const Section& tau) {
  SplitDims sd{A.dim(), A.rank()};
  return concat(A.anchor(sd.b_a(tau)), rho_transpose(A, sd.b_tstar(tau)));
}

/// Lie derivative on A*: (L_a alpha)(b) = rho(a) alpha(b) - alpha([a,b]).
inline Section lie_derivative_dual(const DullAlgebroid& A, const Section& a, const Section& alpha) {
  const std::size_t r = A.rank();
  VectorField ra = A.anchor(a);
  Section out(r);
  for (std::size_t k = 0; k < r; ++k) out[k] = act(ra, alpha[k]) - dot(alpha, A.bracket(a, unit_section(r, k)));
  return out;
}

/// i_b d_A alpha, i.e. e_k -> rho(b) alpha(e_k) - rho(e_k) alpha(b) - alpha([b, e_k]).
inline Section interior_d_dual(const DullAlgebroid& A, const Section& b, const Section& alpha) {
  const std::size_t r = A.rank();
  VectorField rb = A.anchor(b);
  ScalarField ab = dot(alpha, b);
  Section out(r);
  for (std::size_t k = 0; k < r; ++k) {
    Section ek = unit_section(r, k);
    out[k] = act(rb, alpha[k]) - act(A.anchor(ek), ab) - dot(alpha, A.bracket(b, ek));
  }
  return out;
}

/// L_a on A + T*M: (a', theta) -> ([a, a'], L_{rho a} theta).
inline Section ldr_b(const DullAlgebroid& A, const Section& a, const Section& tau) {
  SplitDims sd{A.dim(), A.rank()};
  return concat(A.bracket(a, sd.b_a(tau)), lie_derivative(A.anchor(a), sd.b_tstar(tau)));
}

/// L_a on TM + A*: (X, alpha) -> ([rho a, X], L_a alpha).
inline Section ldr_q(const DullAlgebroid& A, const Section& a, const Section& nu) {
  SplitDims sd{A.dim(), A.rank()};
  return concat(lie_bracket(A.anchor(a), sd.q_tm(nu)), lie_derivative_dual(A, a, sd.q_astar(nu)));
}

/// Degenerate Courant bracket on A + T*M.
inline Section bracket_d(const DullAlgebroid& A, const Section& t1, const Section& t2) {
  SplitDims sd{A.dim(), A.rank()};
  Section a1 = sd.b_a(t1), a2 = sd.b_a(t2);
  OneForm th1 = sd.b_tstar(t1), th2 = sd.b_tstar(t2);
  return concat(A.bracket(a1, a2), lie_derivative(A.anchor(a1), th2) - interior(A.anchor(a2), d(th1)));
}

/// <(a1, theta1), (a2, theta2)>_d = theta2(rho a1) + theta1(rho a2).
inline ScalarField pairing_d(const DullAlgebroid& A, const Section& t1, const Section& t2) {
  SplitDims sd{A.dim(), A.rank()};
  return dot(sd.b_tstar(t2), A.anchor(sd.b_a(t1))) + dot(sd.b_tstar(t1), A.anchor(sd.b_a(t2)));
}

// ---------------------------------------------------------------------------
// Linear connections.

/// TM-connection on a trivial bundle of rank r: table(mu, j) = nabla_{d_mu} e_j.
class LinearConnection {
 public:
  LinearConnection() = default;
  LinearConnection(Patch patch, std::size_t rank, std::vector<Section> table = {})
      : patch_(std::move(patch)), rank_(rank), table_(std::move(table)) {
    if (table_.empty()) table_.assign(patch_.dim() * rank_, Section(rank_));
    if (table_.size() != patch_.dim() * rank_) throw ShapeError("connection: table has wrong size");
    for (const auto& s : table_)
      if (s.size() != rank_) throw ShapeError("connection: table entry has wrong rank");
  }

  const Patch& patch() const { return patch_; }
  std::size_t rank() const { return rank_; }
  const Section& table(std::size_t mu, std::size_t j) const { return table_[mu * rank_ + j]; }
  const std::vector<Section>& entries() const { return table_; }

  Section covariant(const VectorField& x, const Section& s) const {
    Section out(rank_);
    for (std::size_t k = 0; k < rank_; ++k) out[k] = act(x, s[k]);
    for (std::size_t mu = 0; mu < patch_.dim(); ++mu) {
      if (x[mu].is_zero()) continue;
      for (std::size_t j = 0; j < rank_; ++j)
        if (!s[j].is_zero()) add_scaled(out, x[mu] * s[j], table(mu, j));
    }
    return out;
  }

  /// Dual connection: <nabla*_X alpha, s> = X <alpha, s> - <alpha, nabla_X s>.
  Section dual_covariant(const VectorField& x, const Section& alpha) const {
    Section out(rank_);
    for (std::size_t j = 0; j < rank_; ++j) {
      out[j] = act(x, alpha[j]);
      for (std::size_t mu = 0; mu < patch_.dim(); ++mu)
        if (!x[mu].is_zero()) out[j] -= x[mu] * dot(alpha, table(mu, j));
    }
    return out;
  }

  Section curvature(const VectorField& x, const VectorField& y, const Section& s) const {
    return covariant(x, covariant(y, s)) - covariant(y, covariant(x, s)) - covariant(lie_bracket(x, y), s);
  }

  friend bool operator==(const LinearConnection& a, const LinearConnection& b) {
    return a.patch_ == b.patch_ && a.rank_ == b.rank_ && a.table_ == b.table_;
  }

 private:
  Patch patch_;
  std::size_t rank_ = 0;
  std::vector<Section> table_;
};

/// nabla^bas_a a' = [a, a'] + nabla_{rho a'} a.
inline Section basic_on_a(const DullAlgebroid& A, const LinearConnection& nabla, const Section& a, const Section& b) {
  return A.bracket(a, b) + nabla.covariant(A.anchor(b), a);
}

/// nabla^bas_a X = [rho a, X] + rho(nabla_X a).
inline VectorField basic_on_tm(const DullAlgebroid& A, const LinearConnection& nabla, const Section& a, const VectorField& x) {
  return lie_bracket(A.anchor(a), x) + A.anchor(nabla.covariant(x, a));
}

/// Basic curvature, a section of A.
inline Section basic_curvature(const DullAlgebroid& A, const LinearConnection& nabla, const Section& a1, const Section& a2,
                               const VectorField& x) {
  Section out = -nabla.covariant(x, A.bracket(a1, a2));
  out += A.bracket(nabla.covariant(x, a1), a2);
  out += A.bracket(a1, nabla.covariant(x, a2));
  out -= nabla.covariant(basic_on_tm(A, nabla, a1, x), a2);
  out += nabla.covariant(basic_on_tm(A, nabla, a2, x), a1);
  return out;
}

}  // namespace diracalg
