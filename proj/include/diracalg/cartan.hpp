#pragma once

#include "linalg.hpp"

namespace diracalg {

/// Antisymmetric matrix of a 2-form, omega(i, j) = omega(d_i, d_j).
using TwoForm = Matrix;

/// X(f) = sum X^i d_i f.
inline ScalarField act(const VectorField& x, const ScalarField& f) {
  ScalarField r;
  if (f.is_constant()) return r;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) r += x[i] * f.partial(i);
  return r;
}

inline VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_rank(x, y, "vector field bracket");
  VectorField r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = act(x, y[i]) - act(y, x[i]);
  return r;
}

inline OneForm d(const ScalarField& f, std::size_t dim) {
  OneForm r(dim);
  if (f.is_constant()) return r;
  for (std::size_t i = 0; i < dim; ++i) r[i] = f.partial(i);
  return r;
}

inline TwoForm d(const OneForm& theta) {
  const std::size_t n = theta.size();
  TwoForm w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      w(i, j) = theta[j].partial(i) - theta[i].partial(j);
      w(j, i) = -w(i, j);
    }
  return w;
}

inline ScalarField contract(const OneForm& theta, const VectorField& x) { return dot(theta, x); }

/// (i_X omega)_j = sum_i X^i omega_ij.
inline OneForm interior(const VectorField& x, const TwoForm& w) {
  const std::size_t n = x.size();
  OneForm r(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (!x[i].is_zero() && !w(i, j).is_zero()) r[j] += x[i] * w(i, j);
  return r;
}

/// Cartan formula L_X theta = i_X d theta + d(theta(X)).
inline OneForm lie_derivative(const VectorField& x, const OneForm& theta) {
  return interior(x, d(theta)) + d(contract(theta, x), x.size());
}

/// omega(X, Y).
inline ScalarField evaluate2(const TwoForm& w, const VectorField& x, const VectorField& y) {
  return dot(x, w.apply(y));
}

/// d of a 2-form, as the totally antisymmetric array (i < j < k entries in order).
inline ScalarField d2_component(const TwoForm& w, std::size_t i, std::size_t j, std::size_t k) {
  return w(j, k).partial(i) - w(i, k).partial(j) + w(i, j).partial(k);
}

}  // namespace diracalg
