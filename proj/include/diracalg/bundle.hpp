#pragma once

#include <string>
#include <vector>

#include "scalar_field.hpp"

namespace diracalg {

/// Component vector of a section of a trivial bundle in its standard frame.
using Section = std::vector<ScalarField>;
using VectorField = Section;
using OneForm = Section;

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Trivial bundle over a patch.
struct TrivialBundle {
  Patch patch;
  std::size_t rank = 0;
  std::string name;
};

inline TrivialBundle direct_sum(const TrivialBundle& a, const TrivialBundle& b) {
  if (!(a.patch == b.patch)) throw ShapeError("direct_sum: bundles live over different patches");
  return {a.patch, a.rank + b.rank, a.name + "+" + b.name};
}

inline Section zero_section(std::size_t n) { return Section(n); }

inline Section unit_section(std::size_t n, std::size_t i) {
  Section s(n);
  s.at(i) = ScalarField(1);
  return s;
}

inline void require_same_rank(const Section& a, const Section& b, const char* what) {
  if (a.size() != b.size()) throw ShapeError(std::string(what) + ": rank mismatch");
}

inline Section operator+(const Section& a, const Section& b) {
  require_same_rank(a, b, "section sum");
  Section r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Section operator-(const Section& a, const Section& b) {
  require_same_rank(a, b, "section difference");
  Section r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Section operator-(const Section& a) {
  Section r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline Section operator*(const ScalarField& f, const Section& a) {
  Section r(a.size());
  if (f.is_zero()) return r;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f * a[i];
  return r;
}

inline Section& operator+=(Section& a, const Section& b) {
  require_same_rank(a, b, "section sum");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Section& operator-=(Section& a, const Section& b) {
  require_same_rank(a, b, "section difference");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

/// a += f * b
inline void add_scaled(Section& a, const ScalarField& f, const Section& b) {
  require_same_rank(a, b, "section sum");
  if (f.is_zero()) return;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!b[i].is_zero()) a[i] += f * b[i];
}

inline bool is_zero(const Section& s) {
  for (const auto& c : s)
    if (!c.is_zero()) return false;
  return true;
}

inline ScalarField dot(const Section& a, const Section& b) {
  require_same_rank(a, b, "dot");
  ScalarField r;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) r += a[i] * b[i];
  return r;
}

inline Section concat(const Section& a, const Section& b) {
  Section r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

inline Section slice(const Section& s, std::size_t from, std::size_t count) {
  if (from + count > s.size()) throw ShapeError("slice out of range");
  return Section(s.begin() + long(from), s.begin() + long(from + count));
}

inline std::vector<std::string> to_strings(const Section& s, const Patch& patch) {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (const auto& c : s) out.push_back(to_string(c, patch));
  return out;
}

inline std::string to_string(const Section& s, const Patch& patch) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s[i], patch);
  }
  return out + "]";
}

/// Layout helpers for Q = TM + A* (vector part first) and B = A + T*M.
struct SplitDims {
  std::size_t n = 0;  ///< dim M
  std::size_t r = 0;  ///< rank A

  Section q_tm(const Section& q) const { return slice(q, 0, n); }
  Section q_astar(const Section& q) const { return slice(q, n, r); }
  Section b_a(const Section& b) const { return slice(b, 0, r); }
  Section b_tstar(const Section& b) const { return slice(b, r, n); }
  std::size_t qrank() const { return n + r; }
  std::size_t brank() const { return r + n; }
};

/// <(X, alpha), (a, theta)> = theta(X) + alpha(a).
inline ScalarField canonical_pairing(const Section& q, const Section& b, const SplitDims& d) {
  if (q.size() != d.qrank() || b.size() != d.brank()) throw ShapeError("canonical pairing: rank mismatch");
  ScalarField s;
  for (std::size_t mu = 0; mu < d.n; ++mu)
    if (!q[mu].is_zero() && !b[d.r + mu].is_zero()) s += q[mu] * b[d.r + mu];
  for (std::size_t k = 0; k < d.r; ++k)
    if (!q[d.n + k].is_zero() && !b[k].is_zero()) s += q[d.n + k] * b[k];
  return s;
}

/// Index in B paired with index i of Q under the canonical pairing.
inline std::size_t dual_index_qb(std::size_t i, const SplitDims& d) { return i < d.n ? d.r + i : i - d.n; }
/// Index in Q paired with index j of B.
inline std::size_t dual_index_bq(std::size_t j, const SplitDims& d) { return j < d.r ? d.n + j : j - d.r; }

}  // namespace diracalg
