#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bundle.hpp"

namespace diracalg {

class RankError : public Error {
 public:
  using Error::Error;
};

/// Dense matrix over the rational function field, row major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarField(1);
    return m;
  }
  /// Matrix whose columns are the given sections.
  static Matrix from_columns(const std::vector<Section>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw ShapeError("matrix: column rank mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }
  static Matrix from_rows(const std::vector<Section>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw ShapeError("matrix: row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  ScalarField& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const ScalarField& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Section column(std::size_t j) const {
    Section s(rows_);
    for (std::size_t i = 0; i < rows_; ++i) s[i] = (*this)(i, j);
    return s;
  }
  Section row(std::size_t i) const { return Section(data_.begin() + long(i * cols_), data_.begin() + long((i + 1) * cols_)); }
  std::vector<Section> columns() const {
    std::vector<Section> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Section apply(const Section& v) const {
    if (v.size() != cols_) throw ShapeError("matrix apply: rank mismatch");
    Section out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!v[j].is_zero() && !(*this)(i, j).is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ShapeError("matrix product: shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<ScalarField> data_;
};

/// Reduced row echelon form with lowest-index pivots.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> pivot_rows;  ///< original row chosen for each pivot
};

inline Echelon row_reduce(Matrix m) {
  Echelon e;
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::size_t> order(R);
  for (std::size_t i = 0; i < R; ++i) order[i] = i;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    while (p < R && m(p, c).is_zero()) ++p;
    if (p == R) continue;
    if (p != r) {
      for (std::size_t j = 0; j < C; ++j) std::swap(m(p, j), m(r, j));
      std::swap(order[p], order[r]);
    }
    ScalarField inv = m(r, c).inverse();
    for (std::size_t j = c; j < C; ++j)
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      ScalarField f = m(i, c);
      for (std::size_t j = c; j < C; ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    e.pivot_cols.push_back(c);
    e.pivot_rows.push_back(order[r]);
    ++r;
  }
  e.reduced = std::move(m);
  return e;
}

inline std::size_t rank(const Matrix& m) { return row_reduce(m).pivot_cols.size(); }

inline std::size_t rank(const std::vector<Section>& sections, std::size_t ambient) {
  if (sections.empty()) return 0;
  return rank(Matrix::from_rows(sections, ambient));
}

/// Basis of {v : m v = 0}, one vector per free column in index order.
inline std::vector<Section> nullspace(const Matrix& m) {
  Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<Section> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Section v(m.cols());
    v[f] = ScalarField(1);
    for (std::size_t k = 0; k < e.pivot_cols.size(); ++k) v[e.pivot_cols[k]] = -e.reduced(k, f);
    out.push_back(std::move(v));
  }
  return out;
}

inline ScalarField determinant(Matrix m) {
  if (m.rows() != m.cols()) throw ShapeError("determinant: matrix not square");
  const std::size_t n = m.rows();
  ScalarField det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return ScalarField();
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    ScalarField inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      ScalarField f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j)
        if (!m(c, j).is_zero()) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

inline Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("inverse: matrix not square");
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = ScalarField(1);
  }
  Echelon e = row_reduce(aug);
  if (e.pivot_cols.size() < n || e.pivot_cols[n - 1] != n - 1) throw RankError("inverse: matrix is singular");
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

/// Rows and columns of a nonvanishing maximal minor.
struct RankCertificate {
  std::vector<std::size_t> rows;
  ScalarField minor;
};

/// Outcome of a membership test.
struct Membership {
  bool member = false;
  Section coefficients;  ///< frame coefficients when member
  Section witness;       ///< covector annihilating the frame but not the section
};

/// Constant-rank subbundle given by an independent frame.
class Subbundle {
 public:
  Subbundle() = default;
  Subbundle(std::size_t ambient, std::vector<Section> frame) : ambient_(ambient), frame_(std::move(frame)) {
    for (const auto& s : frame_)
      if (s.size() != ambient_) throw ShapeError("subbundle: frame section has wrong rank");
    const std::size_t p = frame_.size();
    if (p == 0) {
      cert_.minor = ScalarField(1);
      return;
    }
    // Pivots of the frame-as-rows echelon form pick ambient rows of a nonzero minor.
    Echelon e = row_reduce(Matrix::from_rows(frame_, ambient_));
    if (e.pivot_cols.size() < p) throw RankError("subbundle: frame is linearly dependent");
    cert_.rows = e.pivot_cols;
    Matrix minor(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) minor(i, j) = frame_[j][cert_.rows[i]];
    cert_.minor = determinant(minor);
    minor_inverse_ = inverse(minor);
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t rank() const { return frame_.size(); }
  const std::vector<Section>& frame() const { return frame_; }
  const RankCertificate& certificate() const { return cert_; }

  Section combine(const Section& coeffs) const {
    Section s(ambient_);
    for (std::size_t i = 0; i < frame_.size(); ++i) add_scaled(s, coeffs[i], frame_[i]);
    return s;
  }

  /// Covectors (standard dot product) vanishing on the frame.
  const std::vector<Section>& dual_annihilator() const {
    if (!annihilator_) {
      if (frame_.empty()) {
        std::vector<Section> all;
        for (std::size_t i = 0; i < ambient_; ++i) all.push_back(unit_section(ambient_, i));
        annihilator_ = std::move(all);
      } else {
        annihilator_ = nullspace(Matrix::from_rows(frame_, ambient_));
      }
    }
    return *annihilator_;
  }

  Membership membership(const Section& s) const {
    if (s.size() != ambient_) throw ShapeError("membership: section has wrong rank");
    Membership m;
    const std::size_t p = frame_.size();
    Section rhs(p);
    for (std::size_t i = 0; i < p; ++i) rhs[i] = s[cert_.rows[i]];
    m.coefficients = p ? minor_inverse_.apply(rhs) : Section();
    if (combine(m.coefficients) == s) {
      m.member = true;
      return m;
    }
    for (const auto& w : dual_annihilator())
      if (!dot(w, s).is_zero()) {
        m.witness = w;
        break;
      }
    m.coefficients.clear();
    return m;
  }

  bool contains(const Section& s) const { return membership(s).member; }

 private:
  std::size_t ambient_ = 0;
  std::vector<Section> frame_;
  RankCertificate cert_;
  Matrix minor_inverse_;
  mutable std::optional<std::vector<Section>> annihilator_;
};

/// Annihilator of U inside the paired bundle: {b : pair(u_i, b) = 0}.
/// `pairing(i, j)` is the pairing of the i-th standard section of U's ambient with the
/// j-th standard section of the target.
inline Subbundle annihilator(const Subbundle& u, std::size_t target_rank,
                             const std::function<ScalarField(const Section&, const Section&)>& pair) {
  Matrix m(u.rank(), target_rank);
  for (std::size_t i = 0; i < u.rank(); ++i)
    for (std::size_t j = 0; j < target_rank; ++j) m(i, j) = pair(u.frame()[i], unit_section(target_rank, j));
  if (u.rank() == 0) {
    std::vector<Section> all;
    for (std::size_t j = 0; j < target_rank; ++j) all.push_back(unit_section(target_rank, j));
    return Subbundle(target_rank, std::move(all));
  }
  return Subbundle(target_rank, nullspace(m));
}

/// Annihilator of U in TM + A* as a subbundle of A + T*M under the canonical pairing.
inline Subbundle annihilator_qb(const Subbundle& u, const SplitDims& d) {
  return annihilator(u, d.brank(), [&](const Section& q, const Section& b) { return canonical_pairing(q, b, d); });
}

/// Annihilator of K in A + T*M as a subbundle of TM + A*.
inline Subbundle annihilator_bq(const Subbundle& k, const SplitDims& d) {
  return annihilator(k, d.qrank(), [&](const Section& b, const Section& q) { return canonical_pairing(q, b, d); });
}

/// Standard sections appended greedily in index order whenever they raise the rank.
inline std::vector<Section> complement(const Subbundle& u, bool reverse_order = false) {
  std::vector<Section> rows = u.frame(), added;
  std::size_t current = u.rank();
  for (std::size_t k = 0; k < u.ambient() && current < u.ambient(); ++k) {
    std::size_t i = reverse_order ? u.ambient() - 1 - k : k;
    rows.push_back(unit_section(u.ambient(), i));
    std::size_t r = rank(rows, u.ambient());
    if (r > current) {
      current = r;
      added.push_back(rows.back());
    } else {
      rows.pop_back();
    }
  }
  return added;
}

/// Equality of spans.
inline bool same_span(const Subbundle& a, const Subbundle& b) {
  if (a.rank() != b.rank() || a.ambient() != b.ambient()) return false;
  for (const auto& s : b.frame())
    if (!a.contains(s)) return false;
  return true;
}

}  // namespace diracalg
