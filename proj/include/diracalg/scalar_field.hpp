#pragma once

#include <cctype>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "polynomial.hpp"

namespace diracalg {

/// Raised when a rational function is evaluated at a zero of its denominator.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Ordered coordinate names of a single chart.
struct Patch {
  std::vector<std::string> coords;

  Patch() = default;
  explicit Patch(std::vector<std::string> names) : coords(std::move(names)) {
    if (coords.empty()) throw Error("patch: at least one coordinate is required");
    if (coords.size() > Monomial::kMaxVars) throw Error("patch: at most 7 coordinates are supported");
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const auto& c = coords[i];
      bool ok = !c.empty() && (std::isalpha(static_cast<unsigned char>(c[0])) || c[0] == '_');
      for (char ch : c) ok = ok && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_');
      if (!ok) throw Error("patch: invalid coordinate name '" + c + "'");
      for (std::size_t j = 0; j < i; ++j)
        if (coords[j] == c) throw Error("patch: duplicate coordinate '" + c + "'");
    }
  }

  std::size_t dim() const { return coords.size(); }
  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] == name) return int(i);
    return -1;
  }
  friend bool operator==(const Patch& a, const Patch& b) { return a.coords == b.coords; }
};

/// Element of Q(x1..xn) kept as a reduced fraction with monic denominator.
class ScalarField {
 public:
  ScalarField() : den_(1) {}
  ScalarField(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  ScalarField(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  explicit ScalarField(Polynomial p) : num_(std::move(p)), den_(1) {}
  ScalarField(Polynomial num, Polynomial den) { assign_reduced(std::move(num), std::move(den)); }

  static ScalarField variable(std::size_t i) { return ScalarField(Polynomial::variable(i)); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return is_polynomial() && num_.is_constant(); }
  Rational constant_value() const { return num_.constant_value(); }

  ScalarField operator-() const {
    ScalarField r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b) { return combine(a, b, false); }
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b) { return combine(a, b, true); }

  friend ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial()) return ScalarField(a.num_ * b.num_);
    // Cross-cancellation keeps the product reduced without a full gcd.
    Polynomial g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    Polynomial n = *divide_exact(a.num_, g1) * *divide_exact(b.num_, g2);
    Polynomial d = *divide_exact(a.den_, g2) * *divide_exact(b.den_, g1);
    return from_coprime(std::move(n), std::move(d));
  }

  friend ScalarField operator/(const ScalarField& a, const ScalarField& b) { return a * b.inverse(); }

  ScalarField inverse() const {
    if (is_zero()) throw Error("division by zero");
    return from_coprime(den_, num_);
  }

  ScalarField& operator+=(const ScalarField& o) { return *this = *this + o; }
  ScalarField& operator-=(const ScalarField& o) { return *this = *this - o; }
  ScalarField& operator*=(const ScalarField& o) { return *this = *this * o; }
  ScalarField& operator/=(const ScalarField& o) { return *this = *this / o; }

  ScalarField pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    ScalarField r(1), base = *this;
    while (e > 0) {
      if (e & 1) r *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return r;
  }

  /// Partial derivative with respect to coordinate i.
  ScalarField partial(std::size_t i) const {
    if (is_polynomial()) return ScalarField(num_.derivative(i));
    Polynomial dd = den_.derivative(i);
    if (dd.is_zero()) return from_coprime(num_.derivative(i), den_);
    // With g = gcd(d, d') and h = d/g the quotient (n'h - n d'/g) / (d h) is already reduced.
    Polynomial g = gcd(den_, dd);
    Polynomial h = *divide_exact(den_, g);
    Polynomial n = num_.derivative(i) * h - num_ * *divide_exact(dd, g);
    return from_coprime(std::move(n), den_ * h);
  }

  Rational evaluate(std::span<const Rational> point) const {
    Rational d = den_.evaluate(point);
    if (d == 0) throw PoleError("evaluate: point is a pole");
    return num_.evaluate(point) / d;
  }

  friend bool operator==(const ScalarField& a, const ScalarField& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const ScalarField& a, const ScalarField& b) { return !(a == b); }

 private:
  static ScalarField combine(const ScalarField& a, const ScalarField& b, bool subtract) {
    if (a.is_polynomial() && b.is_polynomial()) {
      ScalarField r;
      r.num_ = subtract ? a.num_ - b.num_ : a.num_ + b.num_;
      return r;
    }
    Polynomial bn = subtract ? -b.num_ : b.num_;
    if (b.is_polynomial()) return from_coprime(a.num_ + bn * a.den_, a.den_);
    if (a.is_polynomial()) return from_coprime(a.num_ * b.den_ + bn, b.den_);
    if (a.den_ == b.den_) return ScalarField(a.num_ + bn, a.den_);
    Polynomial g = gcd(a.den_, b.den_);
    if (g.is_one()) return from_coprime(a.num_ * b.den_ + bn * a.den_, a.den_ * b.den_);
    Polynomial da = *divide_exact(a.den_, g), db = *divide_exact(b.den_, g);
    Polynomial n = a.num_ * db + bn * da;
    Polynomial h = gcd(n, g);
    Polynomial d = da * db * g;
    if (!h.is_one()) {
      n = *divide_exact(n, h);
      d = *divide_exact(d, h);
    }
    return from_coprime(std::move(n), std::move(d));
  }

  /// num and den are already coprime; only the unit is fixed.
  static ScalarField from_coprime(Polynomial n, Polynomial d) {
    ScalarField r;
    r.normalize_unit(std::move(n), std::move(d));
    return r;
  }

  void assign_reduced(Polynomial n, Polynomial d) {
    if (d.is_zero()) throw Error("division by zero");
    if (n.is_zero() || d.is_constant()) {
      normalize_unit(std::move(n), std::move(d));
      return;
    }
    Polynomial g = gcd(n, d);
    if (!g.is_one()) {
      n = *divide_exact(n, g);
      d = *divide_exact(d, g);
    }
    normalize_unit(std::move(n), std::move(d));
  }

  void normalize_unit(Polynomial n, Polynomial d) {
    if (d.is_zero()) throw Error("division by zero");
    if (n.is_zero()) {
      num_ = Polynomial();
      den_ = Polynomial(1);
      return;
    }
    const Rational lc = d.leading().coef;
    if (lc != 1) {
      Rational inv = 1 / lc;
      n = n.scaled(inv);
      d = d.scaled(inv);
    }
    num_ = std::move(n);
    den_ = std::move(d);
  }

  Polynomial num_;
  Polynomial den_;
};

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::string to_string(const Polynomial& p, const Patch& patch) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool unit = (c == 1);
    bool constant = t.mono.degree() == 0;
    if (!unit || constant) os << c.get_str();
    bool need_star = !unit || constant;
    for (std::size_t i = 0; i < patch.dim(); ++i) {
      unsigned e = t.mono.exponent(i);
      if (e == 0) continue;
      if (need_star) os << "*";
      os << patch.coords[i];
      if (e > 1) os << "^" << e;
      need_star = true;
    }
  }
  return os.str();
}

/// Canonical text; parses back to an equal value.
inline std::string to_string(const ScalarField& f, const Patch& patch) {
  if (f.is_polynomial()) return to_string(f.numerator(), patch);
  return "(" + to_string(f.numerator(), patch) + ")/(" + to_string(f.denominator(), patch) + ")";
}

}  // namespace diracalg
