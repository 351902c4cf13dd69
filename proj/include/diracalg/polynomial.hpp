#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace diracalg {

using Rational = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Packed exponent vector.
/// The top byte holds the total degree and the following bytes the exponents of
/// x1..x7, so comparing the packed words is graded lexicographic order.
class Monomial {
 public:
  static constexpr std::size_t kMaxVars = 7;
  static constexpr unsigned kMaxDegree = 255;

  constexpr Monomial() = default;

  static Monomial variable(std::size_t i, unsigned power = 1) {
    if (i >= kMaxVars) throw Error("monomial: variable index out of range");
    if (power > kMaxDegree) throw Error("monomial: degree overflow");
    Monomial m;
    m.bits_ = (std::uint64_t(power) << 56) | (std::uint64_t(power) << shift(i));
    return m;
  }

  unsigned degree() const { return unsigned(bits_ >> 56); }
  unsigned exponent(std::size_t i) const { return unsigned((bits_ >> shift(i)) & 0xffu); }
  std::uint64_t key() const { return bits_; }

  bool divides(Monomial o) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (exponent(i) > o.exponent(i)) return false;
    return true;
  }

  Monomial operator*(Monomial o) const {
    if (degree() + o.degree() > kMaxDegree) throw Error("monomial: degree overflow");
    Monomial m;
    m.bits_ = bits_ + o.bits_;
    return m;
  }

  /// Quotient; requires o.divides(*this).
  Monomial operator/(Monomial o) const {
    Monomial m;
    m.bits_ = bits_ - o.bits_;
    return m;
  }

  Monomial gcd(Monomial o) const {
    Monomial m;
    unsigned d = 0;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      unsigned e = std::min(exponent(i), o.exponent(i));
      d += e;
      m.bits_ |= std::uint64_t(e) << shift(i);
    }
    m.bits_ |= std::uint64_t(d) << 56;
    return m;
  }

  /// Bit i set iff x_i occurs.
  unsigned support() const {
    unsigned s = 0;
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (exponent(i) != 0) s |= 1u << i;
    return s;
  }

  /// Drops x_i from the monomial.
  Monomial without(std::size_t i) const {
    return *this / variable_power_unchecked(i, exponent(i));
  }

  friend bool operator==(Monomial a, Monomial b) { return a.bits_ == b.bits_; }
  friend bool operator!=(Monomial a, Monomial b) { return a.bits_ != b.bits_; }
  friend bool operator<(Monomial a, Monomial b) { return a.bits_ < b.bits_; }
  friend bool operator>(Monomial a, Monomial b) { return a.bits_ > b.bits_; }

 private:
  static constexpr unsigned shift(std::size_t i) { return unsigned(48 - 8 * i); }
  static Monomial variable_power_unchecked(std::size_t i, unsigned e) {
    Monomial m;
    m.bits_ = (std::uint64_t(e) << 56) | (std::uint64_t(e) << shift(i));
    return m;
  }

  std::uint64_t bits_ = 0;
};

/// Sparse polynomial over the rationals, terms kept in strictly decreasing grlex order.
class Polynomial {
 public:
  struct Term {
    Monomial mono;
    Rational coef;
  };

  Polynomial() = default;
  explicit Polynomial(const Rational& c) {
    if (c != 0) terms_.push_back({Monomial(), c});
  }
  explicit Polynomial(long c) : Polynomial(Rational(c)) {}

  static Polynomial variable(std::size_t i) { return term(Monomial::variable(i), Rational(1)); }
  static Polynomial term(Monomial m, const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.push_back({m, c});
    return p;
  }
  /// Builds from arbitrary terms; sorts and merges.
  static Polynomial from_terms(std::vector<Term> ts) {
    Polynomial p;
    p.terms_ = std::move(ts);
    p.canonicalize();
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0); }
  bool is_one() const { return terms_.size() == 1 && terms_[0].mono.degree() == 0 && terms_[0].coef == 1; }
  Rational constant_value() const { return terms_.empty() || terms_.back().mono.degree() != 0 ? Rational(0) : terms_.back().coef; }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }
  std::size_t size() const { return terms_.size(); }

  unsigned total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }
  unsigned degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
    return d;
  }
  unsigned support() const {
    unsigned s = 0;
    for (const auto& t : terms_) s |= t.mono.support();
    return s;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.terms_[0].coef);
    if (b.is_constant()) return a.scaled(b.terms_[0].coef);
    if (a.size() == 1) return b.times_term(a.terms_[0]);
    if (b.size() == 1) return a.times_term(b.terms_[0]);
    std::vector<Term> out;
    out.reserve(a.size() * b.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) out.push_back({s.mono * t.mono, s.coef * t.coef});
    return from_terms(std::move(out));
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Rational& c) const {
    if (c == 0) return {};
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }

  Polynomial times_term(const Term& s) const {
    Polynomial r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * s.mono, t.coef * s.coef});
    return r;
  }

  Polynomial derivative(std::size_t var) const {
    std::vector<Term> out;
    const Monomial x = Monomial::variable(var);
    for (const auto& t : terms_) {
      unsigned e = t.mono.exponent(var);
      if (e == 0) continue;
      out.push_back({t.mono / x, t.coef * e});
    }
    // Dividing by a fixed variable preserves the relative order of the surviving terms.
    Polynomial r;
    r.terms_ = std::move(out);
    return r;
  }

  Rational evaluate(std::span<const Rational> point) const {
    Rational sum = 0;
    for (const auto& t : terms_) {
      Rational v = t.coef;
      for (std::size_t i = 0; i < Monomial::kMaxVars; ++i) {
        unsigned e = t.mono.exponent(i);
        if (e == 0) continue;
        if (i >= point.size()) throw Error("evaluate: point has too few coordinates");
        for (unsigned k = 0; k < e; ++k) v *= point[i];
      }
      sum += v;
    }
    return sum;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coef != b.terms_[i].coef) return false;
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
    Polynomial r;
    r.terms_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a.terms_[i].mono > b.terms_[j].mono)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.size() || b.terms_[j].mono > a.terms_[i].mono) {
        r.terms_.push_back({b.terms_[j].mono, subtract ? Rational(-b.terms_[j].coef) : b.terms_[j].coef});
        ++j;
      } else {
        Rational c = subtract ? Rational(a.terms_[i].coef - b.terms_[j].coef) : Rational(a.terms_[i].coef + b.terms_[j].coef);
        if (c != 0) r.terms_.push_back({a.terms_[i].mono, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.mono > y.mono; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().mono == t.mono) {
        out.back().coef += t.coef;
      } else {
        if (!out.empty() && out.back().coef == 0) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().coef == 0) out.pop_back();
    terms_ = std::move(out);
  }

  std::vector<Term> terms_;
};

/// Leading coefficient scaled to one.
inline Polynomial monic(const Polynomial& p) {
  if (p.is_zero() || p.leading().coef == 1) return p;
  Rational inv = 1 / p.leading().coef;
  return p.scaled(inv);
}

/// Exact quotient a/b, or nothing when b does not divide a.
inline std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  if (b.is_constant()) return a.scaled(1 / b.leading().coef);
  std::vector<Polynomial::Term> q;
  Polynomial r = a;
  const auto& lb = b.leading();
  while (!r.is_zero()) {
    const auto& lr = r.leading();
    if (!lb.mono.divides(lr.mono)) return std::nullopt;
    Polynomial::Term t{lr.mono / lb.mono, lr.coef / lb.coef};
    r -= b.times_term(t);
    q.push_back(std::move(t));
  }
  return Polynomial::from_terms(std::move(q));
}

/// Coefficients of a as a polynomial in x_var: result[k] multiplies x_var^k.
inline std::vector<Polynomial> coefficients_in(const Polynomial& a, std::size_t var) {
  std::vector<std::vector<Polynomial::Term>> buckets(a.degree_in(var) + 1);
  for (const auto& t : a.terms()) buckets[t.mono.exponent(var)].push_back({t.mono.without(var), t.coef});
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(Polynomial::from_terms(std::move(b)));
  return out;
}

inline Polynomial from_coefficients(const std::vector<Polynomial>& cs, std::size_t var) {
  Polynomial r;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (cs[k].is_zero()) continue;
    r += k == 0 ? cs[k] : cs[k] * Polynomial::term(Monomial::variable(var, unsigned(k)), Rational(1));
  }
  return r;
}

inline Polynomial gcd(const Polynomial& a, const Polynomial& b);

namespace detail {

inline Polynomial monomial_gcd(Monomial m, const Polynomial& b) {
  for (const auto& t : b.terms()) m = m.gcd(t.mono);
  return Polynomial::term(m, Rational(1));
}

inline Polynomial content_in(const Polynomial& a, std::size_t var) {
  auto cs = coefficients_in(a, var);
  Polynomial g;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? monic(c) : gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

inline Polynomial primitive_part(const Polynomial& a, std::size_t var) {
  return monic(*divide_exact(a, content_in(a, var)));
}

/// Pseudo-remainder of a by b with respect to x_var.
inline Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, std::size_t var) {
  const unsigned db = b.degree_in(var);
  const Polynomial lb = coefficients_in(b, var)[db];
  while (!a.is_zero()) {
    unsigned da = a.degree_in(var);
    if (da < db) break;
    Polynomial la = coefficients_in(a, var)[da];
    Polynomial shifted = da == db ? b : b * Polynomial::term(Monomial::variable(var, da - db), Rational(1));
    a = lb * a - la * shifted;
  }
  return a;
}

/// gcd of two polynomials that are primitive in x_var and both involve x_var.
inline Polynomial primitive_gcd(Polynomial p, Polynomial q, std::size_t var) {
  if (p.degree_in(var) < q.degree_in(var)) std::swap(p, q);
  while (true) {
    Polynomial r = pseudo_remainder(p, q, var);
    if (r.is_zero()) return monic(q);
    if (r.degree_in(var) == 0) return Polynomial(1);
    p = std::move(q);
    q = primitive_part(r, var);
  }
}

}  // namespace detail

namespace detail {

/// gcd by recursive primitive remainder sequences; exact but prone to coefficient swell.
inline Polynomial prs_gcd(const Polynomial& a, const Polynomial& b) {
  const unsigned sa = a.support(), sb = b.support();
  for (std::size_t v = 0; v < Monomial::kMaxVars; ++v) {
    unsigned bit = 1u << v;
    if ((sa & bit) && !(sb & bit)) return gcd(content_in(a, v), b);
    if ((sb & bit) && !(sa & bit)) return gcd(a, content_in(b, v));
  }
  std::size_t v = 0;
  while (!((sa >> v) & 1u)) ++v;
  Polynomial ca = content_in(a, v), cb = content_in(b, v);
  Polynomial g = gcd(ca, cb);
  Polynomial pa = *divide_exact(a, ca), pb = *divide_exact(b, cb);
  return monic(g * primitive_gcd(monic(pa), monic(pb), v));
}

inline mpz_class integer_content(const Polynomial& a) {
  mpz_class g = 0;
  for (const auto& t : a.terms()) {
    g = ::gcd(g, mpz_class(t.coef.get_num()));
    if (g == 1) break;
  }
  return g;
}

/// Integer multiple of a with coprime coefficients and positive leading coefficient.
inline Polynomial integer_primitive(const Polynomial& a) {
  if (a.is_zero()) return a;
  mpz_class l = 1;
  for (const auto& t : a.terms()) l = ::lcm(l, mpz_class(t.coef.get_den()));
  Polynomial s = a.scaled(Rational(l));
  mpz_class g = integer_content(s);
  if (a.leading().coef < 0) g = -g;
  Rational inv(mpz_class(1), g);
  inv.canonicalize();
  return s.scaled(inv);
}

inline mpz_class max_norm(const Polynomial& a) {
  mpz_class m = 0;
  for (const auto& t : a.terms()) {
    mpz_class c = abs(t.coef.get_num());
    if (c > m) m = c;
  }
  return m;
}

/// a with x_var replaced by the integer v.
inline Polynomial substitute(const Polynomial& a, std::size_t var, const mpz_class& v) {
  std::vector<Polynomial::Term> out;
  out.reserve(a.size());
  for (const auto& t : a.terms()) {
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), v.get_mpz_t(), t.mono.exponent(var));
    out.push_back({t.mono.without(var), Rational(t.coef * p)});
  }
  return Polynomial::from_terms(std::move(out));
}

/// Inverse of substitution for small coefficients: symmetric xi-adic digits become powers of x_var.
inline Polynomial interpolate(const Polynomial& h, std::size_t var, const mpz_class& xi) {
  std::vector<Polynomial::Term> out;
  const mpz_class half = xi / 2;
  for (const auto& t : h.terms()) {
    mpz_class c = t.coef.get_num();
    unsigned e = 0;
    while (c != 0) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
      if (r > half) r -= xi;
      if (r != 0) {
        if (e > Monomial::kMaxDegree) throw Error("interpolation degree overflow");
        out.push_back({t.mono * Monomial::variable(var, e), Rational(r)});
      }
      c = (c - r) / xi;
      ++e;
    }
  }
  return Polynomial::from_terms(std::move(out));
}

inline std::optional<Polynomial> heuristic_gcd(const Polynomial& a, const Polynomial& b);

/// Heuristic gcd of primitive integer polynomials; result primitive with positive leading coefficient.
inline std::optional<Polynomial> heuristic_gcd_primitive(const Polynomial& a, const Polynomial& b) {
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  const unsigned sup = a.support() | b.support();
  std::size_t v = Monomial::kMaxVars - 1;
  while (!((sup >> v) & 1u)) --v;
  const mpz_class na = max_norm(a), nb = max_norm(b);
  mpz_class xi = 2 * std::min(na, nb) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Polynomial fa = substitute(a, v, xi), fb = substitute(b, v, xi);
    if (!fa.is_zero() && !fb.is_zero()) {
      auto h = heuristic_gcd(fa, fb);
      if (!h) return std::nullopt;
      Polynomial cand = integer_primitive(interpolate(*h, v, xi));
      if (!cand.is_zero() && divide_exact(a, cand) && divide_exact(b, cand)) return cand;
      // Cofactor route: interpolate a(xi)/h and recover the gcd as a quotient.
      if (auto cf = divide_exact(fa, *h)) {
        Polynomial ca = interpolate(*cf, v, xi);
        if (!ca.is_zero())
          if (auto g = divide_exact(a, ca)) {
            Polynomial cg = integer_primitive(*g);
            if (divide_exact(b, cg)) return cg;
          }
      }
    }
    mpz_class s = sqrt(sqrt(xi));
    xi = xi * 73794 * s / 27011 + 1;
  }
  return std::nullopt;
}

/// Heuristic gcd of integer polynomials including the integer content.
inline std::optional<Polynomial> heuristic_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.is_zero() ? b : b.scaled(Rational(b.leading().coef < 0 ? -1 : 1));
  if (b.is_zero()) return a.scaled(Rational(a.leading().coef < 0 ? -1 : 1));
  mpz_class ca = integer_content(a), cb = integer_content(b);
  mpz_class c = ::gcd(ca, cb);
  Polynomial pa = integer_primitive(a), pb = integer_primitive(b);
  auto g = heuristic_gcd_primitive(pa, pb);
  if (!g) return std::nullopt;
  return g->scaled(Rational(c));
}

}  // namespace detail

/// Monic greatest common divisor over the rationals.
inline Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a.size() == 1) return detail::monomial_gcd(a.leading().mono, b);
  if (b.size() == 1) return detail::monomial_gcd(b.leading().mono, a);
  if (monic(a) == monic(b)) return monic(a);
  if (a.total_degree() >= b.total_degree()) {
    if (divide_exact(a, b)) return monic(b);
  } else if (divide_exact(b, a)) {
    return monic(a);
  }
  if (auto h = detail::heuristic_gcd_primitive(detail::integer_primitive(a), detail::integer_primitive(b)))
    return monic(*h);
  return detail::prs_gcd(a, b);
}

}  // namespace diracalg
