#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "scalar_field.hpp"

namespace diracalg {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

namespace detail {

/// Recursive descent over
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := rational | identifier | '(' expr ')' | '-' factor
/// A rational literal is digits optionally followed directly by '/' digits.
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const Patch& patch) : s_(text), patch_(patch) {}

  ScalarField parse() {
    ScalarField v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  ScalarField expr() {
    ScalarField v = term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        v += term();
      } else if (peek('-')) {
        ++pos_;
        v -= term();
      } else {
        return v;
      }
    }
  }

  ScalarField term() {
    ScalarField v = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        v *= factor();
      } else if (peek('/')) {
        std::size_t at = ++pos_;
        ScalarField d = factor();
        if (d.is_zero()) throw ParseError("division by zero", at);
        v /= d;
      } else {
        return v;
      }
    }
  }

  ScalarField factor() {
    ScalarField b = base();
    if (peek('^')) {
      ++pos_;
      skip();
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      if (pos_ - start > 3) throw ParseError("exponent too large", start);
      long e = std::stol(std::string(s_.substr(start, pos_ - start)));
      if (neg && b.is_zero()) throw ParseError("division by zero", start);
      return b.pow(neg ? -e : e);
    }
    return b;
  }

  ScalarField base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '(') {
      ++pos_;
      ScalarField v = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      int idx = patch_.index_of(name);
      if (idx < 0) throw ParseError("unknown identifier '" + name + "'", start);
      return ScalarField::variable(std::size_t(idx));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ScalarField literal() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string text(s_.substr(start, pos_ - start));
    if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      std::size_t dstart = ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string den(s_.substr(dstart, pos_ - dstart));
      mpz_class d(den);
      if (d == 0) throw ParseError("division by zero", dstart);
      Rational q(mpz_class(text), d);
      q.canonicalize();
      return ScalarField(q);
    }
    return ScalarField(Rational(mpz_class(text)));
  }

  std::string_view s_;
  const Patch& patch_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an arithmetic expression over the patch coordinates.
inline ScalarField parse_scalar(std::string_view text, const Patch& patch) {
  return detail::ExpressionParser(text, patch).parse();
}

}  // namespace diracalg
