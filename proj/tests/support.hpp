#pragma once

#include <gtest/gtest.h>

#include <initializer_list>
#include <string>

#include "diracalg/check.hpp"
#include "diracalg/parser.hpp"

namespace diracalg {

inline void PrintTo(const ScalarField& f, std::ostream* os) {
  static const Patch names({"x", "y", "z", "w", "u", "v", "t"});
  *os << to_string(f, names);
}

}  // namespace diracalg

namespace testing_support {

using namespace diracalg;

inline const Patch& xy() {
  static const Patch p({"x", "y"});
  return p;
}

inline const Patch& xyz() {
  static const Patch p({"x", "y", "z"});
  return p;
}

inline ScalarField P(const std::string& s, const Patch& p = xy()) { return parse_scalar(s, p); }

inline Section S(std::initializer_list<const char*> comps, const Patch& p = xy()) {
  Section s;
  for (const char* c : comps) s.push_back(parse_scalar(c, p));
  return s;
}

inline std::string show(const Report& r) {
  std::string out;
  for (const auto& c : r) {
    out += c.name + (c.passed ? " pass" : " FAIL");
    for (const auto& w : c.witnesses) {
      out += " [" + w.context + ":";
      for (const auto& s : w.residual) out += " " + s;
      out += "]";
    }
    out += "\n";
  }
  return out;
}

}  // namespace testing_support
