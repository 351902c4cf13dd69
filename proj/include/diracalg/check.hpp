#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace diracalg {

/// Sampling parameters shared by all checkers.
struct CheckOptions {
  std::uint64_t seed = 0;
  int trials = 8;
  int max_degree = 2;
};

/// Offending input together with its nonzero canonical residual.
struct Witness {
  std::string context;
  std::vector<std::string> residual;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  bool error = false;  ///< the check could not be evaluated; detail holds the reason
  std::string detail;
  std::vector<Witness> witnesses;
  std::uint64_t seed = 0;
  double millis = 0;

  static constexpr std::size_t kMaxWitnesses = 3;

  void fail(std::string context, std::vector<std::string> residual) {
    passed = false;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back({std::move(context), std::move(residual)});
  }
  void fail(std::string context, const Section& residual, const Patch& patch) {
    fail(std::move(context), to_strings(residual, patch));
  }
  void fail(std::string context, const ScalarField& residual, const Patch& patch) {
    fail(std::move(context), std::vector<std::string>{to_string(residual, patch)});
  }
};

using Report = std::vector<CheckResult>;

inline bool all_passed(const Report& r) {
  return std::all_of(r.begin(), r.end(), [](const CheckResult& c) { return c.passed; });
}

inline const CheckResult* find_check(const Report& r, const std::string& name) {
  for (const auto& c : r)
    if (c.name == name) return &c;
  return nullptr;
}

inline void append(Report& into, const Report& from, const std::string& prefix = "") {
  for (auto c : from) {
    if (!prefix.empty()) c.name = prefix + "." + c.name;
    into.push_back(std::move(c));
  }
}

/// FNV-1a of the check name mixed with the run seed, stable across platforms.
inline std::uint64_t derive_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull ^ (seed * 0x9e3779b97f4a7c15ull);
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Deterministic generator of random polynomial data.
class Sampler {
 public:
  Sampler(std::uint64_t seed, std::size_t dim, int max_degree) : engine_(seed), dim_(dim), degree_(max_degree) {}

  long integer(long lo, long hi) { return lo + long(engine_() % std::uint64_t(hi - lo + 1)); }

  /// Dense polynomial of total degree at most max_degree with small integer coefficients.
  ScalarField polynomial() {
    std::vector<Polynomial::Term> terms;
    std::vector<unsigned> e(dim_, 0);
    enumerate(0, unsigned(degree_), e, terms);
    return ScalarField(Polynomial::from_terms(std::move(terms)));
  }

  Section section(std::size_t rank) {
    Section s(rank);
    for (auto& c : s) c = polynomial();
    return s;
  }

  /// Random combination of the given generators.
  Section combination(const std::vector<Section>& gens, std::size_t ambient) {
    Section s(ambient);
    for (const auto& g : gens) add_scaled(s, polynomial(), g);
    return s;
  }

 private:
  void enumerate(std::size_t var, unsigned budget, std::vector<unsigned>& e, std::vector<Polynomial::Term>& out) {
    if (var == dim_) {
      long c = integer(-3, 3);
      if (c == 0) return;
      Monomial m;
      for (std::size_t i = 0; i < dim_; ++i)
        if (e[i]) m = m * Monomial::variable(i, e[i]);
      out.push_back({m, Rational(c)});
      return;
    }
    for (unsigned k = 0; k <= budget; ++k) {
      e[var] = k;
      enumerate(var + 1, budget - k, e, out);
    }
    e[var] = 0;
  }

  std::mt19937_64 engine_;
  std::size_t dim_;
  int degree_;
};

/// Times a check body and stamps name and derived seed.
template <class Body>
CheckResult run_check(const std::string& name, const CheckOptions& opts, Body&& body) {
  CheckResult r;
  r.name = name;
  r.seed = derive_seed(opts.seed, name);
  auto start = std::chrono::steady_clock::now();
  body(r);
  r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::string frame_label(std::initializer_list<std::size_t> idx) {
  std::string s = "frame(";
  bool first = true;
  for (auto i : idx) {
    if (!first) s += ",";
    s += std::to_string(i + 1);
    first = false;
  }
  return s + ")";
}

inline std::string trial_label(int t) { return "random trial " + std::to_string(t + 1); }

}  // namespace diracalg
