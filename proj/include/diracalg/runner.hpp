#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "instance.hpp"

namespace diracalg {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"courant", "dirac",    "la-dirac", "manin",     "lemmas", "bialgebroid",
                                                 "iis",     "im2form",  "bialgebra", "all"};
  return names;
}

/// Thrown when a suite needs data the instance does not declare.
class MissingDataError : public Error {
 public:
  using Error::Error;
};

namespace detail {

/// Records a construction failure as a failed check instead of aborting the suite.
inline void guarded(Report& rep, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    CheckResult r;
    r.name = name;
    r.passed = false;
    r.error = true;
    r.detail = e.what();
    rep.push_back(std::move(r));
  }
}

inline CheckResult agreement(const std::string& name, const std::string& lhs, bool l, const std::string& rhs, bool r_ok) {
  CheckResult r;
  r.name = name;
  r.detail = lhs + (l ? " passes" : " fails") + ", " + rhs + (r_ok ? " passes" : " fails");
  if (l != r_ok) r.fail("consistency", {r.detail});
  return r;
}

inline Report suite_courant(const Instance& inst, const CheckOptions& o) {
  Report rep;
  append(rep, check_courant_axioms(standard_courant(inst.patch), o), "standard");
  if (inst.triple) guarded(rep, "triple.build", [&] { append(rep, check_courant_axioms(build_courant_C(inst.make_triple()).C, o), "triple"); });
  return rep;
}

inline Report suite_dirac(const Instance& inst, const CheckOptions& o) {
  Report rep;
  CourantPresentation C = standard_courant(inst.patch);
  if (inst.pi) append(rep, check_dirac(C, dirac_from_poisson(*inst.pi), o, "dirac_pi"));
  if (inst.omega) append(rep, check_dirac(C, dirac_from_2form(*inst.omega), o, "dirac_omega"));
  if (inst.foliation) append(rep, check_dirac(C, dirac_from_foliation(inst.subbundles.at(*inst.foliation)), o, "dirac_foliation"));
  if (rep.empty()) throw MissingDataError("suite 'dirac' needs a [pi], [omega] or [dirac] block");
  return rep;
}

inline Report suite_la_dirac(const Instance& inst, const CheckOptions& o) {
  if (!inst.triple) throw MissingDataError("suite 'la-dirac' needs a [triple] block");
  return check_la_dirac(inst.make_triple(), o);
}

inline Report suite_manin(const Instance& inst, const CheckOptions& o) {
  Report rep;
  if (inst.triple) guarded(rep, "triple.build", [&] { append(rep, check_manin_pair(build_courant_C(inst.make_triple()), o, "triple.manin")); });
  if (inst.pi) {
    BialgebroidAndManin bm = bialgebroid_from_lie_bialgebroid(poisson_bialgebroid(inst.patch, *inst.pi));
    append(rep, check_manin_pair(bm.mp, o, "poisson.manin"));
  }
  if (inst.sigma) append(rep, check_manin_pair(bialgebroid_from_im2form(inst.algebroid(inst.sigma->algebroid), inst.sigma->sigma).mp, o, "im2form.manin"));
  if (inst.iis)
    guarded(rep, "iis.build", [&] {
      IISData d = inst.make_iis();
      validate(d);
      QuotientAlgebroid Q(d);
      append(rep, check_manin_pair(bialgebroid_from_iis(d, Q).mp, o, "iis.manin"));
    });
  if (inst.bialgebra) {
    DiracBialgebraData db = inst.make_bialgebra();
    IdealAndBialgebra ib = ideal_and_bialgebra_from(db);
    append(rep, check_manin_pair(bialgebra_manin_pair(db, ib), o, "bialgebra.manin"));
  }
  if (rep.empty()) throw MissingDataError("suite 'manin' needs a [triple], [pi], [sigma], [iis] or [bialgebra] block");
  return rep;
}

inline Report suite_lemmas(const Instance& inst, const CheckOptions& o) {
  if (!inst.triple) throw MissingDataError("suite 'lemmas' needs a [triple] block");
  LADiracTriple T = inst.make_triple();
  Report rep = verify_appendix_lemmas(T, o);
  Sampler s(derive_seed(o.seed, "lemmas.phi_skew"), inst.patch.dim(), o.max_degree);
  rep.push_back(verify_phi_skew(T, s.section(T.dims().r), o, "lemmas.phi_skew"));
  return rep;
}

inline Report roundtrip(const DiracBialgebroid& db, const CheckOptions& o, const std::string& prefix) {
  Report rep;
  guarded(rep, prefix + ".build", [&] {
    validate(db);
    LADiracTriple T = triple_from_bialgebroid(db);
    append(rep, check_la_dirac(T, o, prefix + ".la_dirac"));
    append(rep, bialgebroids_equivalent(db, bialgebroid_from_triple(T), o, prefix + ".equivalence"));
  });
  return rep;
}

inline Report suite_bialgebroid(const Instance& inst, const CheckOptions& o) {
  Report rep;
  if (inst.triple)
    guarded(rep, "triple.bialgebroid.build", [&] {
      DiracBialgebroid db = bialgebroid_from_triple(inst.make_triple());
      append(rep, check_lie(db.U.space(), o, "triple.bialgebroid.U"));
      append(rep, roundtrip(db, o, "triple.roundtrip"));
    });
  if (inst.pi) {
    LieBialgebroidData lb = poisson_bialgebroid(inst.patch, *inst.pi);
    append(rep, check_lie_bialgebroid(lb, o, "poisson"));
    rep.push_back(check_anchor_anomaly(lb, o, "poisson.anchor_anomaly"));
    rep.push_back(check_cotangent_identity(lb, o, "poisson.cotangent_identity"));
    rep.push_back(check_poisson_restriction(lb, adapted_dorfman_poisson(lb, LinearConnection(inst.patch, inst.patch.dim())), o));
    append(rep, roundtrip(bialgebroid_from_lie_bialgebroid(lb).db, o, "poisson.roundtrip"));
  }
  if (inst.sigma) {
    const DullAlgebroid& A = inst.algebroid(inst.sigma->algebroid);
    rep.push_back(check_presymplectic_restriction(inst.sigma->sigma,
                                                  adapted_dorfman_presymplectic(A, inst.sigma->sigma, LinearConnection(inst.patch, A.rank())), o));
    append(rep, roundtrip(bialgebroid_from_im2form(A, inst.sigma->sigma).db, o, "im2form.roundtrip"));
  }
  if (inst.iis)
    guarded(rep, "iis.bialgebroid.build", [&] {
      IISData d = inst.make_iis();
      validate(d);
      QuotientAlgebroid Q(d);
      append(rep, roundtrip(bialgebroid_from_iis(d, Q).db, o, "iis.roundtrip"));
    });
  if (inst.bialgebra) append(rep, roundtrip(dirac_bialgebroid(inst.make_bialgebra()), o, "bialgebra.roundtrip"));
  if (rep.empty()) throw MissingDataError("suite 'bialgebroid' needs a [triple], [pi], [sigma], [iis] or [bialgebra] block");
  return rep;
}

inline Report suite_iis(const Instance& inst, const CheckOptions& o) {
  if (!inst.iis) throw MissingDataError("suite 'iis' needs an [iis] block");
  IISData d = inst.make_iis();
  Report rep = check_iis(d, o);
  QuotientAlgebroid Q(d);
  append(rep, check_abar(Q, o));
  guarded(rep, "iis.bialgebroid.build", [&] {
    Report m = check_manin_pair(bialgebroid_from_iis(d, Q).mp, o, "iis.manin");
    append(rep, m);
    bool iis_ok = true;
    for (const auto& c : rep)
      if (c.name.rfind("iis.definition.", 0) == 0 || c.name.rfind("iis.basic.", 0) == 0) iis_ok = iis_ok && c.passed;
    bool pair_ok = all_passed(m) && find_check(rep, "iis.u.jacobi")->passed;
    rep.push_back(agreement("iis.iff_bialgebroid", "ideal system", iis_ok, "Manin pair and F_M + J° bracket", pair_ok));
  });
  return rep;
}

inline Report suite_im2form(const Instance& inst, const CheckOptions& o) {
  if (!inst.sigma) throw MissingDataError("suite 'im2form' needs a [sigma] block");
  const DullAlgebroid& A = inst.algebroid(inst.sigma->algebroid);
  Report rep = check_im2form(A, inst.sigma->sigma, o);
  Report m = check_courant_morphism(im_morphism(A, inst.sigma->sigma), degenerate_courant(A), standard_courant(inst.patch), o, "im2form.morphism");
  bool im_ok = all_passed(rep), m_ok = all_passed(m);
  append(rep, m);
  rep.push_back(agreement("im2form.iff_morphism", "IM conditions", im_ok, "Courant morphism", m_ok));
  return rep;
}

inline Report suite_bialgebra(const Instance& inst, const CheckOptions& o) {
  if (!inst.bialgebra) throw MissingDataError("suite 'bialgebra' needs a [bialgebra] block");
  return check_dirac_bialgebra(inst.make_bialgebra(), o);
}

}  // namespace detail

/// Runs one suite; "all" runs every suite the instance has data for. Checks come back sorted by name.
inline Report run_suite(const Instance& inst, const std::string& suite, const CheckOptions& opts) {
  using namespace detail;
  using Fn = Report (*)(const Instance&, const CheckOptions&);
  static const std::vector<std::pair<std::string, Fn>> table = {
      {"courant", suite_courant}, {"dirac", suite_dirac},         {"la-dirac", suite_la_dirac}, {"manin", suite_manin},
      {"lemmas", suite_lemmas},   {"bialgebroid", suite_bialgebroid}, {"iis", suite_iis},       {"im2form", suite_im2form},
      {"bialgebra", suite_bialgebra}};
  Report rep;
  bool found = false;
  for (const auto& [name, fn] : table) {
    if (suite != "all" && suite != name) continue;
    found = true;
    try {
      append(rep, fn(inst, opts));
    } catch (const MissingDataError&) {
      if (suite != "all") throw;
    }
  }
  if (!found) throw MissingDataError("unknown suite '" + suite + "'");
  std::stable_sort(rep.begin(), rep.end(), [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  // Suites overlap under "all"; equal names are equal computations because seeds derive from names.
  rep.erase(std::unique(rep.begin(), rep.end(), [](const CheckResult& a, const CheckResult& b) { return a.name == b.name; }), rep.end());
  return rep;
}

struct RunInfo {
  std::string instance;
  std::string suite;
  CheckOptions opts;
};

/// Schema-1 JSON report. All timing sits under the top-level "timing" key.
inline nlohmann::ordered_json report_json(const Report& rep, const RunInfo& info) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["instance"] = info.instance;
  j["suite"] = info.suite;
  j["seed"] = info.opts.seed;
  j["trials"] = info.opts.trials;
  j["max_degree"] = info.opts.max_degree;
  j["passed"] = all_passed(rep);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  nlohmann::ordered_json timing = nlohmann::ordered_json::object();
  for (const auto& c : rep) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["status"] = c.error ? "error" : c.passed ? "pass" : "fail";
    e["seed"] = c.seed;
    if (!c.detail.empty()) e["detail"] = c.detail;
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (const auto& w : c.witnesses) ws.push_back({{"context", w.context}, {"residual", w.residual}});
    e["witnesses"] = ws;
    checks.push_back(e);
    timing[c.name] = c.millis;
  }
  j["checks"] = checks;
  j["timing"] = timing;
  return j;
}

inline std::string report_text(const Report& rep, const RunInfo& info) {
  std::string out = info.suite + " on " + info.instance + " (seed " + std::to_string(info.opts.seed) + ", trials " +
                    std::to_string(info.opts.trials) + ", degree " + std::to_string(info.opts.max_degree) + ")\n";
  for (const auto& c : rep) {
    out += std::string(c.error ? "ERROR " : c.passed ? "pass  " : "FAIL  ") + c.name;
    if (!c.detail.empty()) out += "  (" + c.detail + ")";
    out += "\n";
    for (const auto& w : c.witnesses) {
      out += "      " + w.context + ":";
      for (const auto& s : w.residual) out += " " + s;
      out += "\n";
    }
  }
  out += all_passed(rep) ? "all checks passed\n" : "some checks failed\n";
  return out;
}

/// Frames, pairing and bracket table of the C built from a triple.
inline nlohmann::ordered_json manin_json(const AManinPair& mp) {
  const CourantPresentation& C = mp.C;
  const Patch& p = C.patch;
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["coords"] = p.coords;
  j["representative_rank"] = C.rep_rank;
  nlohmann::ordered_json basis = nlohmann::ordered_json::array(), rel = nlohmann::ordered_json::array();
  for (const auto& b : C.basis) basis.push_back(to_strings(b, p));
  if (C.relations)
    for (const auto& g : C.relations->frame()) rel.push_back(to_strings(g, p));
  j["basis"] = basis;
  j["relations"] = rel;
  nlohmann::ordered_json anchors = nlohmann::ordered_json::array(), gram = nlohmann::ordered_json::array(),
                         br = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < C.rank(); ++i) {
    anchors.push_back(to_strings(C.anchor(C.basis[i]), p));
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < C.rank(); ++k) {
      row.push_back(to_string(C.pairing(C.basis[i], C.basis[k]), p));
      br.push_back({{"i", i + 1}, {"j", k + 1}, {"bracket", to_strings(C.bracket(C.basis[i], C.basis[k]), p)}});
    }
    gram.push_back(row);
  }
  j["anchor"] = anchors;
  j["pairing"] = gram;
  j["bracket"] = br;
  nlohmann::ordered_json u = nlohmann::ordered_json::array(), phi = nlohmann::ordered_json::array();
  for (const auto& s : mp.u_in_c) u.push_back(to_strings(s, p));
  for (std::size_t i = 0; i < mp.phi.rows(); ++i) phi.push_back(to_strings(mp.phi.row(i), p));
  j["u_in_c"] = u;
  j["phi"] = phi;
  return j;
}

}  // namespace diracalg
