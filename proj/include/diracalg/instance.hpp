#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "parser.hpp"
#include "zoo.hpp"

namespace diracalg {

/// Ill-formed instance text; the message starts with "line L, column C:".
class InstanceError : public Error {
 public:
  InstanceError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what), line(line), column(column) {}
  std::size_t line, column;
};

struct SigmaDecl {
  std::string algebroid;
  Matrix sigma;
};

struct IisDecl {
  std::string algebroid, fm, j, connection;
};

struct BialgebraDecl {
  std::string g, p;
  Matrix iota;
};

struct TripleDecl {
  std::string algebroid, u, dorfman;
  std::optional<std::string> k;
};

/// Validated object graph of an instance file. Names resolve within their maps.
struct Instance {
  Patch patch;
  std::map<std::string, DullAlgebroid> algebroids;
  std::map<std::string, Subbundle> subbundles;
  std::map<std::string, std::pair<std::string, DorfmanConnection>> dorfmans;     ///< base algebroid, connection
  std::map<std::string, std::pair<std::string, LinearConnection>> connections;  ///< base algebroid, connection
  std::optional<Matrix> pi;
  std::optional<TwoForm> omega;
  std::optional<SigmaDecl> sigma;
  std::optional<IisDecl> iis;
  std::optional<BialgebraDecl> bialgebra;
  std::optional<TripleDecl> triple;
  std::optional<std::string> foliation;
  std::vector<std::string> suites;

  const DullAlgebroid& algebroid(const std::string& n) const { return algebroids.at(n); }

  LADiracTriple make_triple() const {
    const TripleDecl& t = *triple;
    std::optional<Subbundle> k;
    if (t.k) k = subbundles.at(*t.k);
    return LADiracTriple(algebroid(t.algebroid), subbundles.at(t.u), dorfmans.at(t.dorfman).second, k);
  }

  IISData make_iis() const {
    const IisDecl& d = *iis;
    return {algebroid(d.algebroid), subbundles.at(d.fm), subbundles.at(d.j), connections.at(d.connection).second};
  }

  DiracBialgebraData make_bialgebra() const {
    const BialgebraDecl& b = *bialgebra;
    return {algebroid(b.g), algebroid(b.p), b.iota};
  }
};

namespace detail {

struct Entry {
  std::string key, value;
  std::size_t line, key_col, value_col;
};

struct Block {
  std::string kind, name;
  std::size_t line;
  std::vector<Entry> entries;
};

inline std::string trim(const std::string& s, std::size_t& offset) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    offset = s.size();
    return "";
  }
  std::size_t e = s.find_last_not_of(" \t\r");
  offset = b;
  return s.substr(b, e - b + 1);
}

inline std::vector<Block> split_blocks(std::istream& in) {
  std::vector<Block> blocks;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::size_t off;
    std::string line = trim(raw, off);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InstanceError(lineno, off + line.size(), "expected ']' closing the block header");
      std::string head = line.substr(1, line.size() - 2);
      std::size_t dot = head.find('.');
      Block b{head.substr(0, dot), dot == std::string::npos ? "" : head.substr(dot + 1), lineno, {}};
      if (b.kind.empty()) throw InstanceError(lineno, off + 2, "empty block kind");
      if (dot != std::string::npos && b.name.empty()) throw InstanceError(lineno, off + dot + 2, "empty block name");
      blocks.push_back(std::move(b));
      continue;
    }
    if (blocks.empty()) throw InstanceError(lineno, off + 1, "entry outside of any block");
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw InstanceError(lineno, off + 1, "expected 'key = value'");
    std::size_t koff, voff;
    std::string key = trim(line.substr(0, eq), koff);
    std::string value = trim(line.substr(eq + 1), voff);
    if (key.empty()) throw InstanceError(lineno, off + 1, "missing key");
    blocks.back().entries.push_back({key, value, lineno, off + koff + 1, off + eq + 1 + voff + 1});
  }
  return blocks;
}

class BlockReader {
 public:
  BlockReader(const Block& b, const Patch* patch) : b_(b), patch_(patch) {}

  std::string where() const { return "[" + b_.kind + (b_.name.empty() ? "" : "." + b_.name) + "]"; }

  [[noreturn]] void fail_at(const Entry& e, const std::string& what) const { throw InstanceError(e.line, e.value_col, where() + " " + what); }
  [[noreturn]] void fail_block(const std::string& what) const { throw InstanceError(b_.line, 1, where() + " " + what); }

  void allow(std::initializer_list<const char*> keys, bool index_keys = false) const {
    std::map<std::string, int> seen;
    for (const auto& e : b_.entries) {
      bool ok = false;
      for (const char* k : keys) ok = ok || e.key == k;
      if (!ok && index_keys && e.key.find(',') != std::string::npos) ok = true;
      if (!ok) throw InstanceError(e.line, e.key_col, where() + " unknown key '" + e.key + "'");
      if (e.key != "row" && ++seen[e.key] > 1) throw InstanceError(e.line, e.key_col, where() + " duplicate key '" + e.key + "'");
    }
  }

  const Entry* find(const std::string& key) const {
    for (const auto& e : b_.entries)
      if (e.key == key) return &e;
    return nullptr;
  }

  const Entry& require(const std::string& key) const {
    if (const Entry* e = find(key)) return *e;
    fail_block("missing key '" + key + "'");
  }

  std::vector<const Entry*> all(const std::string& key) const {
    std::vector<const Entry*> out;
    for (const auto& e : b_.entries)
      if (e.key == key) out.push_back(&e);
    return out;
  }

  std::vector<const Entry*> indexed() const {
    std::vector<const Entry*> out;
    for (const auto& e : b_.entries)
      if (e.key.find(',') != std::string::npos) out.push_back(&e);
    return out;
  }

  std::size_t natural(const Entry& e) const {
    const std::string& v = e.value;
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos || v.size() > 6) fail_at(e, "expected a natural number");
    return std::stoul(v);
  }

  /// Comma-separated expressions with positions mapped back to the file.
  Section expressions(const Entry& e, std::size_t expected) const {
    Section out;
    std::size_t start = 0;
    const std::string& v = e.value;
    while (true) {
      std::size_t comma = v.find(',', start);
      std::string piece = v.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      std::size_t off;
      std::string text = trim(piece, off);
      std::size_t col = e.value_col + start + off;
      if (text.empty()) throw InstanceError(e.line, col, where() + " empty expression");
      try {
        out.push_back(parse_scalar(text, *patch_));
      } catch (const ParseError& pe) {
        throw InstanceError(e.line, col + pe.position, where() + " " + pe.what());
      } catch (const Error& err) {
        throw InstanceError(e.line, col, where() + " " + err.what());
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (out.size() != expected)
      fail_at(e, "has " + std::to_string(out.size()) + " entries, expected " + std::to_string(expected));
    return out;
  }

  Matrix rows(std::size_t nrows, std::size_t ncols) const {
    auto rs = all("row");
    if (rs.size() != nrows) fail_block("has " + std::to_string(rs.size()) + " rows, expected " + std::to_string(nrows));
    std::vector<Section> out;
    for (const Entry* e : rs) out.push_back(expressions(*e, ncols));
    return Matrix::from_rows(out, ncols);
  }

  /// "i,j" with 1 <= i <= ni, 1 <= j <= nj, returned zero-based.
  std::pair<std::size_t, std::size_t> index(const Entry& e, std::size_t ni, std::size_t nj) const {
    std::size_t comma = e.key.find(',');
    std::string a = e.key.substr(0, comma), b = e.key.substr(comma + 1);
    auto num = [&](const std::string& s, std::size_t bound) -> std::size_t {
      std::size_t o;
      std::string t = trim(s, o);
      if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos || t.size() > 6)
        throw InstanceError(e.line, e.key_col, where() + " bad index '" + e.key + "'");
      std::size_t k = std::stoul(t);
      if (k < 1 || k > bound) throw InstanceError(e.line, e.key_col, where() + " index '" + e.key + "' out of range");
      return k - 1;
    };
    return {num(a, ni), num(b, nj)};
  }

  std::string name_ref(const Entry& e, const std::map<std::string, std::size_t>& declared, const std::string& what) const {
    if (!declared.count(e.value)) fail_at(e, "refers to undeclared " + what + " '" + e.value + "'");
    return e.value;
  }

  const Block& block() const { return b_; }

 private:
  const Block& b_;
  const Patch* patch_;
};

struct PendingBundle {
  std::size_t rank = 0;
  std::optional<Matrix> anchor;
  std::vector<Section> structure;
};

}  // namespace detail

/// Parses and validates an instance; names must be declared before they are referenced.
inline Instance parse_instance(std::istream& in) {
  using namespace detail;
  std::vector<Block> blocks = split_blocks(in);
  if (blocks.empty() || blocks.front().kind != "patch") throw InstanceError(blocks.empty() ? 1 : blocks.front().line, 1, "the first block must be [patch]");
  Instance inst;
  std::map<std::string, PendingBundle> bundles;
  std::map<std::string, std::size_t> bundle_names, sub_names, dorf_names, conn_names;
  std::vector<std::string> bundle_order;
  std::map<std::string, std::size_t> singletons;

  for (const Block& b : blocks) {
    BlockReader r(b, &inst.patch);
    const bool named = !b.name.empty();
    auto singleton = [&]() {
      if (named) r.fail_block("takes no name");
      if (singletons[b.kind]++) r.fail_block("declared twice");
    };
    auto fresh = [&](std::map<std::string, std::size_t>& names, std::size_t value) {
      if (!named) r.fail_block("needs a name");
      if (names.count(b.name)) r.fail_block("redeclares '" + b.name + "'");
      names[b.name] = value;
    };
    auto bundle_of = [&](const std::string& kind_name) -> PendingBundle& {
      if (!named) r.fail_block("needs a name");
      auto it = bundles.find(b.name);
      if (it == bundles.end()) r.fail_block("refers to undeclared bundle '" + kind_name + "'");
      return it->second;
    };
    const std::size_t n = inst.patch.coords.empty() ? 0 : inst.patch.dim();

    if (b.kind == "patch") {
      singleton();
      r.allow({"dim", "coords"});
      const Entry& c = r.require("coords");
      std::vector<std::string> names;
      std::stringstream ss(c.value);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        std::size_t o;
        names.push_back(trim(tok, o));
      }
      try {
        inst.patch = Patch(names);
      } catch (const Error& e) {
        r.fail_at(c, e.what());
      }
      if (const Entry* d = r.find("dim"))
        if (r.natural(*d) != names.size()) r.fail_at(*d, "disagrees with the " + std::to_string(names.size()) + " coordinates");
    } else if (b.kind == "bundle") {
      r.allow({"rank"});
      fresh(bundle_names, 0);
      bundles[b.name].rank = r.natural(r.require("rank"));
      bundle_order.push_back(b.name);
    } else if (b.kind == "anchor") {
      r.allow({"row"});
      PendingBundle& pb = bundle_of(b.name);
      if (pb.anchor) r.fail_block("declared twice");
      pb.anchor = r.rows(n, pb.rank);
    } else if (b.kind == "bracket") {
      PendingBundle& pb = bundle_of(b.name);
      r.allow({}, true);
      if (!pb.structure.empty()) r.fail_block("declared twice");
      pb.structure.assign(pb.rank * pb.rank, Section(pb.rank));
      for (const Entry* e : r.indexed()) {
        auto [i, j] = r.index(*e, pb.rank, pb.rank);
        pb.structure[i * pb.rank + j] = r.expressions(*e, pb.rank);
      }
    } else if (b.kind == "subbundle") {
      r.allow({"ambient", "row"});
      fresh(sub_names, 0);
      std::size_t amb = r.natural(r.require("ambient"));
      std::vector<Section> frame;
      for (const Entry* e : r.all("row")) frame.push_back(r.expressions(*e, amb));
      try {
        inst.subbundles.emplace(b.name, Subbundle(amb, frame));
      } catch (const Error& e) {
        r.fail_block(e.what());
      }
    } else if (b.kind == "dorfman" || b.kind == "connection") {
      r.allow({"base"}, true);
      const Entry& base = r.require("base");
      std::string a = r.name_ref(base, bundle_names, "bundle");
      std::size_t rk = bundles[a].rank;
      if (b.kind == "dorfman") {
        fresh(dorf_names, 0);
        SplitDims dm{n, rk};
        std::vector<Section> t(dm.qrank() * dm.brank(), Section(dm.brank()));
        for (const Entry* e : r.indexed()) {
          auto [i, j] = r.index(*e, dm.qrank(), dm.brank());
          t[i * dm.brank() + j] = r.expressions(*e, dm.brank());
        }
        inst.dorfmans.emplace(b.name, std::make_pair(a, DorfmanConnection(inst.patch, rk, t)));
      } else {
        fresh(conn_names, 0);
        std::vector<Section> t(n * rk, Section(rk));
        for (const Entry* e : r.indexed()) {
          auto [mu, j] = r.index(*e, n, rk);
          t[mu * rk + j] = r.expressions(*e, rk);
        }
        inst.connections.emplace(b.name, std::make_pair(a, LinearConnection(inst.patch, rk, t)));
      }
    } else if (b.kind == "pi" || b.kind == "omega") {
      singleton();
      r.allow({"row"});
      Matrix m = r.rows(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
          if (!(m(i, j) + m(j, i)).is_zero()) r.fail_block("is not skew at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      (b.kind == "pi" ? inst.pi : inst.omega) = m;
    } else if (b.kind == "sigma") {
      singleton();
      r.allow({"algebroid", "row"});
      std::string a = r.name_ref(r.require("algebroid"), bundle_names, "bundle");
      inst.sigma = SigmaDecl{a, r.rows(n, bundles[a].rank)};
    } else if (b.kind == "iis") {
      singleton();
      r.allow({"algebroid", "fm", "j", "connection"});
      IisDecl d{r.name_ref(r.require("algebroid"), bundle_names, "bundle"), r.name_ref(r.require("fm"), sub_names, "subbundle"),
                r.name_ref(r.require("j"), sub_names, "subbundle"), r.name_ref(r.require("connection"), conn_names, "connection")};
      if (inst.subbundles.at(d.fm).ambient() != n) r.fail_at(r.require("fm"), "must live in TM (ambient " + std::to_string(n) + ")");
      if (inst.subbundles.at(d.j).ambient() != bundles[d.algebroid].rank) r.fail_at(r.require("j"), "must live in the algebroid");
      if (inst.connections.at(d.connection).first != d.algebroid) r.fail_at(r.require("connection"), "is not a connection on '" + d.algebroid + "'");
      inst.iis = d;
    } else if (b.kind == "bialgebra") {
      singleton();
      r.allow({"g", "p", "row"});
      std::string g = r.name_ref(r.require("g"), bundle_names, "bundle"), p = r.name_ref(r.require("p"), bundle_names, "bundle");
      inst.bialgebra = BialgebraDecl{g, p, r.rows(bundles[g].rank, bundles[p].rank)};
    } else if (b.kind == "triple") {
      singleton();
      r.allow({"algebroid", "u", "dorfman", "k"});
      TripleDecl t{r.name_ref(r.require("algebroid"), bundle_names, "bundle"), r.name_ref(r.require("u"), sub_names, "subbundle"),
                   r.name_ref(r.require("dorfman"), dorf_names, "dorfman connection"), std::nullopt};
      if (const Entry* k = r.find("k")) t.k = r.name_ref(*k, sub_names, "subbundle");
      std::size_t N = n + bundles[t.algebroid].rank;
      if (inst.subbundles.at(t.u).ambient() != N) r.fail_at(r.require("u"), "must live in TM + A* (ambient " + std::to_string(N) + ")");
      if (t.k && inst.subbundles.at(*t.k).ambient() != N) r.fail_at(*r.find("k"), "must live in A + T*M (ambient " + std::to_string(N) + ")");
      if (inst.dorfmans.at(t.dorfman).first != t.algebroid) r.fail_at(r.require("dorfman"), "is not a Dorfman connection for '" + t.algebroid + "'");
      inst.triple = t;
    } else if (b.kind == "dirac") {
      singleton();
      r.allow({"foliation"});
      const Entry& f = r.require("foliation");
      inst.foliation = r.name_ref(f, sub_names, "subbundle");
      if (inst.subbundles.at(*inst.foliation).ambient() != n) r.fail_at(f, "must live in TM");
    } else if (b.kind == "checks") {
      singleton();
      r.allow({"suites"});
      std::stringstream ss(r.require("suites").value);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        std::size_t o;
        inst.suites.push_back(trim(tok, o));
      }
    } else {
      throw InstanceError(b.line, 2, "unknown block kind '" + b.kind + "'");
    }
  }
  for (const auto& name : bundle_order) {
    PendingBundle& pb = bundles[name];
    const std::size_t n = inst.patch.dim();
    inst.algebroids.emplace(name, DullAlgebroid(inst.patch, pb.rank, pb.anchor ? *pb.anchor : Matrix(n, pb.rank), pb.structure, name));
  }
  return inst;
}

inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  return parse_instance(in);
}

namespace detail {

inline std::string join(const Section& s, const Patch& p) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + to_string(s[i], p);
  return out;
}

inline void emit_rows(std::ostream& os, const Matrix& m, const Patch& p) {
  for (std::size_t i = 0; i < m.rows(); ++i) os << "row = " << join(m.row(i), p) << "\n";
}

inline void emit_table(std::ostream& os, const std::vector<Section>& t, std::size_t cols, const Patch& p) {
  for (std::size_t k = 0; k < t.size(); ++k)
    if (!is_zero(t[k])) os << (k / cols + 1) << "," << (k % cols + 1) << " = " << join(t[k], p) << "\n";
}

}  // namespace detail

/// Canonical text of an instance; parse_instance(emit_instance(i)) reproduces i.
inline std::string emit_instance(const Instance& inst) {
  using namespace detail;
  const Patch& p = inst.patch;
  std::ostringstream os;
  os << "[patch]\ndim = " << p.dim() << "\ncoords = ";
  for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? ", " : "") << p.coords[i];
  os << "\n";
  for (const auto& [name, A] : inst.algebroids) {
    os << "\n[bundle." << name << "]\nrank = " << A.rank() << "\n";
    bool anchored = false;
    for (std::size_t i = 0; i < A.anchor_matrix().rows(); ++i) anchored = anchored || !is_zero(A.anchor_matrix().row(i));
    if (anchored && A.rank()) {
      os << "\n[anchor." << name << "]\n";
      emit_rows(os, A.anchor_matrix(), p);
    }
    bool bracketed = false;
    for (const auto& s : A.structure_table()) bracketed = bracketed || !is_zero(s);
    if (bracketed) {
      os << "\n[bracket." << name << "]\n";
      emit_table(os, A.structure_table(), A.rank(), p);
    }
  }
  for (const auto& [name, S] : inst.subbundles) {
    os << "\n[subbundle." << name << "]\nambient = " << S.ambient() << "\n";
    for (const auto& f : S.frame()) os << "row = " << join(f, p) << "\n";
  }
  for (const auto& [name, bc] : inst.connections) {
    os << "\n[connection." << name << "]\nbase = " << bc.first << "\n";
    emit_table(os, bc.second.entries(), bc.second.rank(), p);
  }
  for (const auto& [name, bd] : inst.dorfmans) {
    os << "\n[dorfman." << name << "]\nbase = " << bd.first << "\n";
    emit_table(os, bd.second.entries(), bd.second.dims().brank(), p);
  }
  if (inst.pi) {
    os << "\n[pi]\n";
    emit_rows(os, *inst.pi, p);
  }
  if (inst.omega) {
    os << "\n[omega]\n";
    emit_rows(os, *inst.omega, p);
  }
  if (inst.sigma) {
    os << "\n[sigma]\nalgebroid = " << inst.sigma->algebroid << "\n";
    emit_rows(os, inst.sigma->sigma, p);
  }
  if (inst.iis)
    os << "\n[iis]\nalgebroid = " << inst.iis->algebroid << "\nfm = " << inst.iis->fm << "\nj = " << inst.iis->j
       << "\nconnection = " << inst.iis->connection << "\n";
  if (inst.bialgebra) {
    os << "\n[bialgebra]\ng = " << inst.bialgebra->g << "\np = " << inst.bialgebra->p << "\n";
    emit_rows(os, inst.bialgebra->iota, p);
  }
  if (inst.triple) {
    os << "\n[triple]\nalgebroid = " << inst.triple->algebroid << "\nu = " << inst.triple->u << "\ndorfman = " << inst.triple->dorfman << "\n";
    if (inst.triple->k) os << "k = " << *inst.triple->k << "\n";
  }
  if (inst.foliation) os << "\n[dirac]\nfoliation = " << *inst.foliation << "\n";
  if (!inst.suites.empty()) {
    os << "\n[checks]\nsuites = ";
    for (std::size_t i = 0; i < inst.suites.size(); ++i) os << (i ? ", " : "") << inst.suites[i];
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Named presets.

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"poisson-xy", "presymplectic-dxdy", "nonclosed-zdxdy",
                                                 "foliation-x", "iis-curved-negative", "aff1-bialgebra"};
  return names;
}

namespace detail {

inline void add_triple(Instance& inst, const std::string& a, const LADiracTriple& T) {
  inst.subbundles.emplace("U", T.U);
  inst.dorfmans.emplace("D", std::make_pair(a, T.dorfman()));
  inst.triple = TripleDecl{a, "U", "D", std::nullopt};
}

inline TwoForm area_form(const Patch& p, const ScalarField& f) {
  TwoForm w(p.dim(), p.dim());
  w(0, 1) = f;
  w(1, 0) = -f;
  return w;
}

}  // namespace detail

inline Instance preset(const std::string& name) {
  Instance inst;
  if (name == "poisson-xy") {
    inst.patch = Patch({"x", "y"});
    Matrix pi(2, 2);
    pi(0, 1) = ScalarField::variable(0);
    pi(1, 0) = -pi(0, 1);
    inst.pi = pi;
    inst.algebroids.emplace("A", tangent_algebroid(inst.patch));
    inst.connections.emplace("nabla", std::make_pair(std::string("A"), LinearConnection(inst.patch, 2)));
    detail::add_triple(inst, "A", poisson_triple(poisson_bialgebroid(inst.patch, pi), inst.connections.at("nabla").second));
  } else if (name == "presymplectic-dxdy" || name == "nonclosed-zdxdy") {
    bool closed = name == "presymplectic-dxdy";
    inst.patch = closed ? Patch({"x", "y"}) : Patch({"x", "y", "z"});
    inst.omega = detail::area_form(inst.patch, closed ? ScalarField(1) : ScalarField::variable(2));
    inst.algebroids.emplace("A", tangent_algebroid(inst.patch));
    inst.sigma = SigmaDecl{"A", sigma_from_2form(*inst.omega)};
    if (closed) {
      LinearConnection flat(inst.patch, 2);
      inst.connections.emplace("nabla", std::make_pair(std::string("A"), flat));
      detail::add_triple(inst, "A", presymplectic_triple(inst.algebroid("A"), inst.sigma->sigma, flat));
    }
  } else if (name == "foliation-x" || name == "iis-curved-negative") {
    bool flat = name == "foliation-x";
    inst.patch = Patch({"x", "y"});
    inst.algebroids.emplace("A", tangent_algebroid(inst.patch));
    inst.subbundles.emplace("F", flat ? Subbundle(2, {unit_section(2, 0)}) : Subbundle(2, standard_frame(2)));
    inst.subbundles.emplace("J", Subbundle(2, {unit_section(2, 0)}));
    std::vector<Section> t(4, Section(2));
    if (!flat) t[0 * 2 + 1] = Section{ScalarField(), ScalarField::variable(1)};
    inst.connections.emplace("nabla", std::make_pair(std::string("A"), LinearConnection(inst.patch, 2, t)));
    inst.iis = IisDecl{"A", "F", "J", "nabla"};
    if (flat) inst.foliation = "F";
  } else if (name == "aff1-bialgebra") {
    inst.patch = point_patch();
    std::vector<Section> c(4, Section(2));
    c[0 * 2 + 1] = Section{ScalarField(), ScalarField(1)};
    c[1 * 2 + 0] = Section{ScalarField(), ScalarField(-1)};
    inst.algebroids.emplace("g", lie_algebra(2, c, "g"));
    inst.algebroids.emplace("p", lie_algebra(1, {Section(1)}, "p"));
    Matrix iota(2, 1);
    iota(0, 0) = ScalarField(1);
    inst.bialgebra = BialgebraDecl{"g", "p", iota};
  } else {
    throw Error("unknown preset '" + name + "'");
  }
  return inst;
}

}  // namespace diracalg
