#pragma once

// Definition files: a line-based, sectioned text format for colors, base
// variant and named entities, with a canonical writer. The grammar is
// documented in the README.

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "opkit/algebra.hpp"
#include "opkit/filtration.hpp"
#include "opkit/stable.hpp"

namespace opkit {

struct GeneratorsDef {
  std::string operad;
  std::vector<Object> extra;  // per color
  Algebra x;                  // O-algebra P_0 ∐ extra
};

struct AlgebraDef {
  std::string operad;
  Algebra a;
};

struct ModuleDef {
  std::string operad, algebra;
  AlgebraModule m;
};

struct PrespectrumDef {
  std::string kind;  // "suspension" or "sigma-plus"
  std::string base, kernel;
  int truncation = 0;
  Prespectrum s;
};

struct Definitions {
  ColorSet colors = ColorSet::single();
  Variant variant = Variant::FinSet;
  std::map<std::string, Object> complexes;
  std::map<std::string, SymSeq> sequences;
  std::map<std::string, Operad> operads;
  std::map<std::string, AlgebraDef> algebras;
  std::map<std::string, GeneratorsDef> generators;
  std::map<std::string, ModuleDef> modules;
  std::map<std::string, PrespectrumDef> prespectra;
  std::vector<std::pair<std::string, std::string>> order;  // (kind, name) in declaration order

  /// Kind of a declared entity, or "" if none.
  std::string kind_of(const std::string& name) const {
    for (const auto& [k, n] : order)
      if (n == name) return k;
    return "";
  }

  template <class M>
  static const auto& lookup(const M& m, const std::string& name, const char* kind) {
    auto it = m.find(name);
    if (it == m.end()) throw Error(ErrorKind::Parse, std::string("no ") + kind + " named '" + name + "'");
    return it->second;
  }
  const Operad& operad(const std::string& n) const { return lookup(operads, n, "operad"); }
  const SymSeq& sequence(const std::string& n) const { return lookup(sequences, n, "sequence"); }
  const AlgebraDef& algebra(const std::string& n) const { return lookup(algebras, n, "algebra"); }
  const GeneratorsDef& generator(const std::string& n) const { return lookup(generators, n, "generators"); }
  const PrespectrumDef& prespectrum(const std::string& n) const { return lookup(prespectra, n, "prespectrum"); }
  const Object& complex(const std::string& n) const { return lookup(complexes, n, "complex"); }
};

namespace io {

struct Token {
  std::string text;
  int line = 0, col = 0;
};

struct Line {
  int line = 0;
  int end_col = 1;
  std::vector<Token> toks;
};

inline bool is_ident(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

/// Split into non-empty lines of tokens. '[', ']' and ';' are tokens of
/// their own; a parenthesized signature is one token.
inline std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int ln = 0;
  while (std::getline(in, raw)) {
    ++ln;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    Line l;
    l.line = ln;
    l.end_col = static_cast<int>(raw.size()) + 1;
    std::size_t i = 0;
    while (i < raw.size()) {
      char c = raw[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token t;
      t.line = ln;
      t.col = static_cast<int>(i) + 1;
      if (c == '[' || c == ']' || c == ';') {
        t.text = std::string(1, c);
        ++i;
      } else if (c == '(') {
        auto close = raw.find(')', i);
        if (close == std::string::npos) throw ParseError(ln, t.col, "unclosed '('");
        t.text = raw.substr(i, close - i + 1);
        i = close + 1;
      } else {
        std::size_t j = i;
        while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j])) && raw[j] != '[' &&
               raw[j] != ']' && raw[j] != ';' && raw[j] != '(')
          ++j;
        t.text = raw.substr(i, j - i);
        i = j;
      }
      l.toks.push_back(std::move(t));
    }
    if (!l.toks.empty()) out.push_back(std::move(l));
  }
  return out;
}

class Cursor {
 public:
  explicit Cursor(const Line& l) : l_(l) {}

  bool done() const { return i_ >= l_.toks.size(); }
  const Token& peek() const {
    if (done()) fail("unexpected end of line");
    return l_.toks[i_];
  }
  bool peek_is(const std::string& s) const { return !done() && l_.toks[i_].text == s; }

  [[noreturn]] void fail(const std::string& msg) const {
    if (done()) throw ParseError(l_.line, l_.end_col, msg);
    throw ParseError(l_.toks[i_].line, l_.toks[i_].col, msg);
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.col, msg); }

  Token next(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    return l_.toks[i_++];
  }
  void expect(const std::string& s) {
    if (!peek_is(s)) fail("expected '" + s + "'");
    ++i_;
  }
  std::string word(const char* what) {
    Token t = next(what);
    if (!is_ident(t.text)) fail_at(t, std::string("expected ") + what);
    return t.text;
  }
  long integer(const char* what) {
    Token t = next(what);
    try {
      std::size_t pos = 0;
      long v = std::stol(t.text, &pos);
      if (pos != t.text.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail_at(t, std::string("expected an integer for ") + what);
    }
  }
  int count(const char* what) {
    const Token& t = peek();
    long v = integer(what);
    if (v < 0 || v > 1000000) fail_at(t, std::string(what) + " out of range");
    return static_cast<int>(v);
  }
  Q rational() {
    Token t = next("a rational");
    try {
      return parse_rational(t.text);
    } catch (const std::exception&) {
      fail_at(t, "expected a rational p/q, got '" + t.text + "'");
    }
  }
  void end() const {
    if (!done()) fail("unexpected '" + l_.toks[i_].text + "'");
  }
  const Line& line() const { return l_; }

 private:
  const Line& l_;
  std::size_t i_ = 0;
};

inline Signature parse_signature(Cursor& c, const ColorSet& w) {
  Token t = c.next("a signature (inputs;output)");
  const std::string& s = t.text;
  if (s.size() < 3 || s.front() != '(' || s.back() != ')') c.fail_at(t, "expected a signature (inputs;output)");
  auto semi = s.find(';');
  if (semi == std::string::npos) c.fail_at(t, "signature needs ';' before the output color");
  auto color = [&](std::string name) {
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.erase(name.begin());
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    for (int i = 0; i < w.size(); ++i)
      if (w.names[i] == name) return i;
    c.fail_at(t, "unknown color '" + name + "'");
  };
  Signature sig;
  std::string ins = s.substr(1, semi - 1);
  if (ins.find_first_not_of(" \t") != std::string::npos) {
    std::stringstream ss(ins);
    std::string part;
    while (std::getline(ss, part, ',')) sig.in.push_back(color(part));
  }
  sig.out = color(s.substr(semi + 1, s.size() - semi - 2));
  if (!std::is_sorted(sig.in.begin(), sig.in.end())) c.fail_at(t, "signature inputs must be listed in color order");
  return sig;
}

/// Comma-separated list, "-" for empty.
inline std::vector<std::string> parse_list(Cursor& c, const char* what) {
  Token t = c.next(what);
  std::vector<std::string> r;
  if (t.text == "-") return r;
  std::stringstream ss(t.text);
  std::string part;
  while (std::getline(ss, part, ','))
    if (part.empty()) c.fail_at(t, std::string("empty item in ") + what);
    else r.push_back(part);
  return r;
}

inline SMatrix parse_matrix(Cursor& c, int rows, int cols) {
  const Token open = c.peek();
  c.expect("[");
  SMatrix m(rows, cols);
  if (c.peek_is("]")) {
    c.expect("]");
    return m;
  }
  int r = 0;
  while (true) {
    int k = 0;
    while (!c.peek_is(";") && !c.peek_is("]")) {
      const Token& at = c.peek();
      Q v = c.rational();
      if (r >= rows || k >= cols)
        c.fail_at(at, "matrix exceeds shape " + std::to_string(rows) + "x" + std::to_string(cols));
      if (v != 0) m.set(r, k, v);
      ++k;
    }
    if (k != cols) c.fail("matrix row " + std::to_string(r + 1) + " has " + std::to_string(k) + " entries, expected " +
                          std::to_string(cols));
    ++r;
    if (c.peek_is("]")) break;
    c.expect(";");
  }
  c.expect("]");
  if (r != rows) c.fail_at(open, "matrix has " + std::to_string(r) + " rows, expected " + std::to_string(rows));
  return m;
}

inline Object parse_chain_tail(Cursor& c) {
  int lo = static_cast<int>(c.integer("lowest degree"));
  c.expect("dims");
  std::vector<int> dims;
  while (!c.done() && !c.peek_is("d")) dims.push_back(c.count("dimension"));
  std::vector<SMatrix> diff;
  for (std::size_t i = 0; i < dims.size(); ++i) diff.emplace_back(i == 0 ? 0 : dims[i - 1], dims[i]);
  if (c.peek_is("d")) {
    c.expect("d");
    for (std::size_t i = 1; i < dims.size(); ++i) diff[i] = parse_matrix(c, dims[i - 1], dims[i]);
  }
  try {
    return Object::chain(lo, dims, diff);
  } catch (const Error& e) {
    c.fail(e.what());
  }
}

inline Object parse_object(Cursor& c, Variant v, const Definitions& defs) {
  Token t = c.next("an object");
  if (v == Variant::FinSet) {
    if (t.text != "size") c.fail_at(t, "expected 'size N' for a finite set");
    return Object::finset(c.count("cardinality"));
  }
  if (v == Variant::VectQ) {
    if (t.text != "dim") c.fail_at(t, "expected 'dim N' for a vector space");
    return Object::vect(c.count("dimension"));
  }
  if (t.text == "complex") {
    std::string n = c.word("a complex name");
    auto it = defs.complexes.find(n);
    if (it == defs.complexes.end()) c.fail_at(t, "no complex named '" + n + "'");
    return it->second;
  }
  if (t.text != "chain") c.fail_at(t, "expected 'chain LO dims ...' or 'complex NAME'");
  return parse_chain_tail(c);
}

inline Morphism parse_morphism(Cursor& c, const Object& src, const Object& tgt) {
  const Token start = c.peek();
  if (c.peek_is("id")) {
    c.expect("id");
    if (!same_object(src, tgt)) c.fail_at(start, "'id' needs equal source and target");
    return identity(src);
  }
  if (c.peek_is("zero")) {
    c.expect("zero");
    if (!src.linear()) {
      if (src.size() != 0) c.fail_at(start, "'zero' is only a map of sets out of the empty set");
      return Morphism::from_table(src, tgt, {});
    }
    return zero_map(src, tgt);
  }
  Morphism f;
  try {
    if (src.kind() == Variant::FinSet) {
      c.expect("[");
      std::vector<int> tab;
      while (!c.peek_is("]")) {
        const Token& at = c.peek();
        long x = c.integer("a table value");
        if (x < 0 || x >= tgt.size()) c.fail_at(at, "table value out of range");
        tab.push_back(static_cast<int>(x));
      }
      c.expect("]");
      if (static_cast<int>(tab.size()) != src.size())
        c.fail_at(start, "table has " + std::to_string(tab.size()) + " values, expected " + std::to_string(src.size()));
      return Morphism::from_table(src, tgt, tab);
    }
    if (src.kind() == Variant::VectQ) return Morphism::from_matrix(src, tgt, parse_matrix(c, tgt.size(), src.size()));
    std::vector<SMatrix> ms;
    for (int k = src.lo(); k <= src.hi(); ++k) ms.push_back(parse_matrix(c, tgt.dim(k), src.dim(k)));
    f = Morphism::from_matrices(src, tgt, ms);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    c.fail_at(start, e.what());
  }
  if (!is_chain_map(f)) c.fail_at(start, "not a chain map");
  return f;
}

// ---------------------------------------------------------------------------
// Writers

inline std::string write_matrix(const SMatrix& m) {
  bool zero = true;
  for (int j = 0; j < m.cols(); ++j) zero = zero && m.col(j).empty();
  if (zero) return "[]";
  std::string s = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) s += "; ";
    for (int j = 0; j < m.cols(); ++j) s += (j ? " " : "") + to_string(m.at(i, j));
  }
  return s + "]";
}

inline std::string write_object(const Object& o) {
  if (o.kind() == Variant::FinSet) return "size " + std::to_string(o.size());
  if (o.kind() == Variant::VectQ) return "dim " + std::to_string(o.size());
  std::string s = "chain " + std::to_string(o.lo()) + " dims";
  bool any = false;
  for (int k = o.lo(); k <= o.hi(); ++k) {
    s += " " + std::to_string(o.dim(k));
    if (k > o.lo()) {
      SMatrix d = o.d(k);
      for (int j = 0; j < d.cols(); ++j) any = any || !d.col(j).empty();
    }
  }
  if (any) {
    s += " d";
    for (int k = o.lo() + 1; k <= o.hi(); ++k) s += " " + write_matrix(o.d(k));
  }
  return s;
}

inline std::string write_morphism(const Morphism& f) {
  if (f.kind() == Variant::FinSet) {
    std::string s = "[";
    for (std::size_t i = 0; i < f.table.size(); ++i) s += (i ? " " : "") + std::to_string(f.table[i]);
    return s + "]";
  }
  std::string s;
  for (int k = f.src.lo(); k <= f.src.hi(); ++k) s += (k > f.src.lo() ? " " : "") + write_matrix(f.at(k));
  return s;
}

inline std::string join_colors(const std::vector<int>& cs, const ColorSet& w) {
  if (cs.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < cs.size(); ++i) s += (i ? "," : "") + w.names[cs[i]];
  return s;
}

inline std::string join_ints(const std::vector<int>& xs) {
  if (xs.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

inline void write_entries(std::ostream& os, const SymSeq& s) {
  os << "bound " << s.bound << "\n";
  os << "truncated " << (s.truncated ? "yes" : "no") << "\n";
  for (const auto& [sig, e] : s.entries) {
    const std::string at = signature_string(sig, s.colors);
    os << "entry " << at << " " << write_object(e.obj) << "\n";
    const auto& gens = e.aut->generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const Morphism& g = e(gens[i]);
      if (!(g == identity(e.obj))) os << "act " << at << " " << i << " " << write_morphism(g) << "\n";
    }
  }
}

}  // namespace io

// ---------------------------------------------------------------------------
// Parsing sections

namespace io {

struct Section {
  Token kind, name;
  std::vector<const Line*> body;
};

/// Entries and generator images of a sequence section; other keys are
/// handed to `other`. Returns the built sequence.
template <class Other>
SymSeq parse_entries(const Section& sec, const Definitions& defs, Other&& other) {
  const ColorSet& w = defs.colors;
  const Variant v = defs.variant;
  int bound = -1;
  bool truncated = false;
  struct Pending {
    Object obj;
    std::vector<Morphism> gens;
    std::vector<bool> given;
    int line = 0, col = 0;
  };
  std::map<Signature, Pending> pend;
  for (const Line* l : sec.body) {
    Cursor c(*l);
    Token key = c.next("a key");
    if (key.text == "bound") {
      bound = c.count("bound");
      c.end();
    } else if (key.text == "truncated") {
      Token t = c.next("yes or no");
      if (t.text != "yes" && t.text != "no") c.fail_at(t, "expected yes or no");
      truncated = t.text == "yes";
      c.end();
    } else if (key.text == "entry") {
      if (bound < 0) c.fail_at(key, "'bound' must come before the entries");
      Token at = c.peek();
      Signature sig = parse_signature(c, w);
      if (sig.arity() > bound) c.fail_at(at, "entry above the bound");
      if (pend.count(sig)) c.fail_at(at, "entry declared twice");
      Pending p;
      p.obj = parse_object(c, v, defs);
      c.end();
      auto aut = aut_group(sig.in);
      for (const auto& g : aut->generators()) {
        (void)g;
        p.gens.push_back(identity(p.obj));
        p.given.push_back(false);
      }
      p.line = at.line;
      p.col = at.col;
      pend.emplace(sig, std::move(p));
    } else if (key.text == "act") {
      Token at = c.peek();
      Signature sig = parse_signature(c, w);
      auto it = pend.find(sig);
      if (it == pend.end()) c.fail_at(at, "act before its entry");
      Token gi = c.peek();
      int i = c.count("generator index");
      if (i >= static_cast<int>(it->second.gens.size())) c.fail_at(gi, "no such generator");
      if (it->second.given[i]) c.fail_at(gi, "generator image given twice");
      it->second.gens[i] = parse_morphism(c, it->second.obj, it->second.obj);
      it->second.given[i] = true;
      c.end();
    } else {
      other(key, c);
    }
  }
  if (bound < 0) throw ParseError(sec.kind.line, sec.kind.col, "missing 'bound'");
  SymSeq s(w, v, bound, truncated);
  for (auto& [sig, p] : pend) {
    try {
      s.set(sig, entry_from_generators(p.obj, aut_group(sig.in), p.gens));
    } catch (const Error& e) {
      throw ParseError(p.line, p.col, e.what());
    }
  }
  return s;
}

inline Operad library_operad(const Section& sec, const Definitions& defs, const std::string& lib, int bound,
                             bool unital, const std::string& pred, const Token& where) {
  SetOperadRules rs;
  if (lib == "com") rs = rules::com(unital);
  else if (lib == "ass") rs = rules::ass(unital);
  else if (lib == "z2") rs = rules::constant_monoid("z2", 2, [](int a, int b) { return (a + b) % 2; }, 0, unital);
  else if (lib == "z3") rs = rules::constant_monoid("z3", 3, [](int a, int b) { return (a + b) % 3; }, 0, unital);
  else if (lib == "max3") rs = rules::constant_monoid("max3", 3, [](int a, int b) { return std::max(a, b); }, 0, unital);
  else throw ParseError(where.line, where.col, "unknown library operad '" + lib + "'");
  ColorPredicate p = predicate_all;
  if (pred != "all") {
    if (defs.colors.size() != 2)
      throw ParseError(where.line, where.col, "predicate '" + pred + "' needs exactly two colors");
    if (pred == "mcom") p = mcom_predicate;
    else if (pred == "mono") p = predicates::mono;
    else if (pred == "m_leads") p = predicates::m_leads;
    else if (pred == "a_closed") p = predicates::a_closed;
    else throw ParseError(where.line, where.col, "unknown predicate '" + pred + "'");
  }
  try {
    Operad o = build_set_operad(rs, defs.colors, bound, true, p, defs.variant);
    o.name = sec.name.text;
    return o;
  } catch (const Error& e) {
    throw ParseError(where.line, where.col, e.what());
  }
}

inline Operad parse_operad(const Section& sec, const Definitions& defs) {
  const ColorSet& w = defs.colors;
  const Variant v = defs.variant;
  // library form
  for (const Line* l : sec.body)
    if (l->toks[0].text == "library") {
      std::string lib;
      int bound = -1;
      bool unital = true;
      std::string pred = "all";
      Token where = l->toks[0];
      for (const Line* m : sec.body) {
        Cursor c(*m);
        Token key = c.next("a key");
        if (key.text == "library") lib = c.word("an operad name");
        else if (key.text == "bound") bound = c.count("bound");
        else if (key.text == "unital") {
          Token t = c.next("yes or no");
          if (t.text != "yes" && t.text != "no") c.fail_at(t, "expected yes or no");
          unital = t.text == "yes";
        } else if (key.text == "predicate") pred = c.word("a predicate name");
        else c.fail_at(key, "unknown key '" + key.text + "' in a library operad");
        c.end();
      }
      if (bound < 0) throw ParseError(sec.kind.line, sec.kind.col, "missing 'bound'");
      return library_operad(sec, defs, lib, bound, unital, pred, where);
    }
  std::vector<const Line*> units, gammas;
  SymSeq seq = parse_entries(sec, defs, [&](const Token& key, Cursor& c) {
    if (key.text == "unit") units.push_back(&c.line());
    else if (key.text == "gamma") gammas.push_back(&c.line());
    else c.fail_at(key, "unknown key '" + key.text + "' in an operad");
  });
  Operad p;
  p.name = sec.name.text;
  p.seq = seq;
  for (const Line* l : units) {
    Cursor c(*l);
    c.next("unit");
    Token at = c.peek();
    int col;
    try {
      col = w.index(c.word("a color"));
    } catch (const Error&) {
      c.fail_at(at, "unknown color '" + at.text + "'");
    }
    if (p.unit.count(col)) c.fail_at(at, "unit given twice");
    Object tgt = seq.value(Signature{col, {col}});
    p.unit.emplace(col, parse_morphism(c, Object::unit(v), tgt));
    c.end();
  }
  for (int col = 0; col < w.size(); ++col)
    if (!p.unit.count(col)) throw ParseError(sec.kind.line, sec.kind.col, "missing unit for color " + w.names[col]);
  for (const Line* l : gammas) {
    Cursor c(*l);
    c.next("gamma");
    Token at = c.peek();
    Signature sig = parse_signature(c, w);
    c.expect("slot");
    std::vector<int> slot, phi;
    Token st = c.peek();
    for (const auto& name : parse_list(c, "slot colors")) {
      try {
        slot.push_back(w.index(name));
      } catch (const Error&) {
        c.fail_at(st, "unknown color '" + name + "'");
      }
    }
    c.expect("phi");
    Token pt = c.peek();
    for (const auto& x : parse_list(c, "phi")) {
      try {
        phi.push_back(std::stoi(x));
      } catch (const std::exception&) {
        c.fail_at(pt, "phi entries are integers");
      }
    }
    if (phi.size() != sig.in.size()) c.fail_at(pt, "phi needs one entry per input");
    for (int x : phi)
      if (x < 0 || x >= static_cast<int>(slot.size())) c.fail_at(pt, "phi entry out of range");
    if (static_cast<int>(slot.size()) > seq.bound || sig.arity() > seq.bound) c.fail_at(at, "composition above the bound");
    GammaKey key{sig, slot, phi};
    if (p.gamma.count(key)) c.fail_at(at, "composition given twice");
    Object src = tensor_all(contribution_factors(seq, seq, sig.out, sig.in, phi, slot), v);
    p.gamma.emplace(key, parse_morphism(c, src, seq.value(sig)));
    c.end();
  }
  std::string missing;
  for_each_gamma_class(p.seq, [&](const Signature& sig, const DecClass& d, const std::vector<Object>&) {
    if (missing.empty() && !p.gamma.count(GammaKey{sig, d.slot, d.phi}))
      missing = signature_string(sig, w) + " slot " + join_colors(d.slot, w) + " phi " + join_ints(d.phi);
  });
  if (!missing.empty()) throw ParseError(sec.kind.line, sec.kind.col, "missing composition " + missing);
  return p;
}

inline const Operad& require_operad(Cursor& c, const Definitions& defs, std::string* name) {
  Token t = c.peek();
  *name = c.word("an operad name");
  auto it = defs.operads.find(*name);
  if (it == defs.operads.end()) c.fail_at(t, "no operad named '" + *name + "'");
  return it->second;
}

inline int parse_color(Cursor& c, const ColorSet& w) {
  Token t = c.peek();
  std::string n = c.word("a color");
  for (int i = 0; i < w.size(); ++i)
    if (w.names[i] == n) return i;
  c.fail_at(t, "unknown color '" + n + "'");
}

/// operad and carrier lines shared by algebras and modules.
struct CarrierState {
  const Operad* p = nullptr;
  std::string operad;
  std::vector<Object> carrier;
  std::vector<bool> have;

  void need_all(Cursor& c, const ColorSet& w, const Token& at) const {
    if (!p) c.fail_at(at, "'operad' must come first");
    for (int i = 0; i < w.size(); ++i)
      if (!have[i]) c.fail_at(at, "carrier of color " + w.names[i] + " not declared yet");
  }
};

inline bool carrier_line(const Token& key, Cursor& c, const Definitions& defs, CarrierState& st) {
  if (key.text == "operad") {
    st.p = &require_operad(c, defs, &st.operad);
    st.carrier.assign(defs.colors.size(), Object::initial(defs.variant));
    st.have.assign(defs.colors.size(), false);
    c.end();
    return true;
  }
  if (key.text == "carrier") {
    if (!st.p) c.fail_at(key, "'operad' must come first");
    int col = parse_color(c, defs.colors);
    if (st.have[col]) c.fail_at(key, "carrier declared twice");
    st.carrier[col] = parse_object(c, defs.variant, defs);
    st.have[col] = true;
    c.end();
    return true;
  }
  return false;
}

inline AlgebraDef parse_algebra(const Section& sec, const Definitions& defs) {
  CarrierState st;
  AlgebraDef out;
  bool built = false;
  for (const Line* l : sec.body) {
    Cursor c(*l);
    Token key = c.next("a key");
    if (carrier_line(key, c, defs, st)) continue;
    if (key.text == "initial") {
      if (!st.p) c.fail_at(key, "'operad' must come first");
      c.end();
      out.a = initial_algebra(*st.p);
      built = true;
    } else if (key.text == "rule") {
      st.need_all(c, defs.colors, key);
      if (defs.variant != Variant::FinSet) c.fail_at(key, "rules need finite sets");
      Token r = c.next("sum or max");
      std::vector<int> sizes;
      for (const auto& o : st.carrier) sizes.push_back(o.size());
      std::function<int(const Signature&, int, const std::vector<int>&)> rule;
      if (r.text == "sum")
        rule = [&](const Signature& w, int, const std::vector<int>& in) {
          int s = 0;
          for (int x : in) s += x;
          return sizes[w.out] ? s % sizes[w.out] : 0;
        };
      else if (r.text == "max")
        rule = [&](const Signature& w, int, const std::vector<int>& in) {
          int m = 0;
          for (int x : in) m = std::max(m, x);
          return std::min(m, sizes[w.out] - 1);
        };
      else c.fail_at(r, "unknown rule '" + r.text + "'");
      c.end();
      try {
        out.a = set_algebra(*st.p, sizes, rule, st.p->bound());
      } catch (const Error& e) {
        c.fail_at(r, e.what());
      }
      built = true;
    } else if (key.text == "act") {
      st.need_all(c, defs.colors, key);
      if (!built) {
        out.a.carrier = st.carrier;
        built = true;
      }
      Token at = c.peek();
      Signature sig = parse_signature(c, defs.colors);
      if (sig.arity() > st.p->bound()) c.fail_at(at, "action above the operad's bound");
      if (out.a.act.count(sig)) c.fail_at(at, "action given twice");
      auto fs = detail::action_factors(*st.p, sig, detail::carrier_tuple(st.carrier, sig.in));
      out.a.act.emplace(sig, parse_morphism(c, tensor_all(fs, defs.variant), st.carrier[sig.out]));
      c.end();
    } else {
      c.fail_at(key, "unknown key '" + key.text + "' in an algebra");
    }
  }
  if (!st.p) throw ParseError(sec.kind.line, sec.kind.col, "missing 'operad'");
  if (!built) {
    for (int i = 0; i < defs.colors.size(); ++i)
      if (!st.have[i]) throw ParseError(sec.kind.line, sec.kind.col, "carrier of color " + defs.colors.names[i] + " missing");
    out.a.carrier = st.carrier;
  }
  out.operad = st.operad;
  return out;
}

inline GeneratorsDef parse_generators(const Section& sec, const Definitions& defs) {
  GeneratorsDef g;
  const Operad* p = nullptr;
  for (const Line* l : sec.body) {
    Cursor c(*l);
    Token key = c.next("a key");
    if (key.text == "operad") {
      p = &require_operad(c, defs, &g.operad);
      g.extra.assign(defs.colors.size(), Object::initial(defs.variant));
    } else if (key.text == "extra") {
      if (!p) c.fail_at(key, "'operad' must come first");
      int col = parse_color(c, defs.colors);
      g.extra[col] = parse_object(c, defs.variant, defs);
    } else {
      c.fail_at(key, "unknown key '" + key.text + "' in generators");
    }
    c.end();
  }
  if (!p) throw ParseError(sec.kind.line, sec.kind.col, "missing 'operad'");
  g.x = extend_nullary(*p, g.extra);
  return g;
}

inline ModuleDef parse_module(const Section& sec, const Definitions& defs) {
  CarrierState st;
  ModuleDef out;
  const Algebra* a = nullptr;
  for (const Line* l : sec.body) {
    Cursor c(*l);
    Token key = c.next("a key");
    if (carrier_line(key, c, defs, st)) continue;
    if (key.text == "algebra") {
      Token t = c.peek();
      out.algebra = c.word("an algebra name");
      auto it = defs.algebras.find(out.algebra);
      if (it == defs.algebras.end()) c.fail_at(t, "no algebra named '" + out.algebra + "'");
      if (it->second.operad != st.operad) c.fail_at(t, "algebra over a different operad");
      a = &it->second.a;
      c.end();
    } else if (key.text == "act") {
      st.need_all(c, defs.colors, key);
      if (!a) c.fail_at(key, "'algebra' must come before the actions");
      out.m.carrier = st.carrier;
      Token at = c.peek();
      Signature sig = parse_signature(c, defs.colors);
      Token kt = c.peek();
      int k = c.count("module position");
      if (k >= sig.arity()) c.fail_at(kt, "position out of range");
      if (out.m.act.count({sig, k})) c.fail_at(at, "action given twice");
      std::vector<Object> fs{st.p->seq.value(sig)};
      for (const auto& o : module_inputs(*a, out.m, sig, k)) fs.push_back(o);
      out.m.act.emplace(std::make_pair(sig, k),
                        parse_morphism(c, tensor_all(fs, defs.variant), st.carrier[sig.out]));
      c.end();
    } else {
      c.fail_at(key, "unknown key '" + key.text + "' in a module");
    }
  }
  if (!st.p || !a) throw ParseError(sec.kind.line, sec.kind.col, "a module needs 'operad' and 'algebra'");
  for (int i = 0; i < defs.colors.size(); ++i)
    if (!st.have[i]) throw ParseError(sec.kind.line, sec.kind.col, "carrier of color " + defs.colors.names[i] + " missing");
  out.m.carrier = st.carrier;
  out.operad = st.operad;
  return out;
}

inline Object parse_complex(const Section& sec) {
  int lo = 0;
  bool have_dims = false;
  std::vector<int> dims;
  std::map<int, std::pair<const Line*, std::size_t>> diffs;
  std::vector<SMatrix> diff;
  for (const Line* l : sec.body) {
    Cursor c(*l);
    Token key = c.next("a key");
    if (key.text == "lo") {
      if (have_dims) c.fail_at(key, "'lo' must come before 'dims'");
      lo = static_cast<int>(c.integer("lowest degree"));
      c.end();
    } else if (key.text == "dims") {
      if (have_dims) c.fail_at(key, "dims given twice");
      while (!c.done()) dims.push_back(c.count("dimension"));
      have_dims = true;
      for (std::size_t i = 0; i < dims.size(); ++i) diff.emplace_back(i == 0 ? 0 : dims[i - 1], dims[i]);
    } else if (key.text == "d") {
      if (!have_dims) c.fail_at(key, "'dims' must come before the differentials");
      Token dt = c.peek();
      int deg = static_cast<int>(c.integer("degree"));
      int i = deg - lo;
      if (i < 1 || i >= static_cast<int>(dims.size())) c.fail_at(dt, "no differential out of degree " + std::to_string(deg));
      diff[i] = parse_matrix(c, dims[i - 1], dims[i]);
      c.end();
    } else {
      c.fail_at(key, "unknown key '" + key.text + "' in a complex");
    }
  }
  try {
    return Object::chain(lo, dims, diff);
  } catch (const Error& e) {
    throw ParseError(sec.kind.line, sec.kind.col, e.what());
  }
}

inline PrespectrumDef parse_prespectrum(const Section& sec, const Definitions& defs) {
  if (sec.body.size() != 1)
    throw ParseError(sec.kind.line, sec.kind.col, "a prespectrum is one 'suspension' or 'sigma-plus' line");
  Cursor c(*sec.body[0]);
  Token key = c.next("a key");
  PrespectrumDef d;
  d.kind = key.text;
  auto cx = [&](std::string* name) -> const Object& {
    Token t = c.peek();
    *name = c.word("a complex name");
    auto it = defs.complexes.find(*name);
    if (it == defs.complexes.end()) c.fail_at(t, "no complex named '" + *name + "'");
    return it->second;
  };
  try {
    if (key.text == "suspension") {
      const Object& a = cx(&d.base);
      const Object& k = cx(&d.kernel);
      d.truncation = c.count("truncation");
      c.end();
      d.s = suspension_prespectrum(a, k, d.truncation);
    } else if (key.text == "sigma-plus") {
      const Object& a = cx(&d.base);
      d.truncation = c.count("truncation");
      c.end();
      Coproduct co = coproduct({a, a}, Variant::ChainQ);
      OverUnder x{a, co.obj, co.inj[1], copair(co, {identity(a), identity(a)}, a)};
      d.s = suspension_prespectrum(a, kernel_functor(x), d.truncation);
    } else {
      c.fail_at(key, "expected 'suspension' or 'sigma-plus'");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    c.fail_at(key, e.what());
  }
  return d;
}

}  // namespace io

inline Definitions parse_definitions(const std::string& text) {
  using namespace io;
  std::vector<Line> lines = tokenize(text);
  Definitions defs;
  std::vector<Section> sections;
  bool seen_colors = false, seen_variant = false;
  for (const Line& l : lines) {
    if (l.toks[0].text == "[") {
      if (l.toks.size() != 4 || l.toks[3].text != "]")
        throw ParseError(l.line, l.toks[0].col, "section header is [kind name]");
      if (!is_ident(l.toks[2].text)) throw ParseError(l.line, l.toks[2].col, "bad entity name");
      sections.push_back(Section{l.toks[1], l.toks[2], {}});
      continue;
    }
    if (!sections.empty()) {
      sections.back().body.push_back(&l);
      continue;
    }
    Cursor c(l);
    Token key = c.next("a key");
    if (key.text == "colors") {
      if (seen_colors) c.fail_at(key, "colors given twice");
      std::vector<std::string> names;
      while (!c.done()) names.push_back(c.word("a color name"));
      if (names.empty()) c.fail_at(key, "at least one color");
      try {
        defs.colors = ColorSet(names);
      } catch (const Error& e) {
        c.fail_at(key, e.what());
      }
      seen_colors = true;
    } else if (key.text == "variant") {
      if (seen_variant) c.fail_at(key, "variant given twice");
      Token t = c.next("FinSet, VectQ or ChainQ");
      if (t.text == "FinSet") defs.variant = Variant::FinSet;
      else if (t.text == "VectQ") defs.variant = Variant::VectQ;
      else if (t.text == "ChainQ") defs.variant = Variant::ChainQ;
      else c.fail_at(t, "expected FinSet, VectQ or ChainQ");
      c.end();
      seen_variant = true;
    } else {
      c.fail_at(key, "expected 'colors', 'variant' or a section");
    }
  }
  for (const Section& s : sections) {
    const std::string& name = s.name.text;
    if (!defs.kind_of(name).empty()) throw ParseError(s.name.line, s.name.col, "'" + name + "' declared twice");
    const std::string& k = s.kind.text;
    if (k == "operad") defs.operads.emplace(name, parse_operad(s, defs));
    else if (k == "sequence")
      defs.sequences.emplace(name, parse_entries(s, defs, [](const Token& key, Cursor& c) {
        c.fail_at(key, "unknown key '" + key.text + "' in a sequence");
      }));
    else if (k == "algebra") defs.algebras.emplace(name, parse_algebra(s, defs));
    else if (k == "generators") defs.generators.emplace(name, parse_generators(s, defs));
    else if (k == "module") defs.modules.emplace(name, parse_module(s, defs));
    else if (k == "complex") defs.complexes.emplace(name, parse_complex(s));
    else if (k == "prespectrum") defs.prespectra.emplace(name, parse_prespectrum(s, defs));
    else throw ParseError(s.kind.line, s.kind.col, "unknown section kind '" + k + "'");
    defs.order.emplace_back(k, name);
  }
  return defs;
}

// ---------------------------------------------------------------------------
// Canonical writers

inline std::string write_sequence(const std::string& name, const SymSeq& s) {
  std::ostringstream os;
  os << "[sequence " << name << "]\n";
  io::write_entries(os, s);
  return os.str();
}

inline std::string write_operad(const std::string& name, const Operad& p) {
  std::ostringstream os;
  os << "[operad " << name << "]\n";
  io::write_entries(os, p.seq);
  for (const auto& [c, u] : p.unit) os << "unit " << p.colors().names[c] << " " << io::write_morphism(u) << "\n";
  for (const auto& [k, m] : p.gamma)
    os << "gamma " << signature_string(k.w, p.colors()) << " slot " << io::join_colors(k.slot, p.colors()) << " phi "
       << io::join_ints(k.phi) << " " << io::write_morphism(m) << "\n";
  return os.str();
}

inline std::string write_algebra(const std::string& name, const std::string& operad, const Algebra& a,
                                 const ColorSet& w) {
  std::ostringstream os;
  os << "[algebra " << name << "]\n";
  os << "operad " << operad << "\n";
  for (int c = 0; c < w.size(); ++c) os << "carrier " << w.names[c] << " " << io::write_object(a.carrier[c]) << "\n";
  for (const auto& [sig, m] : a.act) os << "act " << signature_string(sig, w) << " " << io::write_morphism(m) << "\n";
  return os.str();
}

inline std::string write_generators(const std::string& name, const GeneratorsDef& g, const ColorSet& w) {
  std::ostringstream os;
  os << "[generators " << name << "]\n";
  os << "operad " << g.operad << "\n";
  for (int c = 0; c < w.size(); ++c)
    if (!g.extra[c].is_initial()) os << "extra " << w.names[c] << " " << io::write_object(g.extra[c]) << "\n";
  return os.str();
}

inline std::string write_module(const std::string& name, const ModuleDef& m, const ColorSet& w) {
  std::ostringstream os;
  os << "[module " << name << "]\n";
  os << "operad " << m.operad << "\n";
  os << "algebra " << m.algebra << "\n";
  for (int c = 0; c < w.size(); ++c) os << "carrier " << w.names[c] << " " << io::write_object(m.m.carrier[c]) << "\n";
  for (const auto& [key, f] : m.m.act)
    os << "act " << signature_string(key.first, w) << " " << key.second << " " << io::write_morphism(f) << "\n";
  return os.str();
}

inline std::string write_complex(const std::string& name, const Object& x) {
  std::ostringstream os;
  os << "[complex " << name << "]\n";
  os << "lo " << x.lo() << "\n";
  os << "dims";
  for (int k = x.lo(); k <= x.hi(); ++k) os << " " << x.dim(k);
  os << "\n";
  for (int k = x.lo() + 1; k <= x.hi(); ++k) {
    SMatrix d = x.d(k);
    bool zero = true;
    for (int j = 0; j < d.cols(); ++j) zero = zero && d.col(j).empty();
    if (!zero) os << "d " << k << " " << io::write_matrix(d) << "\n";
  }
  return os.str();
}

inline std::string write_prespectrum(const std::string& name, const PrespectrumDef& d) {
  std::ostringstream os;
  os << "[prespectrum " << name << "]\n";
  if (d.kind == "suspension") os << "suspension " << d.base << " " << d.kernel << " " << d.truncation << "\n";
  else os << "sigma-plus " << d.base << " " << d.truncation << "\n";
  return os.str();
}

inline std::string write_header(const ColorSet& w, Variant v) {
  std::string s = "colors";
  for (const auto& n : w.names) s += " " + n;
  return s + "\nvariant " + variant_name(v) + "\n";
}

/// Every entity in declaration order; library operads are written out in
/// full.
inline std::string write_definitions(const Definitions& d) {
  std::string s = write_header(d.colors, d.variant);
  for (const auto& [k, n] : d.order) {
    s += "\n";
    if (k == "operad") s += write_operad(n, d.operads.at(n));
    else if (k == "sequence") s += write_sequence(n, d.sequences.at(n));
    else if (k == "algebra") s += write_algebra(n, d.algebras.at(n).operad, d.algebras.at(n).a, d.colors);
    else if (k == "generators") s += write_generators(n, d.generators.at(n), d.colors);
    else if (k == "module") s += write_module(n, d.modules.at(n), d.colors);
    else if (k == "complex") s += write_complex(n, d.complexes.at(n));
    else if (k == "prespectrum") s += write_prespectrum(n, d.prespectra.at(n));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Structural equality

inline bool same_sequence(const SymSeq& a, const SymSeq& b) {
  if (!(a.colors == b.colors) || a.variant != b.variant || a.bound != b.bound || a.truncated != b.truncated)
    return false;
  if (a.entries.size() != b.entries.size()) return false;
  for (const auto& [sig, e] : a.entries) {
    const Entry* f = b.find(sig);
    if (!f || !same_object(e.obj, f->obj)) return false;
    for (const auto& g : e.aut->elements())
      if (!(e(g) == (*f)(g))) return false;
  }
  return true;
}

inline bool same_operad(const Operad& a, const Operad& b) {
  if (!same_sequence(a.seq, b.seq) || a.unit.size() != b.unit.size() || a.gamma.size() != b.gamma.size()) return false;
  for (const auto& [c, u] : a.unit)
    if (!b.unit.count(c) || !(b.unit.at(c) == u)) return false;
  for (const auto& [k, m] : a.gamma)
    if (!b.gamma.count(k) || !(b.gamma.at(k) == m)) return false;
  return true;
}

inline bool same_algebra(const Algebra& a, const Algebra& b) {
  if (a.carrier.size() != b.carrier.size() || a.act.size() != b.act.size()) return false;
  for (std::size_t c = 0; c < a.carrier.size(); ++c)
    if (!same_object(a.carrier[c], b.carrier[c])) return false;
  for (const auto& [w, m] : a.act)
    if (!b.act.count(w) || !(b.act.at(w) == m)) return false;
  return true;
}

inline bool same_module(const AlgebraModule& a, const AlgebraModule& b) {
  if (a.carrier.size() != b.carrier.size() || a.act.size() != b.act.size()) return false;
  for (std::size_t c = 0; c < a.carrier.size(); ++c)
    if (!same_object(a.carrier[c], b.carrier[c])) return false;
  for (const auto& [k, m] : a.act)
    if (!b.act.count(k) || !(b.act.at(k) == m)) return false;
  return true;
}

}  // namespace opkit
