#pragma once

// Colored operads: a symmetric sequence with units and composition maps
// stored per canonical Dec class, plus structure checks and operad maps.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "opkit/compose.hpp"
#include "opkit/random.hpp"

namespace opkit {

struct GammaKey {
  Signature w;
  std::vector<int> slot;
  std::vector<int> phi;
  auto operator<=>(const GammaKey&) const = default;
  bool operator==(const GammaKey&) const = default;
};

struct Operad {
  std::string name;
  SymSeq seq;                           // bound = declared bound
  std::map<int, Morphism> unit;         // color -> (1 -> P(c; c))
  std::map<GammaKey, Morphism> gamma;   // canonical class -> (T(d) -> P(w))

  int bound() const { return seq.bound; }
  const ColorSet& colors() const { return seq.colors; }
  Variant variant() const { return seq.variant; }
};

/// Every canonical class of arity <= bound whose slots and fibers are
/// within the bound and whose contribution is nonzero.
template <class F>
void for_each_gamma_class(const SymSeq& p, F&& fn) {
  for (const auto& w : all_signatures(p.colors, p.bound))
    for (int n = 0; n <= p.bound; ++n)
      for (const auto& d : dec_classes(p.colors, w, n)) {
        auto fs = contribution_factors(p, p, w.out, w.in, d.phi, d.slot);
        bool zero = false;
        for (const auto& f : fs) zero = zero || f.is_initial();
        if (zero || p.value(w).is_initial()) continue;
        fn(w, d, fs);
      }
}

/// Composition on a labeled (phi, slot) over the sorted leaves of w:
/// T(phi, slot) -> P(w).
inline Morphism gamma_labeled(const Operad& p, const Signature& w, const std::vector<int>& phi,
                              const std::vector<int>& slot) {
  if (static_cast<int>(slot.size()) > p.bound() || w.arity() > p.bound())
    throw Error(ErrorKind::NonFinitary, "composition above the declared bound");
  const Variant v = p.variant();
  Object src = tensor_all(contribution_factors(p.seq, p.seq, w.out, w.in, phi, slot), v);
  Object tgt = p.seq.value(w);
  if (src.is_initial() || tgt.is_initial()) {
    if (!src.is_initial()) throw Error(ErrorKind::StructureMismatch, "composite lands in an empty entry");
    return zero_map(src, tgt);
  }
  std::vector<int> phi0, slot0;
  Perm sigma, tau;
  dec_canonical(w.in, phi, slot, phi0, slot0, &sigma, &tau);
  auto it = p.gamma.find(GammaKey{w, slot0, phi0});
  if (it == p.gamma.end()) throw Error(ErrorKind::StructureMismatch, "missing composition map");
  Morphism f = dec_map(p.seq, p.seq, w.out, w.in, phi, slot, sigma, tau);
  return compose(p.seq.act(w, perm_inv(sigma)), compose(it->second, f));
}

// ---------------------------------------------------------------------------
// Checking

struct Report {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(std::string s) {
    ok = false;
    failures.push_back(std::move(s));
  }
};

/// Human-readable location of the first basis element where f and g differ.
inline std::string first_difference(const Morphism& f, const Morphism& g) {
  if (!f.src.linear()) {
    for (std::size_t i = 0; i < f.table.size(); ++i)
      if (f.table[i] != g.table[i])
        return "element " + std::to_string(i) + ": " + std::to_string(f.table[i]) + " vs " + std::to_string(g.table[i]);
    return "no difference";
  }
  for (int k = f.src.lo(); k <= f.src.hi(); ++k) {
    SMatrix a = f.at(k), b = g.at(k);
    for (int j = 0; j < a.cols(); ++j)
      if (!(a.col(j) == b.col(j))) return "degree " + std::to_string(k) + " basis vector " + std::to_string(j);
  }
  return "no difference";
}

inline bool maps_equal(const Morphism& f, const Morphism& g) { return f == g; }

namespace detail {

/// Reorder [X, Y_0..Y_{m-1}, Z_0..Z_{n-1}] into [X, (Y_l, Z_{M_l})_l] and
/// group; returns the map flat -> grouped.
inline Morphism regroup_tree(const std::vector<Object>& top, const std::vector<Object>& zs,
                             const std::vector<std::vector<int>>& midf, Variant v) {
  const int m = static_cast<int>(top.size()) - 1;
  std::vector<Object> flat = top;
  flat.insert(flat.end(), zs.begin(), zs.end());
  Perm p(flat.size());
  std::vector<std::vector<Object>> regroup{{top[0]}};
  int pos = 1;
  p[0] = 0;
  for (int l = 0; l < m; ++l) {
    std::vector<Object> grp{top[1 + l]};
    p[1 + l] = pos++;
    for (int j : midf[l]) {
      grp.push_back(zs[j]);
      p[1 + m + j] = pos++;
    }
    regroup.push_back(grp);
  }
  return compose(permutation_inverse(flatten_tensor(regroup, v)), permute_factors(flat, p, v));
}

}  // namespace detail

/// Equivariance, unitality and associativity of the composition maps, up to
/// `bound` (at most the declared bound).
inline Report check_operad(const Operad& p, int bound) {
  Report r;
  const Variant v = p.variant();
  const SymSeq& s = p.seq;
  bound = std::min(bound, p.bound());
  const ColorSet& w_ = p.colors();
  // units
  for (int c = 0; c < w_.size(); ++c) {
    auto it = p.unit.find(c);
    Signature cc{c, {c}};
    if (it == p.unit.end()) {
      r.fail("missing unit for color " + w_.names[c]);
      continue;
    }
    if (!same_object(it->second.src, Object::unit(v)) || !same_object(it->second.tgt, s.value(cc)))
      r.fail("unit for color " + w_.names[c] + " has the wrong shape");
  }
  if (!r.ok) return r;
  for (const auto& [key, g] : p.gamma) {
    if (key.w.arity() > bound) continue;
    const auto& d = key;
    auto stab = dec_stabilizer(d.w.in, d.phi, d.slot);
    for (const auto& h : stab) {
      Perm sg, t;
      detail::split_stab(h, d.w.arity(), sg, t);
      Morphism lhs = compose(g, dec_map(s, s, d.w.out, d.w.in, d.phi, d.slot, sg, t));
      Morphism rhs = compose(s.act(d.w, sg), g);
      if (!(lhs == rhs)) {
        r.fail("equivariance fails at " + signature_string(d.w, w_) + ": " + first_difference(lhs, rhs));
        break;
      }
    }
  }
  for (const auto& w : all_signatures(w_, bound)) {
    Object pw = s.value(w);
    if (pw.is_initial()) continue;
    const int k = w.arity();
    // left unit: phi : k -> 1
    {
      std::vector<int> phi(k, 0), slot{w.out};
      Morphism g = gamma_labeled(p, w, phi, slot);
      Morphism u = tensor(p.unit.at(w.out), identity(pw));
      Morphism lhs = compose(g, u);
      if (!(lhs == same_data(u.src, pw))) r.fail("left unit fails at " + signature_string(w, w_) + ": " + first_difference(lhs, same_data(u.src, pw)));
    }
    // right unit: phi = id
    if (k <= bound) {
      std::vector<int> phi(k), slot = w.in;
      std::iota(phi.begin(), phi.end(), 0);
      Morphism g = gamma_labeled(p, w, phi, slot);
      std::vector<Morphism> fs{identity(pw)};
      for (int i = 0; i < k; ++i) fs.push_back(p.unit.at(w.in[i]));
      Morphism u = tensor_all(fs, v);
      Morphism lhs = compose(g, u);
      if (!(lhs == same_data(u.src, pw))) r.fail("right unit fails at " + signature_string(w, w_) + ": " + first_difference(lhs, same_data(u.src, pw)));
    }
    // associativity over three-level trees leaves -> middle -> top
    for (int n = 0; n <= bound; ++n)
      for (const auto& d1 : dec_classes(w_, w, n)) {
        Signature mid{w.out, d1.slot};
        if (s.value(mid).is_initial()) continue;
        auto fib1 = detail::fibers(d1.phi, n);
        std::vector<Object> zs;
        bool zero = false;
        for (int j = 0; j < n; ++j) {
          zs.push_back(s.at_tuple(d1.slot[j], detail::restrict_colors(w.in, fib1[j])));
          zero = zero || zs.back().is_initial();
        }
        if (zero) continue;
        Morphism outer = gamma_labeled(p, w, d1.phi, d1.slot);
        auto Gm = aut_group(mid.in);
        for (int m = 0; m <= bound; ++m)
          for (const auto& d2 : dec_classes(w_, mid, m)) {
            std::set<std::vector<int>> seen;
            for (const auto& g2 : Gm->elements()) {
              std::vector<int> psi(n);
              for (int j = 0; j < n; ++j) psi[g2[j]] = d2.phi[j];
              if (!seen.insert(psi).second) continue;
              auto top = contribution_factors(s, s, mid.out, mid.in, psi, d2.slot);
              bool z2 = false;
              for (const auto& o : top) z2 = z2 || o.is_initial();
              if (z2) continue;
              std::vector<std::vector<Object>> groups{top};
              for (const auto& zo : zs) groups.push_back({zo});
              Morphism to_grouped = permutation_inverse(flatten_tensor(groups, v));
              std::vector<Morphism> left{gamma_labeled(p, mid, psi, d2.slot)};
              for (const auto& zo : zs) left.push_back(identity(zo));
              Morphism lhs = compose(outer, compose(tensor_all(left, v), to_grouped));
              auto midf = detail::fibers(psi, m);
              std::vector<int> chi(k);
              for (int i = 0; i < k; ++i) chi[i] = psi[d1.phi[i]];
              auto topf = detail::fibers(chi, m);
              std::vector<Morphism> inner{identity(top[0])};
              for (int l = 0; l < m; ++l) {
                const auto& L = topf[l];
                const auto& M = midf[l];
                std::vector<int> phil(L.size()), slotl;
                for (int j : M) slotl.push_back(d1.slot[j]);
                for (std::size_t a = 0; a < L.size(); ++a)
                  phil[a] = static_cast<int>(std::find(M.begin(), M.end(), d1.phi[L[a]]) - M.begin());
                Signature sl{d2.slot[l], detail::restrict_colors(w.in, L)};
                inner.push_back(gamma_labeled(p, sl, phil, slotl));
              }
              Morphism rhs = compose(gamma_labeled(p, w, chi, d2.slot),
                                     compose(tensor_all(inner, v), detail::regroup_tree(top, zs, midf, v)));
              if (!(lhs == rhs)) {
                r.fail("associativity fails at " + signature_string(w, w_) + " with " + std::to_string(n) +
                       " middle and " + std::to_string(m) + " top slots: " + first_difference(lhs, rhs));
                return r;
              }
            }
          }
      }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Construction from element-level rules (set operads and their linearization)

/// Single-colored set operad given by element-level rules.
struct SetOperadRules {
  std::string name;
  std::function<int(int)> size;                                   // |P(n)|
  std::function<int(int n, const Perm& sigma, int e)> act;         // sigma . e
  std::function<int(int x, int n, const std::vector<int>& phi, const std::vector<int>& ys,
                    const std::vector<int>& fiber_sizes)>
      gamma;  // composite in P(k) of x in P(n) with ys[j] in P(|fiber j|)
  int unit = 0;
};

/// Which colored signatures carry the operations of a rule set.
using ColorPredicate = std::function<bool(const Signature&)>;

inline bool predicate_all(const Signature&) { return true; }

/// Build P restricted to the signatures accepted by `pred` (which must be
/// closed under composition and contain every (c; c)).
inline Operad build_set_operad(const SetOperadRules& rules, const ColorSet& w, int bound, bool truncated,
                               const ColorPredicate& pred, Variant v = Variant::FinSet) {
  Operad p;
  p.name = rules.name;
  p.seq = SymSeq(w, v, bound, truncated);
  auto make_obj = [&](int n) { return v == Variant::FinSet ? Object::finset(n) : v == Variant::VectQ ? Object::vect(n) : Object::chain(0, {n}, {}); };
  auto table_to_map = [&](const Object& s, const Object& t, const std::vector<int>& tab) {
    if (v == Variant::FinSet) return Morphism::from_table(s, t, tab);
    SMatrix m(t.size(), s.size());
    for (int i = 0; i < s.size(); ++i) m.set(tab[i], i, 1);
    return Morphism::linear_from(s, t, [&](int k) { return k == 0 ? m : SMatrix(t.dim(k), s.dim(k)); });
  };
  for (const auto& sig : all_signatures(w, bound)) {
    if (!pred(sig)) continue;
    int n = sig.arity();
    int sz = rules.size(n);
    if (sz == 0) continue;
    Object o = make_obj(sz);
    auto aut = aut_group(sig.in);
    p.seq.set(sig, entry_from_function(o, aut, [&](const Perm& g) {
      std::vector<int> tab(sz);
      for (int e = 0; e < sz; ++e) tab[e] = rules.act(n, g, e);
      return table_to_map(o, o, tab);
    }));
  }
  Object one = Object::unit(v);
  for (int c = 0; c < w.size(); ++c) {
    Object pc = p.seq.value(Signature{c, {c}});
    if (pc.is_initial()) throw Error(ErrorKind::StructureMismatch, "predicate rejects a unary identity signature");
    p.unit.emplace(c, table_to_map(one, pc, {rules.unit}));
  }
  for_each_gamma_class(p.seq, [&](const Signature& sig, const DecClass& d, const std::vector<Object>& fs) {
    Object src = tensor_all(fs, v);
    Object tgt = p.seq.value(sig);
    std::vector<int> fsz = d.fiber_sizes();
    std::vector<int> radix;
    for (const auto& f : fs) radix.push_back(f.size());
    std::vector<int> tab(src.size()), digit(fs.size(), 0);
    for (int idx = 0; idx < src.size(); ++idx) {
      // mixed radix, first factor most significant
      int rem = idx;
      for (int f = static_cast<int>(fs.size()) - 1; f >= 0; --f) {
        digit[f] = rem % radix[f];
        rem /= radix[f];
      }
      std::vector<int> ys(digit.begin() + 1, digit.end());
      tab[idx] = rules.gamma(digit[0], d.n(), d.phi, ys, fsz);
    }
    p.gamma.emplace(GammaKey{sig, d.slot, d.phi}, table_to_map(src, tgt, tab));
  });
  return p;
}

namespace rules {

inline SetOperadRules com(bool unital = true) {
  SetOperadRules r;
  r.name = unital ? "com" : "com_nu";
  r.size = [unital](int n) { return (n > 0 || unital) ? 1 : 0; };
  r.act = [](int, const Perm&, int) { return 0; };
  r.gamma = [](int, int, const std::vector<int>&, const std::vector<int>&, const std::vector<int>&) { return 0; };
  return r;
}

/// Words: P(n) = orderings of {0..n-1}, indexed lexicographically.
class WordIndex {
 public:
  const std::vector<Perm>& words(int n) {
    while (static_cast<int>(lists_.size()) <= n) {
      int m = static_cast<int>(lists_.size());
      std::vector<Perm> l;
      Perm p = perm_identity(m);
      do l.push_back(p);
      while (std::next_permutation(p.begin(), p.end()));
      std::map<Perm, int> idx;
      for (std::size_t i = 0; i < l.size(); ++i) idx.emplace(l[i], static_cast<int>(i));
      lists_.push_back(std::move(l));
      index_.push_back(std::move(idx));
    }
    return lists_[n];
  }
  int index(const Perm& p) {
    words(static_cast<int>(p.size()));
    return index_[p.size()].at(p);
  }

 private:
  std::vector<std::vector<Perm>> lists_;
  std::vector<std::map<Perm, int>> index_;
};

inline SetOperadRules ass(bool unital = true) {
  auto wi = std::make_shared<WordIndex>();
  SetOperadRules r;
  r.name = unital ? "ass" : "ass_nu";
  r.size = [unital](int n) { return (n > 0 || unital) ? static_cast<int>(factorial(n)) : 0; };
  r.act = [wi](int n, const Perm& s, int e) {
    Perm word = wi->words(n)[e];
    for (auto& x : word) x = s[x];
    return wi->index(word);
  };
  r.gamma = [wi](int x, int n, const std::vector<int>& phi, const std::vector<int>& ys, const std::vector<int>& fsz) {
    std::vector<std::vector<int>> fib(n);
    for (int i = 0; i < static_cast<int>(phi.size()); ++i) fib[phi[i]].push_back(i);
    const Perm& top = wi->words(n)[x];
    Perm out;
    for (int j : top) {
      const Perm& y = wi->words(fsz[j])[ys[j]];
      for (int a : y) out.push_back(fib[j][a]);
    }
    return wi->index(out);
  };
  return r;
}

/// P(n) = M for a commutative monoid on {0..m-1}; composition adds.
inline SetOperadRules constant_monoid(const std::string& name, int m, std::function<int(int, int)> add, int zero,
                                      bool unital = true) {
  SetOperadRules r;
  r.name = name;
  r.size = [m, unital](int n) { return (n > 0 || unital) ? m : 0; };
  r.act = [](int, const Perm&, int e) { return e; };
  r.gamma = [add](int x, int, const std::vector<int>&, const std::vector<int>& ys, const std::vector<int>&) {
    int s = x;
    for (int y : ys) s = add(s, y);
    return s;
  };
  r.unit = zero;
  return r;
}

/// Entrywise product of two rule sets.
inline SetOperadRules product(const SetOperadRules& a, const SetOperadRules& b) {
  SetOperadRules r;
  r.name = a.name + "x" + b.name;
  r.size = [a, b](int n) { return a.size(n) * b.size(n); };
  r.act = [a, b](int n, const Perm& s, int e) {
    int sb = b.size(n);
    return a.act(n, s, e / sb) * sb + b.act(n, s, e % sb);
  };
  r.gamma = [a, b](int x, int n, const std::vector<int>& phi, const std::vector<int>& ys, const std::vector<int>& fsz) {
    int sbn = b.size(n);
    std::vector<int> ya, yb;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      int sb = b.size(fsz[j]);
      ya.push_back(ys[j] / sb);
      yb.push_back(ys[j] % sb);
    }
    int k = static_cast<int>(phi.size());
    return a.gamma(x / sbn, n, phi, ya, fsz) * b.size(k) + b.gamma(x % sbn, n, phi, yb, fsz);
  };
  r.unit = a.unit * b.size(1) + b.unit;
  return r;
}

}  // namespace rules

inline Operad com(int bound, Variant v = Variant::FinSet, const ColorSet& w = ColorSet::single()) {
  return build_set_operad(rules::com(), w, bound, true, predicate_all, v);
}

inline Operad ass(int bound, Variant v = Variant::FinSet, bool unital = true) {
  return build_set_operad(rules::ass(unital), ColorSet::single(), bound, true, predicate_all, v);
}

/// Two colors {a, m}: output a with only a-inputs, or output m with
/// exactly one m-input.
inline bool mcom_predicate(const Signature& s) {
  int nm = static_cast<int>(std::count(s.in.begin(), s.in.end(), 1));
  return s.out == 0 ? nm == 0 : nm == 1;
}

inline ColorSet am_colors() { return ColorSet({"a", "m"}); }

inline Operad mcom(int bound = 3) {
  Operad p = build_set_operad(rules::com(), am_colors(), bound, true, mcom_predicate);
  p.name = "mcom";
  return p;
}

/// P ×_Com MCom for a single-colored P: the operations of P placed on every
/// MCom signature, with P's composition.
inline Operad mp(const Operad& p) {
  if (p.colors().size() != 1) throw Error(ErrorKind::MultiColoredInput, "mp requires a single-colored operad");
  Operad r;
  r.name = "mp(" + p.name + ")";
  ColorSet w = am_colors();
  Variant v = p.variant();
  r.seq = SymSeq(w, v, p.bound(), p.seq.truncated);
  for (const auto& sig : all_signatures(w, p.bound())) {
    if (!mcom_predicate(sig)) continue;
    Signature base{0, std::vector<int>(sig.arity(), 0)};
    const Entry* e = p.seq.find(base);
    if (!e) continue;
    auto aut = aut_group(sig.in);
    r.seq.set(sig, entry_from_function(e->obj, aut, [&](const Perm& g) { return (*e)(g); }));
  }
  for (int c = 0; c < 2; ++c) {
    Object pc = r.seq.value(Signature{c, {c}});
    if (pc.is_initial()) throw Error(ErrorKind::StructureMismatch, "mp: missing unary operations");
    Morphism u = p.unit.at(0);
    r.unit.emplace(c, Morphism{u.src, pc, u.table, u.mats});
  }
  for_each_gamma_class(r.seq, [&](const Signature& sig, const DecClass& d, const std::vector<Object>& fs) {
    Signature base{0, std::vector<int>(sig.arity(), 0)};
    Morphism g = gamma_labeled(p, base, d.phi, std::vector<int>(d.n(), 0));
    Object src = tensor_all(fs, v);
    r.gamma.emplace(GammaKey{sig, d.slot, d.phi}, Morphism{src, r.seq.value(sig), g.table, g.mats});
  });
  return r;
}

/// Free vector spaces on a set operad.
inline Operad linearize(const Operad& p) {
  if (p.variant() != Variant::FinSet) throw Error(ErrorKind::WrongVariant, "linearize expects a set operad");
  auto lin_obj = [](const Object& o) { return Object::vect(o.size()); };
  auto lin_map = [&](const Morphism& f) {
    SMatrix m(f.tgt.size(), f.src.size());
    for (int i = 0; i < f.src.size(); ++i) m.set(f.table[i], i, 1);
    return Morphism::from_matrix(lin_obj(f.src), lin_obj(f.tgt), m);
  };
  Operad r;
  r.name = p.name;
  r.seq = SymSeq(p.colors(), Variant::VectQ, p.bound(), p.seq.truncated);
  for (const auto& [s, e] : p.seq.entries) {
    Entry le{lin_obj(e.obj), e.aut, {}};
    for (const auto& a : e.act) le.act.push_back(lin_map(a));
    r.seq.set(s, std::move(le));
  }
  for (const auto& [c, u] : p.unit) r.unit.emplace(c, lin_map(u));
  for (const auto& [k, g] : p.gamma) r.gamma.emplace(k, lin_map(g));
  return r;
}

// ---------------------------------------------------------------------------
// Skeleta and the nullary operad

/// The operad O with O(;c) = P0(c), unary part the unit, nothing else.
inline Operad free_on_nullary(const ColorSet& w, Variant v, const std::vector<Object>& p0) {
  if (static_cast<int>(p0.size()) != w.size()) throw Error(ErrorKind::InvalidObject, "one nullary object per color");
  Operad o;
  o.name = "free_on_nullary";
  o.seq = SymSeq(w, v, 1, false);
  Object one = Object::unit(v);
  for (int c = 0; c < w.size(); ++c) {
    o.seq.set(Signature{c, {}}, trivial_entry(p0[c], aut_group({})));
    o.seq.set(Signature{c, {c}}, trivial_entry(one, aut_group({c})));
    o.unit.emplace(c, identity(one));
  }
  for_each_gamma_class(o.seq, [&](const Signature& sig, const DecClass& d, const std::vector<Object>& fs) {
    o.gamma.emplace(GammaKey{sig, d.slot, d.phi}, same_data(tensor_all(fs, v), o.seq.value(sig)));
  });
  return o;
}

/// The arity-zero part of an operad as a per-color list.
inline std::vector<Object> nullary_part(const Operad& p) {
  std::vector<Object> r;
  for (int c = 0; c < p.colors().size(); ++c) r.push_back(p.seq.value(Signature{c, {}}));
  return r;
}

/// Restriction of structure to arities <= n (an operad only for n <= 1).
inline Operad restrict_operad(const Operad& p, int n) {
  Operad r;
  r.name = p.name + "<=" + std::to_string(n);
  r.seq = skeleton(p.seq, n);
  r.unit = p.unit;
  for (const auto& [k, g] : p.gamma) {
    bool ok = k.w.arity() <= n && static_cast<int>(k.slot.size()) <= n;
    if (ok) r.gamma.emplace(k, g);
  }
  return r;
}

inline Operad one_skeleton(const Operad& p) {
  if (p.bound() < 1) throw Error(ErrorKind::NonFinitary, "operad not known in arity one");
  return restrict_operad(p, 1);
}

/// True if the operad has the shape of free_on_nullary: unary part is the
/// unit and nothing above arity one.
inline bool is_nullary_shape(const Operad& p) {
  if (p.seq.max_arity() > 1) return false;
  for (int c = 0; c < p.colors().size(); ++c)
    for (const auto& s : orbit_enumerate(p.colors(), 1, c)) {
      Object v = p.seq.value(s);
      if (s.in[0] != c ? !v.is_initial() : !same_object(v, Object::unit(p.variant()))) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Operad maps

struct OperadMap {
  std::map<Signature, Morphism> comp;  // P(w) -> Q(w)

  Morphism at(const Operad& src, const Operad& tgt, const Signature& w) const {
    auto it = comp.find(w);
    if (it != comp.end()) return it->second;
    return zero_map(src.seq.value(w), tgt.seq.value(w));
  }
};

/// Units, equivariance and compatibility with composition up to `bound`.
inline Report check_operad_map(const Operad& a, const Operad& b, const OperadMap& f, int bound) {
  Report r;
  const Variant v = a.variant();
  const ColorSet& w_ = a.colors();
  for (int c = 0; c < w_.size(); ++c) {
    Signature cc{c, {c}};
    if (!(compose(f.at(a, b, cc), a.unit.at(c)) == b.unit.at(c))) r.fail("unit not preserved at " + w_.names[c]);
  }
  for (const auto& w : all_signatures(w_, bound)) {
    Morphism fw = f.at(a, b, w);
    if (!same_object(fw.src, a.seq.value(w)) || !same_object(fw.tgt, b.seq.value(w))) {
      r.fail("component shape mismatch at " + signature_string(w, w_));
      continue;
    }
    for (const auto& g : aut_group(w.in)->generators())
      if (!(compose(fw, a.seq.act(w, g)) == compose(b.seq.act(w, g), fw)))
        r.fail("component not equivariant at " + signature_string(w, w_));
  }
  if (!r.ok) return r;
  for (const auto& [key, g] : a.gamma) {
    if (key.w.arity() > bound || static_cast<int>(key.slot.size()) > bound) continue;
    auto fs = contribution_factors(a.seq, a.seq, key.w.out, key.w.in, key.phi, key.slot);
    std::vector<Morphism> parts{f.at(a, b, Signature{key.w.out, key.slot})};
    auto fib = detail::fibers(key.phi, static_cast<int>(key.slot.size()));
    for (std::size_t j = 0; j < key.slot.size(); ++j)
      parts.push_back(f.at(a, b, Signature{key.slot[j], detail::restrict_colors(key.w.in, fib[j])}));
    Morphism lhs = compose(f.at(a, b, key.w), g);
    Morphism rhs = compose(gamma_labeled(b, key.w, key.phi, key.slot), tensor_all(parts, v));
    if (!(lhs == rhs)) r.fail("composition not preserved at " + signature_string(key.w, w_) + ": " + first_difference(lhs, rhs));
  }
  return r;
}

/// psi : O -> P_{<=1}: identity on nullary operations, units in arity one.
inline OperadMap nullary_to_one_skeleton(const Operad& o, const Operad& p1) {
  OperadMap m;
  for (const auto& [s, e] : o.seq.entries) {
    if (s.arity() == 0)
      m.comp.emplace(s, same_data(e.obj, p1.seq.value(s)));
    else
      m.comp.emplace(s, p1.unit.at(s.out));
  }
  return m;
}

/// The inclusion of a skeleton (identity on the entries it has).
inline OperadMap skeleton_inclusion(const Operad& small, const Operad& big) {
  OperadMap m;
  for (const auto& [s, e] : small.seq.entries) m.comp.emplace(s, same_data(e.obj, big.seq.value(s)));
  return m;
}

inline OperadMap compose_maps(const Operad& a, const Operad& b, const Operad& c, const OperadMap& g,
                              const OperadMap& f) {
  OperadMap m;
  for (const auto& [s, e] : a.seq.entries) m.comp.emplace(s, compose(g.at(b, c, s), f.at(a, b, s)));
  return m;
}

// ---------------------------------------------------------------------------
// Enriched categories from the unary part

struct EnrichedCategory {
  ColorSet objects;
  Variant variant = Variant::FinSet;
  std::map<std::pair<int, int>, Object> hom;                  // (source, target)
  std::map<std::tuple<int, int, int>, Morphism> comp;         // hom(b,c) ⊗ hom(a,b) -> hom(a,c)
  std::map<int, Morphism> id;                                 // 1 -> hom(a,a)

  Object hom_of(int a, int b) const {
    auto it = hom.find({a, b});
    return it == hom.end() ? Object::initial(variant) : it->second;
  }
};

inline EnrichedCategory underlying_category(const Operad& p) {
  EnrichedCategory c;
  c.objects = p.colors();
  c.variant = p.variant();
  const int nc = c.objects.size();
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b) {
      Object h = p.seq.value(Signature{b, {a}});
      if (!h.is_initial()) c.hom.emplace(std::make_pair(a, b), h);
    }
  for (int a = 0; a < nc; ++a) c.id.emplace(a, p.unit.at(a));
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b)
      for (int d = 0; d < nc; ++d) {
        Object x = c.hom_of(b, d), y = c.hom_of(a, b);
        if (x.is_initial() || y.is_initial()) continue;
        c.comp.emplace(std::make_tuple(a, b, d), gamma_labeled(p, Signature{d, {a}}, {0}, {b}));
      }
  return c;
}

inline Report check_category(const EnrichedCategory& c) {
  Report r;
  const int nc = c.objects.size();
  const Variant v = c.variant;
  auto comp = [&](int a, int b, int d) -> Morphism {
    auto it = c.comp.find({a, b, d});
    if (it != c.comp.end()) return it->second;
    return zero_map(tensor(c.hom_of(b, d), c.hom_of(a, b)), c.hom_of(a, d));
  };
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b) {
      Object h = c.hom_of(a, b);
      if (h.is_initial()) continue;
      Morphism l = compose(comp(a, b, b), tensor(c.id.at(b), identity(h)));
      Morphism rr = compose(comp(a, a, b), tensor(identity(h), c.id.at(a)));
      if (!(l == same_data(l.src, h))) r.fail("left identity fails");
      if (!(rr == same_data(rr.src, h))) r.fail("right identity fails");
    }
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b)
      for (int d = 0; d < nc; ++d)
        for (int e = 0; e < nc; ++e) {
          Object hde = c.hom_of(d, e), hbd = c.hom_of(b, d), hab = c.hom_of(a, b);
          if (hde.is_initial() || hbd.is_initial() || hab.is_initial()) continue;
          Morphism l = compose(comp(a, d, e), tensor(identity(hde), comp(a, b, d)));
          Morphism rr0 = compose(comp(a, b, e), tensor(comp(b, d, e), identity(hab)));
          // (hde ⊗ hbd) ⊗ hab vs hde ⊗ (hbd ⊗ hab)
          Morphism re = flatten_tensor({{hde, hbd}, {hab}}, v);
          Morphism le = flatten_tensor({{hde}, {hbd, hab}}, v);
          if (!(compose(l, permutation_inverse(le)) == compose(rr0, permutation_inverse(re)))) r.fail("associativity fails");
        }
  return r;
}


// ---------------------------------------------------------------------------
// Random two-colored set operads

namespace predicates {

/// Colors {a, m}: every input has the output color.
inline bool mono(const Signature& s) {
  for (int c : s.in)
    if (c != s.out) return false;
  return true;
}

/// Output a: only a-inputs. Output m: at least one m-input.
inline bool m_leads(const Signature& s) {
  int nm = static_cast<int>(std::count(s.in.begin(), s.in.end(), 1));
  return s.out == 0 ? nm == 0 : nm >= 1;
}

/// Output a: only a-inputs. Output m: anything.
inline bool a_closed(const Signature& s) { return s.out == 1 || mono(s); }

}  // namespace predicates

/// One of a fixed family of two-colored set operads: a rule set from
/// {com, ass, z2, z3, max3}, with or without nullary operations, placed on
/// the signatures of a color predicate closed under composition.
inline Operad random_two_colored_operad(Rng& rng, int bound, Variant v = Variant::FinSet) {
  int r = uniform_int(rng, 0, 4);
  bool unital = uniform_int(rng, 0, 1) == 1;
  int q = uniform_int(rng, 0, 4);
  SetOperadRules rs;
  switch (r) {
    case 0: rs = rules::com(unital); break;
    case 1: rs = rules::ass(unital); break;
    case 2: rs = rules::constant_monoid("z2", 2, [](int a, int b) { return (a + b) % 2; }, 0, unital); break;
    case 3: rs = rules::constant_monoid("z3", 3, [](int a, int b) { return (a + b) % 3; }, 0, unital); break;
    default: rs = rules::constant_monoid("max3", 3, [](int a, int b) { return std::max(a, b); }, 0, unital); break;
  }
  static const char* names[] = {"all", "mono", "mcom", "m_leads", "a_closed"};
  ColorPredicate pred = q == 0 ? ColorPredicate(predicate_all)
                      : q == 1 ? ColorPredicate(predicates::mono)
                      : q == 2 ? ColorPredicate(mcom_predicate)
                      : q == 3 ? ColorPredicate(predicates::m_leads)
                               : ColorPredicate(predicates::a_closed);
  Operad p = build_set_operad(rs, am_colors(), bound, true, pred, v);
  p.name = rs.name + (unital || rs.name.ends_with("_nu") ? "" : "_nu") + "@" + names[q];
  return p;
}

}  // namespace opkit
