#pragma once

// Colored symmetric sequences stored per orbit of color tuples, with the
// automorphism (Young subgroup) action of the sorted representative.

#include <algorithm>
#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "opkit/basecat.hpp"
#include "opkit/group.hpp"

namespace opkit {

struct ColorSet {
  std::vector<std::string> names;

  ColorSet() = default;
  explicit ColorSet(std::vector<std::string> n) : names(std::move(n)) {
    if (names.empty()) throw Error(ErrorKind::InvalidObject, "color set must be nonempty");
    auto s = names;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error(ErrorKind::InvalidObject, "color names must be distinct");
  }
  static ColorSet single(const std::string& c = "c") { return ColorSet({c}); }

  int size() const { return static_cast<int>(names.size()); }
  int index(const std::string& c) const {
    for (int i = 0; i < size(); ++i)
      if (names[i] == c) return i;
    throw Error(ErrorKind::UnknownColor, "unknown color '" + c + "'");
  }
  void check(int c) const {
    if (c < 0 || c >= size()) throw Error(ErrorKind::UnknownColor, "color index " + std::to_string(c));
  }
  bool operator==(const ColorSet& o) const { return names == o.names; }
};

/// An orbit of color tuples: output color and sorted input colors.
struct Signature {
  int out = 0;
  std::vector<int> in;

  int arity() const { return static_cast<int>(in.size()); }
  auto operator<=>(const Signature&) const = default;
  bool operator==(const Signature&) const = default;
};

inline std::string signature_string(const Signature& s, const ColorSet& w) {
  std::string r = "(";
  for (std::size_t i = 0; i < s.in.size(); ++i) r += (i ? "," : "") + w.names[s.in[i]];
  return r + ";" + w.names[s.out] + ")";
}

/// s with sorted[s[i]] = u[i], stable within equal colors.
inline Perm sort_perm(const std::vector<int>& u) {
  std::vector<int> order(u.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return u[a] < u[b]; });
  Perm s(u.size());
  for (std::size_t p = 0; p < order.size(); ++p) s[order[p]] = static_cast<int>(p);
  return s;
}

inline Signature canonical(int out, std::vector<int> u) {
  std::sort(u.begin(), u.end());
  return Signature{out, std::move(u)};
}

/// Young subgroup of a sorted tuple, shared per tuple.
inline std::shared_ptr<const PermGroup> aut_group(const std::vector<int>& sorted_in) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::shared_ptr<const PermGroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(sorted_in);
  if (it != cache.end()) return it->second;
  auto g = std::make_shared<const PermGroup>(PermGroup::young(sorted_in));
  cache.emplace(sorted_in, g);
  return g;
}

inline std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

/// An entry of a symmetric sequence: an object with the action of the
/// automorphism group of its signature, tabulated on every element.
struct Entry {
  Object obj;
  std::shared_ptr<const PermGroup> aut;
  std::vector<Morphism> act;

  const Morphism& operator()(const Perm& sigma) const {
    int i = aut->index_of(sigma);
    if (i < 0) throw Error(ErrorKind::InvalidAction, "permutation is not an automorphism of the signature");
    return act[i];
  }
};

/// Build an entry from the images of the group generators.
inline Entry entry_from_generators(const Object& obj, std::shared_ptr<const PermGroup> aut,
                                   const std::vector<Morphism>& gen_images) {
  const auto& gens = aut->generators();
  if (gen_images.size() != gens.size())
    throw Error(ErrorKind::InvalidAction, "one image per generator required");
  Entry e{obj, aut, {}};
  const auto& els = aut->elements();
  std::vector<int> have(els.size(), 0);
  std::vector<Morphism> table(els.size());
  table[0] = identity(obj);
  have[0] = 1;
  // Same traversal as the closure: h = g * els[k].
  for (std::size_t k = 0; k < els.size(); ++k) {
    if (!have[k]) throw Error(ErrorKind::InvalidAction, "group closure order mismatch");
    for (std::size_t j = 0; j < gens.size(); ++j) {
      int h = aut->index_of(perm_mul(gens[j], els[k]));
      if (!have[h]) {
        table[h] = compose(gen_images[j], table[k]);
        have[h] = 1;
      }
    }
  }
  e.act = std::move(table);
  GroupAction ga{*aut, obj, [&](const Perm& p) { return e(p); }};
  auto chk = check_action(ga);
  if (!chk.ok) throw Error(ErrorKind::InvalidAction, chk.failure);
  return e;
}

template <class F>
Entry entry_from_function(const Object& obj, std::shared_ptr<const PermGroup> aut, F&& f) {
  std::vector<Morphism> gi;
  for (const auto& g : aut->generators()) gi.push_back(f(g));
  return entry_from_generators(obj, std::move(aut), gi);
}

inline Entry trivial_entry(const Object& obj, std::shared_ptr<const PermGroup> aut) {
  Entry e{obj, aut, {}};
  Morphism id = identity(obj);
  e.act.assign(aut->order(), id);
  return e;
}

/// A W-colored symmetric sequence. Entries above `bound` are absent; when
/// `truncated` is set they are unknown rather than zero.
class SymSeq {
 public:
  ColorSet colors;
  Variant variant = Variant::FinSet;
  int bound = 0;
  bool truncated = false;
  std::map<Signature, Entry> entries;

  SymSeq() = default;
  SymSeq(ColorSet w, Variant v, int b, bool trunc = false)
      : colors(std::move(w)), variant(v), bound(b), truncated(trunc) {}

  /// Exact up to arity m?
  bool exact_to(int m) const { return !truncated || m <= bound; }

  void set(const Signature& s, Entry e) {
    colors.check(s.out);
    for (int c : s.in) colors.check(c);
    if (!std::is_sorted(s.in.begin(), s.in.end()))
      throw Error(ErrorKind::InvalidObject, "signature inputs must be sorted");
    if (s.arity() > bound) throw Error(ErrorKind::InvalidObject, "entry above support bound");
    if (e.obj.kind() != variant) throw Error(ErrorKind::MixedVariant, "entry variant differs from sequence");
    if (e.obj.is_initial()) {
      entries.erase(s);
      return;
    }
    entries.insert_or_assign(s, std::move(e));
  }

  const Entry* find(const Signature& s) const {
    auto it = entries.find(s);
    return it == entries.end() ? nullptr : &it->second;
  }

  Object value(const Signature& s) const {
    const Entry* e = find(s);
    return e ? e->obj : Object::initial(variant);
  }

  Morphism act(const Signature& s, const Perm& sigma) const {
    const Entry* e = find(s);
    if (!e) return identity(Object::initial(variant));
    return (*e)(sigma);
  }

  /// Value on an arbitrary (unsorted) tuple, identified with the sorted one.
  Object at_tuple(int out, const std::vector<int>& u) const { return value(canonical(out, u)); }

  /// X(tau) : X(u) -> X(u') for a color-preserving bijection with
  /// u'[tau[i]] = u[i].
  Morphism transport(int out, const std::vector<int>& u, const Perm& tau) const {
    std::vector<int> u2(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) u2[tau[i]] = u[i];
    Perm s = sort_perm(u), s2 = sort_perm(u2);
    return act(canonical(out, u), perm_mul(s2, perm_mul(tau, perm_inv(s))));
  }

  bool is_empty() const { return entries.empty(); }

  /// True if every arity-zero entry is initial.
  bool nullary_free() const {
    for (const auto& kv : entries)
      if (kv.first.arity() == 0) return false;
    return true;
  }

  int max_arity() const {
    int m = -1;
    for (const auto& kv : entries) m = std::max(m, kv.first.arity());
    return m;
  }
};

inline bool same_entry(const Entry& a, const Entry& b) {
  if (!same_object(a.obj, b.obj) || a.act.size() != b.act.size()) return false;
  for (std::size_t i = 0; i < a.act.size(); ++i)
    if (!(a.act[i] == b.act[i])) return false;
  return true;
}

/// Strict equality of sequences (same entries and actions, labels ignored).
inline bool same_seq(const SymSeq& a, const SymSeq& b) {
  if (!(a.colors == b.colors) || a.variant != b.variant) return false;
  if (a.entries.size() != b.entries.size()) return false;
  for (const auto& [s, e] : a.entries) {
    const Entry* f = b.find(s);
    if (!f || !same_entry(e, *f)) return false;
  }
  return true;
}

/// All orbits of W^n with output color `out`, in sorted order.
inline std::vector<Signature> orbit_enumerate(const ColorSet& w, int n, int out) {
  w.check(out);
  if (n < 0) throw Error(ErrorKind::InvalidObject, "negative arity");
  std::vector<Signature> res;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start, int left) -> void {
    if (left == 0) {
      res.push_back(Signature{out, cur});
      return;
    }
    for (int c = start; c < w.size(); ++c) {
      cur.push_back(c);
      self(self, c, left - 1);
      cur.pop_back();
    }
  };
  rec(rec, 0, n);
  return res;
}

inline std::vector<Signature> orbit_enumerate(const ColorSet& w, int n, const std::string& out) {
  return orbit_enumerate(w, n, w.index(out));
}

/// All signatures of arity <= n over all output colors.
inline std::vector<Signature> all_signatures(const ColorSet& w, int max_arity) {
  std::vector<Signature> r;
  for (int n = 0; n <= max_arity; ++n)
    for (int o = 0; o < w.size(); ++o)
      for (auto& s : orbit_enumerate(w, n, o)) r.push_back(std::move(s));
  return r;
}

// ---------------------------------------------------------------------------
// Dec classes: (phi : k -> n, slot colors) over a sorted leaf tuple, up to
// automorphisms of the leaves and relabeling of the slots.

struct DecClass {
  Signature leaves;           // output color and sorted leaf colors
  std::vector<int> phi;       // leaf -> slot
  std::vector<int> slot;      // slot colors, sorted
  std::vector<Perm> stab;     // stabilizer elements as (sigma | tau) on k + n points

  int k() const { return leaves.arity(); }
  int n() const { return static_cast<int>(slot.size()); }
  std::vector<int> fiber(int j) const {
    std::vector<int> f;
    for (int i = 0; i < k(); ++i)
      if (phi[i] == j) f.push_back(i);
    return f;
  }
  std::vector<int> fiber_sizes() const {
    std::vector<int> s(n(), 0);
    for (int v : phi) ++s[v];
    return s;
  }
  auto key() const { return std::tie(slot, phi); }
};

namespace detail {

/// Slot-relabeling normal form: slots sorted by (color, fiber). Returns
/// the sorted (color, fiber) list; `tau` (if given) receives the
/// relabeling old slot -> new slot.
inline std::vector<std::pair<int, std::vector<int>>> dec_normal(const std::vector<int>& phi,
                                                                 const std::vector<int>& slot,
                                                                 Perm* tau = nullptr) {
  int n = static_cast<int>(slot.size());
  std::vector<std::pair<int, std::vector<int>>> items(n);
  for (int j = 0; j < n; ++j) items[j].first = slot[j];
  for (int i = 0; i < static_cast<int>(phi.size()); ++i) items[phi[i]].second.push_back(i);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return items[a] < items[b]; });
  std::vector<std::pair<int, std::vector<int>>> out(n);
  if (tau) tau->assign(n, 0);
  for (int p = 0; p < n; ++p) {
    out[p] = items[order[p]];
    if (tau) (*tau)[order[p]] = p;
  }
  return out;
}

inline void dec_from_normal(const std::vector<std::pair<int, std::vector<int>>>& nf, int k,
                            std::vector<int>& phi, std::vector<int>& slot) {
  phi.assign(k, 0);
  slot.assign(nf.size(), 0);
  for (std::size_t j = 0; j < nf.size(); ++j) {
    slot[j] = nf[j].first;
    for (int i : nf[j].second) phi[i] = static_cast<int>(j);
  }
}

}  // namespace detail

/// Canonical representative of the class of a labeled (phi, slot) over the
/// sorted leaf tuple; sigma, tau receive a morphism (sigma, tau) from the
/// labeled object to the representative: tau phi sigma^{-1} = phi0 and
/// slot tau^{-1} = slot0.
inline void dec_canonical(const std::vector<int>& leaves, const std::vector<int>& phi,
                          const std::vector<int>& slot, std::vector<int>& phi0, std::vector<int>& slot0,
                          Perm* sigma_out = nullptr, Perm* tau_out = nullptr) {
  auto aut = aut_group(leaves);
  const int k = static_cast<int>(leaves.size());
  bool first = true;
  std::vector<std::pair<int, std::vector<int>>> best;
  for (const auto& s : aut->elements()) {
    std::vector<int> ps(k);
    for (int i = 0; i < k; ++i) ps[s[i]] = phi[i];  // phi sigma^{-1}
    Perm tau;
    auto nf = detail::dec_normal(ps, slot, tau_out ? &tau : nullptr);
    if (first || nf < best) {
      best = std::move(nf);
      first = false;
      if (sigma_out) *sigma_out = s;
      if (tau_out) *tau_out = tau;
    }
  }
  detail::dec_from_normal(best, k, phi0, slot0);
}

/// Stabilizer of a canonical (phi, slot) in Aut(leaves) x S_n, as
/// permutations of k + n points.
inline std::vector<Perm> dec_stabilizer(const std::vector<int>& leaves, const std::vector<int>& phi,
                                        const std::vector<int>& slot) {
  auto aut = aut_group(leaves);
  const int k = static_cast<int>(leaves.size()), n = static_cast<int>(slot.size());
  std::vector<std::vector<int>> fib(n);
  for (int i = 0; i < k; ++i) fib[phi[i]].push_back(i);
  // Permutations of the empty slots preserving colors.
  std::vector<int> empty;
  for (int j = 0; j < n; ++j)
    if (fib[j].empty()) empty.push_back(j);
  std::vector<int> ekey;
  for (int j : empty) ekey.push_back(slot[j]);
  PermGroup eg = PermGroup::young(ekey);
  std::vector<Perm> res;
  for (const auto& s : aut->elements()) {
    // tau must send fiber j to the slot whose fiber is s(F_j).
    Perm tau(n, -1);
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      if (fib[j].empty()) continue;
      std::vector<int> img;
      for (int i : fib[j]) img.push_back(s[i]);
      std::sort(img.begin(), img.end());
      int t = phi[img[0]];
      if (fib[t] != img || slot[t] != slot[j])
        ok = false;
      else
        tau[j] = t;
    }
    if (!ok) continue;
    for (const auto& e : eg.elements()) {
      Perm full(k + n);
      for (int i = 0; i < k; ++i) full[i] = s[i];
      for (int j = 0; j < n; ++j) full[k + j] = k + tau[j];
      for (std::size_t a = 0; a < empty.size(); ++a) full[k + empty[a]] = k + empty[e[a]];
      res.push_back(std::move(full));
    }
  }
  return res;
}

namespace detail {

inline void set_partitions(int k, std::vector<std::vector<std::vector<int>>>& out) {
  std::vector<std::vector<int>> cur;
  auto rec = [&](auto&& self, int i) -> void {
    if (i == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t b = 0; b < cur.size(); ++b) {
      cur[b].push_back(i);
      self(self, i + 1);
      cur[b].pop_back();
    }
    cur.push_back({i});
    self(self, i + 1);
    cur.pop_back();
  };
  rec(rec, 0);
}

}  // namespace detail

/// All classes over a fixed sorted leaf signature with exactly n slots.
inline std::vector<DecClass> dec_classes(const ColorSet& w, const Signature& leaves, int n) {
  const int k = leaves.arity();
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  std::vector<DecClass> res;
  std::vector<std::vector<std::vector<int>>> parts;
  detail::set_partitions(k, parts);
  for (const auto& part : parts) {
    int b = static_cast<int>(part.size());
    if (b > n) continue;
    int e = n - b;
    // colors for blocks (any) and a multiset of colors for empty slots
    std::vector<int> bc(b, 0);
    auto empties = orbit_enumerate(w, e, 0);
    auto rec = [&](auto&& self, int i) -> void {
      if (i == b) {
        for (const auto& em : empties) {
          std::vector<int> phi(k), slot;
          for (int j = 0; j < b; ++j) {
            slot.push_back(bc[j]);
            for (int x : part[j]) phi[x] = j;
          }
          for (int c : em.in) slot.push_back(c);
          std::vector<int> phi0, slot0;
          dec_canonical(leaves.in, phi, slot, phi0, slot0);
          if (seen.emplace(slot0, phi0).second) {
            DecClass d{leaves, phi0, slot0, {}};
            d.stab = dec_stabilizer(leaves.in, phi0, slot0);
            res.push_back(std::move(d));
          }
        }
        return;
      }
      for (int c = 0; c < w.size(); ++c) {
        bc[i] = c;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }
  std::sort(res.begin(), res.end(), [](const DecClass& a, const DecClass& b) { return a.key() < b.key(); });
  return res;
}

/// Iso classes of (phi : k -> n, colors) with output color `out`, over all
/// leaf color multisets.
inline std::vector<DecClass> dec_enumerate(const ColorSet& w, int k, int n, int out) {
  w.check(out);
  std::vector<DecClass> res;
  for (const auto& leaves : orbit_enumerate(w, k, out))
    for (auto& d : dec_classes(w, leaves, n)) res.push_back(std::move(d));
  return res;
}

// ---------------------------------------------------------------------------
// Basic sequences

inline SymSeq arity_part(const SymSeq& x, int n) {
  if (n > x.bound) return SymSeq(x.colors, x.variant, x.bound, x.truncated);
  SymSeq r(x.colors, x.variant, n, false);
  for (const auto& [s, e] : x.entries)
    if (s.arity() == n) r.entries.emplace(s, e);
  return r;
}

/// Entries of arity <= n; exact at n.
inline SymSeq skeleton(const SymSeq& x, int n) {
  if (n > x.bound) {
    if (x.truncated) throw Error(ErrorKind::NonFinitary, "skeleton above the known arities");
    return x;
  }
  SymSeq r(x.colors, x.variant, n, false);
  for (const auto& [s, e] : x.entries)
    if (s.arity() <= n) r.entries.emplace(s, e);
  return r;
}

inline SymSeq unit_seq(const ColorSet& w, Variant v) {
  SymSeq r(w, v, 1, false);
  for (int c = 0; c < w.size(); ++c) {
    Signature s{c, {c}};
    r.set(s, trivial_entry(Object::unit(v), aut_group(s.in)));
  }
  return r;
}

inline SymSeq empty_seq(const ColorSet& w, Variant v, int bound = 0) { return SymSeq(w, v, bound, false); }

/// Merge support bounds of sequences used together.
inline void require_compatible(const SymSeq& a, const SymSeq& b) {
  if (!(a.colors == b.colors)) throw Error(ErrorKind::ColorMismatch, "sequences over different color sets");
  if (a.variant != b.variant) throw Error(ErrorKind::MixedVariant, "sequences over different base categories");
}

/// Coproduct of two sequences with its injections, per signature.
struct SeqCoproduct {
  SymSeq seq;
  std::map<Signature, Coproduct> parts;
};

inline SeqCoproduct seq_coproduct(const SymSeq& a, const SymSeq& b) {
  require_compatible(a, b);
  SeqCoproduct r;
  r.seq = SymSeq(a.colors, a.variant, std::max(a.bound, b.bound), a.truncated || b.truncated);
  std::set<Signature> sigs;
  for (const auto& kv : a.entries) sigs.insert(kv.first);
  for (const auto& kv : b.entries) sigs.insert(kv.first);
  for (const auto& s : sigs) {
    Object x = a.value(s), y = b.value(s);
    Coproduct c = coproduct({x, y}, a.variant);
    auto aut = aut_group(s.in);
    Entry e = entry_from_function(c.obj, aut, [&](const Perm& g) {
      return coproduct_map(c, c, {a.act(s, g), b.act(s, g)});
    });
    r.seq.set(s, std::move(e));
    r.parts.emplace(s, std::move(c));
  }
  return r;
}

}  // namespace opkit
