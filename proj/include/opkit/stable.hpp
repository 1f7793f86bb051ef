#pragma once

// Objects over-under a fixed complex A, prespectra in that category and
// their stable homology, for bounded chain complexes over Q. A prespectrum
// is stored on the band |m - n| <= 1 around the diagonal, which is all the
// diagonal squares use.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opkit/basecat.hpp"
#include "opkit/operad.hpp"
#include "opkit/random.hpp"

namespace opkit {

/// A -> C -> A with p∘s = id.
struct OverUnder {
  Object base, total;
  Morphism s, p;
};

inline Report check_over_under(const OverUnder& x) {
  Report r;
  if (!same_object(x.s.src, x.base) || !same_object(x.s.tgt, x.total) || !same_object(x.p.src, x.total) ||
      !same_object(x.p.tgt, x.base))
    r.fail("section and retraction have the wrong endpoints");
  else if (!is_chain_map(x.s) || !is_chain_map(x.p))
    r.fail("section or retraction is not a chain map");
  else if (!(compose(x.p, x.s) == identity(x.base)))
    r.fail("retraction does not split the section");
  return r;
}

struct Kernel {
  Object obj;
  Morphism incl;  // ker -> total
};

/// Degreewise kernel of a chain map.
inline Kernel chain_kernel(const Morphism& p) {
  require_chain(p.src, "chain_kernel");
  const Object& c = p.src;
  Kernel k;
  if (c.hi() < c.lo()) {
    k.obj = Object::initial(Variant::ChainQ);
    k.incl = zero_map(k.obj, c);
    return k;
  }
  std::vector<SMatrix> basis;
  std::vector<int> dims;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    auto vs = kernel_basis(p.at(n));
    SMatrix b(c.dim(n), static_cast<int>(vs.size()));
    for (std::size_t j = 0; j < vs.size(); ++j) b.col(static_cast<int>(j)) = vs[j];
    basis.push_back(b);
    dims.push_back(b.cols());
  }
  std::vector<SMatrix> diff{SMatrix(0, dims[0])};
  for (int n = c.lo() + 1; n <= c.hi(); ++n) {
    const SMatrix& lower = basis[n - 1 - c.lo()];
    LinearSolver solve(lower);
    SMatrix dn = c.d(n) * basis[n - c.lo()];
    SMatrix m(lower.cols(), dn.cols());
    for (int j = 0; j < dn.cols(); ++j) {
      SparseVec x;
      if (!solve.solve(dn.col(j), x)) throw Error(ErrorKind::StructureMismatch, "kernel is not a subcomplex");
      m.col(j) = x;
    }
    diff.push_back(m);
  }
  k.obj = Object::chain(c.lo(), dims, std::move(diff));
  k.incl = Morphism::from_matrices(k.obj, c, basis);
  return k;
}

/// f restricted to kernels: ker(a) -> ker(b), given b∘f factors through
/// the kernel.
inline Morphism kernel_map(const Kernel& a, const Kernel& b, const Morphism& f) {
  Morphism g = compose(f, a.incl);
  return Morphism::linear_from(a.obj, b.obj, [&](int n) {
    SMatrix bn = b.incl.at(n), gn = g.at(n);
    LinearSolver solve(bn);
    SMatrix m(bn.cols(), gn.cols());
    for (int j = 0; j < gn.cols(); ++j) {
      SparseVec x;
      if (!solve.solve(gn.col(j), x)) throw Error(ErrorKind::StructureMismatch, "map does not preserve kernels");
      m.col(j) = x;
    }
    return m;
  });
}

inline Kernel kernel_of(const OverUnder& x) { return chain_kernel(x.p); }

/// The kernel of the retraction.
inline Object kernel_functor(const OverUnder& x) { return kernel_of(x).obj; }

/// A -> B ⊕ A -> A, inclusion of the second factor and projection to it.
inline OverUnder include_coprod(const Object& a, const Object& b) {
  Coproduct c = coproduct({b, a}, Variant::ChainQ);
  OverUnder x;
  x.base = a;
  x.total = c.obj;
  x.s = c.inj[1];
  x.p = copair(c, {zero_map(b, a), identity(a)}, a);
  return x;
}

/// g ⊕ id_A : B ⊕ A -> B' ⊕ A.
inline Morphism coprod_lift(const Object& a, const Morphism& g) {
  Coproduct s = coproduct({g.src, a}, Variant::ChainQ), t = coproduct({g.tgt, a}, Variant::ChainQ);
  return coproduct_map(s, t, {g, identity(a)});
}

/// include_coprod(A, K) -> C for a subobject K of ker p.
inline Morphism kernel_counit(const OverUnder& x, const Kernel& k) {
  Coproduct c = coproduct({k.obj, x.base}, Variant::ChainQ);
  return copair(c, {k.incl, x.s}, x.total);
}

inline Morphism kernel_counit(const OverUnder& x) { return kernel_counit(x, kernel_of(x)); }

/// Homology ranks of source and target agree and the map is a quasi-iso.
inline Report check_counit(const OverUnder& x, const Kernel& k) {
  Report r;
  Morphism e = kernel_counit(x, k);
  int lo = std::min(e.src.lo(), e.tgt.lo()), hi = std::max(e.src.hi(), e.tgt.hi());
  for (int q = lo; q <= hi; ++q)
    if (homology(e.src, q) != homology(e.tgt, q))
      r.fail("homology ranks differ in degree " + std::to_string(q) + " (" + std::to_string(homology(e.src, q)) +
             " vs " + std::to_string(homology(e.tgt, q)) + ")");
  if (r.ok && !is_quasi_iso(e)) r.fail("counit is not a quasi-isomorphism");
  return r;
}

inline Report check_counit(const OverUnder& x) { return check_counit(x, kernel_of(x)); }

/// Random over-under object: A ⊕ K in a random basis of every degree.
inline OverUnder random_over_under(Rng& rng, int lo, int hi, int max_dim) {
  Object a = random_chain(rng, lo, hi, max_dim / 2);
  Object k = random_chain(rng, lo, hi, max_dim - max_dim / 2);
  OverUnder x = include_coprod(a, k);
  const Object& c = x.total;
  if (c.hi() < c.lo()) return x;
  std::vector<SMatrix> g, gi;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    g.push_back(random_invertible(rng, c.dim(n)));
    gi.push_back(inverse(g.back()));
  }
  std::vector<int> dims;
  std::vector<SMatrix> diff;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    dims.push_back(c.dim(n));
    diff.push_back(n == c.lo() ? SMatrix(0, c.dim(n)) : g[n - 1 - c.lo()] * c.d(n) * gi[n - c.lo()]);
  }
  Object t = Object::chain(c.lo(), dims, std::move(diff));
  Morphism to = Morphism::from_matrices(c, t, g), from = Morphism::from_matrices(t, c, gi);
  return OverUnder{a, t, compose(to, x.s), compose(x.p, from)};
}

inline Object suspension(const Object& x) { return shift(x, 1); }
inline Object loop(const Object& x) { return shift(x, -1); }

// ---------------------------------------------------------------------------
// Prespectra

using Index2 = std::pair<int, int>;

struct Prespectrum {
  int bound = 0;  // T: diagonal entries 0..T, squares 0..T-1
  Object base;
  std::map<Index2, OverUnder> entry;
  std::map<Index2, Morphism> right;  // X_{m,n} -> X_{m+1,n}
  std::map<Index2, Morphism> up;     // X_{m,n} -> X_{m,n+1}
};

struct PrespectrumMap {
  std::map<Index2, Morphism> comp;  // on totals
};

namespace detail {

inline std::vector<Index2> band(int t) {
  std::vector<Index2> r;
  for (int n = 0; n <= t; ++n) {
    r.push_back({n, n});
    if (n < t) {
      r.push_back({n + 1, n});
      r.push_back({n, n + 1});
    }
  }
  return r;
}

inline bool is_over_under_map(const OverUnder& x, const OverUnder& y, const Morphism& f) {
  return same_object(f.src, x.total) && same_object(f.tgt, y.total) && is_chain_map(f) &&
         compose(f, x.s) == y.s && compose(y.p, f) == x.p;
}

/// Kernels of the square at n: K_nn -> K_{n,n+1}, K_{n+1,n} -> K_{n+1,n+1}
/// and the map between their cones.
struct KernelSquare {
  Morphism top, bottom, cone_map;
};

inline KernelSquare kernel_square(const Prespectrum& s, int n) {
  Kernel k00 = kernel_of(s.entry.at({n, n})), k01 = kernel_of(s.entry.at({n, n + 1}));
  Kernel k10 = kernel_of(s.entry.at({n + 1, n})), k11 = kernel_of(s.entry.at({n + 1, n + 1}));
  KernelSquare q;
  q.top = kernel_map(k00, k01, s.up.at({n, n}));
  q.bottom = kernel_map(k10, k11, s.up.at({n + 1, n}));
  Morphism a = kernel_map(k00, k10, s.right.at({n, n}));
  Morphism b = kernel_map(k01, k11, s.right.at({n, n + 1}));
  Object c1 = cone(q.top), c2 = cone(q.bottom);
  q.cone_map = Morphism::linear_from(c1, c2, [&](int d) {
    SMatrix m(c2.dim(d), c1.dim(d));
    // cone(f)_d = A_{d-1} ⊕ B_d
    m.place(a.at(d - 1), 0, 0);
    m.place(b.at(d), k10.obj.dim(d - 1), k00.obj.dim(d - 1));
    return m;
  });
  return q;
}

}  // namespace detail

/// Entries split, maps respect sections and retractions, off-diagonal
/// sections are quasi-isomorphisms and the squares commute.
inline Report check_prespectrum(const Prespectrum& s) {
  Report r;
  for (const auto& ix : detail::band(s.bound)) {
    auto it = s.entry.find(ix);
    if (it == s.entry.end()) {
      r.fail("missing entry (" + std::to_string(ix.first) + "," + std::to_string(ix.second) + ")");
      continue;
    }
    Report e = check_over_under(it->second);
    for (const auto& f : e.failures) r.fail(f);
    if (e.ok && ix.first != ix.second && !is_quasi_iso(it->second.s))
      r.fail("off-diagonal entry (" + std::to_string(ix.first) + "," + std::to_string(ix.second) +
             ") is not contractible over the base");
  }
  if (!r.ok) return r;
  for (int n = 0; n < s.bound; ++n) {
    auto check = [&](const std::map<Index2, Morphism>& maps, Index2 from, Index2 to, const char* what) {
      auto it = maps.find(from);
      if (it == maps.end() || !detail::is_over_under_map(s.entry.at(from), s.entry.at(to), it->second))
        r.fail(std::string(what) + " map out of (" + std::to_string(from.first) + "," +
               std::to_string(from.second) + ") is missing or not over-under");
    };
    check(s.up, {n, n}, {n, n + 1}, "vertical");
    check(s.right, {n, n}, {n + 1, n}, "horizontal");
    check(s.right, {n, n + 1}, {n + 1, n + 1}, "horizontal");
    check(s.up, {n + 1, n}, {n + 1, n + 1}, "vertical");
    if (!r.ok) return r;
    if (!(compose(s.right.at({n, n + 1}), s.up.at({n, n})) == compose(s.up.at({n + 1, n}), s.right.at({n, n}))))
      r.fail("square " + std::to_string(n) + " does not commute");
  }
  return r;
}

/// Each diagonal square is homotopy Cartesian: the iterated cone of its
/// kernel square is acyclic. Failures name the square and the degree.
inline Report omega_spectrum_check(const Prespectrum& s) {
  if (s.bound < 1) throw Error(ErrorKind::TruncationTooSmall, "no diagonal square below the truncation");
  Report r = check_prespectrum(s);
  if (!r.ok) return r;
  for (int n = 0; n < s.bound; ++n) {
    Object tot = cone(detail::kernel_square(s, n).cone_map);
    for (int q = tot.lo(); q <= tot.hi(); ++q)
      if (homology(tot, q) != 0) {
        r.fail("square " + std::to_string(n) + " is not homotopy Cartesian in degree " + std::to_string(q));
        break;
      }
  }
  return r;
}

struct StableHomology {
  // per degree q: the stable rank, or nullopt if the structure maps are
  // not yet isomorphisms before the truncation
  std::map<int, std::optional<int>> rank;
  std::map<int, int> stabilized_at;  // level k0 the value is read from

  bool trivial() const {
    for (const auto& [q, v] : rank)
      if (v && *v != 0) return false;
    return true;
  }
  int determined() const {
    int c = 0;
    for (const auto& [q, v] : rank) c += v.has_value();
    return c;
  }
};

/// Stable H_q = H_{q+k}(ker X_{k,k}) at the first level k0 < T from which
/// every structure map ΣX_{k,k} -> X_{k+1,k+1} is an isomorphism on the
/// relevant homology.
inline StableHomology spectrify(const Prespectrum& s) {
  if (s.bound < 1) throw Error(ErrorKind::TruncationTooSmall, "spectrify needs at least one structure map");
  Report r = check_prespectrum(s);
  if (!r.ok) throw Error(ErrorKind::InvalidObject, "not a prespectrum: " + r.failures[0]);
  std::vector<Object> diag;
  std::vector<Morphism> cone_maps;
  for (int k = 0; k <= s.bound; ++k) diag.push_back(kernel_functor(s.entry.at({k, k})));
  for (int k = 0; k < s.bound; ++k) cone_maps.push_back(detail::kernel_square(s, k).cone_map);
  int qlo = 0, qhi = -1;
  bool any = false;
  for (int k = 0; k <= s.bound; ++k) {
    if (diag[k].hi() < diag[k].lo()) continue;
    int a = diag[k].lo() - k - 1, b = diag[k].hi() - k + 1;
    qlo = any ? std::min(qlo, a) : a;
    qhi = any ? std::max(qhi, b) : b;
    any = true;
  }
  StableHomology h;
  for (int q = qlo; q <= qhi; ++q) {
    // iso at k: H_{q+k+1}(cone of the top row) -> H_{q+k+1}(cone of the bottom row)
    int k0 = s.bound;
    while (k0 > 0 && homology_iso_at(cone_maps[k0 - 1], q + k0)) --k0;
    if (k0 == s.bound) {
      h.rank[q] = std::nullopt;
      continue;
    }
    h.rank[q] = homology(diag[k0], q + k0);
    h.stabilized_at[q] = k0;
  }
  return h;
}

struct StableEquiv {
  bool equivalent = true;
  std::vector<int> undetermined;
  std::string witness;
};

/// f is an iso on every stable degree determined on both sides.
inline StableEquiv stable_equiv_check(const Prespectrum& x, const Prespectrum& y, const PrespectrumMap& f) {
  if (x.bound != y.bound) throw Error(ErrorKind::StructureMismatch, "prespectra of different truncations");
  StableHomology hx = spectrify(x), hy = spectrify(y);
  StableEquiv out;
  std::map<int, int> qs;
  for (const auto& [q, v] : hx.rank) qs[q] = 0;
  for (const auto& [q, v] : hy.rank) qs[q] = 0;
  for (const auto& [q, unused] : qs) {
    auto ix = hx.rank.find(q), iy = hy.rank.find(q);
    bool dx = ix == hx.rank.end() || ix->second.has_value(), dy = iy == hy.rank.end() || iy->second.has_value();
    if (!dx || !dy) {
      out.undetermined.push_back(q);
      continue;
    }
    int k = std::max(hx.stabilized_at.count(q) ? hx.stabilized_at[q] : 0,
                     hy.stabilized_at.count(q) ? hy.stabilized_at[q] : 0);
    Morphism g = kernel_map(kernel_of(x.entry.at({k, k})), kernel_of(y.entry.at({k, k})), f.comp.at({k, k}));
    if (!homology_iso_at(g, q + k)) {
      out.equivalent = false;
      if (out.witness.empty()) out.witness = "not an isomorphism on stable H_" + std::to_string(q);
    }
  }
  if (qs.size() == out.undetermined.size() && !qs.empty())
    throw Error(ErrorKind::TruncationTooSmall, "no stable degree is determined below the truncation");
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

/// Σ∞ of K over A: ker X_{k,k} = K[k], off-diagonal kernels cone(id_{K[k]}).
inline Prespectrum suspension_prespectrum(const Object& a, const Object& k, int t) {
  Prespectrum s;
  s.bound = t;
  s.base = a;
  for (int n = 0; n <= t; ++n) {
    Object kn = shift(k, n);
    s.entry.emplace(Index2{n, n}, include_coprod(a, kn));
    if (n == t) break;
    Object c = cone(identity(kn));
    s.entry.emplace(Index2{n + 1, n}, include_coprod(a, c));
    s.entry.emplace(Index2{n, n + 1}, include_coprod(a, c));
    // K[n] -> cone: b |-> (0, b); cone -> K[n+1]: (a, b) |-> a
    Morphism in = Morphism::linear_from(kn, c, [&](int d) {
      SMatrix m(c.dim(d), kn.dim(d));
      m.place(SMatrix::identity(kn.dim(d)), kn.dim(d - 1), 0);
      return m;
    });
    Object kn1 = shift(k, n + 1);
    Morphism out = Morphism::linear_from(c, kn1, [&](int d) {
      SMatrix m(kn1.dim(d), c.dim(d));
      m.place(SMatrix::identity(kn1.dim(d)), 0, 0);
      return m;
    });
    s.up.emplace(Index2{n, n}, coprod_lift(a, in));
    s.right.emplace(Index2{n, n}, coprod_lift(a, in));
    // the two cones must glue to ΣK[n]: opposite orientations
    s.right.emplace(Index2{n, n + 1}, coprod_lift(a, compose(Morphism::linear_from(kn1, kn1, [&](int d) {
                                                    return SMatrix::identity(kn1.dim(d)).scaled(-1);
                                                  }),
                                                  out)));
    s.up.emplace(Index2{n + 1, n}, coprod_lift(a, out));
  }
  return s;
}

/// Σ∞ of a map h : K -> L.
inline PrespectrumMap suspension_map(const Object& a, const Morphism& h, int t) {
  PrespectrumMap f;
  for (int n = 0; n <= t; ++n) {
    Morphism hn = shift(h, n);
    f.comp.emplace(Index2{n, n}, coprod_lift(a, hn));
    if (n == t) break;
    Object c1 = cone(identity(hn.src)), c2 = cone(identity(hn.tgt));
    Morphism ch = Morphism::linear_from(c1, c2, [&](int d) {
      SMatrix m(c2.dim(d), c1.dim(d));
      m.place(hn.at(d - 1), 0, 0);
      m.place(hn.at(d), hn.tgt.dim(d - 1), hn.src.dim(d - 1));
      return m;
    });
    f.comp.emplace(Index2{n + 1, n}, coprod_lift(a, ch));
    f.comp.emplace(Index2{n, n + 1}, coprod_lift(a, ch));
  }
  return f;
}

/// Levelwise cofiber Y ∐_X A of a map of prespectra.
inline Prespectrum cofiber_prespectrum(const Prespectrum& x, const Prespectrum& y, const PrespectrumMap& f) {
  Prespectrum c;
  c.bound = y.bound;
  c.base = y.base;
  std::map<Index2, Pushout> po;
  for (const auto& ix : detail::band(y.bound)) {
    const OverUnder &ex = x.entry.at(ix), &ey = y.entry.at(ix);
    Pushout p = pushout(f.comp.at(ix), ex.p);
    OverUnder e{y.base, p.obj, p.leg_c, pushout_induced(p, ey.p, identity(y.base))};
    c.entry.emplace(ix, e);
    po.emplace(ix, std::move(p));
  }
  auto induced = [&](Index2 from, Index2 to, const Morphism& ym) {
    const Pushout& t = po.at(to);
    return pushout_induced(po.at(from), compose(t.leg_b, ym), t.leg_c);
  };
  for (const auto& [ix, m] : y.right) c.right.emplace(ix, induced(ix, {ix.first + 1, ix.second}, m));
  for (const auto& [ix, m] : y.up) c.up.emplace(ix, induced(ix, {ix.first, ix.second + 1}, m));
  return c;
}

/// Σ∞_+ A: the suspension prespectrum on the kernel of the fold A ⊕ A -> A;
/// stable homology should be H_*(A).
struct SigmaInftyPlus {
  Report report;
  StableHomology stable;
};

/// Every stable degree is determined and equals H_q(A).
inline Report compare_stable(const StableHomology& st, const Object& a) {
  Report r;
  for (const auto& [q, v] : st.rank) {
    if (!v) r.fail("stable H_" + std::to_string(q) + " undetermined");
    else if (*v != homology(a, q))
      r.fail("stable H_" + std::to_string(q) + " = " + std::to_string(*v) + " but H_" + std::to_string(q) +
             "(A) = " + std::to_string(homology(a, q)));
  }
  for (int q = a.lo(); q <= a.hi(); ++q)
    if (!st.rank.count(q) && homology(a, q) != 0) r.fail("stable H_" + std::to_string(q) + " missing");
  return r;
}

inline SigmaInftyPlus sigma_infty_plus_check(const Object& a, int t = 4) {
  SigmaInftyPlus out;
  Coproduct c = coproduct({a, a}, Variant::ChainQ);
  OverUnder x{a, c.obj, c.inj[1], copair(c, {identity(a), identity(a)}, a)};
  Report v = check_over_under(x);
  if (!v.ok) {
    out.report = v;
    return out;
  }
  out.stable = spectrify(suspension_prespectrum(a, kernel_functor(x), t));
  out.report = compare_stable(out.stable, a);
  return out;
}

/// Random degreewise-injective chain map K -> K ⊕ E (E random, acyclic if
/// requested) in a random basis of the target.
inline Morphism random_injection(Rng& rng, const Object& k, int lo, int hi, int max_dim, bool acyclic_cokernel) {
  Object e = random_chain(rng, lo, hi, max_dim);
  if (acyclic_cokernel) e = cone(identity(e));
  Coproduct c = coproduct({k, e}, Variant::ChainQ);
  Morphism inc = c.inj[0];
  const Object& t = c.obj;
  if (t.hi() < t.lo()) return inc;
  std::vector<SMatrix> g, gi;
  for (int n = t.lo(); n <= t.hi(); ++n) {
    g.push_back(random_invertible(rng, t.dim(n)));
    gi.push_back(inverse(g.back()));
  }
  std::vector<int> dims;
  std::vector<SMatrix> diff;
  for (int n = t.lo(); n <= t.hi(); ++n) {
    dims.push_back(t.dim(n));
    diff.push_back(n == t.lo() ? SMatrix(0, t.dim(n)) : g[n - 1 - t.lo()] * t.d(n) * gi[n - t.lo()]);
  }
  Object t2 = Object::chain(t.lo(), dims, std::move(diff));
  return compose(Morphism::from_matrices(t, t2, g), inc);
}

/// Cofiber of Σ∞(f □ g) for f with acyclic cokernel: every determined
/// stable degree vanishes, and at least one is determined.
inline Report cofiber_pushout_product_check(const Object& a, const Morphism& f, const Morphism& g, int t) {
  Report r;
  Morphism h = pushout_product(f, g).map;
  Prespectrum x = suspension_prespectrum(a, h.src, t), y = suspension_prespectrum(a, h.tgt, t);
  PrespectrumMap m = suspension_map(a, h, t);
  StableHomology st = spectrify(cofiber_prespectrum(x, y, m));
  if (st.determined() == 0 && !st.rank.empty()) r.fail("no stable degree determined");
  for (const auto& [q, v] : st.rank)
    if (v && *v != 0) r.fail("cofiber has stable H_" + std::to_string(q) + " of rank " + std::to_string(*v));
  return r;
}

}  // namespace opkit
