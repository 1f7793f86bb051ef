#pragma once

// Composition product of symmetric sequences by the orbit formula: a sum
// over Dec classes of contributions X(slots) ⊗ ⊗ Y(fibers), induced from
// the class stabilizer up to the automorphisms of the output signature.

#include <map>
#include <vector>

#include "opkit/symseq.hpp"

namespace opkit {

/// One Dec class contributing to an output orbit.
struct ClassPiece {
  DecClass dec;
  Object contrib;        // T = X(slots) ⊗ ⊗_j Y(fiber j)
  Coproduct copies;      // ∐ over Aut(w) of T, indexed like the group elements
  Quotient quo;          // coinvariants under the stabilizer
};

struct OrbitPieces {
  std::vector<ClassPiece> classes;
  Coproduct total;
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> index;  // (slot, phi) -> class
};

struct ComposeWitness {
  SymSeq x, y;
  SymSeq result;
  std::map<Signature, OrbitPieces> pieces;
};

namespace detail {

inline std::vector<std::vector<int>> fibers(const std::vector<int>& phi, int n) {
  std::vector<std::vector<int>> f(n);
  for (int i = 0; i < static_cast<int>(phi.size()); ++i) f[phi[i]].push_back(i);
  return f;
}

inline std::vector<int> restrict_colors(const std::vector<int>& leaves, const std::vector<int>& f) {
  std::vector<int> c;
  for (int i : f) c.push_back(leaves[i]);
  return c;
}

}  // namespace detail

/// Factors of the contribution of a labeled (phi, slot): X on the slot
/// tuple, then Y on each fiber in slot order.
inline std::vector<Object> contribution_factors(const SymSeq& x, const SymSeq& y, int out,
                                                const std::vector<int>& leaves, const std::vector<int>& phi,
                                                const std::vector<int>& slot) {
  std::vector<Object> fs{x.at_tuple(out, slot)};
  auto fib = detail::fibers(phi, static_cast<int>(slot.size()));
  for (std::size_t j = 0; j < slot.size(); ++j)
    fs.push_back(y.at_tuple(slot[j], detail::restrict_colors(leaves, fib[j])));
  return fs;
}

/// The map T(phi, slot) -> T(tau phi sigma^{-1}, slot tau^{-1}) induced by a
/// morphism (sigma, tau) of labeled Dec objects over a fixed leaf tuple.
inline Morphism dec_map(const SymSeq& x, const SymSeq& y, int out, const std::vector<int>& leaves,
                        const std::vector<int>& phi, const std::vector<int>& slot, const Perm& sigma,
                        const Perm& tau) {
  const int k = static_cast<int>(leaves.size()), n = static_cast<int>(slot.size());
  std::vector<int> phi2(k), slot2(n);
  for (int i = 0; i < k; ++i) phi2[sigma[i]] = tau[phi[i]];
  for (int j = 0; j < n; ++j) slot2[tau[j]] = slot[j];
  auto fib = detail::fibers(phi, n), fib2 = detail::fibers(phi2, n);
  std::vector<Morphism> maps{x.transport(out, slot, tau)};
  std::vector<Object> targets{maps[0].tgt};
  for (int j = 0; j < n; ++j) {
    const auto& f = fib[j];
    const auto& g = fib2[tau[j]];
    Perm pi(f.size());
    for (std::size_t a = 0; a < f.size(); ++a)
      pi[a] = static_cast<int>(std::find(g.begin(), g.end(), sigma[f[a]]) - g.begin());
    maps.push_back(y.transport(slot[j], detail::restrict_colors(leaves, f), pi));
    targets.push_back(maps.back().tgt);
  }
  Perm p(n + 1);
  p[0] = 0;
  for (int j = 0; j < n; ++j) p[1 + j] = 1 + tau[j];
  Variant v = x.variant;
  return compose(permute_factors(targets, p, v), tensor_all(maps, v));
}

namespace detail {

inline void split_stab(const Perm& full, int k, Perm& sigma, Perm& tau) {
  sigma.assign(full.begin(), full.begin() + k);
  tau.resize(full.size() - k);
  for (std::size_t j = 0; j < tau.size(); ++j) tau[j] = full[k + j] - k;
}

/// A small generating set of the group formed by the listed elements.
inline std::vector<Perm> generating_subset(const std::vector<Perm>& els) {
  if (els.empty()) return {};
  int deg = static_cast<int>(els[0].size());
  std::vector<Perm> gens;
  PermGroup cur = PermGroup::trivial(deg);
  for (const auto& e : els)
    if (!cur.contains(e)) {
      gens.push_back(e);
      cur = PermGroup(deg, gens);
      if (cur.order() == els.size()) break;
    }
  return gens;
}

}  // namespace detail

/// Validate finitarity of computing X ∘ Y up to arity `out_bound`.
inline void check_finitary(const SymSeq& x, const SymSeq& y, int out_bound) {
  require_compatible(x, y);
  if (!y.nullary_free()) {
    if (x.truncated)
      throw Error(ErrorKind::NonFinitary,
                  "X is only known up to arity " + std::to_string(x.bound) + " and Y has nullary entries");
  } else if (!x.exact_to(out_bound)) {
    throw Error(ErrorKind::NonFinitary, "X is only known up to arity " + std::to_string(x.bound));
  }
  if (!y.exact_to(out_bound)) throw Error(ErrorKind::NonFinitary, "Y is only known up to arity " + std::to_string(y.bound));
}

/// Build the pieces of one output orbit.
inline OrbitPieces compose_orbit(const SymSeq& x, const SymSeq& y, const Signature& w) {
  const int k = w.arity();
  const Variant v = x.variant;
  int nmax = y.nullary_free() ? std::min(k, x.bound) : x.bound;
  auto G = aut_group(w.in);
  const auto& gel = G->elements();
  OrbitPieces op;
  std::vector<Object> parts;
  for (int n = 0; n <= nmax; ++n) {
    for (auto& d : dec_classes(x.colors, w, n)) {
      auto fs = contribution_factors(x, y, w.out, w.in, d.phi, d.slot);
      bool zero = false;
      for (const auto& f : fs) zero = zero || f.is_initial();
      if (zero) continue;
      ClassPiece cp;
      cp.contrib = tensor_all(fs, v);
      cp.copies = coproduct(std::vector<Object>(gel.size(), cp.contrib), v);
      std::vector<std::pair<Morphism, Morphism>> rel;
      for (const auto& h : detail::generating_subset(d.stab)) {
        Perm s, t;
        detail::split_stab(h, k, s, t);
        Morphism fh = dec_map(x, y, w.out, w.in, d.phi, d.slot, s, t);
        Perm sinv = perm_inv(s);
        for (std::size_t g = 0; g < gel.size(); ++g) {
          int g2 = G->index_of(perm_mul(gel[g], sinv));
          rel.emplace_back(cp.copies.inj[g], compose(cp.copies.inj[g2], fh));
        }
      }
      cp.quo = quotient(cp.copies.obj, rel);
      cp.dec = std::move(d);
      op.index.emplace(std::make_pair(cp.dec.slot, cp.dec.phi), static_cast<int>(op.classes.size()));
      parts.push_back(cp.quo.obj);
      op.classes.push_back(std::move(cp));
    }
  }
  op.total = coproduct(parts, v);
  return op;
}

/// Action of an automorphism of the output signature on the orbit value.
inline Morphism compose_orbit_action(const OrbitPieces& op, const Signature& w, const Perm& g) {
  auto G = aut_group(w.in);
  const auto& gel = G->elements();
  std::vector<Morphism> comps;
  for (const auto& cp : op.classes) {
    std::vector<Morphism> shift;
    for (std::size_t e = 0; e < gel.size(); ++e)
      shift.push_back(cp.copies.inj[G->index_of(perm_mul(g, gel[e]))]);
    Morphism m = copair(cp.copies, shift, cp.copies.obj);
    comps.push_back(compose(cp.quo.proj, compose(m, cp.quo.section)));
  }
  return coproduct_map(op.total, op.total, comps);
}

/// X ∘ Y up to arity `out_bound`, with the per-orbit provenance.
inline ComposeWitness compose(const SymSeq& x, const SymSeq& y, int out_bound) {
  check_finitary(x, y, out_bound);
  ComposeWitness cw;
  cw.x = x;
  cw.y = y;
  bool exact = !x.truncated && !y.truncated && out_bound >= std::max(0, x.bound) * std::max(1, y.bound);
  if (!y.nullary_free() && out_bound < x.bound * std::max(1, y.bound)) exact = false;
  cw.result = SymSeq(x.colors, x.variant, out_bound, !exact);
  for (const auto& w : all_signatures(x.colors, out_bound)) {
    OrbitPieces op = compose_orbit(x, y, w);
    if (!op.total.obj.is_initial()) {
      auto G = aut_group(w.in);
      Entry e = entry_from_function(op.total.obj, G, [&](const Perm& g) { return compose_orbit_action(op, w, g); });
      cw.result.set(w, std::move(e));
    }
    cw.pieces.emplace(w, std::move(op));
  }
  return cw;
}

/// The structure map from the contribution of a labeled (phi, slot) over
/// the sorted leaves of `w` into (X ∘ Y)(w).
inline Morphism compose_inject(const ComposeWitness& cw, const Signature& w, const std::vector<int>& phi,
                               const std::vector<int>& slot) {
  const Variant v = cw.x.variant;
  auto fs = contribution_factors(cw.x, cw.y, w.out, w.in, phi, slot);
  Object src = tensor_all(fs, v);
  auto it = cw.pieces.find(w);
  if (it == cw.pieces.end()) throw Error(ErrorKind::NonFinitary, "orbit not computed: " + std::to_string(w.arity()));
  const OrbitPieces& op = it->second;
  std::vector<int> phi0, slot0;
  Perm sigma, tau;
  dec_canonical(w.in, phi, slot, phi0, slot0, &sigma, &tau);
  auto ci = op.index.find({slot0, phi0});
  if (ci == op.index.end()) {
    if (!src.is_initial() && slot.size() <= static_cast<std::size_t>(cw.x.bound))
      throw Error(ErrorKind::StructureMismatch, "nonzero contribution of a missing class");
    return zero_map(src, op.total.obj);
  }
  const ClassPiece& cp = op.classes[ci->second];
  Morphism f = dec_map(cw.x, cw.y, w.out, w.in, phi, slot, sigma, tau);
  auto G = aut_group(w.in);
  int gi = G->index_of(perm_inv(sigma));
  return compose(op.total.inj[ci->second], compose(cp.quo.proj, compose(cp.copies.inj[gi], f)));
}

/// The map (X ∘ Y)(w) -> Z determined by maps m[c] : T(class c) -> Z that
/// are equivariant for the class stabilizer; `act_z` is the Aut(w)-action
/// on Z. Throws StructureMismatch if the maps are not compatible.
template <class ActZ>
Morphism compose_out(const ComposeWitness& cw, const Signature& w, const std::vector<Morphism>& m,
                     const Object& z, ActZ&& act_z) {
  const OrbitPieces& op = cw.pieces.at(w);
  auto G = aut_group(w.in);
  std::vector<Morphism> comps;
  for (std::size_t c = 0; c < op.classes.size(); ++c) {
    const ClassPiece& cp = op.classes[c];
    std::vector<Morphism> per;
    for (const auto& g : G->elements()) per.push_back(compose(act_z(g), m[c]));
    comps.push_back(descend(cp.quo, copair(cp.copies, per, z)));
  }
  return copair(op.total, comps, z);
}

// ---------------------------------------------------------------------------
// Unitors and associator

/// 1 ∘ Y -> Y
inline Morphism left_unitor(const ComposeWitness& cw, const Signature& w) {
  const SymSeq& y = cw.y;
  const OrbitPieces& op = cw.pieces.at(w);
  std::vector<Morphism> m;
  for (const auto& cp : op.classes) {
    if (cp.dec.n() != 1) throw Error(ErrorKind::StructureMismatch, "left unitor: unexpected class");
    m.push_back(same_data(cp.contrib, y.value(w)));
  }
  Object z = y.value(w);
  return compose_out(cw, w, m, z, [&](const Perm& g) { return y.act(w, g); });
}

/// X ∘ 1 -> X
inline Morphism right_unitor(const ComposeWitness& cw, const Signature& w) {
  const SymSeq& x = cw.x;
  const OrbitPieces& op = cw.pieces.at(w);
  std::vector<Morphism> m;
  for (const auto& cp : op.classes) m.push_back(same_data(cp.contrib, x.value(w)));
  Object z = x.value(w);
  return compose_out(cw, w, m, z, [&](const Perm& g) { return x.act(w, g); });
}

/// Witnesses needed for the associator (X∘Y)∘Z -> X∘(Y∘Z).
struct AssocData {
  ComposeWitness xy, xy_z, yz, x_yz;
};

inline AssocData assoc_data(const SymSeq& x, const SymSeq& y, const SymSeq& z, int out_bound) {
  AssocData a;
  // Inner bounds large enough for every tree contributing up to out_bound.
  int inner_xy = z.nullary_free() ? out_bound : x.bound * std::max(1, y.bound);
  a.xy = compose(x, y, inner_xy);
  a.xy_z = compose(a.xy.result, z, out_bound);
  int inner_yz = out_bound;
  if (!z.nullary_free()) inner_yz = std::max(out_bound, y.bound * std::max(1, z.bound));
  a.yz = compose(y, z, inner_yz);
  a.x_yz = compose(x, a.yz.result, out_bound);
  return a;
}

/// The canonical map ((X∘Y)∘Z)(w) -> (X∘(Y∘Z))(w).
inline Morphism associator(const AssocData& a, const Signature& w) {
  const SymSeq &x = a.xy.x, &y = a.xy.y, &z = a.xy_z.y;
  const Variant v = x.variant;
  const OrbitPieces& outer = a.xy_z.pieces.at(w);
  Object target = a.x_yz.result.value(w);
  std::vector<Morphism> class_maps;
  for (const auto& cp : outer.classes) {
    const DecClass& d1 = cp.dec;  // leaves w -> middle slots (colors d1.slot, sorted)
    const int n = d1.n();
    Signature mid{w.out, d1.slot};
    auto fib1 = detail::fibers(d1.phi, n);
    std::vector<Object> zs;
    for (int j = 0; j < n; ++j) zs.push_back(z.at_tuple(d1.slot[j], detail::restrict_colors(w.in, fib1[j])));
    const OrbitPieces& inner = a.xy.pieces.at(mid);
    auto Gm = aut_group(mid.in);
    std::vector<Morphism> raws, hs;
    std::vector<Morphism> id_zs;
    for (const auto& zo : zs) id_zs.push_back(identity(zo));
    for (std::size_t c2 = 0; c2 < inner.classes.size(); ++c2) {
      const ClassPiece& ip = inner.classes[c2];
      const DecClass& d2 = ip.dec;  // middle -> top
      const int m = d2.n();
      for (std::size_t gi = 0; gi < Gm->elements().size(); ++gi) {
        const Perm& g2 = Gm->elements()[gi];
        // raw piece T2 ⊗ Zs -> (X∘Y)(mid) ⊗ Zs
        Morphism into = compose(inner.total.inj[c2], compose(ip.quo.proj, ip.copies.inj[gi]));
        std::vector<Morphism> rf{into};
        rf.insert(rf.end(), id_zs.begin(), id_zs.end());
        raws.push_back(tensor_all(rf, v));
        // transport the inner tree along g2: psi' = psi g2^{-1}
        Morphism mv = dec_map(x, y, mid.out, mid.in, d2.phi, d2.slot, g2, perm_identity(m));
        std::vector<int> psi(n);
        for (int j = 0; j < n; ++j) psi[g2[j]] = d2.phi[j];
        std::vector<Morphism> mf{mv};
        mf.insert(mf.end(), id_zs.begin(), id_zs.end());
        Morphism step1 = tensor_all(mf, v);  // (X ⊗ Ys) ⊗ Zs, nested
        // flatten [X, Y_0..Y_{m-1}, Z_0..Z_{n-1}]
        auto yfac = contribution_factors(x, y, mid.out, mid.in, psi, d2.slot);
        std::vector<std::vector<Object>> groups{yfac};
        for (const auto& zo : zs) groups.push_back({zo});
        Morphism flat = flatten_tensor(groups, v);
        step1 = compose(flat, step1);
        // regroup as [X, (Y_l, Z_{M_l}) for each top slot l]
        std::vector<Object> flat_objs = yfac;
        flat_objs.insert(flat_objs.end(), zs.begin(), zs.end());
        auto midf = detail::fibers(psi, m);  // top slot -> middle slots
        Perm p(flat_objs.size());
        std::vector<std::vector<Object>> regroup{{yfac[0]}};
        int pos = 1;
        p[0] = 0;
        for (int l = 0; l < m; ++l) {
          std::vector<Object> grp{yfac[1 + l]};
          p[1 + l] = pos++;
          for (int j : midf[l]) {
            grp.push_back(zs[j]);
            p[1 + m + j] = pos++;
          }
          regroup.push_back(grp);
        }
        Morphism braid = permute_factors(flat_objs, p, v);
        Morphism ungroup = permutation_inverse(flatten_tensor(regroup, v));
        Morphism step2 = compose(ungroup, compose(braid, step1));
        // inject each (Y_l ⊗ Z's) into (Y∘Z)(top color l; leaves over l)
        std::vector<int> chi(w.arity());
        for (int i = 0; i < w.arity(); ++i) chi[i] = psi[d1.phi[i]];
        auto topf = detail::fibers(chi, m);
        std::vector<Morphism> inj{identity(yfac[0])};
        for (int l = 0; l < m; ++l) {
          const auto& L = topf[l];
          const auto& M = midf[l];
          std::vector<int> phil(L.size()), slotl;
          for (int j : M) slotl.push_back(d1.slot[j]);
          for (std::size_t a2 = 0; a2 < L.size(); ++a2) {
            int j = d1.phi[L[a2]];
            phil[a2] = static_cast<int>(std::find(M.begin(), M.end(), j) - M.begin());
          }
          Signature sl{d2.slot[l], detail::restrict_colors(w.in, L)};
          inj.push_back(compose_inject(a.yz, sl, phil, slotl));
        }
        Morphism step3 = compose(tensor_all(inj, v), step2);
        Morphism fin = compose_inject(a.x_yz, w, chi, d2.slot);
        hs.push_back(compose(fin, step3));
      }
    }
    class_maps.push_back(descend_epi(raws, hs, cp.contrib, target));
  }
  return compose_out(a.xy_z, w, class_maps, target, [&](const Perm& g) { return a.x_yz.result.act(w, g); });
}

}  // namespace opkit

namespace opkit {

/// (f ∘ g)(w) : (X ∘ Y)(w) -> (X' ∘ Y')(w) for maps of sequences given
/// signature-wise by fx and fy.
template <class FX, class FY>
Morphism compose_map(const ComposeWitness& src, const ComposeWitness& tgt, FX&& fx, FY&& fy, const Signature& w) {
  const Variant v = src.x.variant;
  auto it = src.pieces.find(w);
  if (it == src.pieces.end()) throw Error(ErrorKind::NonFinitary, "compose_map: orbit not computed");
  std::vector<Morphism> m;
  for (const auto& cp : it->second.classes) {
    const DecClass& d = cp.dec;
    auto fib = detail::fibers(d.phi, d.n());
    std::vector<Morphism> parts{fx(Signature{w.out, d.slot})};
    for (int j = 0; j < d.n(); ++j) parts.push_back(fy(Signature{d.slot[j], detail::restrict_colors(w.in, fib[j])}));
    m.push_back(compose(compose_inject(tgt, w, d.phi, d.slot), tensor_all(parts, v)));
  }
  return compose_out(src, w, m, tgt.result.value(w), [&](const Perm& g) { return tgt.result.act(w, g); });
}

/// Identity components of a sequence, as a callable for compose_map.
inline auto seq_identity(const SymSeq& s) {
  return [&s](const Signature& w) { return identity(s.value(w)); };
}

}  // namespace opkit
