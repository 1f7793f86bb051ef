#pragma once

// Relative composition S ∘_O X and the skeletal filtration of free
// algebras. Stages n >= 2 are built by pushing out along R⁻ -> R⁺; the
// direct coequalizer on the skeleton serves as the oracle.

#include <functional>
#include <map>
#include <vector>

#include "opkit/algebra.hpp"
#include "opkit/canonical.hpp"

namespace opkit {

/// Objects as a sequence concentrated in arity zero.
inline SymSeq nullary_seq(const ColorSet& w, Variant v, const std::vector<Object>& x) {
  SymSeq s(w, v, 0, false);
  for (int c = 0; c < w.size(); ++c)
    if (!x[c].is_initial()) s.set(Signature{c, {}}, trivial_entry(x[c], aut_group({})));
  return s;
}

/// (P ∘ A)(w) -> A(w) for an algebra A viewed as an arity-zero sequence.
inline Morphism algebra_structure(const ComposeWitness& cw, const Operad& p, const Algebra& a, const Signature& w) {
  Object z = cw.y.value(w);
  if (w.arity() > 0) return zero_map(cw.result.value(w), z);
  std::vector<Morphism> m;
  for (const auto& cp : cw.pieces.at(w).classes) m.push_back(algebra_action(p, a, Signature{w.out, cp.dec.slot}));
  return compose_out(cw, w, m, z, [&](const Perm&) { return identity(z); });
}

/// ρ : O -> P on one entry of O = free_on_nullary(P_0).
inline Morphism nullary_unit(const Operad& p, const SymSeq& o, const Signature& s) {
  if (s.arity() == 1) return p.unit.at(s.out);
  if (s.arity() == 0) return same_data(o.value(s), p.seq.value(s));
  return zero_map(o.value(s), p.seq.value(s));
}

/// γ ∘ (incl ∘ ρ) : (S ∘ O)(w) -> Z for S a set of entries of P and O the
/// nullary operad of P; Z is P(w) or an entry with the same data.
inline Morphism gamma_after_unit(const Operad& p, const ComposeWitness& so, const Signature& w, const Object& z,
                                 const SymSeq& zseq) {
  const Variant v = p.variant();
  const SymSeq& s = so.x;
  std::vector<Morphism> m;
  for (const auto& cp : so.pieces.at(w).classes) {
    const DecClass& d = cp.dec;
    auto fib = detail::fibers(d.phi, d.n());
    Object top = s.at_tuple(w.out, d.slot);
    std::vector<Morphism> parts{same_data(top, p.seq.value(Signature{w.out, d.slot}))};
    for (int j = 0; j < d.n(); ++j)
      parts.push_back(nullary_unit(p, so.y, Signature{d.slot[j], detail::restrict_colors(w.in, fib[j])}));
    Morphism g = compose(gamma_labeled(p, w, d.phi, d.slot), tensor_all(parts, v));
    m.push_back(compose(same_data(g.tgt, z), g));
  }
  return compose_out(so, w, m, z, [&](const Perm& g) { return compose(same_data(zseq.value(w), z), compose(zseq.act(w, g), same_data(z, zseq.value(w)))); });
}

/// The right O-action on S = P_{≤n}: γ ∘ (id ∘ ρ) landing in S.
inline Morphism skeleton_right_action(const Operad& p, const ComposeWitness& so, const Signature& w) {
  return gamma_after_unit(p, so, w, so.x.value(w), so.x);
}

/// γ : (P ∘ P)(w) -> P(w) over a witness of P ∘ P (or of sub-sequences
/// with the same entries).
inline Morphism operad_product(const Operad& p, const ComposeWitness& cw, const Signature& w) {
  Object z = p.seq.value(w);
  auto it = cw.pieces.find(w);
  if (it == cw.pieces.end() || w.arity() > p.bound()) {
    Object src = cw.result.value(w);
    if (!src.is_initial() || !z.is_initial())
      throw Error(ErrorKind::NonFinitary, "composition above the declared bound");
    return zero_map(src, z);
  }
  std::vector<Morphism> m;
  for (const auto& cp : it->second.classes) m.push_back(gamma_labeled(p, w, cp.dec.phi, cp.dec.slot));
  return compose_out(cw, w, m, z, [&](const Perm& g) { return p.seq.act(w, g); });
}

/// S ∘_O X per color, as the coequalizer of S∘(O∘X) ⇉ S∘X.
struct RelativeComposite {
  AssocData a;
  ComposeWitness sx;
  std::vector<Quotient> quo;  // per color

  const Object& value(int c) const { return quo[c].obj; }
  /// S(w) ⊗ X(w_1) ⊗ ... -> (S ∘_O X)(w_0)
  Morphism ev(const Signature& w) const {
    Signature z{w.out, {}};
    return compose(quo[w.out].proj, compose_inject(sx, z, {}, w.in));
  }
};

/// `mu(so, w)` is the right O-action (S∘O)(w) -> S(w), over the witness so.
template <class Mu>
RelativeComposite relative_compose(const SymSeq& s, Mu&& mu, const Operad& o, const Algebra& x) {
  const ColorSet& w_ = s.colors;
  const Variant v = s.variant;
  SymSeq xs = nullary_seq(w_, v, x.carrier);
  RelativeComposite r;
  r.a = assoc_data(s, o.seq, xs, 0);
  r.sx = compose(s, xs, 0);
  for (int c = 0; c < w_.size(); ++c) {
    Signature z{c, {}};
    auto act_x = [&](const Signature& sig) { return algebra_structure(r.a.yz, o, x, sig); };
    Morphism m1 = compose_map(r.a.x_yz, r.sx, seq_identity(s), act_x, z);
    auto mu_s = [&](const Signature& sig) { return mu(r.a.xy, sig); };
    Morphism m2 = compose(compose_map(r.a.xy_z, r.sx, mu_s, seq_identity(xs), z), inverse(associator(r.a, z)));
    r.quo.push_back(coequalizer(m1, m2));
  }
  return r;
}

/// The O-algebra X(c) = P_0(c) ∐ E(c) with f the first inclusion.
inline Algebra extend_nullary(const Operad& p, const std::vector<Object>& extra) {
  Operad o = free_on_nullary(p.colors(), p.variant(), nullary_part(p));
  std::vector<Object> x;
  std::vector<Morphism> f;
  for (int c = 0; c < p.colors().size(); ++c) {
    Coproduct s = coproduct({p.seq.value(Signature{c, {}}), extra[c]}, p.variant());
    x.push_back(s.obj);
    f.push_back(s.inj[0]);
  }
  return o_algebra(o, x, f);
}

// ---------------------------------------------------------------------------
// Filtration stages

struct FiltrationStage {
  int n = 0;
  std::vector<Object> value;               // per color
  std::vector<Morphism> structure;         // P_0(c) -> V(c)
  std::map<Signature, Morphism> ev;        // P(w) ⊗ X(w_1) ⊗ ... -> V(w_0), arity <= n
  // Attaching data of the last square (n >= 2), per color.
  std::vector<Morphism> r_minus_to_r_plus, r_minus_to_prev, prev_to_value;

  Morphism ev_at(const Operad& p, const std::vector<Object>& x, const Signature& w) const {
    auto it = ev.find(w);
    if (it != ev.end()) return it->second;
    Object src = tensor_all(detail::action_factors(p, w, detail::carrier_tuple(x, w.in)), p.variant());
    if (!src.is_initial()) throw Error(ErrorKind::StructureMismatch, "stage has no map on a nonzero entry");
    return zero_map(src, value[w.out]);
  }
};

/// P_{≤n} ∘_O X by the direct coequalizer.
inline RelativeComposite skeleton_composite(const Operad& p, const Algebra& x, int n) {
  Operad o = free_on_nullary(p.colors(), p.variant(), nullary_part(p));
  SymSeq s = skeleton(p.seq, n);
  return relative_compose(s, [&](const ComposeWitness& so, const Signature& w) { return skeleton_right_action(p, so, w); },
                          o, x);
}

inline FiltrationStage stage_from_composite(const Operad& p, const RelativeComposite& rc, int n) {
  FiltrationStage st;
  st.n = n;
  for (int c = 0; c < p.colors().size(); ++c) st.value.push_back(rc.value(c));
  for (const auto& w : all_signatures(p.colors(), n))
    if (!p.seq.value(w).is_initial()) st.ev.emplace(w, rc.ev(w));
  for (int c = 0; c < p.colors().size(); ++c) {
    Signature z{c, {}};
    auto it = st.ev.find(z);
    st.structure.push_back(it != st.ev.end() ? it->second : zero_map(p.seq.value(z), st.value[c]));
  }
  return st;
}

inline FiltrationStage free_algebra_stage_oracle(const Operad& p, const Algebra& x, int n) {
  return stage_from_composite(p, skeleton_composite(p, x, n), n);
}

// ---------------------------------------------------------------------------
// Closed-form colimits over arity-n signatures

/// Colimit over orbits w̄ of arity n with output w0 of P(w̄) ⊗ F(w̄, I),
/// F(w̄, I) = ⊗ (X(w_i) for i in I, P_0(w_i) otherwise), with I ranging
/// over the subsets selected by `mode`.
struct ArityColimit {
  enum Mode { Empty, Proper, Full };
  std::vector<std::pair<Signature, unsigned>> comps;
  std::map<std::pair<Signature, unsigned>, int> index;
  Coproduct raw;
  Quotient quo;

  const Object& obj() const { return quo.obj; }
  Morphism inj(const Signature& w, unsigned mask) const { return compose(quo.proj, raw.inj[index.at({w, mask})]); }
};

namespace detail {

inline std::vector<Object> subset_factors(const std::vector<Object>& p0, const std::vector<Object>& x,
                                          const std::vector<int>& cols, unsigned mask) {
  std::vector<Object> r;
  for (std::size_t i = 0; i < cols.size(); ++i) r.push_back(mask >> i & 1u ? x[cols[i]] : p0[cols[i]]);
  return r;
}

/// id ⊗ (f_i where i in `apply`, id elsewhere) on [P(w), F(w, I)].
inline Morphism apply_structure(const Operad& p, const Signature& w, const std::vector<Object>& p0,
                                const std::vector<Object>& x, const std::vector<Morphism>& f, unsigned mask,
                                unsigned apply) {
  std::vector<Morphism> parts{identity(p.seq.value(w))};
  for (int i = 0; i < w.arity(); ++i) {
    int c = w.in[i];
    if (apply >> i & 1u) parts.push_back(f[c]);
    else parts.push_back(identity(mask >> i & 1u ? x[c] : p0[c]));
  }
  return tensor_all(parts, p.variant());
}

inline std::vector<int> mask_members(unsigned mask, int n) {
  std::vector<int> r;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1u) r.push_back(i);
  return r;
}

inline unsigned mask_image(unsigned mask, const Perm& t) {
  unsigned r = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (mask >> i & 1u) r |= 1u << t[i];
  return r;
}

}  // namespace detail

inline ArityColimit arity_colimit(const Operad& p, const Algebra& x, int w0, int n, ArityColimit::Mode mode) {
  const Variant v = p.variant();
  auto p0 = nullary_part(p);
  Operad o = free_on_nullary(p.colors(), v, p0);
  std::vector<Morphism> f;
  for (int c = 0; c < p.colors().size(); ++c) f.push_back(o_structure(o, x, c));
  const unsigned full = (1u << n) - 1;
  ArityColimit r;
  std::vector<Object> objs;
  for (const auto& w : orbit_enumerate(p.colors(), n, w0)) {
    if (p.seq.value(w).is_initial()) continue;
    for (unsigned m = 0; m <= full; ++m) {
      bool keep = mode == ArityColimit::Full ? m == full : mode == ArityColimit::Empty ? m == 0 : m != full;
      if (!keep) continue;
      r.index[{w, m}] = static_cast<int>(r.comps.size());
      r.comps.push_back({w, m});
      objs.push_back(tensor_all(detail::action_factors(p, w, detail::subset_factors(p0, x.carrier, w.in, m)), v));
    }
  }
  r.raw = coproduct(objs, v);
  std::vector<std::pair<Morphism, Morphism>> rel;
  for (std::size_t k = 0; k < r.comps.size(); ++k) {
    const auto& [w, m] = r.comps[k];
    auto in = detail::subset_factors(p0, x.carrier, w.in, m);
    for (const auto& t : aut_group(w.in)->generators()) {
      unsigned m2 = detail::mask_image(m, t);
      rel.push_back({r.raw.inj[k], compose(r.raw.inj[r.index.at({w, m2})], detail::action_relabel(p, w, in, t))});
    }
    if (mode != ArityColimit::Proper) continue;
    for (int i = 0; i < n; ++i) {
      unsigned m2 = m | 1u << i;
      if (m2 == m || m2 == full) continue;
      Morphism h = detail::apply_structure(p, w, p0, x.carrier, f, m, 1u << i);
      rel.push_back({r.raw.inj[k], compose(r.raw.inj[r.index.at({w, m2})], h)});
    }
  }
  r.quo = quotient(r.raw.obj, rel);
  return r;
}

/// [P(w), F(w, I)] -> T0 ⊗ X(w_i) ⊗ ... (i in I) where `head` sends
/// [P(w), U_0, ...] to T0, with U_i the unit for i in I and P_0(w_i)
/// otherwise.
inline Morphism plug(const Operad& p, const std::vector<Object>& x, const Signature& w, unsigned mask,
                     const Morphism& head) {
  const Variant v = p.variant();
  auto p0 = nullary_part(p);
  const int n = w.arity();
  auto in = detail::subset_factors(p0, x, w.in, mask);
  auto flat = detail::action_factors(p, w, in);
  Perm q(n + 1);
  q[0] = 0;
  int pos = 1;
  for (int i = 0; i < n; ++i)
    if (!(mask >> i & 1u)) q[1 + i] = pos++;
  std::vector<Object> head_src{flat[0]}, xs;
  for (int i = 0; i < n; ++i) {
    if (mask >> i & 1u) {
      q[1 + i] = pos++;
      xs.push_back(in[i]);
      head_src.push_back(Object::unit(v));
    } else {
      head_src.push_back(in[i]);
    }
  }
  Morphism braid = permute_factors(flat, q, v);
  std::vector<Object> padded = head_src;
  padded.insert(padded.end(), xs.begin(), xs.end());
  std::vector<std::vector<Object>> groups{head_src};
  for (const auto& o : xs) groups.push_back({o});
  Morphism regroup = permutation_inverse(flatten_tensor(groups, v));
  std::vector<Morphism> parts{head};
  for (const auto& o : xs) parts.push_back(identity(o));
  Morphism pad = same_data(braid.tgt, tensor_all(padded, v));
  return compose(tensor_all(parts, v), compose(regroup, compose(pad, braid)));
}

/// Head for plug: γ on (w0; w|I) with the units inserted at I.
inline Morphism gamma_head(const Operad& p, const Signature& w, unsigned mask) {
  const Variant v = p.variant();
  auto members = detail::mask_members(mask, w.arity());
  Signature sub{w.out, detail::restrict_colors(w.in, members)};
  std::vector<int> phi(members.begin(), members.end());
  std::vector<Morphism> parts{identity(p.seq.value(w))};
  for (int i = 0; i < w.arity(); ++i) {
    Signature z{w.in[i], {}};
    parts.push_back(mask >> i & 1u ? p.unit.at(w.in[i]) : identity(p.seq.value(z)));
  }
  return compose(gamma_labeled(p, sub, phi, w.in), tensor_all(parts, v));
}

/// The two-step pushout R⁻ -> R⁺ at one output color.
struct RMaps {
  ArityColimit c0, cq, cx;
  Morphism c0_to_p0, c0_to_cq, cq_to_cx;
  Pushout r_minus;  // of (c0 -> P_0(w0), c0 -> cq)
  Pushout r_plus;   // of (cq -> R⁻, cq -> cx)

  const Morphism& map() const { return r_plus.leg_b; }
};

inline RMaps r_maps(const Operad& p, const Algebra& x, int n, int w0) {
  if (n < 2) throw Error(ErrorKind::InvalidObject, "attaching maps start at arity two");
  const Variant v = p.variant();
  auto p0 = nullary_part(p);
  Operad o = free_on_nullary(p.colors(), v, p0);
  std::vector<Morphism> f;
  for (int c = 0; c < p.colors().size(); ++c) f.push_back(o_structure(o, x, c));
  const unsigned full = (1u << n) - 1;
  RMaps r;
  r.c0 = arity_colimit(p, x, w0, n, ArityColimit::Empty);
  r.cq = arity_colimit(p, x, w0, n, ArityColimit::Proper);
  r.cx = arity_colimit(p, x, w0, n, ArityColimit::Full);
  std::vector<Morphism> to_p0, to_cq, to_cx;
  for (const auto& [w, m] : r.c0.comps) {
    to_p0.push_back(gamma_labeled(p, Signature{w0, {}}, {}, w.in));
    to_cq.push_back(r.cq.inj(w, 0));
  }
  for (const auto& [w, m] : r.cq.comps)
    to_cx.push_back(compose(r.cx.inj(w, full), detail::apply_structure(p, w, p0, x.carrier, f, m, full & ~m)));
  r.c0_to_p0 = descend(r.c0.quo, copair(r.c0.raw, to_p0, p0[w0]));
  r.c0_to_cq = descend(r.c0.quo, copair(r.c0.raw, to_cq, r.cq.obj()));
  r.cq_to_cx = descend(r.cq.quo, copair(r.cq.raw, to_cx, r.cx.obj()));
  r.r_minus = pushout(r.c0_to_p0, r.c0_to_cq);
  r.r_plus = pushout(r.r_minus.leg_c, r.cq_to_cx);
  return r;
}

/// Stage n from stage n-1 by the pushout along R⁻ -> R⁺.
inline FiltrationStage attach_stage(const Operad& p, const Algebra& x, const FiltrationStage& prev) {
  const int n = prev.n + 1;
  const unsigned full = (1u << n) - 1;
  FiltrationStage st;
  st.n = n;
  for (int w0 = 0; w0 < p.colors().size(); ++w0) {
    RMaps r = r_maps(p, x, n, w0);
    std::vector<Morphism> hc;
    for (const auto& [w, m] : r.cq.comps) {
      auto members = detail::mask_members(m, n);
      Signature sub{w0, detail::restrict_colors(w.in, members)};
      hc.push_back(compose(prev.ev_at(p, x.carrier, sub), plug(p, x.carrier, w, m, gamma_head(p, w, m))));
    }
    Morphism cq_to_prev = descend(r.cq.quo, copair(r.cq.raw, hc, prev.value[w0]));
    Morphism to_prev = pushout_induced(r.r_minus, prev.structure[w0], cq_to_prev);
    Pushout po = pushout(r.r_plus.leg_b, to_prev);
    st.value.push_back(po.obj);
    st.structure.push_back(compose(po.leg_c, prev.structure[w0]));
    st.r_minus_to_r_plus.push_back(r.r_plus.leg_b);
    st.r_minus_to_prev.push_back(to_prev);
    st.prev_to_value.push_back(po.leg_c);
    for (const auto& [w, e] : prev.ev)
      if (w.out == w0) st.ev.emplace(w, compose(po.leg_c, e));
    for (const auto& [w, m] : r.cx.comps) st.ev.emplace(w, compose(po.leg_b, compose(r.r_plus.leg_c, r.cx.inj(w, full))));
  }
  return st;
}

/// Stages 0..n; 0 and 1 directly, the rest by attaching.
inline std::vector<FiltrationStage> free_algebra_stages(const Operad& p, const Algebra& x, int n) {
  if (n > p.bound()) throw Error(ErrorKind::NonFinitary, "stage above the declared bound");
  std::vector<FiltrationStage> r;
  for (int k = 0; k <= std::min(n, 1); ++k) r.push_back(free_algebra_stage_oracle(p, x, k));
  for (int k = 2; k <= n; ++k) r.push_back(attach_stage(p, x, r.back()));
  return r;
}

inline FiltrationStage free_algebra_stage(const Operad& p, const Algebra& x, int n) {
  return free_algebra_stages(p, x, n).back();
}

/// The canonical map oracle -> stage, checked to be an isomorphism
/// compatible with the structure maps.
inline IsoCheck compare_stage(const Operad& p, const Algebra& x, const FiltrationStage& st, const RelativeComposite& rc) {
  for (int c = 0; c < p.colors().size(); ++c) {
    Signature z{c, {}};
    std::vector<Morphism> m;
    for (const auto& cp : rc.sx.pieces.at(z).classes) m.push_back(st.ev_at(p, x.carrier, Signature{c, cp.dec.slot}));
    Object t = st.value[c];
    Morphism f;
    try {
      f = descend(rc.quo[c], compose_out(rc.sx, z, m, t, [&](const Perm&) { return identity(t); }));
    } catch (const Error& e) {
      return {false, "color " + p.colors().names[c] + ": " + e.what()};
    }
    if (!is_iso(f))
      return {false, "color " + p.colors().names[c] + ": sizes " + std::to_string(f.src.size()) + " vs " +
                         std::to_string(f.tgt.size())};
    Signature zs{c, {}};
    Morphism os = p.seq.value(zs).is_initial() ? zero_map(p.seq.value(zs), rc.value(c)) : rc.ev(zs);
    if (!(compose(f, os) == st.structure[c])) return {false, "color " + p.colors().names[c] + ": structure maps differ"};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Stages as P_{≤1}-algebras

/// The P_{≤1}-action on a stage, descended along the jointly surjective
/// maps ev. Throws StructureMismatch if the action does not descend.
inline Algebra stage_algebra(const Operad& p, const Algebra& x, const FiltrationStage& st) {
  const Variant v = p.variant();
  Algebra a;
  a.carrier = st.value;
  for (int c = 0; c < p.colors().size(); ++c)
    if (!p.seq.value(Signature{c, {}}).is_initial()) a.act.emplace(Signature{c, {}}, st.structure[c]);
  for (const auto& u : all_signatures(p.colors(), 1)) {
    if (u.arity() != 1) continue;
    Object pu = p.seq.value(u);
    if (pu.is_initial()) continue;
    const int d = u.out, c = u.in[0];
    std::vector<Morphism> r, h;
    for (const auto& [w, e] : st.ev) {
      if (w.out != c) continue;
      auto xs = detail::carrier_tuple(x.carrier, w.in);
      std::vector<Object> inner{p.seq.value(w)};
      inner.insert(inner.end(), xs.begin(), xs.end());
      Morphism flat = flatten_tensor({{pu}, inner}, v);
      std::vector<std::vector<Object>> groups{{pu, p.seq.value(w)}};
      for (const auto& o : xs) groups.push_back({o});
      Morphism regroup = permutation_inverse(flatten_tensor(groups, v));
      Signature dw{d, w.in};
      std::vector<Morphism> parts{gamma_labeled(p, dw, std::vector<int>(w.arity(), 0), {c})};
      for (const auto& o : xs) parts.push_back(identity(o));
      r.push_back(tensor(identity(pu), e));
      h.push_back(compose(st.ev_at(p, x.carrier, dw), compose(tensor_all(parts, v), compose(regroup, flat))));
    }
    a.act.emplace(u, descend_epi(r, h, tensor(pu, st.value[c]), st.value[d]));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Q(X, w̄): the colimit over proper subsets

struct QObject {
  std::vector<Morphism> f;  // P_0(w_i) -> X(w_i)
  Coproduct raw;            // component m is the subset with bit mask m
  Quotient quo;
  Morphism map;             // Q -> ⊗ X(w_i)

  const Object& obj() const { return quo.obj; }
  Morphism inj(unsigned m) const { return compose(quo.proj, raw.inj[m]); }
};

namespace detail {

inline std::vector<Object> q_factors(const std::vector<Morphism>& f, unsigned m) {
  std::vector<Object> r;
  for (std::size_t i = 0; i < f.size(); ++i) r.push_back(m >> i & 1u ? f[i].tgt : f[i].src);
  return r;
}

inline Morphism q_apply(const std::vector<Morphism>& f, unsigned m, unsigned apply, Variant v) {
  std::vector<Morphism> parts;
  for (std::size_t i = 0; i < f.size(); ++i)
    parts.push_back(apply >> i & 1u ? f[i] : identity(m >> i & 1u ? f[i].tgt : f[i].src));
  return tensor_all(parts, v);
}

}  // namespace detail

inline QObject q_object(const std::vector<Morphism>& f) {
  if (f.empty()) throw Error(ErrorKind::InvalidObject, "q_object needs arity at least one");
  const Variant v = f[0].kind();
  const int n = static_cast<int>(f.size());
  const unsigned full = (1u << n) - 1;
  QObject q;
  q.f = f;
  std::vector<Object> objs;
  for (unsigned m = 0; m < full; ++m) objs.push_back(tensor_all(detail::q_factors(f, m), v));
  q.raw = coproduct(objs, v);
  std::vector<std::pair<Morphism, Morphism>> rel;
  for (unsigned m = 0; m < full; ++m)
    for (int i = 0; i < n; ++i) {
      unsigned m2 = m | 1u << i;
      if (m2 == m || m2 == full) continue;
      rel.push_back({q.raw.inj[m], compose(q.raw.inj[m2], detail::q_apply(f, m, 1u << i, v))});
    }
  q.quo = quotient(q.raw.obj, rel);
  std::vector<Morphism> out;
  for (unsigned m = 0; m < full; ++m) out.push_back(detail::q_apply(f, m, full & ~m, v));
  q.map = descend(q.quo, copair(q.raw, out, tensor_all(detail::q_factors(f, full), v)));
  return q;
}

/// Q(X, w̄) for per-color structure maps.
inline QObject q_object(const std::vector<Morphism>& p0map, const Signature& w) {
  std::vector<Morphism> f;
  for (int c : w.in) f.push_back(p0map[c]);
  return q_object(f);
}

struct QComparison {
  IsoCheck check;
  Morphism canon;     // Q -> corner of the iterated pushout-product
  Morphism product;   // corner -> ⊗ X(w_i)
};

/// Compare Q with the corner of the left-associated iterated
/// pushout-product through the canonical map.
inline QComparison compare_q_with_pushout_product(const QObject& q) {
  const Variant v = q.f[0].kind();
  const int n = static_cast<int>(q.f.size());
  Morphism acc = q.f[0];
  std::vector<Morphism> legs{identity(q.f[0].src)};
  for (int m = 1; m < n; ++m) {
    PushoutProduct pp = pushout_product(acc, q.f[m]);
    const unsigned low = (1u << m) - 1;
    std::vector<Morphism> next;
    for (unsigned s = 0; s + 1 < (1u << (m + 1)); ++s) {
      if (s >> m & 1u) {
        next.push_back(compose(pp.corner.leg_b, tensor(legs[s & low], identity(q.f[m].tgt))));
      } else {
        std::vector<Morphism> g;
        for (int j = 0; j < m; ++j) g.push_back(s >> j & 1u ? identity(q.f[j].tgt) : q.f[j]);
        next.push_back(compose(pp.corner.leg_c, tensor(tensor_all(g, v), identity(q.f[m].src))));
      }
    }
    legs = std::move(next);
    acc = pp.map;
  }
  QComparison r;
  r.product = acc;
  try {
    r.canon = descend(q.quo, copair(q.raw, legs, acc.src));
  } catch (const Error& e) {
    r.check = {false, std::string("canonical map does not descend: ") + e.what()};
    return r;
  }
  if (!is_iso(r.canon))
    r.check = {false, "canonical map is not invertible (sizes " + std::to_string(r.canon.src.size()) + " vs " +
                          std::to_string(r.canon.tgt.size()) + ")"};
  else if (!(compose(acc, r.canon) == q.map))
    r.check = {false, "maps to the tensor product differ"};
  return r;
}

// ---------------------------------------------------------------------------
// The square of sequences P_n∘O, P_{≤n-1} and its pushout P_{≤n}

/// Arity-wise recomputation of the pushout square
///   (P_n∘O)_{≤n-1} -> P_n∘O
///         |              |
///     P_{≤n-1}   ->   P_{≤n}
/// for every signature of arity <= n+1. `tamper` may replace the right
/// vertical map before the check.
using SquareTamper = std::function<Morphism(const Signature&, const Morphism&)>;

inline Report lq_square_check(const Operad& p, int n, const SquareTamper& tamper = {}) {
  Report rep;
  if (n > p.bound()) throw Error(ErrorKind::NonFinitary, "square above the declared bound");
  const ColorSet& w_ = p.colors();
  Operad o = free_on_nullary(w_, p.variant(), nullary_part(p));
  SymSeq pn = arity_part(p.seq, n);
  ComposeWitness pno = compose(pn, o.seq, n + 1);
  for (const auto& w : all_signatures(w_, n + 1)) {
    const int k = w.arity();
    const std::string at = signature_string(w, w_);
    Object tr = pno.result.value(w);
    Object pw = k <= n ? p.seq.value(w) : Object::initial(p.variant());
    Object tl = k <= n - 1 ? tr : Object::initial(p.variant());
    Object bl = k <= n - 1 ? pw : Object::initial(p.variant());
    Morphism right = k <= n ? gamma_after_unit(p, pno, w, pw, p.seq) : zero_map(tr, pw);
    if (tamper) right = tamper(w, right);
    Morphism top = k <= n - 1 ? identity(tr) : zero_map(tl, tr);
    Morphism bottom = k <= n - 1 ? identity(pw) : zero_map(bl, pw);
    Morphism left = k <= n - 1 ? right : zero_map(tl, bl);
    if (!(compose(right, top) == compose(bottom, left))) {
      rep.fail("square does not commute at " + at);
      continue;
    }
    if (k < n && !(is_iso(top) && is_iso(bottom))) rep.fail("horizontal maps are not isomorphisms at " + at);
    if (k == n && !is_iso(right)) rep.fail("right vertical map is not an isomorphism at " + at);
    if (k > n && !(tr.is_initial() && pw.is_initial())) rep.fail("nonzero entry above arity n at " + at);
    Pushout po = pushout(top, left);
    Morphism ind = pushout_induced(po, right, bottom);
    if (!is_iso(ind)) rep.fail("pushout differs from the skeleton at " + at);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// ((P_n∘O)_{≤n-1} ∘_O X) and the comparison maps of the attaching square

struct RawAttaching {
  Operad o;
  SymSeq pn, s;
  ComposeWitness pno, pnx;
  AssocData a2, a3;
  RelativeComposite rc;  // (P_n∘O)_{≤n-1} ∘_O X
};

inline RawAttaching raw_attaching(const Operad& p, const Algebra& x, int n) {
  if (n < 2) throw Error(ErrorKind::InvalidObject, "attaching maps start at arity two");
  if (n > p.bound()) throw Error(ErrorKind::NonFinitary, "arity above the declared bound");
  RawAttaching r;
  r.o = free_on_nullary(p.colors(), p.variant(), nullary_part(p));
  r.pn = arity_part(p.seq, n);
  r.pno = compose(r.pn, r.o.seq, n - 1);
  r.s = skeleton(r.pno.result, n - 1);
  r.a2 = assoc_data(r.pn, r.o.seq, r.o.seq, n - 1);
  auto mu = [&](const ComposeWitness& so, const Signature& w) {
    auto incl = [&](const Signature& sig) { return same_data(r.s.value(sig), r.a2.xy.result.value(sig)); };
    Morphism in = compose_map(so, r.a2.xy_z, incl, seq_identity(r.o.seq), w);
    auto prod = [&](const Signature& sig) { return operad_product(r.o, r.a2.yz, sig); };
    Morphism out = compose_map(r.a2.x_yz, r.pno, seq_identity(r.pn), prod, w);
    Morphism t = compose(out, compose(associator(r.a2, w), in));
    return compose(same_data(t.tgt, r.s.value(w)), t);
  };
  r.rc = relative_compose(r.s, mu, r.o, x);
  SymSeq xs = nullary_seq(p.colors(), p.variant(), x.carrier);
  r.a3 = assoc_data(r.pn, r.o.seq, xs, 0);
  r.pnx = compose(r.pn, xs, 0);
  return r;
}

/// ((P_n∘O)_{≤n-1} ∘_O X)(w0) -> (P_n ∘ X)(w0).
inline Morphism raw_to_top(const RawAttaching& r, const Algebra& x, int w0) {
  Signature z{w0, {}};
  auto incl = [&](const Signature& sig) { return same_data(r.s.value(sig), r.a3.xy.result.value(sig)); };
  Morphism in = compose_map(r.rc.sx, r.a3.xy_z, incl, seq_identity(r.a3.xy_z.y), z);
  auto act = [&](const Signature& sig) { return algebra_structure(r.a3.yz, r.o, x, sig); };
  Morphism out = compose_map(r.a3.x_yz, r.pnx, seq_identity(r.pn), act, z);
  return descend(r.rc.quo[w0], compose(out, compose(associator(r.a3, z), in)));
}

/// The maps compared by the closed form of the attaching square.
struct AttachingComparison {
  int w0 = 0, n = 0;
  RMaps closed;
  Morphism canon0;        // C_0 -> (P_n∘O)(w0)
  Morphism canon_q;       // C_Q -> raw ∘_O
  Morphism canon_x;       // C_X -> (P_n∘X)(w0)
  Morphism raw_to_top;    // raw ∘_O -> (P_n∘X)(w0)
  Morphism d0_to_p0, d0_to_raw;
};

inline AttachingComparison attaching_comparison(const Operad& p, const Algebra& x, int n, int w0) {
  AttachingComparison a;
  a.w0 = w0;
  a.n = n;
  a.closed = r_maps(p, x, n, w0);
  RawAttaching r = raw_attaching(p, x, n);
  Signature z{w0, {}};
  std::vector<Morphism> q, c0, cx;
  for (const auto& [w, m] : a.closed.cq.comps) {
    auto members = detail::mask_members(m, n);
    Signature sub{w0, detail::restrict_colors(w.in, members)};
    Morphism head = compose_inject(r.pno, sub, members, w.in);
    head = compose(same_data(head.tgt, r.s.value(sub)), head);
    q.push_back(compose(r.rc.quo[w0].proj, compose(compose_inject(r.rc.sx, z, {}, sub.in), plug(p, x.carrier, w, m, head))));
  }
  for (const auto& [w, m] : a.closed.c0.comps) c0.push_back(compose_inject(r.pno, z, {}, w.in));
  for (const auto& [w, m] : a.closed.cx.comps) cx.push_back(compose_inject(r.pnx, z, {}, w.in));
  a.canon_q = descend(a.closed.cq.quo, copair(a.closed.cq.raw, q, r.rc.value(w0)));
  a.canon0 = descend(a.closed.c0.quo, copair(a.closed.c0.raw, c0, r.pno.result.value(z)));
  a.canon_x = descend(a.closed.cx.quo, copair(a.closed.cx.raw, cx, r.pnx.result.value(z)));
  a.raw_to_top = raw_to_top(r, x, w0);
  a.d0_to_p0 = gamma_after_unit(p, r.pno, z, p.seq.value(z), p.seq);
  a.d0_to_raw = compose(r.rc.quo[w0].proj, compose(compose_inject(r.rc.sx, z, {}, {}), same_data(r.pno.result.value(z), r.s.value(z))));
  return a;
}

namespace detail {

inline std::string attaching_where(const Operad& p, const AttachingComparison& a) {
  return "output " + p.colors().names[a.w0] + ", arity " + std::to_string(a.n);
}

}  // namespace detail

/// colim P_n(w̄) ⊗ Q(X, w̄) against the raw coequalizer, with the maps to
/// (P_n ∘ X)(w0) induced by the pushout-products.
inline IsoCheck check_compute1(const Operad& p, const AttachingComparison& a) {
  const std::string at = detail::attaching_where(p, a);
  if (!is_iso(a.canon_q))
    return {false, at + ": closed form (" + std::to_string(a.canon_q.src.size()) + ") vs raw coequalizer (" +
                       std::to_string(a.canon_q.tgt.size()) + ") not isomorphic"};
  if (!is_iso(a.canon_x)) return {false, at + ": colim P_n ⊗ X^n is not (P_n∘X)(w0)"};
  if (!(compose(a.raw_to_top, a.canon_q) == compose(a.canon_x, a.closed.cq_to_cx)))
    return {false, at + ": maps to (P_n∘X)(w0) differ"};
  return {};
}

/// The closed R⁻ -> R⁺ against the pushouts of the definition, built from
/// (P_n∘O)(w0) -> P_0(w0) and the raw coequalizer.
inline IsoCheck check_compute2(const Operad& p, const AttachingComparison& a) {
  const std::string at = detail::attaching_where(p, a);
  const RMaps& r = a.closed;
  if (!is_iso(a.canon0)) return {false, at + ": colim P_n ⊗ P_0^n is not (P_n∘O)(w0)"};
  if (!(compose(a.d0_to_p0, a.canon0) == r.c0_to_p0)) return {false, at + ": maps to P_0(w0) differ"};
  if (!(compose(a.d0_to_raw, a.canon0) == compose(a.canon_q, r.c0_to_cq))) return {false, at + ": maps into Q differ"};
  Pushout rm = pushout(a.d0_to_p0, a.d0_to_raw);
  Pushout rp = pushout(rm.leg_c, a.raw_to_top);
  Morphism phi_m, phi_p;
  try {
    phi_m = pushout_induced(r.r_minus, rm.leg_b, compose(rm.leg_c, a.canon_q));
    phi_p = pushout_induced(r.r_plus, compose(rp.leg_b, phi_m), compose(rp.leg_c, a.canon_x));
  } catch (const Error& e) {
    return {false, at + ": " + e.what()};
  }
  if (!is_iso(phi_m)) return {false, at + ": R⁻ differs from its definition"};
  if (!is_iso(phi_p)) return {false, at + ": R⁺ differs from its definition"};
  if (!(compose(phi_p, r.r_plus.leg_b) == compose(rp.leg_b, phi_m))) return {false, at + ": R⁻ -> R⁺ differs"};
  return {};
}

}  // namespace opkit
