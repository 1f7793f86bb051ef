#pragma once

// Enveloping operads P^A and enveloping categories.
//
// P^A(w) is presented as a colimit over operations of P with k <= K extra
// inputs filled by elements of A: the components are P(w, ū) ⊗ A(ū) for
// sorted extra colors ū, modulo relabeling of equal-colored extras and the
// relation "act on A first" = "compose in P" at a single extra slot.
// Composites may need more extras than K; they are computed in a larger
// presentation whose comparison map from the K-presentation must be an
// isomorphism.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include "opkit/algebra.hpp"

namespace opkit {

namespace detail {

inline std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// γ over an arbitrary leaf tuple. `slot` lists the slot colors, phi[i]
/// the slot of leaf i; the entry at slot j is labeled by its leaves in
/// the order they appear in `leaves`. Lands in P(out; leaves) labeled by
/// `leaves`.
inline Morphism gamma_tuple(const Operad& p, int out, const std::vector<int>& leaves, const std::vector<int>& phi,
                            const std::vector<int>& slot) {
  const Variant v = p.variant();
  const int k = static_cast<int>(leaves.size()), n = static_cast<int>(slot.size());
  Perm s = sort_perm(leaves);
  std::vector<int> sorted(k), phi_l(k);
  for (int i = 0; i < k; ++i) {
    sorted[s[i]] = leaves[i];
    phi_l[s[i]] = phi[i];
  }
  auto fib = fibers(phi, n);
  std::vector<Morphism> parts{identity(p.seq.at_tuple(out, slot))};
  for (int j = 0; j < n; ++j) {
    std::vector<int> g;
    for (int i : fib[j]) g.push_back(s[i]);
    std::vector<int> gs = g;
    std::sort(gs.begin(), gs.end());
    Perm pi(g.size());
    for (std::size_t a = 0; a < g.size(); ++a)
      pi[a] = static_cast<int>(std::find(gs.begin(), gs.end(), g[a]) - gs.begin());
    parts.push_back(p.seq.transport(slot[j], restrict_colors(leaves, fib[j]), pi));
  }
  Signature w{out, sorted};
  return compose(gamma_labeled(p, w, phi_l, slot), tensor_all(parts, v));
}

/// ⊗ flat -> ⊗ of groups: factor order[p] of `flat` goes to position p,
/// units are padded in where `groups` has them, then groups are formed.
inline Morphism arrange(const std::vector<Object>& flat, const std::vector<int>& order,
                        const std::vector<std::vector<Object>>& groups, Variant v) {
  Perm q(flat.size());
  for (std::size_t p = 0; p < order.size(); ++p) q[order[p]] = static_cast<int>(p);
  Morphism braid = permute_factors(flat, q, v);
  std::vector<Object> padded;
  for (const auto& g : groups) padded.insert(padded.end(), g.begin(), g.end());
  Morphism pad = same_data(braid.tgt, tensor_all(padded, v));
  return compose(permutation_inverse(flatten_tensor(groups, v)), compose(pad, braid));
}

}  // namespace detail

/// One entry P^A(w) with at most K extras.
struct EnvelopeEntry {
  Signature w;
  std::vector<std::vector<int>> extras;  // ū per component, sorted
  std::map<std::vector<int>, int> index;
  Coproduct raw;
  Quotient quo;

  const Object& obj() const { return quo.obj; }
  Morphism inj(const std::vector<int>& u) const { return compose(quo.proj, raw.inj[index.at(u)]); }
  bool has(const std::vector<int>& u) const { return index.count(u) > 0; }
};

namespace detail {

inline std::vector<Object> env_factors(const Operad& p, const Algebra& a, const Signature& w,
                                       const std::vector<int>& u) {
  std::vector<Object> fs{p.seq.at_tuple(w.out, concat(w.in, u))};
  for (int c : u) fs.push_back(a.carrier[c]);
  return fs;
}

/// [P(w, u), A(u)] -> [P(w, u'), A(u')] with u'[rho[i]] = u[i].
inline Morphism move_extras(const Operad& p, const Algebra& a, const Signature& w, const std::vector<int>& u,
                            const Perm& rho) {
  const Variant v = p.variant();
  const int n = w.arity(), k = static_cast<int>(u.size());
  Perm full(n + k);
  for (int i = 0; i < n; ++i) full[i] = i;
  for (int i = 0; i < k; ++i) full[n + i] = n + rho[i];
  auto fs = env_factors(p, a, w, u);
  std::vector<Morphism> parts{p.seq.transport(w.out, concat(w.in, u), full)};
  for (int c : u) parts.push_back(identity(a.carrier[c]));
  Perm q(k + 1);
  q[0] = 0;
  for (int i = 0; i < k; ++i) q[1 + i] = 1 + rho[i];
  Morphism t = tensor_all(parts, v);
  std::vector<Object> mid{parts[0].tgt};
  for (int c : u) mid.push_back(a.carrier[c]);
  return compose(permute_factors(mid, q, v), t);
}

inline std::vector<std::vector<int>> sorted_tuples(const ColorSet& w, int k) {
  std::vector<std::vector<int>> r;
  for (const auto& s : orbit_enumerate(w, k, 0)) r.push_back(s.in);
  return r;
}

}  // namespace detail

inline EnvelopeEntry envelope_entry(const Operad& p, const Algebra& a, const Signature& w, int extras) {
  const Variant v = p.variant();
  const ColorSet& w_ = p.colors();
  const int n = w.arity();
  if (!p.seq.exact_to(n + extras)) throw Error(ErrorKind::NonFinitary, "enveloping entry needs operations above the bound");
  EnvelopeEntry e;
  e.w = w;
  std::vector<Object> objs;
  for (int k = 0; k <= extras; ++k)
    for (const auto& u : detail::sorted_tuples(w_, k)) {
      e.index[u] = static_cast<int>(e.extras.size());
      e.extras.push_back(u);
      objs.push_back(tensor_all(detail::env_factors(p, a, w, u), v));
    }
  e.raw = coproduct(objs, v);
  std::vector<std::pair<Morphism, Morphism>> rel;
  for (std::size_t ci = 0; ci < e.extras.size(); ++ci) {
    const auto& u = e.extras[ci];
    const int k = static_cast<int>(u.size());
    if (objs[ci].is_initial()) continue;
    for (const auto& t : aut_group(u)->generators())
      rel.push_back({e.raw.inj[ci], compose(e.raw.inj[ci], detail::move_extras(p, a, w, u, t))});
    for (int j = 0; j < k; ++j) {
      if (j + 1 < k && u[j + 1] == u[j]) continue;  // one extra per color suffices
      for (int r = 0; k - 1 + r <= extras; ++r)
        for (const auto& q : orbit_enumerate(w_, r, u[j])) {
          Object pq = p.seq.value(q);
          if (pq.is_initial()) continue;
          std::vector<int> pre(u.begin(), u.begin() + j), post(u.begin() + j + 1, u.end());
          std::vector<Object> flat{p.seq.at_tuple(w.out, detail::concat(w.in, u))};
          std::vector<Object> as_pre, as_q, as_post;
          for (int c : pre) as_pre.push_back(a.carrier[c]);
          for (int c : q.in) as_q.push_back(a.carrier[c]);
          for (int c : post) as_post.push_back(a.carrier[c]);
          flat.insert(flat.end(), as_pre.begin(), as_pre.end());
          flat.push_back(pq);
          flat.insert(flat.end(), as_q.begin(), as_q.end());
          flat.insert(flat.end(), as_post.begin(), as_post.end());
          // act on A first
          std::vector<std::vector<Object>> g_act{{flat[0]}};
          for (const auto& o : as_pre) g_act.push_back({o});
          std::vector<Object> qg{pq};
          qg.insert(qg.end(), as_q.begin(), as_q.end());
          g_act.push_back(qg);
          for (const auto& o : as_post) g_act.push_back({o});
          std::vector<int> ident(flat.size());
          std::iota(ident.begin(), ident.end(), 0);
          std::vector<Morphism> act_parts{identity(flat[0])};
          for (const auto& o : as_pre) act_parts.push_back(identity(o));
          act_parts.push_back(algebra_action(p, a, q));
          for (const auto& o : as_post) act_parts.push_back(identity(o));
          Morphism act = compose(tensor_all(act_parts, v), detail::arrange(flat, ident, g_act, v));
          // compose in P
          const int pq_pos = 1 + static_cast<int>(pre.size());
          std::vector<int> order{0, pq_pos};
          for (int i = 1; i < static_cast<int>(flat.size()); ++i)
            if (i != pq_pos) order.push_back(i);
          std::vector<Object> head{flat[0]};
          for (int i = 0; i < n + k; ++i) head.push_back(i == n + j ? pq : Object::unit(v));
          std::vector<std::vector<Object>> g_cmp{head};
          for (int i = 1; i < static_cast<int>(flat.size()); ++i)
            if (i != pq_pos) g_cmp.push_back({flat[i]});
          std::vector<int> u2 = detail::concat(detail::concat(pre, q.in), post);
          std::vector<int> leaves = detail::concat(w.in, u2), phi, slot = detail::concat(w.in, u);
          for (int i = 0; i < n; ++i) phi.push_back(i);
          for (int i = 0; i < j; ++i) phi.push_back(n + i);
          for (int i = 0; i < r; ++i) phi.push_back(n + j);
          for (int i = j + 1; i < k; ++i) phi.push_back(n + i);
          std::vector<Morphism> hp{identity(flat[0])};
          for (int i = 0; i < n + k; ++i) hp.push_back(i == n + j ? identity(pq) : p.unit.at(slot[i]));
          std::vector<Morphism> cmp_parts{compose(detail::gamma_tuple(p, w.out, leaves, phi, slot), tensor_all(hp, v))};
          for (int c : u2) cmp_parts.push_back(identity(a.carrier[c]));
          Morphism cmp = compose(tensor_all(cmp_parts, v), detail::arrange(flat, order, g_cmp, v));
          Perm rho = sort_perm(u2);
          std::vector<int> u3 = u2;
          std::sort(u3.begin(), u3.end());
          cmp = compose(detail::move_extras(p, a, w, u2, rho), cmp);
          rel.push_back({compose(e.raw.inj[ci], act), compose(e.raw.inj[e.index.at(u3)], cmp)});
        }
    }
  }
  e.quo = quotient(e.raw.obj, rel);
  return e;
}

/// Aut(w) acting on P^A(w).
inline Morphism envelope_act(const Operad& p, const Algebra& a, const EnvelopeEntry& e, const Perm& sg) {
  const Variant v = p.variant();
  const int n = e.w.arity();
  std::vector<Morphism> comps;
  for (const auto& u : e.extras) {
    Perm full(n + u.size());
    for (int i = 0; i < n; ++i) full[i] = sg[i];
    for (std::size_t i = 0; i < u.size(); ++i) full[n + i] = n + static_cast<int>(i);
    std::vector<Morphism> parts{p.seq.transport(e.w.out, detail::concat(e.w.in, u), full)};
    for (int c : u) parts.push_back(identity(a.carrier[c]));
    comps.push_back(compose(e.inj(u), tensor_all(parts, v)));
  }
  return descend(e.quo, copair(e.raw, comps, e.obj()));
}

/// P^A(w) with K extras -> P^A(w) with K' >= K extras.
inline Morphism envelope_comparison(const EnvelopeEntry& small, const EnvelopeEntry& big) {
  std::vector<Morphism> comps;
  for (const auto& u : small.extras) comps.push_back(big.inj(u));
  return descend(small.quo, copair(small.raw, comps, big.obj()));
}

struct Envelope {
  Operad op;                                  // P^A
  int extras = 0;                             // K
  std::map<Signature, EnvelopeEntry> entries;
};

/// P^A up to arity `bound` presented with `extras` extra inputs; the
/// composition is computed through a presentation with enough extras for
/// every composite and throws NonFinitary if that presentation does not
/// agree with the K-presentation.
inline Envelope enveloping_operad(const Operad& p, const Algebra& a, int bound, int extras) {
  const Variant v = p.variant();
  const ColorSet& w_ = p.colors();
  const int big_extras = extras * (bound + 1);
  if (!p.seq.exact_to(bound + big_extras))
    throw Error(ErrorKind::NonFinitary, "enveloping operad needs P up to arity " + std::to_string(bound + big_extras));
  Envelope env;
  env.extras = extras;
  env.op.name = p.name + "^A";
  env.op.seq = SymSeq(w_, v, bound, true);
  for (const auto& w : all_signatures(w_, bound)) {
    EnvelopeEntry e = envelope_entry(p, a, w, extras);
    if (!e.obj().is_initial()) {
      auto aut = aut_group(w.in);
      env.op.seq.set(w, entry_from_function(e.obj(), aut, [&](const Perm& g) { return envelope_act(p, a, e, g); }));
    }
    env.entries.emplace(w, std::move(e));
  }
  for (int c = 0; c < w_.size(); ++c) {
    const EnvelopeEntry& e = env.entries.at(Signature{c, {c}});
    env.op.unit.emplace(c, compose(e.inj({}), p.unit.at(c)));
  }
  std::map<Signature, std::pair<EnvelopeEntry, Morphism>> big;  // with the inverse comparison
  auto big_entry = [&](const Signature& w) -> const std::pair<EnvelopeEntry, Morphism>& {
    auto it = big.find(w);
    if (it != big.end()) return it->second;
    EnvelopeEntry b = envelope_entry(p, a, w, big_extras);
    Morphism cmp = envelope_comparison(env.entries.at(w), b);
    if (!is_iso(cmp))
      throw Error(ErrorKind::NonFinitary, "presentation with " + std::to_string(extras) + " extras is not stable at " +
                                              signature_string(w, w_));
    return big.emplace(w, std::make_pair(std::move(b), inverse(cmp))).first->second;
  };
  for_each_gamma_class(env.op.seq, [&](const Signature& w, const DecClass& d, const std::vector<Object>& fs) {
    const int n = d.n();
    auto fib = detail::fibers(d.phi, n);
    std::vector<const EnvelopeEntry*> es{&env.entries.at(Signature{w.out, d.slot})};
    for (int j = 0; j < n; ++j)
      es.push_back(&env.entries.at(Signature{d.slot[j], detail::restrict_colors(w.in, fib[j])}));
    const auto& [be, back] = big_entry(w);
    std::vector<Morphism> rs, hs;
    std::vector<std::size_t> choice(es.size(), 0);
    while (true) {
      std::vector<std::vector<int>> us;
      for (std::size_t f = 0; f < es.size(); ++f) us.push_back(es[f]->extras[choice[f]]);
      std::vector<std::vector<Object>> groups;
      std::vector<Morphism> injs;
      bool zero = false;
      for (std::size_t f = 0; f < es.size(); ++f) {
        auto g = detail::env_factors(p, a, es[f]->w, us[f]);
        for (const auto& o : g) zero = zero || o.is_initial();
        groups.push_back(g);
        injs.push_back(es[f]->inj(us[f]));
      }
      if (!zero) {
        // flat: [P(t_top), A(ū_top), P(t_0), A(ū_0), ...]
        std::vector<Object> flat;
        for (const auto& g : groups) flat.insert(flat.end(), g.begin(), g.end());
        const int ktop = static_cast<int>(us[0].size());
        std::vector<int> order;
        std::vector<int> p_pos, a_pos;
        int pos = 0;
        for (const auto& g : groups) {
          p_pos.push_back(pos);
          for (std::size_t i = 1; i < g.size(); ++i) a_pos.push_back(pos + static_cast<int>(i));
          pos += static_cast<int>(g.size());
        }
        order = p_pos;
        order.insert(order.end(), a_pos.begin(), a_pos.end());
        std::vector<Object> head;
        for (std::size_t f = 0; f < groups.size(); ++f) head.push_back(groups[f][0]);
        for (int i = 0; i < ktop; ++i) head.push_back(Object::unit(v));
        std::vector<std::vector<Object>> g_out{head};
        for (int i : a_pos) g_out.push_back({flat[i]});
        std::vector<int> slot = detail::concat(d.slot, us[0]);
        std::vector<int> leaves = w.in, phi = d.phi, ext;
        ext = us[0];
        for (int i = 0; i < ktop; ++i) phi.push_back(n + i);
        for (int j = 0; j < n; ++j) {
          ext = detail::concat(ext, us[1 + j]);
          for (std::size_t i = 0; i < us[1 + j].size(); ++i) phi.push_back(j);
        }
        leaves = detail::concat(leaves, ext);
        // gamma_tuple labels fiber j by its leaves in order: the real
        // leaves of fiber j, then its extras; that is the labeling of t_j.
        std::vector<Morphism> hp{identity(head[0])};
        for (int j = 0; j < n; ++j) hp.push_back(identity(head[1 + j]));
        for (int i = 0; i < ktop; ++i) hp.push_back(p.unit.at(us[0][i]));
        std::vector<Morphism> parts{compose(detail::gamma_tuple(p, w.out, leaves, phi, slot), tensor_all(hp, v))};
        for (int c : ext) parts.push_back(identity(a.carrier[c]));
        Morphism h = compose(tensor_all(parts, v), detail::arrange(flat, order, g_out, v));
        Perm rho = sort_perm(ext);
        std::vector<int> sorted_ext = ext;
        std::sort(sorted_ext.begin(), sorted_ext.end());
        h = compose(detail::move_extras(p, a, w, ext, rho), h);
        h = compose(back, compose(be.inj(sorted_ext), h));
        rs.push_back(compose(tensor_all(injs, v), permutation_inverse(flatten_tensor(groups, v))));
        hs.push_back(h);
      }
      std::size_t f = 0;
      while (f < es.size() && ++choice[f] == es[f]->extras.size()) choice[f++] = 0;
      if (f == es.size()) break;
    }
    Object src = tensor_all(fs, v);
    env.op.gamma.emplace(GammaKey{w, d.slot, d.phi}, descend_epi(rs, hs, src, env.op.seq.value(w)));
  });
  return env;
}

/// P -> P^A: operations with no extra inputs.
inline OperadMap envelope_inclusion(const Operad& p, const Envelope& env) {
  OperadMap f;
  for (const auto& [w, e] : env.entries)
    if (!p.seq.value(w).is_initial()) f.comp.emplace(w, e.inj({}));
  return f;
}

/// P^{P_0}(w) -> P(w) by composing the extras with nullary operations.
inline Morphism collapse_nullary(const Operad& p, const EnvelopeEntry& e) {
  std::vector<Morphism> comps;
  const int n = e.w.arity();
  for (const auto& u : e.extras) {
    std::vector<int> slot = detail::concat(e.w.in, u), phi(n);
    std::iota(phi.begin(), phi.end(), 0);
    std::vector<Morphism> parts{identity(p.seq.at_tuple(e.w.out, slot))};
    for (int i = 0; i < n; ++i) parts.push_back(p.unit.at(e.w.in[i]));
    for (int c : u) parts.push_back(identity(p.seq.value(Signature{c, {}})));
    comps.push_back(compose(detail::gamma_tuple(p, e.w.out, e.w.in, phi, slot), tensor_all(parts, p.variant())));
  }
  return descend(e.quo, copair(e.raw, comps, p.seq.value(e.w)));
}

/// P^{P_0} ≅ P: the inclusion is an isomorphism in arity <= seq_bound
/// (presented with `extras` extras), and an operad map up to the bound of
/// the given envelope.
inline Report check_initial_envelope(const Operad& p, int seq_bound, int extras, const Envelope* env) {
  Report r;
  Algebra a0 = initial_algebra(p);
  for (const auto& w : all_signatures(p.colors(), seq_bound)) {
    EnvelopeEntry e = envelope_entry(p, a0, w, extras);
    Morphism inc = p.seq.value(w).is_initial() ? zero_map(p.seq.value(w), e.obj()) : e.inj({});
    Morphism col = collapse_nullary(p, e);
    if (!is_iso(inc)) r.fail("P -> P^{P_0} is not an isomorphism at " + signature_string(w, p.colors()));
    else if (!(compose(col, inc) == identity(p.seq.value(w))))
      r.fail("collapse does not invert the inclusion at " + signature_string(w, p.colors()));
  }
  if (env) {
    Report m = check_operad_map(p, env->op, envelope_inclusion(p, *env), env->op.bound());
    for (const auto& f : m.failures) r.fail(f);
  }
  return r;
}

/// The category with objects the colors and hom(a, b) = P^A(b; a).
inline EnrichedCategory enveloping_category(const Envelope& env) { return underlying_category(env.op); }

// ---------------------------------------------------------------------------
// Exhaustive checks of the universal properties on tiny FinSet instances

struct EnrichedFunctor {
  std::vector<Object> value;                        // per object
  std::map<std::pair<int, int>, Morphism> act;      // hom(a,b) ⊗ F(a) -> F(b)
};

inline Morphism functor_action(const EnrichedCategory& c, const EnrichedFunctor& f, int a, int b) {
  auto it = f.act.find({a, b});
  if (it != f.act.end()) return it->second;
  return zero_map(tensor(c.hom_of(a, b), f.value[a]), f.value[b]);
}

inline Report check_functor(const EnrichedCategory& c, const EnrichedFunctor& f) {
  Report r;
  const int nc = c.objects.size();
  const Variant v = c.variant;
  for (int a = 0; a < nc; ++a) {
    Morphism u = compose(functor_action(c, f, a, a), tensor(c.id.at(a), identity(f.value[a])));
    if (!(u == same_data(u.src, f.value[a]))) r.fail("identity acts nontrivially at " + c.objects.names[a]);
  }
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b)
      for (int d = 0; d < nc; ++d) {
        Object hbd = c.hom_of(b, d), hab = c.hom_of(a, b);
        if (hbd.is_initial() || hab.is_initial()) continue;
        // (hbd ⊗ hab) ⊗ F(a): compose first, or act twice
        Morphism l = compose(functor_action(c, f, a, d), tensor(c.comp.at({a, b, d}), identity(f.value[a])));
        Morphism rr = compose(functor_action(c, f, b, d),
                              compose(tensor(identity(hbd), functor_action(c, f, a, b)),
                                      permutation_inverse(flatten_tensor({{hbd}, {hab, f.value[a]}}, v))));
        rr = compose(rr, flatten_tensor({{hbd, hab}, {f.value[a]}}, v));
        if (!(l == rr))
          r.fail("functor does not respect composition " + c.objects.names[a] + " -> " + c.objects.names[b] +
                 " -> " + c.objects.names[d]);
      }
  return r;
}

namespace detail {

/// Every map from a set of size s to a set of size t, as tables.
inline std::vector<std::vector<int>> all_tables(int s, int t) {
  std::vector<std::vector<int>> out;
  if (s > 0 && t == 0) return out;
  std::vector<int> tab(s, 0);
  while (true) {
    out.push_back(tab);
    int i = 0;
    while (i < s && ++tab[i] == t) tab[i++] = 0;
    if (i == s) break;
  }
  return out;
}

inline std::vector<std::vector<int>> all_sizes(int colors, int max_size) {
  std::vector<std::vector<int>> out;
  std::vector<int> sz(colors, 0);
  while (true) {
    out.push_back(sz);
    int i = 0;
    while (i < colors && ++sz[i] > max_size) sz[i++] = 0;
    if (i == colors) break;
  }
  return out;
}

constexpr long kEnumerationLimit = 2000000;

/// Staged search: `slots(n)` lists (source, target) objects to fill at
/// arity n, `put(x, n, i, map)` stores a choice and `ok(x, n)` prunes.
template <class T, class Slots, class Put, class Ok>
std::vector<T> staged_search(std::vector<T> partial, int bound, Slots&& slots, Put&& put, Ok&& ok) {
  long work = 0;
  for (int n = 0; n <= bound; ++n) {
    std::vector<T> next;
    for (auto& x : partial) {
      auto sl = slots(x, n);
      std::vector<std::vector<std::vector<int>>> choices;
      for (const auto& [src, tgt] : sl) choices.push_back(all_tables(src.size(), tgt.size()));
      bool empty = false;
      for (const auto& c : choices) empty = empty || c.empty();
      if (empty) continue;
      std::vector<std::size_t> pick(sl.size(), 0);
      while (true) {
        if (++work > kEnumerationLimit) throw Error(ErrorKind::NonFinitary, "enumeration too large");
        T y = x;
        for (std::size_t i = 0; i < sl.size(); ++i)
          put(y, n, i, Morphism::from_table(sl[i].first, sl[i].second, choices[i][pick[i]]));
        if (ok(y, n)) next.push_back(std::move(y));
        std::size_t i = 0;
        while (i < sl.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
        if (i == sl.size()) break;
      }
    }
    partial = std::move(next);
  }
  return partial;
}

}  // namespace detail

/// Every FinSet P-algebra with carriers of size <= max_size, checked up to
/// arity `bound`.
inline std::vector<Algebra> enumerate_algebras(const Operad& p, int max_size, int bound) {
  if (p.variant() != Variant::FinSet) throw Error(ErrorKind::WrongVariant, "enumeration needs a set operad");
  bound = std::min(bound, p.bound());
  std::vector<Algebra> start;
  for (const auto& sz : detail::all_sizes(p.colors().size(), max_size)) {
    Algebra a;
    for (int s : sz) a.carrier.push_back(Object::finset(s));
    start.push_back(a);
  }
  std::map<int, std::vector<Signature>> by_arity;
  for (const auto& w : all_signatures(p.colors(), bound))
    if (!p.seq.value(w).is_initial()) by_arity[w.arity()].push_back(w);
  return detail::staged_search(
      start, bound,
      [&](const Algebra& a, int n) {
        std::vector<std::pair<Object, Object>> sl;
        for (const auto& w : by_arity[n])
          sl.push_back({tensor_all(detail::action_factors(p, w, detail::carrier_tuple(a.carrier, w.in)), Variant::FinSet),
                        a.carrier[w.out]});
        return sl;
      },
      [&](Algebra& a, int n, std::size_t i, Morphism f) { a.act.insert_or_assign(by_arity[n][i], std::move(f)); },
      [&](const Algebra& a, int n) { return n == 0 || check_algebra(p, a, n).ok; });
}

/// Every module over `a` with carriers of size <= max_size, checked up to
/// arity `bound`. Action tables are chosen at the first position of each
/// color; the other positions follow from equivariance.
inline std::vector<AlgebraModule> enumerate_modules(const Operad& p, const Algebra& a, int max_size, int bound) {
  if (p.variant() != Variant::FinSet) throw Error(ErrorKind::WrongVariant, "enumeration needs a set operad");
  bound = std::min(bound, p.bound());
  std::vector<AlgebraModule> start;
  for (const auto& sz : detail::all_sizes(p.colors().size(), max_size)) {
    AlgebraModule m;
    for (int s : sz) m.carrier.push_back(Object::finset(s));
    start.push_back(m);
  }
  std::map<int, std::vector<std::pair<Signature, int>>> by_arity;
  for (const auto& w : all_signatures(p.colors(), bound)) {
    if (p.seq.value(w).is_initial()) continue;
    for (int k = 0; k < w.arity(); ++k)
      if (k == 0 || w.in[k - 1] != w.in[k]) by_arity[w.arity()].push_back({w, k});
  }
  auto src_of = [&](const AlgebraModule& m, const Signature& w, int k) {
    return tensor_all(detail::action_factors(p, w, module_inputs(a, m, w, k)), Variant::FinSet);
  };
  return detail::staged_search(
      start, bound,
      [&](const AlgebraModule& m, int n) {
        std::vector<std::pair<Object, Object>> sl;
        for (const auto& [w, k] : by_arity[n]) sl.push_back({src_of(m, w, k), m.carrier[w.out]});
        return sl;
      },
      [&](AlgebraModule& m, int n, std::size_t i, Morphism f) {
        const auto& [w, k0] = by_arity[n][i];
        for (int k = k0 + 1; k < w.arity() && w.in[k] == w.in[k0]; ++k) {
          Perm g(w.arity());
          std::iota(g.begin(), g.end(), 0);
          std::swap(g[k0], g[k]);
          Morphism r = detail::action_relabel(p, w, module_inputs(a, m, w, k0), g);
          m.act.insert_or_assign({w, k}, compose(f, inverse(r)));
        }
        m.act.insert_or_assign({w, k0}, std::move(f));
      },
      [&](const AlgebraModule& m, int n) { return n == 0 || check_module(p, a, m, n).ok; });
}

/// Every functor out of `c` with values of size <= max_size.
inline std::vector<EnrichedFunctor> enumerate_functors(const EnrichedCategory& c, int max_size) {
  if (c.variant != Variant::FinSet) throw Error(ErrorKind::WrongVariant, "enumeration needs a set category");
  std::vector<EnrichedFunctor> start;
  for (const auto& sz : detail::all_sizes(c.objects.size(), max_size)) {
    EnrichedFunctor f;
    for (int s : sz) f.value.push_back(Object::finset(s));
    start.push_back(f);
  }
  std::vector<std::pair<int, int>> homs;
  for (const auto& [ab, h] : c.hom) homs.push_back(ab);
  return detail::staged_search(
      start, 0,
      [&](const EnrichedFunctor& f, int) {
        std::vector<std::pair<Object, Object>> sl;
        for (const auto& [x, y] : homs) sl.push_back({tensor(c.hom_of(x, y), f.value[x]), f.value[y]});
        return sl;
      },
      [&](EnrichedFunctor& f, int, std::size_t i, Morphism m) { f.act.insert_or_assign(homs[i], std::move(m)); },
      [&](const EnrichedFunctor& f, int) { return check_functor(c, f).ok; });
}

/// A module as a functor out of the enveloping category: [p; a..] acts on
/// m by the module action with m in the first input of p.
inline EnrichedFunctor module_to_functor(const Operad& p, const Algebra& a, const Envelope& env,
                                         const AlgebraModule& m) {
  const Variant v = p.variant();
  const int nc = p.colors().size();
  EnrichedFunctor f;
  f.value = m.carrier;
  for (int c = 0; c < nc; ++c)
    for (int d = 0; d < nc; ++d) {
      const EnvelopeEntry& e = env.entries.at(Signature{d, {c}});
      if (e.obj().is_initial()) continue;
      std::vector<Morphism> rs, hs;
      for (const auto& u : e.extras) {
        std::vector<int> t = detail::concat({c}, u);
        Signature ws = canonical(d, t);
        Perm s = sort_perm(t);
        std::vector<Object> fs{p.seq.at_tuple(d, t), m.carrier[c]};
        for (int x : u) fs.push_back(a.carrier[x]);
        Perm q(fs.size());
        q[0] = 0;
        for (std::size_t i = 0; i < t.size(); ++i) q[1 + i] = 1 + s[i];
        std::vector<Object> grouped_a{fs[0]};
        for (int x : u) grouped_a.push_back(a.carrier[x]);
        // [[P, A..], [M]] -> [P, A.., M] -> [P, M, A..] -> sorted inputs
        std::vector<Object> pam = grouped_a;
        pam.push_back(m.carrier[c]);
        std::vector<int> order{0, static_cast<int>(u.size()) + 1};
        for (std::size_t i = 0; i < u.size(); ++i) order.push_back(1 + static_cast<int>(i));
        Morphism h = compose(permute_factors(fs, q, v), detail::arrange(pam, order, {fs}, v));
        h = compose(module_action(p, a, m, ws, s[0]), compose(h, flatten_tensor({grouped_a, {m.carrier[c]}}, v)));
        rs.push_back(tensor(e.inj(u), identity(m.carrier[c])));
        hs.push_back(h);
      }
      f.act.emplace(std::make_pair(c, d), descend_epi(rs, hs, tensor(e.obj(), m.carrier[c]), m.carrier[d]));
    }
  return f;
}

/// A functor out of the enveloping category as a module, up to arity
/// `bound` (at most one more than the number of extras).
inline AlgebraModule functor_to_module(const Operad& p, const Algebra& a, const Envelope& env,
                                       const EnrichedFunctor& f, int bound) {
  const Variant v = p.variant();
  if (bound - 1 > env.extras) throw Error(ErrorKind::NonFinitary, "functor_to_module needs more extras");
  EnrichedCategory cat = enveloping_category(env);
  AlgebraModule m;
  m.carrier = f.value;
  for (const auto& w : all_signatures(p.colors(), bound)) {
    if (p.seq.value(w).is_initial()) continue;
    for (int k = 0; k < w.arity(); ++k) {
      const int n = w.arity(), c = w.in[k];
      std::vector<int> u;
      for (int i = 0; i < n; ++i)
        if (i != k) u.push_back(w.in[i]);
      Perm pi(n);
      for (int i = 0; i < n; ++i) pi[i] = i == k ? 0 : (i < k ? i + 1 : i);
      auto in = module_inputs(a, m, w, k);
      auto fs = detail::action_factors(p, w, in);
      // [P, in..] -> [P, A.., M]
      std::vector<int> order{0};
      for (int i = 0; i < n; ++i)
        if (i != k) order.push_back(1 + i);
      order.push_back(1 + k);
      std::vector<Object> pa{p.seq.value(w)};
      for (int x : u) pa.push_back(a.carrier[x]);
      Morphism move = detail::arrange(fs, order, {pa, {m.carrier[c]}}, v);
      std::vector<Morphism> tp{p.seq.transport(w.out, w.in, pi)};
      for (int x : u) tp.push_back(identity(a.carrier[x]));
      const EnvelopeEntry& e = env.entries.at(Signature{w.out, {c}});
      Morphism into = compose(e.inj(u), tensor_all(tp, v));
      Morphism h = compose(functor_action(cat, f, c, w.out), compose(tensor(into, identity(m.carrier[c])), move));
      m.act.emplace(std::make_pair(w, k), h);
    }
  }
  return m;
}

/// A P^A-algebra as a P-algebra with a map from A.
inline std::pair<Algebra, std::vector<Morphism>> envelope_to_under(const Operad& p, const Algebra& a,
                                                                   const Envelope& env, const Algebra& b) {
  const Variant v = p.variant();
  Algebra r = restrict_algebra(p, env.op, envelope_inclusion(p, env), b, env.op.bound());
  std::vector<Morphism> f;
  for (int c = 0; c < p.colors().size(); ++c) {
    const EnvelopeEntry& e = env.entries.at(Signature{c, {}});
    Morphism pt = compose(e.inj({c}), compose(tensor(p.unit.at(c), identity(a.carrier[c])),
                                              same_data(a.carrier[c], tensor(Object::unit(v), a.carrier[c]))));
    f.push_back(compose(algebra_action(env.op, b, Signature{c, {}}), pt));
  }
  return {r, f};
}

namespace detail {

inline std::vector<int> algebra_key(const Operad& p, const Algebra& a, int bound) {
  std::vector<int> k;
  for (const auto& c : a.carrier) k.push_back(c.size());
  for (const auto& w : all_signatures(p.colors(), bound)) {
    Morphism f = algebra_action(p, a, w);
    k.push_back(-1);
    k.insert(k.end(), f.table.begin(), f.table.end());
  }
  return k;
}

inline std::vector<int> module_key(const Operad& p, const Algebra& a, const AlgebraModule& m, int bound) {
  std::vector<int> k;
  for (const auto& c : m.carrier) k.push_back(c.size());
  for (const auto& w : all_signatures(p.colors(), bound))
    for (int i = 0; i < w.arity(); ++i) {
      Morphism f = module_action(p, a, m, w, i);
      k.push_back(-1);
      k.insert(k.end(), f.table.begin(), f.table.end());
    }
  return k;
}

inline std::vector<int> functor_key(const EnrichedCategory& c, const EnrichedFunctor& f) {
  std::vector<int> k;
  for (const auto& o : f.value) k.push_back(o.size());
  for (int x = 0; x < c.objects.size(); ++x)
    for (int y = 0; y < c.objects.size(); ++y) {
      Morphism m = functor_action(c, f, x, y);
      k.push_back(-1);
      k.insert(k.end(), m.table.begin(), m.table.end());
    }
  return k;
}

}  // namespace detail

struct UniversalCount {
  Report report;
  int left = 0, right = 0;  // sizes of the two enumerated sides
};

/// P^A-algebras against P-algebras under A, for an exact operad with
/// operations in arity <= bound and carriers of size <= max_size. The
/// envelope is built from `presented` when given, else from A.
inline UniversalCount check_envelope_universal(const Operad& p, const Algebra& a, int max_size,
                                              const Algebra* presented = nullptr) {
  UniversalCount out;
  Report& r = out.report;
  const int bound = p.bound();
  if (p.seq.truncated) throw Error(ErrorKind::NonFinitary, "universal check needs an exact operad");
  Envelope env = enveloping_operad(p, presented ? *presented : a, bound, bound);
  auto lhs = enumerate_algebras(env.op, max_size, bound);
  std::set<std::vector<int>> under;
  for (const auto& b : enumerate_algebras(p, max_size, bound)) {
    std::vector<std::vector<std::vector<int>>> maps;
    for (int c = 0; c < p.colors().size(); ++c) maps.push_back(detail::all_tables(a.carrier[c].size(), b.carrier[c].size()));
    std::vector<std::size_t> pick(maps.size(), 0);
    bool empty = false;
    for (const auto& m : maps) empty = empty || m.empty();
    while (!empty) {
      std::vector<Morphism> f;
      std::vector<int> key = detail::algebra_key(p, b, bound);
      for (std::size_t c = 0; c < maps.size(); ++c) {
        f.push_back(Morphism::from_table(a.carrier[c], b.carrier[c], maps[c][pick[c]]));
        key.push_back(-2);
        key.insert(key.end(), maps[c][pick[c]].begin(), maps[c][pick[c]].end());
      }
      if (check_algebra_map(p, a, b, f, bound).ok) under.insert(key);
      std::size_t c = 0;
      while (c < maps.size() && ++pick[c] == maps[c].size()) pick[c++] = 0;
      if (c == maps.size()) break;
    }
  }
  out.left = static_cast<int>(lhs.size());
  out.right = static_cast<int>(under.size());
  std::set<std::vector<int>> image;
  for (const auto& b : lhs) {
    Algebra pb;
    std::vector<Morphism> f;
    try {
      std::tie(pb, f) = envelope_to_under(p, a, env, b);
    } catch (const Error& e) {
      r.fail(std::string("restriction of a P^A-algebra fails: ") + e.what());
      continue;
    }
    if (!check_algebra(p, pb, bound).ok || !check_algebra_map(p, a, pb, f, bound).ok) {
      r.fail("a P^A-algebra does not restrict to an algebra under A");
      continue;
    }
    std::vector<int> key = detail::algebra_key(p, pb, bound);
    for (const auto& m : f) {
      key.push_back(-2);
      key.insert(key.end(), m.table.begin(), m.table.end());
    }
    if (!under.count(key)) r.fail("restriction lands outside the enumerated algebras under A");
    if (!image.insert(key).second) r.fail("two P^A-algebras restrict to the same algebra under A");
  }
  if (out.left != out.right)
    r.fail(std::to_string(out.left) + " P^A-algebras vs " + std::to_string(out.right) + " algebras under A");
  return out;
}

/// Modules over A against functors out of the enveloping category, with
/// modules checked up to arity `bound`.
inline UniversalCount check_module_functor(const Operad& p, const Algebra& a, int max_size, int bound) {
  UniversalCount out;
  Report& r = out.report;
  Envelope env = enveloping_operad(p, a, 1, bound - 1);
  EnrichedCategory cat = enveloping_category(env);
  auto mods = enumerate_modules(p, a, max_size, bound);
  auto funs = enumerate_functors(cat, max_size);
  out.left = static_cast<int>(mods.size());
  out.right = static_cast<int>(funs.size());
  std::set<std::vector<int>> fkeys;
  for (const auto& f : funs) fkeys.insert(detail::functor_key(cat, f));
  for (const auto& m : mods) {
    EnrichedFunctor f = module_to_functor(p, a, env, m);
    if (!check_functor(cat, f).ok) {
      r.fail("a module does not give a functor");
      continue;
    }
    if (!fkeys.count(detail::functor_key(cat, f))) r.fail("module lands outside the enumerated functors");
    AlgebraModule back = functor_to_module(p, a, env, f, bound);
    if (detail::module_key(p, a, back, bound) != detail::module_key(p, a, m, bound))
      r.fail("module -> functor -> module is not the identity");
  }
  for (const auto& f : funs) {
    AlgebraModule m = functor_to_module(p, a, env, f, bound);
    if (!check_module(p, a, m, bound).ok) {
      r.fail("a functor does not give a module");
      continue;
    }
    if (detail::functor_key(cat, module_to_functor(p, a, env, m)) != detail::functor_key(cat, f))
      r.fail("functor -> module -> functor is not the identity");
  }
  if (out.left != out.right)
    r.fail(std::to_string(out.left) + " modules vs " + std::to_string(out.right) + " functors");
  return out;
}

}  // namespace opkit
