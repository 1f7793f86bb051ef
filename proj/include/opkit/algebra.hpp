#pragma once

// Algebras over operads, augmentations and modules over an algebra.
// Action maps have source P(w) ⊗ V_1 ⊗ ... ⊗ V_n (left-associated).

#include <map>
#include <memory>
#include <vector>

#include "opkit/operad.hpp"

namespace opkit {

struct Algebra {
  std::vector<Object> carrier;            // per color
  std::map<Signature, Morphism> act;      // P(w) ⊗ A(w_1) ⊗ ... -> A(w_0)
};

namespace detail {

inline std::vector<Object> action_factors(const Operad& p, const Signature& w, const std::vector<Object>& in) {
  std::vector<Object> fs{p.seq.value(w)};
  fs.insert(fs.end(), in.begin(), in.end());
  return fs;
}

inline std::vector<Object> carrier_tuple(const std::vector<Object>& carrier, const std::vector<int>& cols) {
  std::vector<Object> r;
  for (int c : cols) r.push_back(carrier[c]);
  return r;
}

/// Map [P, V_1..V_n] -> [P, V'_1..V'_n] for sigma in Aut(w): P(sigma) and
/// factor i moved to sigma(i).
inline Morphism action_relabel(const Operad& p, const Signature& w, const std::vector<Object>& in, const Perm& sg) {
  const Variant v = p.variant();
  auto fs = action_factors(p, w, in);
  std::vector<Morphism> parts{p.seq.act(w, sg)};
  for (const auto& o : in) parts.push_back(identity(o));
  Perm q(fs.size());
  q[0] = 0;
  for (std::size_t i = 0; i < in.size(); ++i) q[1 + i] = 1 + sg[i];
  return compose(permute_factors(fs, q, v), tensor_all(parts, v));
}

}  // namespace detail

inline Morphism algebra_action(const Operad& p, const Algebra& a, const Signature& w) {
  auto it = a.act.find(w);
  if (it != a.act.end()) return it->second;
  Object src = tensor_all(detail::action_factors(p, w, detail::carrier_tuple(a.carrier, w.in)), p.variant());
  Object tgt = a.carrier[w.out];
  if (!src.is_initial()) throw Error(ErrorKind::InvalidAlgebra, "missing action at " + signature_string(w, p.colors()));
  return zero_map(src, tgt);
}

namespace detail {

/// Shared associativity check for algebras and modules. `leaf_obj[i]` is
/// the object at leaf i, `act_at(sig, k)` the action with the special
/// factor at k (or -1), `special` the special leaf (or -1).
template <class ActAt>
void check_action_assoc(const Operad& p, const Signature& u, const std::vector<Object>& leaf_obj, int special,
                        ActAt&& act_at, int bound, Report& r, const std::string& what) {
  const Variant v = p.variant();
  const int k = u.arity();
  for (int n = 0; n <= bound; ++n)
    for (const auto& d : dec_classes(p.colors(), u, n)) {
      auto fs = contribution_factors(p.seq, p.seq, u.out, u.in, d.phi, d.slot);
      bool zero = false;
      for (const auto& f : fs) zero = zero || f.is_initial();
      if (zero) continue;
      std::vector<std::vector<Object>> groups{fs};
      for (const auto& o : leaf_obj) groups.push_back({o});
      Morphism to_grouped = permutation_inverse(flatten_tensor(groups, v));
      std::vector<Morphism> left{gamma_labeled(p, u, d.phi, d.slot)};
      for (const auto& o : leaf_obj) left.push_back(identity(o));
      Morphism lhs = compose(act_at(u, special), compose(tensor_all(left, v), to_grouped));
      auto fib = fibers(d.phi, n);
      std::vector<Morphism> inner{identity(fs[0])};
      int special_slot = special >= 0 ? d.phi[special] : -1;
      for (int j = 0; j < n; ++j) {
        Signature sj{d.slot[j], restrict_colors(u.in, fib[j])};
        int pos = -1;
        if (j == special_slot)
          pos = static_cast<int>(std::find(fib[j].begin(), fib[j].end(), special) - fib[j].begin());
        inner.push_back(act_at(sj, pos));
      }
      Signature top{u.out, d.slot};
      Morphism rhs = compose(act_at(top, special_slot), compose(tensor_all(inner, v), regroup_tree(fs, leaf_obj, fib, v)));
      if (!(lhs == rhs)) {
        r.fail(what + " associativity fails at " + signature_string(u, p.colors()) + " through " + std::to_string(n) +
               " slots: " + first_difference(lhs, rhs));
        return;
      }
    }
  (void)k;
}

}  // namespace detail

/// Equivariance, unitality and associativity of the action up to `bound`.
inline Report check_algebra(const Operad& p, const Algebra& a, int bound) {
  Report r;
  bound = std::min(bound, p.bound());
  const ColorSet& w_ = p.colors();
  if (static_cast<int>(a.carrier.size()) != w_.size()) {
    r.fail("carrier has the wrong number of colors");
    return r;
  }
  std::vector<Signature> sigs = all_signatures(w_, bound);
  for (const auto& w : sigs) {
    Morphism f;
    try {
      f = algebra_action(p, a, w);
    } catch (const Error& e) {
      r.fail(e.what());
      continue;
    }
    auto in = detail::carrier_tuple(a.carrier, w.in);
    Object src = tensor_all(detail::action_factors(p, w, in), p.variant());
    if (!same_object(f.src, src) || !same_object(f.tgt, a.carrier[w.out])) {
      r.fail("action has the wrong shape at " + signature_string(w, w_));
      continue;
    }
    if (!is_chain_map(f)) r.fail("action is not a chain map at " + signature_string(w, w_));
    for (const auto& g : aut_group(w.in)->generators())
      if (!(compose(f, detail::action_relabel(p, w, in, g)) == f))
        r.fail("action not equivariant at " + signature_string(w, w_) + ": " +
               first_difference(compose(f, detail::action_relabel(p, w, in, g)), f));
  }
  if (!r.ok) return r;
  for (int c = 0; c < w_.size(); ++c) {
    Signature cc{c, {c}};
    Morphism l = compose(algebra_action(p, a, cc), tensor(p.unit.at(c), identity(a.carrier[c])));
    if (!(l == same_data(l.src, a.carrier[c]))) r.fail("unit acts nontrivially on color " + w_.names[c]);
  }
  auto act_at = [&](const Signature& s, int) { return algebra_action(p, a, s); };
  for (const auto& u : sigs) {
    detail::check_action_assoc(p, u, detail::carrier_tuple(a.carrier, u.in), -1, act_at, bound, r, "algebra");
    if (!r.ok) return r;
  }
  return r;
}

/// P_0 with the action by operad composition.
inline Algebra initial_algebra(const Operad& p) {
  Algebra a;
  a.carrier = nullary_part(p);
  for (const auto& w : all_signatures(p.colors(), p.bound())) {
    if (p.seq.value(w).is_initial()) continue;
    Signature out{w.out, {}};
    if (p.seq.value(out).is_initial()) {
      Object src = tensor_all(detail::action_factors(p, w, detail::carrier_tuple(a.carrier, w.in)), p.variant());
      if (!src.is_initial()) throw Error(ErrorKind::StructureMismatch, "initial algebra: composite lands in an empty entry");
      continue;
    }
    a.act.emplace(w, gamma_labeled(p, out, {}, w.in));
  }
  return a;
}

inline Report check_algebra_map(const Operad& p, const Algebra& a, const Algebra& b, const std::vector<Morphism>& f,
                                int bound) {
  Report r;
  const Variant v = p.variant();
  for (int c = 0; c < p.colors().size(); ++c)
    if (!same_object(f[c].src, a.carrier[c]) || !same_object(f[c].tgt, b.carrier[c])) r.fail("map has the wrong shape");
  if (!r.ok) return r;
  for (const auto& w : all_signatures(p.colors(), std::min(bound, p.bound()))) {
    std::vector<Morphism> parts{identity(p.seq.value(w))};
    for (int c : w.in) parts.push_back(f[c]);
    Morphism lhs = compose(f[w.out], algebra_action(p, a, w));
    Morphism rhs = compose(algebra_action(p, b, w), tensor_all(parts, v));
    if (!(lhs == rhs)) r.fail("not an algebra map at " + signature_string(w, p.colors()) + ": " + first_difference(lhs, rhs));
  }
  return r;
}

struct AugmentedAlgebra {
  Algebra alg;
  std::vector<Morphism> aug;  // A(c) -> P_0(c)
};

inline Report check_augmented(const Operad& p, const AugmentedAlgebra& a, int bound) {
  Report r = check_algebra(p, a.alg, bound);
  if (!r.ok) return r;
  return check_algebra_map(p, a.alg, initial_algebra(p), a.aug, bound);
}

/// Restriction of an algebra along an operad map.
inline Algebra restrict_algebra(const Operad& src, const Operad& tgt, const OperadMap& f, const Algebra& a, int bound) {
  Algebra r;
  r.carrier = a.carrier;
  const Variant v = src.variant();
  for (const auto& w : all_signatures(src.colors(), std::min(bound, src.bound()))) {
    if (src.seq.value(w).is_initial()) continue;
    std::vector<Morphism> parts{f.at(src, tgt, w)};
    for (int c : w.in) parts.push_back(identity(a.carrier[c]));
    r.act.emplace(w, compose(algebra_action(tgt, a, w), tensor_all(parts, v)));
  }
  return r;
}

/// Set-level algebra from an element rule: rule(w, op, inputs) is the
/// output element for operation `op` of P(w) applied to `inputs`.
template <class Rule>
Algebra set_algebra(const Operad& p, const std::vector<int>& sizes, Rule&& rule, int bound) {
  if (p.variant() != Variant::FinSet) throw Error(ErrorKind::WrongVariant, "set_algebra needs a set operad");
  Algebra a;
  for (int s : sizes) a.carrier.push_back(Object::finset(s));
  for (const auto& w : all_signatures(p.colors(), std::min(bound, p.bound()))) {
    Object pw = p.seq.value(w);
    if (pw.is_initial()) continue;
    auto fs = detail::action_factors(p, w, detail::carrier_tuple(a.carrier, w.in));
    Object src = tensor_all(fs, Variant::FinSet);
    std::vector<int> tab(src.size());
    std::vector<int> digit(fs.size());
    for (int idx = 0; idx < src.size(); ++idx) {
      int rem = idx;
      for (int f = static_cast<int>(fs.size()) - 1; f >= 0; --f) {
        digit[f] = rem % fs[f].size();
        rem /= fs[f].size();
      }
      tab[idx] = rule(w, digit[0], std::vector<int>(digit.begin() + 1, digit.end()));
    }
    a.act.emplace(w, Morphism::from_table(src, a.carrier[w.out], tab));
  }
  return a;
}

/// Free vector spaces on a set algebra; an algebra over linearize(P).
inline Algebra linearize_algebra(const Algebra& a) {
  auto lin_obj = [](const Object& o) { return Object::vect(o.size()); };
  Algebra r;
  for (const auto& c : a.carrier) r.carrier.push_back(lin_obj(c));
  for (const auto& [w, f] : a.act) {
    SMatrix m(f.tgt.size(), f.src.size());
    for (int i = 0; i < f.src.size(); ++i) m.set(f.table[i], i, 1);
    r.act.emplace(w, Morphism::from_matrix(lin_obj(f.src), lin_obj(f.tgt), m));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Modules over an algebra

struct AlgebraModule {
  std::vector<Object> carrier;
  std::map<std::pair<Signature, int>, Morphism> act;  // M at position k
};

inline std::vector<Object> module_inputs(const Algebra& a, const AlgebraModule& m, const Signature& w, int k) {
  auto in = detail::carrier_tuple(a.carrier, w.in);
  in[k] = m.carrier[w.in[k]];
  return in;
}

inline Morphism module_action(const Operad& p, const Algebra& a, const AlgebraModule& m, const Signature& w, int k) {
  auto it = m.act.find({w, k});
  if (it != m.act.end()) return it->second;
  Object src = tensor_all(detail::action_factors(p, w, module_inputs(a, m, w, k)), p.variant());
  if (!src.is_initial())
    throw Error(ErrorKind::InvalidAlgebra, "missing module action at " + signature_string(w, p.colors()));
  return zero_map(src, m.carrier[w.out]);
}

inline Report check_module(const Operad& p, const Algebra& a, const AlgebraModule& m, int bound) {
  Report r;
  bound = std::min(bound, p.bound());
  const ColorSet& w_ = p.colors();
  auto sigs = all_signatures(w_, bound);
  for (const auto& w : sigs)
    for (int k = 0; k < w.arity(); ++k) {
      Morphism f;
      try {
        f = module_action(p, a, m, w, k);
      } catch (const Error& e) {
        r.fail(e.what());
        continue;
      }
      auto in = module_inputs(a, m, w, k);
      Object src = tensor_all(detail::action_factors(p, w, in), p.variant());
      if (!same_object(f.src, src) || !same_object(f.tgt, m.carrier[w.out])) {
        r.fail("module action has the wrong shape at " + signature_string(w, w_));
        continue;
      }
      for (const auto& g : aut_group(w.in)->generators()) {
        Morphism moved = compose(module_action(p, a, m, w, g[k]), detail::action_relabel(p, w, in, g));
        if (!(moved == f)) r.fail("module action not equivariant at " + signature_string(w, w_));
      }
    }
  if (!r.ok) return r;
  for (int c = 0; c < w_.size(); ++c) {
    Signature cc{c, {c}};
    Morphism l = compose(module_action(p, a, m, cc, 0), tensor(p.unit.at(c), identity(m.carrier[c])));
    if (!(l == same_data(l.src, m.carrier[c]))) r.fail("unit acts nontrivially on the module at " + w_.names[c]);
  }
  auto act_at = [&](const Signature& s, int k) {
    return k < 0 ? algebra_action(p, a, s) : module_action(p, a, m, s, k);
  };
  for (const auto& u : sigs)
    for (int k = 0; k < u.arity(); ++k) {
      detail::check_action_assoc(p, u, module_inputs(a, m, u, k), k, act_at, bound, r, "module");
      if (!r.ok) return r;
    }
  return r;
}

/// A as a module over itself.
inline AlgebraModule self_module(const Operad& p, const Algebra& a) {
  AlgebraModule m;
  m.carrier = a.carrier;
  for (const auto& [w, f] : a.act)
    for (int k = 0; k < w.arity(); ++k) m.act.emplace(std::make_pair(w, k), f);
  (void)p;
  return m;
}

// ---------------------------------------------------------------------------
// Algebras over free_on_nullary: objects with a map from P_0

/// The O-algebra (X, f : P_0 -> X) for O = free_on_nullary(P_0).
inline Algebra o_algebra(const Operad& o, const std::vector<Object>& x, const std::vector<Morphism>& f) {
  Algebra a;
  a.carrier = x;
  for (int c = 0; c < o.colors().size(); ++c) {
    Signature z{c, {}};
    if (!o.seq.value(z).is_initial()) a.act.emplace(z, f[c]);
    Signature cc{c, {c}};
    Object src = tensor(o.seq.value(cc), x[c]);
    a.act.emplace(cc, same_data(src, x[c]));
  }
  return a;
}

/// The structure map P_0(c) -> X(c) of an O-algebra.
inline Morphism o_structure(const Operad& o, const Algebra& x, int c) {
  return algebra_action(o, x, Signature{c, {}});
}

}  // namespace opkit
