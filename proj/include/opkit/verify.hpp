#pragma once

// Named verification suites over seeded instances. Each suite has one
// mutation, selected by InstanceSpec::corrupt, that it must detect.

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "opkit/canonical.hpp"
#include "opkit/envelope.hpp"
#include "opkit/filtration.hpp"
#include "opkit/generate.hpp"
#include "opkit/stable.hpp"

namespace opkit {

struct InstanceSpec {
  Variant variant = Variant::FinSet;
  int colors = 1;   // 1..3
  int arity = 3;    // 1..4
  int size = 2;     // 0..4
  std::uint64_t seed = 0;
  bool corrupt = false;
};

struct VerificationReport {
  std::string suite;
  InstanceSpec spec;
  bool pass = true;
  std::string witness;  // empty iff pass
  double seconds = 0;
};

/// An operad together with a free algebra's generators: the nullary part
/// of the operad extended by `generators` elements per color.
struct Instance {
  Operad op;
  Algebra x;
  int generators = 0;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"compose-assoc", "compose-oracle",    "lq_n-pushout",
                                              "compute1",      "compute2",          "filtration-oracle",
                                              "envelope-universal", "kernel-counit", "cofiber-stable",
                                              "sigma-infty"};
  return names;
}

namespace detail {

inline void check_bounds(const InstanceSpec& s) {
  if (s.colors < 1 || s.arity < 1 || s.size < 0)
    throw Error(ErrorKind::BoundsTooTight, "need at least one color, arity 1 and size 0");
  if (s.colors > 3 || s.arity > 4 || s.size > 4)
    throw Error(ErrorKind::InvalidObject, "bounds exceed colors 3, arity 4, size 4");
}

inline ColorSet colors_for(int n) {
  if (n == 1) return ColorSet::single();
  if (n == 2) return am_colors();
  return ColorSet({"a", "b", "c"});
}

/// Constant map (sets) or zero map (linear); not an isomorphism whenever
/// collapsible(f) holds.
inline bool collapsible(const Morphism& f) {
  if (f.kind() == Variant::FinSet) return f.src.size() >= 1 && f.tgt.size() >= 2;
  return f.tgt.size() >= 1;
}

inline Morphism collapse(const Morphism& f) {
  if (f.kind() == Variant::FinSet) return Morphism::from_table(f.src, f.tgt, std::vector<int>(f.src.size(), 0));
  return zero_map(f.src, f.tgt);
}

[[noreturn]] inline void not_applicable(const std::string& what) {
  throw Error(ErrorKind::InvalidObject, "mutation does not apply: " + what);
}

inline std::string first_failure(const Report& r) { return r.failures.empty() ? "" : r.failures[0]; }

}  // namespace detail

/// Operad for a spec: one color gives com (seed 0), ass (seed 1) or a
/// random single-colored set operad; two colors a random two-colored set
/// operad; three colors com on three colors.
inline Operad generate_operad(const InstanceSpec& s) {
  detail::check_bounds(s);
  const Variant v = s.variant;
  if (s.colors == 3) return com(s.arity, v, detail::colors_for(3));
  Rng rng(s.seed);
  if (s.colors == 2) return random_two_colored_operad(rng, s.arity, v);
  if (s.seed == 0) return com(s.arity, v);
  if (s.seed == 1) return ass(s.arity, v);
  bool unital = uniform_int(rng, 0, 1) == 1;
  SetOperadRules rs;
  switch (uniform_int(rng, 0, 4)) {
    case 0: rs = rules::com(unital); break;
    case 1: rs = rules::ass(unital); break;
    case 2: rs = rules::constant_monoid("z2", 2, [](int a, int b) { return (a + b) % 2; }, 0, unital); break;
    case 3: rs = rules::constant_monoid("z3", 3, [](int a, int b) { return (a + b) % 3; }, 0, unital); break;
    default: rs = rules::constant_monoid("max3", 3, [](int a, int b) { return std::max(a, b); }, 0, unital); break;
  }
  Operad p = build_set_operad(rs, ColorSet::single(), s.arity, true, predicate_all, v);
  if (!unital && !p.name.ends_with("_nu")) p.name += "_nu";
  return p;
}

inline Instance generate(const InstanceSpec& s) {
  Instance in;
  in.op = generate_operad(s);
  in.generators = s.size >= 3 ? 2 : 1;
  std::vector<Object> e;
  for (int c = 0; c < in.op.colors().size(); ++c)
    e.push_back(s.variant == Variant::FinSet ? Object::finset(in.generators)
                : s.variant == Variant::VectQ ? Object::vect(in.generators)
                                              : Object::chain(0, {in.generators}, {}));
  in.x = extend_nullary(in.op, e);
  return in;
}

/// Entry sizes and composition tables; equal operads have equal prints.
inline std::string operad_fingerprint(const Operad& p) {
  std::string f = std::to_string(p.colors().size()) + ";";
  for (const auto& w : all_signatures(p.colors(), p.bound())) f += std::to_string(p.seq.value(w).size()) + ",";
  for (const auto& [k, m] : p.gamma) {
    f += "|";
    if (m.kind() == Variant::FinSet)
      for (int t : m.table) f += std::to_string(t) + ",";
    else
      f += std::to_string(m.src.size()) + "x" + std::to_string(m.tgt.size());
  }
  return f;
}

namespace suites {

using Result = std::pair<bool, std::string>;

inline Result fail(std::string w) { return {false, std::move(w)}; }

/// Unitors and associator of random sequences are equivariant isomorphisms.
/// Mutation: the associator on the first orbit with at least two elements
/// is replaced by a constant (or zero) map.
inline Result compose_assoc(const InstanceSpec& s) {
  Rng rng(s.seed);
  ColorSet w = detail::colors_for(s.colors);
  const Variant v = s.variant;
  const int b = std::min(s.arity, 2);
  SymSeq x = random_seq(rng, w, v, b, s.size);
  SymSeq y = random_seq(rng, w, v, b, s.size, 1);
  SymSeq z = random_seq(rng, w, v, b, s.size);
  SymSeq u = unit_seq(w, v);
  auto left = compose(u, y, b), right = compose(y, u, b);
  auto a = assoc_data(x, y, z, b);
  bool corrupted = false;
  for (const auto& sig : all_signatures(w, b)) {
    const std::string at = signature_string(sig, w);
    auto G = aut_group(sig.in);
    auto act_y = [&](const Perm& g) { return y.act(sig, g); };
    auto r = check_equivariant_iso(left_unitor(left, sig), *G, [&](const Perm& g) { return left.result.act(sig, g); }, act_y);
    if (!r.ok) return fail("left unitor at " + at + ": " + r.witness);
    r = check_equivariant_iso(right_unitor(right, sig), *G, [&](const Perm& g) { return right.result.act(sig, g); }, act_y);
    if (!r.ok) return fail("right unitor at " + at + ": " + r.witness);
    Morphism f = associator(a, sig);
    if (s.corrupt && !corrupted && detail::collapsible(f)) {
      f = detail::collapse(f);
      corrupted = true;
    }
    r = check_equivariant_iso(
        f, *G, [&](const Perm& g) { return a.xy_z.result.act(sig, g); },
        [&](const Perm& g) { return a.x_yz.result.act(sig, g); });
    if (!r.ok) return fail("associator at " + at + ": " + r.witness);
  }
  if (s.corrupt && !corrupted) detail::not_applicable("every associator orbit is too small");
  return {true, ""};
}

/// Closed-form composition against the labeled oracle. Mutation: X gets a
/// unary identity on the first color and the oracle sees Y with one more
/// nullary element, so (X∘Y)(c0; ) differs in size.
inline Result compose_oracle(const InstanceSpec& s) {
  Rng rng(s.seed);
  ColorSet w = detail::colors_for(s.colors);
  const Variant v = s.variant;
  const int b = std::max(1, s.arity - 1);
  SymSeq x = random_seq(rng, w, v, b, s.size);
  SymSeq y = random_seq(rng, w, v, b, s.size);
  SymSeq y_oracle = y;
  if (s.corrupt) {
    x.set(Signature{0, {0}}, trivial_entry(Object::unit(v), aut_group({0})));
    int n = y.value(Signature{0, {}}).size() + 1;
    Object o = v == Variant::FinSet ? Object::finset(n) : v == Variant::VectQ ? Object::vect(n) : Object::chain(0, {n}, {});
    y_oracle.set(Signature{0, {}}, trivial_entry(o, aut_group({})));
  }
  auto cw = compose(x, y, s.arity);
  auto r = compare_with_oracle(cw, compose_oracle(x, y_oracle, s.arity));
  if (!r.ok) return fail(r.witness);
  return {true, ""};
}

/// The square P_n∘O, P_{≤n-1}, P_{≤n} for n = 2..min(3, arity).
/// Mutation: the right vertical map at the first arity-n signature with a
/// collapsible entry is collapsed.
inline Result lq_pushout(const InstanceSpec& s) {
  if (s.arity < 2) throw Error(ErrorKind::BoundsTooTight, "the square starts at arity two");
  Operad p = generate_operad(s);
  bool corrupted = false;
  for (int n = 2; n <= std::min(3, s.arity); ++n) {
    SquareTamper t;
    if (s.corrupt && !corrupted)
      t = [&](const Signature& w, const Morphism& m) {
        if (corrupted || w.arity() != n || !detail::collapsible(m)) return m;
        corrupted = true;
        return detail::collapse(m);
      };
    auto r = lq_square_check(p, n, t);
    if (!r.ok) return fail(p.name + ", n = " + std::to_string(n) + ": " + detail::first_failure(r));
  }
  if (s.corrupt && !corrupted) detail::not_applicable("no arity-n entry with two elements");
  return {true, ""};
}

/// Closed forms of the attaching square (which = 1 or 2) for n =
/// 2..min(3, arity) and every output color. Mutation: the canonical map
/// from the closed form into the raw coequalizer is collapsed at the first
/// place it is collapsible.
inline Result compute(const InstanceSpec& s, int which) {
  if (s.arity < 2) throw Error(ErrorKind::BoundsTooTight, "attaching maps start at arity two");
  Instance in = generate(s);
  bool corrupted = false;
  for (int n = 2; n <= std::min(3, s.arity); ++n)
    for (int w0 = 0; w0 < in.op.colors().size(); ++w0) {
      auto a = attaching_comparison(in.op, in.x, n, w0);
      if (s.corrupt && !corrupted && detail::collapsible(a.canon_q)) {
        a.canon_q = detail::collapse(a.canon_q);
        corrupted = true;
      }
      auto r = which == 1 ? check_compute1(in.op, a) : check_compute2(in.op, a);
      if (!r.ok) return fail(in.op.name + ", " + r.witness);
    }
  if (s.corrupt && !corrupted) detail::not_applicable("every attaching object is too small");
  return {true, ""};
}

/// Pushout-built filtration stages against the oracle stages for n <=
/// min(3, arity). Mutation: the top stage is compared with the oracle one
/// stage lower.
inline Result filtration_oracle(const InstanceSpec& s) {
  Instance in = generate(s);
  const int top = std::min(3, s.arity);
  auto st = free_algebra_stages(in.op, in.x, top);
  for (int n = 0; n <= top; ++n) {
    int m = s.corrupt && n == top ? n - 1 : n;
    auto r = compare_stage(in.op, in.x, st[n], skeleton_composite(in.op, in.x, m));
    if (!r.ok) return fail(in.op.name + ", stage " + std::to_string(n) + ": " + r.witness);
  }
  return {true, ""};
}

/// P^A-algebras against P-algebras under A by exhaustive enumeration, for
/// the 1-skeleton of the generated operad and the seed-th algebra A of
/// size <= min(size, 2). Mutation: the envelope is built from a different
/// algebra than the one the right side is enumerated under.
inline Result envelope_universal(const InstanceSpec& s) {
  if (s.variant != Variant::FinSet) throw Error(ErrorKind::WrongVariant, "enumeration needs finite sets");
  Operad p = one_skeleton(generate_operad(s));
  const int m = std::min(s.size, 2);
  auto as = enumerate_algebras(p, m, 1);
  const std::size_t i = s.seed % as.size();
  const Algebra& a = as[i];
  const Algebra* other = nullptr;
  if (s.corrupt) {
    for (std::size_t j = 1; j < as.size() && !other; ++j) {
      const Algebra& b = as[(i + j) % as.size()];
      for (int c = 0; c < p.colors().size(); ++c)
        if (b.carrier[c].size() != a.carrier[c].size()) other = &b;
    }
    if (!other) detail::not_applicable("only one carrier size");
  }
  auto u = check_envelope_universal(p, a, m, other);
  if (!u.report.ok) return fail(p.name + ": " + detail::first_failure(u.report));
  return {true, ""};
}

/// ker: OverUnder -> chain complexes has the strict unit identity and a
/// quasi-isomorphic counit on a random over-under object in degrees
/// [0, arity] with dimensions <= 2 size. Mutation: a spurious class Q[0]
/// is added to the kernel.
inline Result kernel_counit(const InstanceSpec& s) {
  Rng rng(s.seed);
  OverUnder x = random_over_under(rng, 0, s.arity, 2 * s.size);
  Report v = check_over_under(x);
  if (!v.ok) return fail("instance: " + detail::first_failure(v));
  Kernel k = kernel_of(x);
  // strict unit: ker(include_coprod(A, K)) = K
  Object kk = kernel_functor(include_coprod(x.base, k.obj));
  for (int q = std::min(kk.lo(), k.obj.lo()); q <= std::max(kk.hi(), k.obj.hi()); ++q)
    if (kk.dim(q) != k.obj.dim(q)) return fail("unit is not strict in degree " + std::to_string(q));
  if (s.corrupt) {
    Object pt = Object::chain(0, {1}, {});
    Coproduct c = coproduct({k.obj, pt}, Variant::ChainQ);
    k = Kernel{c.obj, copair(c, {k.incl, zero_map(pt, x.total)}, x.total)};
  }
  auto r = check_counit(x, k);
  if (!r.ok) return fail(detail::first_failure(r));
  return {true, ""};
}

/// Cofiber of Σ∞ of a pushout-product f □ g, f with acyclic cokernel, is
/// stably trivial within T = 6. Mutation: f and g both have cokernel Q[0].
inline Result cofiber_stable(const InstanceSpec& s) {
  Rng rng(s.seed);
  const int d = std::min(s.size, 2);
  Object a = random_chain(rng, 0, 1, d);
  Morphism f, g;
  if (s.corrupt) {
    Object pt = Object::chain(0, {1}, {});
    f = coproduct({random_chain(rng, 0, 1, d), pt}, Variant::ChainQ).inj[0];
    g = coproduct({random_chain(rng, 0, 1, d), pt}, Variant::ChainQ).inj[0];
  } else {
    f = random_injection(rng, random_chain(rng, 0, 1, d), 0, 1, 1, true);
    g = random_injection(rng, random_chain(rng, 0, 1, d), 0, 1, d, false);
  }
  auto r = cofiber_pushout_product_check(a, f, g, 6);
  if (!r.ok) return fail(detail::first_failure(r));
  return {true, ""};
}

/// Stable homology of Σ∞_+ A equals H_*(A) for a random A in degrees
/// [0, arity] with dimensions <= size. Mutation: the prespectrum is built
/// on the suspended kernel, with a class Q[0] added to A.
inline Result sigma_infty(const InstanceSpec& s) {
  Rng rng(s.seed);
  Object a = random_chain(rng, 0, s.arity, s.size);
  if (!s.corrupt) {
    auto r = sigma_infty_plus_check(a);
    if (!r.report.ok) return fail(detail::first_failure(r.report));
    return {true, ""};
  }
  a = coproduct({a, Object::chain(0, {1}, {})}, Variant::ChainQ).obj;
  Coproduct c = coproduct({a, a}, Variant::ChainQ);
  OverUnder x{a, c.obj, c.inj[1], copair(c, {identity(a), identity(a)}, a)};
  auto r = compare_stable(spectrify(suspension_prespectrum(a, suspension(kernel_functor(x)), 4)), a);
  if (!r.ok) return fail(detail::first_failure(r));
  return {true, ""};
}

}  // namespace suites

/// Run a named suite on a spec. Deterministic per (name, spec) apart from
/// the timing field.
inline VerificationReport run_suite(const std::string& name, const InstanceSpec& spec) {
  detail::check_bounds(spec);
  static const std::map<std::string, std::function<suites::Result(const InstanceSpec&)>> table{
      {"compose-assoc", suites::compose_assoc},
      {"compose-oracle", suites::compose_oracle},
      {"lq_n-pushout", suites::lq_pushout},
      {"compute1", [](const InstanceSpec& s) { return suites::compute(s, 1); }},
      {"compute2", [](const InstanceSpec& s) { return suites::compute(s, 2); }},
      {"filtration-oracle", suites::filtration_oracle},
      {"envelope-universal", suites::envelope_universal},
      {"kernel-counit", suites::kernel_counit},
      {"cofiber-stable", suites::cofiber_stable},
      {"sigma-infty", suites::sigma_infty},
  };
  auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorKind::UnknownSuite, name);
  VerificationReport r;
  r.suite = name;
  r.spec = spec;
  auto t0 = std::chrono::steady_clock::now();
  auto [ok, witness] = it->second(spec);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = ok;
  r.witness = witness;
  if (!ok && r.witness.empty()) r.witness = "unspecified failure";
  return r;
}

}  // namespace opkit
