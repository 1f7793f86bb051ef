#include <gtest/gtest.h>

#include "opkit/envelope.hpp"

using namespace opkit;

namespace {

std::string first(const Report& r) { return r.failures.empty() ? "" : r.failures[0]; }

/// {0..d-1} under max is a semigroup.
Algebra max_semigroup(const Operad& p, int d, int bound) {
  return set_algebra(p, {d}, [](const Signature&, int, const std::vector<int>& in) {
    int m = 0;
    for (int x : in) m = std::max(m, x);
    return m;
  }, bound);
}

}  // namespace

TEST(Envelope, InitialAlgebraGivesP) {
  Rng rng(7);
  for (const auto& p : {com(5), ass(5), mcom(5), mp(ass(5)), linearize(com(5)), linearize(mcom(5)),
                        ass(5, Variant::VectQ, false), com(5, Variant::FinSet, am_colors()),
                        random_two_colored_operad(rng, 5), random_two_colored_operad(rng, 5)}) {
    Envelope env = enveloping_operad(p, initial_algebra(p), 2, 1);
    auto r = check_initial_envelope(p, 3, 1, &env);
    EXPECT_TRUE(r.ok) << p.name << ": " << first(r);
  }
}

TEST(Envelope, AssHomDimension) {
  Operad p = ass(3, Variant::VectQ, false);
  Operad ps = ass(3, Variant::FinSet, false);
  for (int d = 1; d <= 3; ++d) {
    Algebra a = linearize_algebra(max_semigroup(ps, d, 3));
    ASSERT_TRUE(check_algebra(p, a, 3).ok);
    EnvelopeEntry e = envelope_entry(p, a, Signature{0, {0}}, 2);
    EXPECT_EQ(e.obj().size(), (d + 1) * (d + 1)) << d;
  }
}

TEST(Envelope, ComWithMonoid) {
  Operad c = com(5);
  auto sum = [](int m) {
    return [m](const Signature&, int, const std::vector<int>& in) {
      int s = 0;
      for (int x : in) s = (s + x) % m;
      return s;
    };
  };
  // com^A(n) is A in every arity
  Algebra z3 = set_algebra(c, {3}, sum(3), 5);
  Envelope env = enveloping_operad(c, z3, 2, 1);
  for (int n = 0; n <= 2; ++n) EXPECT_EQ(env.op.seq.value(Signature{0, std::vector<int>(n, 0)}).size(), 3) << n;
  EXPECT_TRUE(check_operad(env.op, 2).ok);
  EnrichedCategory cat = enveloping_category(env);
  EXPECT_TRUE(check_category(cat).ok);
  // A = {pt}: the trivial one-object category
  Algebra pt = set_algebra(c, {1}, sum(1), 5);
  EnrichedCategory triv = enveloping_category(enveloping_operad(c, pt, 1, 1));
  EXPECT_EQ(triv.hom.size(), 1u);
  EXPECT_EQ(triv.hom_of(0, 0).size(), 1);
}

TEST(Envelope, AlgebrasUnderA) {
  // by hand: pointed sets B under pointed A, summed over all A; for mcom
  // the m-color contributes sum over |B_m| of |B_m|^|A_m|
  const std::vector<std::pair<Operad, int>> cases{{one_skeleton(com(3)), 13}, {one_skeleton(mcom(3)), 13 * 11}};
  for (const auto& [p, expected] : cases) {
    int total = 0;
    for (const auto& a : enumerate_algebras(p, 2, 1)) {
      auto u = check_envelope_universal(p, a, 2);
      EXPECT_TRUE(u.report.ok) << p.name << ": " << first(u.report);
      total += u.left;
    }
    EXPECT_EQ(total, expected) << p.name;
  }
}

TEST(Envelope, AssWithMonoid) {
  // a x b with a, b in A: hom(c, c) is A x A^op
  Operad p = ass(4);
  rules::WordIndex wi;
  Algebra z4 = set_algebra(p, {4}, [&](const Signature& w, int op, const std::vector<int>& in) {
    int s = 0;
    for (int i : wi.words(w.arity())[op]) s = (s + in[i]) % 4;
    return s;
  }, 4);
  EXPECT_EQ(envelope_entry(p, z4, Signature{0, {0}}, 2).obj().size(), 16);
  EXPECT_EQ(envelope_entry(p, z4, Signature{0, {0}}, 3).obj().size(), 16);
}

TEST(Envelope, UnstablePresentationThrows) {
  Operad p = ass(3, Variant::VectQ, false);
  Algebra a = linearize_algebra(max_semigroup(ass(3, Variant::FinSet, false), 2, 3));
  EXPECT_EQ(envelope_entry(p, a, Signature{0, {0}}, 1).obj().size(), 5);
  try {
    enveloping_operad(p, a, 1, 1);
    ADD_FAILURE() << "expected NonFinitary";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFinitary);
  }
}

TEST(Envelope, ModulesAreFunctors) {
  Operad c = com(5);
  auto sum = [](int m) {
    return [m](const Signature&, int, const std::vector<int>& in) {
      int s = 0;
      for (int x : in) s = (s + x) % m;
      return s;
    };
  };
  for (int m : {1, 2}) {
    Algebra a = set_algebra(c, {m}, sum(m), 5);
    auto u = check_module_functor(c, a, 2, 3);
    EXPECT_TRUE(u.report.ok) << m << ": " << first(u.report);
    // A-sets of size <= 2
    EXPECT_EQ(u.left, m == 1 ? 3 : 4);
  }
}

TEST(Envelope, CorruptedFunctorFails) {
  Operad c = com(5);
  Algebra a = set_algebra(c, {2}, [](const Signature&, int, const std::vector<int>& in) {
    int s = 0;
    for (int x : in) s ^= x;
    return s;
  }, 5);
  Envelope env = enveloping_operad(c, a, 1, 2);
  EnrichedCategory cat = enveloping_category(env);
  auto funs = enumerate_functors(cat, 2);
  ASSERT_EQ(funs.size(), 4u);
  EnrichedFunctor f = funs.back();
  ASSERT_EQ(f.value[0].size(), 2);
  Morphism& m = f.act.at({0, 0});
  m.table[0] = 1 - m.table[0];  // the identity no longer acts trivially
  EXPECT_FALSE(check_functor(cat, f).ok);
  EXPECT_FALSE(check_module(c, a, functor_to_module(c, a, env, f, 3), 3).ok);
}
