#include <gtest/gtest.h>

#include <set>

#include "opkit/operad.hpp"

using namespace opkit;

TEST(Operad, LibraryOperadsAreOperads) {
  std::vector<Operad> ops{com(3),
                          com(3, Variant::VectQ),
                          com(2, Variant::ChainQ),
                          ass(3),
                          ass(3, Variant::FinSet, false),
                          linearize(ass(3)),
                          mcom(3),
                          mp(ass(3)),
                          build_set_operad(rules::constant_monoid("z3", 3, [](int a, int b) { return (a + b) % 3; }, 0),
                                           ColorSet::single(), 3, true, predicate_all),
                          build_set_operad(rules::product(rules::ass(), rules::constant_monoid(
                                                                             "max", 2, [](int a, int b) { return std::max(a, b); }, 0)),
                                           am_colors(), 3, true, mcom_predicate)};
  for (const auto& p : ops) {
    auto r = check_operad(p, 3);
    EXPECT_TRUE(r.ok) << p.name << ": " << (r.failures.empty() ? "" : r.failures[0]);
  }
}

TEST(Operad, SizesOfKnownEntries) {
  Operad a = ass(3);
  EXPECT_EQ(a.seq.value(Signature{0, {0, 0, 0}}).size(), 6);
  Operad m = mp(a);
  EXPECT_EQ(m.seq.value(Signature{1, {0, 1}}).size(), 2);
  EXPECT_TRUE(m.seq.value(Signature{1, {0, 0}}).is_initial());
  EXPECT_TRUE(m.seq.value(Signature{0, {0, 1}}).is_initial());
  Operad mc = mcom(3), mpc = mp(com(3));
  EXPECT_TRUE(same_seq(mc.seq, mpc.seq));
  for (const auto& [k, g] : mc.gamma) EXPECT_TRUE(g == mpc.gamma.at(k));
  EXPECT_EQ(mc.gamma.size(), mpc.gamma.size());
}

TEST(Operad, CorruptedCompositionIsCaught) {
  Operad a = ass(3);
  // swap two outputs of the binary composite with a binary operation in slot 0
  for (auto& [k, g] : a.gamma)
    if (k.w.arity() == 3 && k.slot.size() == 2 && g.src.size() >= 2) {
      std::swap(g.table[0], g.table[1]);
      break;
    }
  auto r = check_operad(a, 3);
  ASSERT_FALSE(r.ok);
  EXPECT_FALSE(r.failures[0].empty());
  Operad b = com(2);
  b.unit.erase(0);
  EXPECT_FALSE(check_operad(b, 2).ok);
}

TEST(Operad, NullaryOperadAndSkeleton) {
  Operad p = mp(ass(3));
  Operad o = free_on_nullary(p.colors(), p.variant(), nullary_part(p));
  EXPECT_TRUE(is_nullary_shape(o));
  EXPECT_FALSE(is_nullary_shape(p));
  EXPECT_TRUE(check_operad(o, 1).ok);
  Operad p1 = one_skeleton(p);
  EXPECT_TRUE(check_operad(p1, 1).ok);
  EXPECT_EQ(p1.seq.max_arity(), 1);
  OperadMap psi = nullary_to_one_skeleton(o, p1);
  OperadMap phi = skeleton_inclusion(p1, p);
  EXPECT_TRUE(check_operad_map(o, p1, psi, 1).ok);
  EXPECT_TRUE(check_operad_map(p1, p, phi, 1).ok);
  OperadMap rho = compose_maps(o, p1, p, phi, psi);
  EXPECT_TRUE(check_operad_map(o, p, rho, 1).ok);
}

TEST(Operad, FreeOnNullaryIsLeftAdjoint) {
  // Maps O -> Q over all candidate sequence maps biject with maps P0 -> Q0.
  ColorSet w = ColorSet::single();
  for (int a = 0; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b) {
      Operad o = free_on_nullary(w, Variant::FinSet, {Object::finset(a)});
      Operad q = build_set_operad(rules::constant_monoid("q", b, [b](int x, int y) { return (x + y) % b; }, 0), w, 2,
                                  true, predicate_all);
      // Q(1) has b elements; enumerate all functions on arity 0 and arity 1
      int count = 0;
      std::set<std::vector<int>> restricted;
      int n0 = 1;
      for (int i = 0; i < a; ++i) n0 *= b;
      for (int f0 = 0; f0 < n0; ++f0)
        for (int f1 = 0; f1 < b; ++f1) {
          std::vector<int> t0(a);
          int rem = f0;
          for (int i = 0; i < a; ++i) {
            t0[i] = rem % b;
            rem /= b;
          }
          OperadMap m;
          m.comp.emplace(Signature{0, {}}, Morphism::from_table(Object::finset(a), q.seq.value(Signature{0, {}}), t0));
          m.comp.emplace(Signature{0, {0}}, Morphism::from_table(Object::unit(Variant::FinSet), q.seq.value(Signature{0, {0}}), {f1}));
          if (check_operad_map(o, q, m, 1).ok) {
            ++count;
            restricted.insert(t0);
          }
        }
      EXPECT_EQ(count, n0);
      EXPECT_EQ(static_cast<int>(restricted.size()), n0);
    }
}

TEST(Operad, UnderlyingCategory) {
  Operad m = mcom(3);
  EnrichedCategory c = underlying_category(m);
  EXPECT_EQ(c.hom.size(), 2u);
  EXPECT_TRUE(check_category(c).ok);
  EnrichedCategory c2 = underlying_category(mp(ass(2)));
  EXPECT_TRUE(check_category(c2).ok);
}

TEST(Operad, RandomTwoColoredOperads) {
  std::set<std::string> names;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    Operad p = random_two_colored_operad(rng, 3);
    names.insert(p.name);
    if (seed < 40) {
      auto r = check_operad(p, 3);
      EXPECT_TRUE(r.ok) << p.name << ": " << (r.failures.empty() ? "" : r.failures[0]);
    }
  }
  EXPECT_GE(names.size(), 30u);
}
