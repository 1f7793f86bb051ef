#include <gtest/gtest.h>

#include "opkit/algebra.hpp"

using namespace opkit;

TEST(Algebra, InitialAlgebrasPass) {
  for (const auto& p : {com(3), ass(3), mcom(3), mp(ass(3)), linearize(ass(3)), ass(3, Variant::VectQ, false)}) {
    Algebra a = initial_algebra(p);
    auto r = check_algebra(p, a, 3);
    EXPECT_TRUE(r.ok) << p.name << ": " << (r.failures.empty() ? "" : r.failures[0]);
    auto m = self_module(p, a);
    auto rm = check_module(p, a, m, 3);
    EXPECT_TRUE(rm.ok) << p.name << ": " << (rm.failures.empty() ? "" : rm.failures[0]);
  }
  EXPECT_EQ(initial_algebra(com(3)).carrier[0].size(), 1);
  EXPECT_TRUE(initial_algebra(ass(3, Variant::VectQ, false)).carrier[0].is_initial());
}

TEST(Algebra, MonoidsAsComAlgebras) {
  Operad c = com(3);
  // Z/3 under addition and {0,1} under max are commutative monoids
  auto sum = [](int m) {
    return [m](const Signature&, int, const std::vector<int>& in) {
      int s = 0;
      for (int x : in) s = (s + x) % m;
      return s;
    };
  };
  Algebra z3 = set_algebra(c, {3}, sum(3), 3);
  EXPECT_TRUE(check_algebra(c, z3, 3).ok);
  // a non-associative rule: arity 3 output disagrees with iterated binary
  auto bad = [](const Signature& w, int, const std::vector<int>& in) {
    int s = 0;
    for (int x : in) s = (s + x) % 3;
    return w.arity() == 3 ? (s + 1) % 3 : s;
  };
  auto r = check_algebra(c, set_algebra(c, {3}, bad, 3), 3);
  ASSERT_FALSE(r.ok);
  EXPECT_NE(r.failures[0].find("associativity"), std::string::npos);
  // a non-commutative rule breaks equivariance
  auto left = [](const Signature&, int, const std::vector<int>& in) { return in.empty() ? 0 : in[0]; };
  EXPECT_FALSE(check_algebra(c, set_algebra(c, {2}, left, 2), 2).ok);
}

TEST(Algebra, AssAlgebraFromWords) {
  // Z/2 x Z/2 words: ass-algebra over the monoid (Z/4, +) by multiplying in order
  Operad a = ass(3);
  rules::WordIndex wi;
  auto rule = [&](const Signature& w, int op, const std::vector<int>& in) {
    const Perm& word = wi.words(w.arity())[op];
    int s = 0;
    for (int i : word) s = (s + in[i]) % 4;
    return s;
  };
  Algebra z4 = set_algebra(a, {4}, rule, 3);
  EXPECT_TRUE(check_algebra(a, z4, 3).ok);
  // the augmentation to the one-point initial algebra
  AugmentedAlgebra aug{z4, {Morphism::from_table(Object::finset(4), Object::finset(1), {0, 0, 0, 0})}};
  EXPECT_TRUE(check_augmented(a, aug, 3).ok);
}

TEST(Algebra, CorruptedModuleFails) {
  Operad c = com(3);
  Algebra a = initial_algebra(c);
  AlgebraModule m = self_module(c, a);
  // module with two elements where the unary identity swaps
  AlgebraModule m2;
  m2.carrier = {Object::finset(2)};
  for (const auto& [k, f] : m.act) {
    const Signature& w = k.first;
    Object src = tensor_all(detail::action_factors(c, w, module_inputs(a, m2, w, k.second)), Variant::FinSet);
    std::vector<int> tab(src.size());
    for (int i = 0; i < src.size(); ++i) tab[i] = i % 2;
    m2.act.emplace(k, Morphism::from_table(src, m2.carrier[0], tab));
  }
  EXPECT_TRUE(check_module(c, a, m2, 3).ok);
  auto key = std::make_pair(Signature{0, {0}}, 0);
  m2.act[key].table = {1, 0};
  EXPECT_FALSE(check_module(c, a, m2, 3).ok);
}

TEST(Algebra, OAlgebrasAndRestriction) {
  Operad p = mcom(3);
  Operad o = free_on_nullary(p.colors(), p.variant(), nullary_part(p));
  // X(a) = {pt, x}, X(m) = {y}; P_0(a) = pt, P_0(m) empty
  std::vector<Object> x{Object::finset(2), Object::finset(1)};
  std::vector<Morphism> f{Morphism::from_table(Object::finset(1), x[0], {0}),
                          Morphism::from_table(Object::finset(0), x[1], {})};
  Algebra xa = o_algebra(o, x, f);
  EXPECT_TRUE(check_algebra(o, xa, 1).ok);
  // restriction of the initial P-algebra along rho is an O-algebra
  Operad p1 = one_skeleton(p);
  OperadMap rho = compose_maps(o, p1, p, skeleton_inclusion(p1, p), nullary_to_one_skeleton(o, p1));
  Algebra init = initial_algebra(p);
  Algebra r1 = restrict_algebra(o, p, rho, init, 1);
  EXPECT_TRUE(check_algebra(o, r1, 1).ok);
  Algebra via = restrict_algebra(o, p1, nullary_to_one_skeleton(o, p1),
                                 restrict_algebra(p1, p, skeleton_inclusion(p1, p), init, 1), 1);
  for (const auto& [w, g] : r1.act) EXPECT_TRUE(g == via.act.at(w));
}
