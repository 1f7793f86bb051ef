#include <gtest/gtest.h>

#include "opkit/basecat.hpp"
#include "opkit/group.hpp"
#include "opkit/random.hpp"

using namespace opkit;

namespace {

Object two_term(int a, int b, SMatrix d) { return Object::chain(0, {a, b}, {SMatrix(0, a), std::move(d)}); }

Morphism random_vect_map(Rng& rng, const Object& s, const Object& t) {
  return Morphism::from_matrix(s, t, random_matrix(rng, t.size(), s.size()));
}

Morphism random_function(Rng& rng, const Object& s, const Object& t) {
  std::vector<int> tab(s.size());
  for (auto& v : tab) v = uniform_int(rng, 0, t.size() - 1);
  return Morphism::from_table(s, t, tab);
}

}  // namespace

TEST(Tensor, FinSetIsCartesianProduct) {
  Object a = Object::finset({"a", "b"}), x = Object::finset({"x", "y", "z"});
  Object p = tensor(a, x);
  EXPECT_EQ(p.size(), 6);
  EXPECT_EQ(p.label(1), "(a,y)");
}

TEST(Tensor, VectDimensionsMultiply) { EXPECT_EQ(tensor(Object::vect(2), Object::vect(3)).size(), 6); }

TEST(Tensor, ChainDegrees) {
  Object c = two_term(1, 1, SMatrix(1, 1));
  Object t = tensor(c, c);
  EXPECT_EQ(t.lo(), 0);
  EXPECT_EQ(t.hi(), 2);
  EXPECT_EQ(t.dim(0), 1);
  EXPECT_EQ(t.dim(1), 2);
  EXPECT_EQ(t.dim(2), 1);
}

TEST(Tensor, MixedVariantRejected) {
  try {
    tensor(Object::vect(1), Object::finset(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MixedVariant);
  }
}

TEST(Tensor, KunnethOnRandomComplexes) {
  Rng rng(5);
  for (int t = 0; t < 15; ++t) {
    Object a = random_chain(rng, 0, 2, 3), b = random_chain(rng, -1, 1, 3);
    Object ab = tensor(a, b);
    for (int n = ab.lo(); n <= ab.hi(); ++n) {
      int expect = 0;
      for (int p = a.lo(); p <= a.hi(); ++p) expect += homology(a, p) * homology(b, n - p);
      EXPECT_EQ(homology(ab, n), expect);
    }
  }
}

TEST(Tensor, FunctorialOnComposites) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    Object a = Object::vect(2), b = Object::vect(3), c = Object::vect(2);
    Morphism f1 = random_vect_map(rng, a, b), f2 = random_vect_map(rng, b, c);
    Morphism g1 = random_vect_map(rng, c, a), g2 = random_vect_map(rng, a, a);
    EXPECT_EQ(tensor(compose(f2, f1), compose(g2, g1)), compose(tensor(f2, g2), tensor(f1, g1)));
    Object s = Object::finset(3), u = Object::finset(2);
    Morphism h1 = random_function(rng, s, u), h2 = random_function(rng, u, s);
    EXPECT_EQ(tensor(compose(h2, h1), compose(h1, h2)), compose(tensor(h2, h1), tensor(h1, h2)));
  }
}

TEST(Tensor, BraidIsChainIsoAndInvolutive) {
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    Object a = random_chain(rng, 0, 2, 2), b = random_chain(rng, 0, 1, 2);
    Morphism s = permute_factors({a, b}, {1, 0}, Variant::ChainQ);
    EXPECT_TRUE(is_chain_map(s));
    EXPECT_TRUE(is_iso(s));
    Morphism back = permute_factors({b, a}, {1, 0}, Variant::ChainQ);
    EXPECT_EQ(compose(back, s), identity(tensor(a, b)));
  }
}

TEST(Tensor, ThreeFactorPermutationsCompose) {
  Rng rng(17);
  Object a = random_chain(rng, 0, 1, 2, 1), b = random_chain(rng, 0, 1, 2, 1), c = random_chain(rng, 0, 1, 2, 1);
  Perm p = {1, 2, 0}, q = {2, 0, 1};
  std::vector<Object> objs = {a, b, c}, moved(3);
  for (int i = 0; i < 3; ++i) moved[p[i]] = objs[i];
  Morphism f = permute_factors(objs, p, Variant::ChainQ);
  Morphism g = permute_factors(moved, q, Variant::ChainQ);
  Morphism h = permute_factors(objs, perm_mul(q, p), Variant::ChainQ);
  EXPECT_TRUE(is_chain_map(f));
  EXPECT_EQ(compose(g, f), h);
}

TEST(Tensor, FlattenIsIso) {
  Rng rng(19);
  Object a = random_chain(rng, 0, 1, 2, 1), b = random_chain(rng, 0, 1, 2, 1), c = random_chain(rng, 0, 1, 2, 1);
  Morphism f = flatten_tensor({{a}, {b, c}}, Variant::ChainQ);
  EXPECT_TRUE(is_chain_map(f));
  EXPECT_TRUE(is_iso(f));
  Morphism g = flatten_tensor({{a, b}, {c}}, Variant::ChainQ);
  EXPECT_TRUE(same_object(g.src, g.tgt));
  EXPECT_EQ(g, identity(g.src));
}

TEST(Coproduct, Basics) {
  Coproduct c = coproduct({Object::finset({"a"}), Object::finset({"b", "c"})}, Variant::FinSet);
  EXPECT_EQ(c.obj.size(), 3);
  EXPECT_EQ(coproduct({}, Variant::VectQ).obj.size(), 0);
  Object x = Object::chain(0, {1, 0}, {}), y = Object::chain(0, {0, 2}, {});
  Coproduct s = coproduct({x, y}, Variant::ChainQ);
  EXPECT_EQ(s.obj.dim(0), 1);
  EXPECT_EQ(s.obj.dim(1), 2);
}

TEST(Coproduct, DistributivityMapIsIso) {
  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    Object a = random_chain(rng, 0, 1, 2), b = random_chain(rng, 0, 1, 2), c = random_chain(rng, 0, 2, 2);
    Coproduct bc = coproduct({b, c}, Variant::ChainQ);
    Coproduct sum = coproduct({tensor(a, b), tensor(a, c)}, Variant::ChainQ);
    Morphism can = copair(sum, {tensor(identity(a), bc.inj[0]), tensor(identity(a), bc.inj[1])}, tensor(a, bc.obj));
    EXPECT_TRUE(is_chain_map(can));
    EXPECT_TRUE(is_iso(can));
  }
}

TEST(Coequalizer, Examples) {
  Object p = Object::finset({"p"}), xy = Object::finset({"x", "y"});
  Morphism f = Morphism::from_table(p, xy, {0}), g = Morphism::from_table(p, xy, {1});
  EXPECT_EQ(coequalizer(f, g).obj.size(), 1);
  Quotient same = coequalizer(f, f);
  EXPECT_TRUE(is_iso(same.proj));
  Object q1 = Object::vect(1), q2 = Object::vect(2);
  Morphism a = Morphism::from_matrix(q1, q2, SMatrix::from_dense({{1}, {0}}, 1));
  Morphism b = Morphism::from_matrix(q1, q2, SMatrix::from_dense({{0}, {1}}, 1));
  EXPECT_EQ(coequalizer(a, b).obj.size(), 1);
  try {
    coequalizer(f, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotParallel);
  }
}

TEST(Coequalizer, ProjectionEqualizes) {
  Rng rng(29);
  for (int t = 0; t < 20; ++t) {
    Object s = Object::finset(uniform_int(rng, 0, 4)), u = Object::finset(uniform_int(rng, 1, 5));
    Morphism f = random_function(rng, s, u), g = random_function(rng, s, u);
    Quotient q = coequalizer(f, g);
    EXPECT_EQ(compose(q.proj, f), compose(q.proj, g));
    Object v = Object::vect(uniform_int(rng, 0, 3)), w = Object::vect(uniform_int(rng, 0, 4));
    Morphism a = random_vect_map(rng, v, w), b = random_vect_map(rng, v, w);
    Quotient r = coequalizer(a, b);
    EXPECT_EQ(compose(r.proj, a), compose(r.proj, b));
    EXPECT_EQ(r.obj.size(), w.size() - rank(a.at(0) - b.at(0)));
  }
}

TEST(Coequalizer, ChainQuotientByImage) {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    Object a = random_chain(rng, 0, 2, 3), b = random_chain(rng, 0, 2, 3);
    Coproduct s = coproduct({a, b}, Variant::ChainQ);
    Quotient q = coequalizer(s.inj[0], zero_map(a, s.obj));
    EXPECT_TRUE(is_chain_map(q.proj));
    for (int k = 0; k <= 2; ++k) EXPECT_EQ(homology(q.obj, k), homology(b, k));
  }
}

TEST(GroupoidColimit, Examples) {
  Object xy = Object::finset({"x", "y"});
  GroupAction triv{PermGroup::trivial(2), xy, [&](const Perm&) { return identity(xy); }};
  EXPECT_EQ(groupoid_colimit(triv).obj.size(), 2);
  GroupAction swap{PermGroup::symmetric(2), xy, [&](const Perm& p) { return Morphism::from_table(xy, xy, p); }};
  EXPECT_EQ(groupoid_colimit(swap).obj.size(), 1);
  Object v = Object::vect(2);
  GroupAction sym{PermGroup::symmetric(2), tensor(v, v),
                  [&](const Perm& p) { return permute_factors({v, v}, p, Variant::VectQ); }};
  EXPECT_EQ(groupoid_colimit(sym).obj.size(), 3);
}

TEST(GroupoidColimit, InvalidActionRejected) {
  Object xyz = Object::finset(3);
  GroupAction bad{PermGroup::symmetric(2), xyz, [&](const Perm& p) {
                    return Morphism::from_table(xyz, xyz, p[0] == 0 ? std::vector<int>{0, 1, 2} : std::vector<int>{1, 2, 0});
                  }};
  try {
    groupoid_colimit(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidAction);
  }
}

TEST(Group, YoungOrders) {
  EXPECT_EQ(PermGroup::young({0, 0, 1, 1, 1}).order(), 12u);
  EXPECT_EQ(PermGroup::symmetric(4).order(), 24u);
  EXPECT_EQ(PermGroup::young({}).order(), 1u);
}

TEST(Pushout, Examples) {
  Object pt = Object::finset({"*"}), ab = Object::finset({"a", "b"}), x = Object::finset({"x"});
  Pushout p = pushout(Morphism::from_table(pt, ab, {0}), Morphism::from_table(pt, x, {0}));
  EXPECT_EQ(p.obj.size(), 2);
  Object v = Object::vect(2), w = Object::vect(3), z = Object::vect(0);
  Pushout q = pushout(zero_map(z, v), zero_map(z, w));
  EXPECT_EQ(q.obj.size(), 5);
  Rng rng(37);
  Object c = Object::vect(3);
  Morphism g = random_vect_map(rng, v, c);
  Pushout r = pushout(identity(v), g);
  EXPECT_TRUE(is_iso(r.leg_c));
  try {
    pushout(identity(v), identity(w));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SourceMismatch);
  }
}

TEST(Pushout, CommutesAndInduces) {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    Object a = Object::finset(uniform_int(rng, 0, 3)), b = Object::finset(uniform_int(rng, 1, 3)),
           c = Object::finset(uniform_int(rng, 1, 3));
    Morphism f = random_function(rng, a, b), g = random_function(rng, a, c);
    Pushout p = pushout(f, g);
    EXPECT_EQ(compose(p.leg_b, f), compose(p.leg_c, g));
    Morphism back = pushout_induced(p, p.leg_b, p.leg_c);
    EXPECT_EQ(back, identity(p.obj));
  }
}

TEST(PushoutProduct, Examples) {
  Object z = Object::vect(0), v = Object::vect(2), w = Object::vect(3);
  PushoutProduct pp = pushout_product(zero_map(z, v), zero_map(z, w));
  EXPECT_EQ(pp.corner.obj.size(), 0);
  EXPECT_EQ(pp.map.tgt.size(), 6);
  PushoutProduct ii = pushout_product(identity(v), identity(w));
  EXPECT_TRUE(is_iso(ii.map));
  Object p = Object::finset({"p"}), px = Object::finset({"p", "x"});
  Object q = Object::finset({"q"}), qy = Object::finset({"q", "y"});
  PushoutProduct s = pushout_product(Morphism::from_table(p, px, {0}), Morphism::from_table(q, qy, {0}));
  EXPECT_EQ(s.corner.obj.size(), 3);
  EXPECT_EQ(s.map.tgt.size(), 4);
}

TEST(PushoutProduct, BraidingInducesIso) {
  Rng rng(43);
  for (int t = 0; t < 8; ++t) {
    Object a = random_chain(rng, 0, 1, 2), b = random_chain(rng, 0, 1, 2);
    Object c = random_chain(rng, 0, 1, 2), d = random_chain(rng, 0, 1, 2);
    // injective chain maps via coproduct inclusions
    Coproduct ab = coproduct({a, b}, Variant::ChainQ), cd = coproduct({c, d}, Variant::ChainQ);
    Morphism f = ab.inj[0], g = cd.inj[0];
    PushoutProduct fg = pushout_product(f, g), gf = pushout_product(g, f);
    // corner of f□g: A⊗D' ∐ B'⊗C; braid each summand
    Morphism s1 = permute_factors({f.src, g.tgt}, {1, 0}, Variant::ChainQ);
    Morphism s2 = permute_factors({f.tgt, g.src}, {1, 0}, Variant::ChainQ);
    Morphism h = pushout_induced(fg.corner, compose(gf.corner.leg_c, s1), compose(gf.corner.leg_b, s2));
    EXPECT_TRUE(is_chain_map(h));
    EXPECT_TRUE(is_iso(h));
    Morphism braid = permute_factors({f.tgt, g.tgt}, {1, 0}, Variant::ChainQ);
    EXPECT_EQ(compose(gf.map, h), compose(braid, fg.map));
  }
}

TEST(Homology, Examples) {
  Object acyc = two_term(1, 1, SMatrix::identity(1));
  EXPECT_EQ(homology(acyc, 0), 0);
  EXPECT_EQ(homology(acyc, 1), 0);
  Object z = Object::chain(0, {2, 3}, {});
  EXPECT_EQ(homology(z, 0), 2);
  EXPECT_EQ(homology(z, 1), 3);
  Rng rng(47);
  Object x = random_chain(rng, 0, 3, 4);
  EXPECT_TRUE(is_acyclic(cone(identity(x))));
  EXPECT_TRUE(is_quasi_iso(identity(x)));
  try {
    homology(Object::vect(2), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongVariant);
  }
}

TEST(Homology, ShiftAndHomologyMap) {
  Rng rng(53);
  for (int t = 0; t < 10; ++t) {
    Object x = random_chain(rng, 0, 3, 4);
    Object s = shift(x, 2);
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(homology(s, k + 2), homology(x, k));
    Morphism z = zero_map(x, x);
    for (int k = 0; k <= 3; ++k) {
      EXPECT_EQ(homology_map_rank(identity(x), k), homology(x, k));
      EXPECT_EQ(homology_map_rank(z, k), 0);
    }
  }
}

TEST(Object, InvalidChainRejected) {
  SMatrix d1 = SMatrix::identity(1), d2 = SMatrix::identity(1);
  EXPECT_THROW(Object::chain(0, {1, 1, 1}, {SMatrix(0, 1), d1, d2}), Error);
  EXPECT_THROW(Object::finset({"a", "a"}), Error);
  EXPECT_THROW(Object::vect(-1), Error);
}
