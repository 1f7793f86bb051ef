#include <gtest/gtest.h>

#include "opkit/filtration.hpp"

using namespace opkit;

namespace {

Algebra pointed(const Operad& p, int extra) {
  std::vector<Object> e;
  for (int c = 0; c < p.colors().size(); ++c)
    e.push_back(p.variant() == Variant::FinSet ? Object::finset(extra) : Object::vect(extra));
  return extend_nullary(p, e);
}

std::vector<int> sizes(const std::vector<FiltrationStage>& st, int c = 0) {
  std::vector<int> r;
  for (const auto& s : st) r.push_back(s.value[c].size());
  return r;
}

}  // namespace

TEST(Filtration, OracleStageSizes) {
  Operad c = com(4);
  Operad a = ass(4);
  Algebra xc = pointed(c, 1), xa = pointed(a, 1);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_EQ(free_algebra_stage_oracle(c, xc, n).value[0].size(), n + 1);
    EXPECT_EQ(free_algebra_stage_oracle(a, xa, n).value[0].size(), n + 1);
  }
  EXPECT_EQ(free_algebra_stage_oracle(c, pointed(c, 2), 3).value[0].size(), 10);
  EXPECT_EQ(free_algebra_stage_oracle(a, pointed(a, 2), 3).value[0].size(), 15);
}

TEST(Filtration, PushoutStageSizes) {
  Operad c = com(4);
  Operad a = ass(4);
  EXPECT_EQ(sizes(free_algebra_stages(c, pointed(c, 1), 3)), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(sizes(free_algebra_stages(a, pointed(a, 1), 3)), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(sizes(free_algebra_stages(c, pointed(c, 2), 3)), (std::vector<int>{1, 3, 6, 10}));
  EXPECT_EQ(sizes(free_algebra_stages(a, pointed(a, 2), 3)), (std::vector<int>{1, 3, 7, 15}));
}

TEST(Filtration, PushoutAgreesWithOracle) {
  std::vector<Operad> ops{com(3), ass(3), mcom(3), linearize(com(3)), ass(3, Variant::VectQ, false)};
  for (const auto& p : ops) {
    Algebra x = pointed(p, 1);
    auto st = free_algebra_stages(p, x, 3);
    for (int n = 0; n <= 3; ++n) {
      auto r = compare_stage(p, x, st[n], skeleton_composite(p, x, n));
      EXPECT_TRUE(r.ok) << p.name << " n=" << n << ": " << r.witness;
    }
  }
}

TEST(Filtration, InitialAlgebraIsFixed) {
  for (const auto& p : {com(3), ass(3)}) {
    Algebra x = pointed(p, 0);
    for (const auto& s : free_algebra_stages(p, x, 3)) {
      EXPECT_EQ(s.value[0].size(), 1);
      EXPECT_TRUE(is_iso(s.structure[0]));
    }
  }
}

TEST(Filtration, RandomTwoColoredAgreeWithOracle) {
  for (int seed = 0; seed < 12; ++seed) {
    Rng rng(seed);
    Operad p = random_two_colored_operad(rng, 3);
    Algebra x = pointed(p, 1);
    auto st = free_algebra_stages(p, x, 3);
    for (int n = 2; n <= 3; ++n) {
      auto r = compare_stage(p, x, st[n], skeleton_composite(p, x, n));
      EXPECT_TRUE(r.ok) << p.name << " n=" << n << ": " << r.witness;
    }
  }
}

TEST(Filtration, WrongStageIsRejected) {
  Operad c = com(3);
  Algebra x = pointed(c, 1);
  auto st = free_algebra_stages(c, x, 3);
  EXPECT_FALSE(compare_stage(c, x, st[3], skeleton_composite(c, x, 2)).ok);
}

TEST(Filtration, StagesAreOneSkeletonAlgebras) {
  for (const auto& p : {com(3), ass(3), mcom(3)}) {
    Algebra x = pointed(p, 1);
    for (const auto& s : free_algebra_stages(p, x, 3)) {
      Algebra a = stage_algebra(p, x, s);
      auto r = check_algebra(one_skeleton(p), a, 1);
      EXPECT_TRUE(r.ok) << p.name << " n=" << s.n << ": " << (r.failures.empty() ? "" : r.failures[0]);
    }
  }
}

TEST(QObject, SmallCases) {
  Morphism f = Morphism::from_table(Object::finset(1), Object::finset(2), {0});
  QObject q = q_object({f, f});
  EXPECT_EQ(q.obj().size(), 3);
  EXPECT_EQ(q.map.tgt.size(), 4);
  EXPECT_TRUE(compare_q_with_pushout_product(q).check.ok);
  QObject q1 = q_object({f});
  EXPECT_EQ(q1.obj().size(), 1);
  EXPECT_TRUE(q1.map == compose(q1.map, identity(q1.obj())));
  Morphism z = zero_map(Object::vect(0), Object::vect(2));
  QObject q0 = q_object({z, z});
  EXPECT_EQ(q0.obj().size(), 0);
  EXPECT_EQ(q0.map.tgt.size(), 4);
}

TEST(QObject, AgreesWithPushoutProduct) {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    int n = 1 + t % 3;
    std::vector<Morphism> fs;
    for (int i = 0; i < n; ++i) {
      if (t % 2 == 0) {
        int a = uniform_int(rng, 0, 2), b = uniform_int(rng, a == 0 ? 0 : 1, 3);
        std::vector<int> tab(a);
        for (auto& e : tab) e = uniform_int(rng, 0, b - 1);
        fs.push_back(Morphism::from_table(Object::finset(a), Object::finset(b), tab));
      } else {
        int a = uniform_int(rng, 0, 2), b = uniform_int(rng, 0, 3);
        fs.push_back(Morphism::from_matrix(Object::vect(a), Object::vect(b), random_matrix(rng, b, a)));
      }
    }
    auto r = compare_q_with_pushout_product(q_object(fs));
    EXPECT_TRUE(r.check.ok) << "instance " << t << ": " << r.check.witness;
  }
}

TEST(Filtration, SquareOfSequences) {
  for (const auto& p : {com(3), ass(3), mcom(3)})
    for (int n = 2; n <= 3; ++n) {
      auto r = lq_square_check(p, n);
      EXPECT_TRUE(r.ok) << p.name << " n=" << n << ": " << (r.failures.empty() ? "" : r.failures[0]);
    }
}

TEST(Filtration, ClosedFormsOfAttaching) {
  std::vector<Operad> ops{com(3), ass(3), mcom(3), ass(3, Variant::VectQ, false)};
  for (int seed = 0; seed < 4; ++seed) {
    Rng rng(seed);
    ops.push_back(random_two_colored_operad(rng, 3));
  }
  for (const auto& p : ops) {
    Algebra x = pointed(p, 1);
    for (int n = 2; n <= 3; ++n)
      for (int w0 = 0; w0 < p.colors().size(); ++w0) {
        auto a = attaching_comparison(p, x, n, w0);
        auto r1 = check_compute1(p, a);
        auto r2 = check_compute2(p, a);
        EXPECT_TRUE(r1.ok) << p.name << ": " << r1.witness;
        EXPECT_TRUE(r2.ok) << p.name << ": " << r2.witness;
      }
  }
}

TEST(Filtration, AttachingComAtArityTwo) {
  Operad c = com(3);
  RMaps r = r_maps(c, pointed(c, 1), 2, 0);
  // Q = {pt pt, x pt, pt x}; modulo Σ_2 two classes.
  EXPECT_EQ(r.cq.obj().size(), 2);
  EXPECT_EQ(r.cx.obj().size(), 3);
  EXPECT_EQ(r.r_minus.obj.size(), 2);
  EXPECT_EQ(r.r_plus.obj.size(), 3);
}

TEST(Filtration, CorruptedComparisonFails) {
  Operad c = com(3);
  auto a = attaching_comparison(c, pointed(c, 2), 2, 0);
  int n = a.canon_q.tgt.size();
  std::vector<int> tab(a.canon_q.src.size(), 0);
  a.canon_q = Morphism::from_table(a.canon_q.src, a.canon_q.tgt, tab);
  EXPECT_GT(n, 1);
  EXPECT_FALSE(check_compute1(c, a).ok);
}
