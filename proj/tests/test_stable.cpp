#include <gtest/gtest.h>

#include <chrono>

#include "opkit/stable.hpp"

using namespace opkit;

namespace {

std::string first(const Report& r) { return r.failures.empty() ? "" : r.failures[0]; }

Object point_in_degree_zero() { return Object::chain(0, {1}, {SMatrix(0, 1)}); }

Prespectrum constant_acyclic(const Object& a, const Object& e, int t) {
  Prespectrum s;
  s.bound = t;
  s.base = a;
  OverUnder x = include_coprod(a, e);
  for (int n = 0; n <= t; ++n) {
    s.entry.emplace(Index2{n, n}, x);
    if (n == t) break;
    s.entry.emplace(Index2{n + 1, n}, x);
    s.entry.emplace(Index2{n, n + 1}, x);
    for (Index2 ix : {Index2{n, n}, Index2{n + 1, n}}) s.up.emplace(ix, identity(x.total));
    for (Index2 ix : {Index2{n, n}, Index2{n, n + 1}}) s.right.emplace(ix, identity(x.total));
  }
  return s;
}

}  // namespace

TEST(Kernel, StrictUnit) {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    Object a = random_chain(rng, 0, 4, 3), b = random_chain(rng, 0, 4, 3);
    EXPECT_TRUE(same_object(kernel_functor(include_coprod(a, b)), b)) << i;
  }
}

TEST(Kernel, ZeroBase) {
  Rng rng(2);
  Object z = Object::initial(Variant::ChainQ);
  for (int i = 0; i < 20; ++i) {
    Object c = random_chain(rng, 0, 4, 4);
    OverUnder x{z, c, zero_map(z, c), zero_map(c, z)};
    EXPECT_TRUE(check_over_under(x).ok);
    EXPECT_TRUE(same_object(kernel_functor(x), c));
  }
}

TEST(Kernel, CounitIsQuasiIso) {
  Rng rng(3);
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 100; ++i) {
    OverUnder x = random_over_under(rng, 0, 4, 6);
    ASSERT_TRUE(check_over_under(x).ok) << i;
    auto r = check_counit(x);
    EXPECT_TRUE(r.ok) << i << ": " << first(r);
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 30.0);
}

TEST(Kernel, BrokenSectionFails) {
  Rng rng(4);
  OverUnder x = random_over_under(rng, 0, 3, 6);
  while (x.base.size() == 0) x = random_over_under(rng, 0, 3, 6);
  x.s = compose(x.s, Morphism::linear_from(x.base, x.base, [&](int n) {
    return SMatrix::identity(x.base.dim(n)).scaled(2);
  }));
  EXPECT_FALSE(check_over_under(x).ok);
}

TEST(Spectra, SuspensionIsOmega) {
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    Object a = random_chain(rng, 0, 2, 2), k = random_chain(rng, 0, 3, 3);
    auto r = omega_spectrum_check(suspension_prespectrum(a, k, 4));
    EXPECT_TRUE(r.ok) << i << ": " << first(r);
  }
  Object a = random_chain(rng, 0, 2, 2);
  Object e = cone(identity(random_chain(rng, 0, 2, 3)));
  auto r = omega_spectrum_check(constant_acyclic(a, e, 3));
  EXPECT_TRUE(r.ok) << first(r);
}

TEST(Spectra, CorruptedSquareFails) {
  Object a = point_in_degree_zero();
  Object k = point_in_degree_zero();
  Prespectrum s = suspension_prespectrum(a, k, 4);
  // both horizontal maps of square 2 killed; the square still commutes
  Object c = kernel_functor(s.entry.at({2, 3}));
  s.right.at({2, 3}) = coprod_lift(a, zero_map(c, shift(k, 3)));
  s.right.at({2, 2}) = coprod_lift(a, zero_map(shift(k, 2), kernel_functor(s.entry.at({3, 2}))));
  ASSERT_TRUE(check_prespectrum(s).ok) << first(check_prespectrum(s));
  auto r = omega_spectrum_check(s);
  ASSERT_FALSE(r.ok);
  // ker X_{3,3} = Q in degree 3; the cone of the square misses it
  EXPECT_NE(r.failures[0].find("square 2"), std::string::npos) << r.failures[0];
  EXPECT_NE(r.failures[0].find("degree"), std::string::npos) << r.failures[0];
}

TEST(Spectra, StableHomologyOfSuspension) {
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    Object a = random_chain(rng, 0, 2, 2), k = random_chain(rng, -1, 3, 3);
    StableHomology h = spectrify(suspension_prespectrum(a, k, 3));
    for (const auto& [q, v] : h.rank) {
      ASSERT_TRUE(v.has_value()) << q;
      EXPECT_EQ(*v, homology(k, q)) << i << " q=" << q;
      EXPECT_EQ(h.stabilized_at.at(q), 0);
    }
    // Σ then Ω
    StableHomology h2 = spectrify(suspension_prespectrum(a, loop(suspension(k)), 3));
    EXPECT_EQ(h.rank, h2.rank);
  }
  StableHomology pt = spectrify(suspension_prespectrum(point_in_degree_zero(), point_in_degree_zero(), 2));
  EXPECT_EQ(pt.rank.at(0), 1);
  EXPECT_TRUE(spectrify(suspension_prespectrum(point_in_degree_zero(), cone(identity(point_in_degree_zero())), 2)).trivial());
}

TEST(Spectra, TruncationTooSmall) {
  Object a = point_in_degree_zero();
  Prespectrum s = suspension_prespectrum(a, a, 0);
  EXPECT_THROW(spectrify(s), Error);
  EXPECT_THROW(omega_spectrum_check(s), Error);
}

TEST(Spectra, CofiberDetectsEquivalences) {
  Rng rng(7);
  int eq = 0, neq = 0;
  for (int i = 0; i < 30; ++i) {
    Object a = random_chain(rng, 0, 1, 2), k = random_chain(rng, 0, 2, 2);
    bool acyclic = i % 2 == 0;
    Morphism h = random_injection(rng, k, 0, 2, 2, acyclic);
    Prespectrum x = suspension_prespectrum(a, h.src, 3), y = suspension_prespectrum(a, h.tgt, 3);
    PrespectrumMap f = suspension_map(a, h, 3);
    Prespectrum c = cofiber_prespectrum(x, y, f);
    ASSERT_TRUE(check_prespectrum(c).ok) << i << ": " << first(check_prespectrum(c));
    bool trivial = spectrify(c).trivial();
    bool equiv = stable_equiv_check(x, y, f).equivalent;
    EXPECT_EQ(trivial, equiv) << i;
    EXPECT_EQ(equiv, is_quasi_iso(h)) << i;
    (equiv ? eq : neq)++;
  }
  EXPECT_GT(eq, 0);
  EXPECT_GT(neq, 0);
}

TEST(Spectra, SigmaInftyPlus) {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    Object a = random_chain(rng, 0, 4, 6);
    auto r = sigma_infty_plus_check(a);
    EXPECT_TRUE(r.report.ok) << i << ": " << first(r.report);
  }
  auto pt = sigma_infty_plus_check(point_in_degree_zero());
  EXPECT_EQ(pt.stable.rank.at(0), 1);
  Object acyclic = cone(identity(random_chain(rng, 0, 2, 3)));
  EXPECT_TRUE(sigma_infty_plus_check(acyclic).stable.trivial());
}

TEST(Spectra, PushoutProductCofiberIsTrivial) {
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    Object a = random_chain(rng, 0, 1, 2);
    Morphism f = random_injection(rng, random_chain(rng, 0, 1, 2), 0, 1, 1, true);
    Morphism g = random_injection(rng, random_chain(rng, 0, 1, 2), 0, 1, 2, false);
    auto r = cofiber_pushout_product_check(a, f, g, 6);
    EXPECT_TRUE(r.ok) << i << ": " << first(r);
  }
}
