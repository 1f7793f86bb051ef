#include <gtest/gtest.h>

#include "opkit/symseq.hpp"

using namespace opkit;

namespace {

std::size_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

SymSeq com_like(const ColorSet& w, int bound) {
  SymSeq s(w, Variant::FinSet, bound, true);
  for (const auto& sig : all_signatures(w, bound)) s.set(sig, trivial_entry(Object::unit(Variant::FinSet), aut_group(sig.in)));
  return s;
}

}  // namespace

TEST(Orbits, Examples) {
  ColorSet one = ColorSet::single();
  auto o = orbit_enumerate(one, 3, 0);
  ASSERT_EQ(o.size(), 1u);
  EXPECT_EQ(aut_group(o[0].in)->order(), 6u);
  ColorSet ab({"a", "b"});
  auto t = orbit_enumerate(ab, 2, "a");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(aut_group(t[0].in)->order(), 2u);
  EXPECT_EQ(aut_group(t[1].in)->order(), 1u);
  EXPECT_EQ(aut_group(t[2].in)->order(), 2u);
  auto z = orbit_enumerate(ab, 0, 1);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(aut_group(z[0].in)->order(), 1u);
  EXPECT_THROW(orbit_enumerate(ab, 1, "q"), Error);
}

TEST(Orbits, StarsAndBars) {
  for (int nc = 1; nc <= 3; ++nc) {
    std::vector<std::string> names;
    for (int i = 0; i < nc; ++i) names.push_back("c" + std::to_string(i));
    ColorSet w(names);
    for (int n = 0; n <= 5; ++n) {
      std::size_t total = 0;
      for (int o = 0; o < nc; ++o) total += orbit_enumerate(w, n, o).size();
      EXPECT_EQ(total, binom(n + nc - 1, n) * nc);
    }
  }
}

TEST(Orbits, YoungOrdersAreProductsOfFactorials) {
  ColorSet w({"a", "b", "c"});
  for (int n = 0; n <= 5; ++n)
    for (const auto& s : orbit_enumerate(w, n, 0)) {
      std::size_t expect = 1;
      for (int c = 0; c < 3; ++c) expect *= factorial(static_cast<int>(std::count(s.in.begin(), s.in.end(), c)));
      EXPECT_EQ(aut_group(s.in)->order(), expect);
    }
}

TEST(Dec, Examples) {
  ColorSet one = ColorSet::single();
  auto d22 = dec_enumerate(one, 2, 2, 0);
  bool found = false;
  for (const auto& d : d22)
    if (d.fiber_sizes() == std::vector<int>{1, 1}) {
      found = true;
      EXPECT_EQ(d.stab.size(), 2u);
    }
  EXPECT_TRUE(found);
  // maps 2 -> 2 up to iso: {id}, {both to one slot, other empty}
  EXPECT_EQ(d22.size(), 2u);
  auto d01 = dec_enumerate(one, 0, 1, 0);
  ASSERT_EQ(d01.size(), 1u);
  auto d31 = dec_enumerate(one, 3, 1, 0);
  ASSERT_EQ(d31.size(), 1u);
  EXPECT_EQ(d31[0].stab.size(), 6u);
}

TEST(Dec, OrbitStabilizerCountsLabeledObjects) {
  // sum over classes |Aut(w)| n! / |stab| = number of labeled (phi, colors)
  ColorSet w({"a", "b"});
  for (int k = 0; k <= 3; ++k)
    for (int n = 0; n <= 3; ++n)
      for (const auto& leaves : orbit_enumerate(w, k, 0)) {
        std::size_t total = 0;
        for (const auto& d : dec_classes(w, leaves, n))
          total += aut_group(leaves.in)->order() * factorial(n) / d.stab.size();
        std::size_t labeled = 1;
        for (int i = 0; i < k; ++i) labeled *= n;
        for (int j = 0; j < n; ++j) labeled *= 2;
        EXPECT_EQ(total, labeled) << "k=" << k << " n=" << n;
      }
}

TEST(Dec, CanonicalIsInvariant) {
  std::vector<int> leaves = {0, 0, 1};
  std::vector<int> phi = {1, 0, 1}, slot = {1, 0};
  std::vector<int> p0, s0;
  Perm sg, tau;
  dec_canonical(leaves, phi, slot, p0, s0, &sg, &tau);
  // (sigma, tau) maps the labeled object to the representative
  for (int i = 0; i < 3; ++i) EXPECT_EQ(tau[phi[perm_inv(sg)[i]]], p0[i]);
  for (int j = 0; j < 2; ++j) EXPECT_EQ(s0[tau[j]], slot[j]);
  std::vector<int> p1, s1;
  dec_canonical(leaves, {0, 1, 0}, {0, 1}, p1, s1);
  EXPECT_EQ(p0, p1);
  EXPECT_EQ(s0, s1);
}

TEST(Skeleton, Properties) {
  ColorSet w({"a", "b"});
  SymSeq x = com_like(w, 3);
  EXPECT_TRUE(same_seq(skeleton(x, 3), x));
  EXPECT_TRUE(arity_part(unit_seq(w, Variant::FinSet), 0).is_empty());
  SymSeq s1 = skeleton(com_like(ColorSet::single(), 3), 1);
  EXPECT_EQ(s1.entries.size(), 2u);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_TRUE(same_seq(skeleton(arity_part(x, n), n), arity_part(x, n)));
    EXPECT_TRUE(same_seq(arity_part(arity_part(x, n), n), arity_part(x, n)));
    for (int m = 0; m <= 3; ++m) EXPECT_TRUE(same_seq(skeleton(skeleton(x, n), m), skeleton(x, std::min(m, n))));
  }
}

TEST(UnitSeq, Entries) {
  EXPECT_EQ(unit_seq(ColorSet::single(), Variant::VectQ).entries.size(), 1u);
  EXPECT_EQ(unit_seq(ColorSet({"a", "b"}), Variant::FinSet).entries.size(), 2u);
}

TEST(Transport, TupleFunctoriality) {
  ColorSet w({"a", "b"});
  SymSeq x(w, Variant::FinSet, 3);
  // X(a,a,b) = 2-element set swapped by the transposition of the a's
  Object two = Object::finset(2);
  Signature sig{0, {0, 0, 1}};
  x.set(sig, entry_from_function(two, aut_group(sig.in), [&](const Perm& p) {
    return Morphism::from_table(two, two, p[0] == 0 ? std::vector<int>{0, 1} : std::vector<int>{1, 0});
  }));
  std::vector<int> u = {0, 1, 0};
  Perm tau = {2, 1, 0};  // u -> u with factors 0,2 swapped
  Morphism m = x.transport(0, u, tau);
  EXPECT_EQ(m.table, (std::vector<int>{1, 0}));
  Perm tau2 = {0, 2, 1};  // u -> (a,a,b)
  Morphism m2 = x.transport(0, u, tau2);
  EXPECT_EQ(m2.table, (std::vector<int>{0, 1}));
}
