#include <gtest/gtest.h>

#include "opkit/canonical.hpp"
#include "opkit/generate.hpp"

using namespace opkit;

namespace {

SymSeq singletons(const ColorSet& w, int bound, Variant v = Variant::FinSet) {
  SymSeq s(w, v, bound, false);
  for (const auto& sig : all_signatures(w, bound)) s.set(sig, trivial_entry(Object::unit(v), aut_group(sig.in)));
  return s;
}

SymSeq nullary(const ColorSet& w, Variant v, const Object& val) {
  SymSeq s(w, v, 0, false);
  for (int c = 0; c < w.size(); ++c) s.set(Signature{c, {}}, trivial_entry(val, aut_group({})));
  return s;
}

}  // namespace

TEST(Compose, SingletonSquareArityTwo) {
  ColorSet w = ColorSet::single();
  SymSeq c = singletons(w, 3);
  auto cw = compose(c, c, 2);
  EXPECT_EQ(cw.result.value(Signature{0, {0, 0}}).size(), 5);
  auto o = compose_oracle(c, c, 2);
  EXPECT_EQ(o.result.value(Signature{0, {0, 0}}).size(), 5);
  EXPECT_TRUE(compare_with_oracle(cw, o).ok);
}

TEST(Compose, NullaryInputGivesMultisets) {
  ColorSet w = ColorSet::single();
  SymSeq y = singletons(w, 3);
  SymSeq x = nullary(w, Variant::FinSet, Object::finset({"a", "b"}));
  auto cw = compose(y, x, 0);
  EXPECT_EQ(cw.result.value(Signature{0, {}}).size(), 1 + 2 + 3 + 4);
}

TEST(Compose, UnitLaws) {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    ColorSet w = t % 2 ? ColorSet({"a", "b"}) : ColorSet::single();
    Variant v = t % 3 == 0 ? Variant::VectQ : Variant::FinSet;
    SymSeq y = random_seq(rng, w, v, 2, 3);
    SymSeq u = unit_seq(w, v);
    auto left = compose(u, y, 2);
    auto right = compose(y, u, 2);
    for (const auto& sig : all_signatures(w, 2)) {
      Morphism l = left_unitor(left, sig);
      Morphism r = right_unitor(right, sig);
      auto G = aut_group(sig.in);
      auto act = [&](const Perm& g) { return y.act(sig, g); };
      EXPECT_TRUE(check_equivariant_iso(l, *G, [&](const Perm& g) { return left.result.act(sig, g); }, act).ok);
      EXPECT_TRUE(check_equivariant_iso(r, *G, [&](const Perm& g) { return right.result.act(sig, g); }, act).ok);
    }
  }
}

TEST(Compose, EmptyAndFinitarity) {
  ColorSet w = ColorSet::single();
  SymSeq e = empty_seq(w, Variant::FinSet, 2);
  SymSeq c = singletons(w, 2);
  EXPECT_TRUE(compose(e, c, 3).result.is_empty());
  EXPECT_TRUE(compose_oracle(e, c, 3).result.is_empty());
  SymSeq trunc = c;
  trunc.truncated = true;
  try {
    compose(trunc, c, 2);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NonFinitary);
  }
  try {
    compose(c, SymSeq(ColorSet({"a", "b"}), Variant::FinSet, 1), 1);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::ColorMismatch);
  }
}

TEST(Compose, AgreesWithOracle) {
  Rng rng(2024);
  for (int t = 0; t < 24; ++t) {
    ColorSet w = t % 2 ? ColorSet({"a", "b"}) : ColorSet::single();
    Variant v = static_cast<Variant>(t % 3);
    SymSeq x = random_seq(rng, w, v, 2, 3);
    SymSeq y = random_seq(rng, w, v, 2, 3);
    auto cw = compose(x, y, 3);
    auto o = compose_oracle(x, y, 3);
    auto r = compare_with_oracle(cw, o);
    EXPECT_TRUE(r.ok) << "instance " << t << ": " << r.witness;
  }
}

TEST(Compose, AssociatorIsIso) {
  Rng rng(77);
  for (int t = 0; t < 8; ++t) {
    ColorSet w = t % 2 ? ColorSet({"a", "b"}) : ColorSet::single();
    Variant v = static_cast<Variant>(t % 3);
    SymSeq x = random_seq(rng, w, v, 2, 2);
    SymSeq y = random_seq(rng, w, v, 2, 2, 1);
    SymSeq z = random_seq(rng, w, v, 2, 2);
    auto a = assoc_data(x, y, z, 2);
    for (const auto& sig : all_signatures(w, 2)) {
      Morphism f = associator(a, sig);
      auto G = aut_group(sig.in);
      auto r = check_equivariant_iso(
          f, *G, [&](const Perm& g) { return a.xy_z.result.act(sig, g); },
          [&](const Perm& g) { return a.x_yz.result.act(sig, g); });
      EXPECT_TRUE(r.ok) << "instance " << t << " " << signature_string(sig, w) << ": " << r.witness;
    }
  }
}
