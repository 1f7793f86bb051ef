#include <gtest/gtest.h>

#include "opkit/envelope.hpp"
#include "opkit/generate.hpp"
#include "opkit/io.hpp"

using namespace opkit;

namespace {

int parse_error_line(const std::string& text, int* col = nullptr) {
  try {
    parse_definitions(text);
  } catch (const ParseError& e) {
    if (col) *col = e.column();
    return e.line();
  }
  return 0;
}

Definitions reparse(const Definitions& d) {
  std::string t = write_definitions(d);
  Definitions e = parse_definitions(t);
  EXPECT_EQ(write_definitions(e), t);
  return e;
}

}  // namespace

TEST(Io, LibraryOperadMatchesConstructor) {
  auto d = parse_definitions("colors c\nvariant FinSet\n[operad com]\nlibrary com\nbound 3\n");
  EXPECT_TRUE(same_operad(d.operad("com"), com(3)));
  auto a = parse_definitions("[operad p]\nlibrary ass\nbound 3\nunital no\n");
  EXPECT_TRUE(same_operad(a.operad("p"), ass(3, Variant::FinSet, false)));
  auto m = parse_definitions("colors a m\n[operad p]\nlibrary com\npredicate mcom\nbound 3\n");
  EXPECT_TRUE(same_operad(m.operad("p"), mcom(3)));
}

TEST(Io, OperadRoundTrip) {
  std::vector<std::pair<std::string, Operad>> ops{
      {"colors c\nvariant FinSet\n", ass(3)},
      {"colors c\nvariant VectQ\n", ass(3, Variant::VectQ)},
      {"colors c\nvariant ChainQ\n", com(3, Variant::ChainQ)},
      {"colors a m\nvariant FinSet\n", mcom(3)},
  };
  for (const auto& [head, p] : ops) {
    std::string text = head + "\n" + write_operad("p", p);
    Definitions d = parse_definitions(text);
    EXPECT_TRUE(same_operad(d.operad("p"), p)) << p.name;
    EXPECT_TRUE(check_operad(d.operad("p"), 3).ok) << p.name;
    Definitions e = reparse(d);
    EXPECT_TRUE(same_operad(e.operad("p"), p)) << p.name;
  }
}

TEST(Io, SequenceRoundTrip) {
  Rng rng(3);
  for (int t = 0; t < 12; ++t) {
    ColorSet w = t % 2 ? ColorSet({"a", "b"}) : ColorSet::single();
    Variant v = static_cast<Variant>(t % 3);
    SymSeq s = random_seq(rng, w, v, 3, 3);
    std::string text = write_header(w, v) + write_sequence("x", s);
    Definitions d = parse_definitions(text);
    EXPECT_TRUE(same_sequence(d.sequence("x"), s)) << t;
    EXPECT_EQ(write_sequence("x", d.sequence("x")), write_sequence("x", s)) << t;
  }
}

TEST(Io, AlgebraAndGenerators) {
  std::string text =
      "[operad com]\nlibrary com\nbound 3\n"
      "[algebra z3]\noperad com\ncarrier c size 3\nrule sum\n"
      "[algebra init]\noperad com\ninitial\n"
      "[generators x]\noperad com\nextra c size 1\n";
  Definitions d = parse_definitions(text);
  EXPECT_TRUE(check_algebra(d.operad("com"), d.algebra("z3").a, 3).ok);
  EXPECT_EQ(d.algebra("init").a.carrier[0].size(), 1);
  EXPECT_EQ(d.generator("x").x.carrier[0].size(), 2);
  Definitions e = reparse(d);
  EXPECT_TRUE(same_algebra(e.algebra("z3").a, d.algebra("z3").a));
  EXPECT_TRUE(same_algebra(e.algebra("init").a, d.algebra("init").a));
  EXPECT_TRUE(same_operad(e.operad("com"), com(3)));
}

TEST(Io, ModuleRoundTrip) {
  Operad c = com(3);
  Algebra a = initial_algebra(c);
  auto mods = enumerate_modules(c, a, 2, 3);
  ASSERT_FALSE(mods.empty());
  Definitions d = parse_definitions("[operad com]\nlibrary com\nbound 3\n[algebra a]\noperad com\ninitial\n");
  for (const auto& m : mods) {
    std::string text = write_definitions(d) + "\n" + write_module("m", ModuleDef{"com", "a", m}, d.colors);
    Definitions e = parse_definitions(text);
    EXPECT_TRUE(same_module(e.modules.at("m").m, m));
    EXPECT_TRUE(check_module(c, a, e.modules.at("m").m, 3).ok);
  }
}

TEST(Io, ComplexesAndRationals) {
  std::string text =
      "[complex a]\nlo -1\ndims 1 2 1\nd 0 [1/2 -3/4]\nd 1 [3/2; 1]\n"
      "[prespectrum s]\nsigma-plus a 3\n"
      "[prespectrum t]\nsuspension a a 2\n";
  Definitions d = parse_definitions(text);
  const Object& a = d.complex("a");
  EXPECT_EQ(a.lo(), -1);
  EXPECT_EQ(a.d(0).at(0, 0), Q(1, 2));
  EXPECT_EQ(a.d(0).at(0, 1), Q(-3, 4));
  Definitions e = reparse(d);
  EXPECT_TRUE(same_object(e.complex("a"), a));
  EXPECT_EQ(e.prespectrum("s").truncation, 3);
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    Object x = random_chain(rng, -1, 2, 3);
    Definitions f = parse_definitions(write_complex("x", x));
    EXPECT_TRUE(same_object(f.complex("x"), x));
  }
}

TEST(Io, PositionedErrors) {
  int col = 0;
  EXPECT_EQ(parse_error_line("[operad p]\nlibrary com\nbound x\n", &col), 3);
  EXPECT_EQ(col, 7);
  EXPECT_EQ(parse_error_line("colors c\n\n[operad p]\nlibrary nope\nbound 2\n", &col), 4);
  EXPECT_EQ(parse_error_line("[sequence s]\nbound 1\nentry (c;d) size 1\n", &col), 3);
  EXPECT_EQ(col, 7);
  EXPECT_EQ(parse_error_line("[complex a]\ndims 1 1\nd 1 [1 2]\n", &col), 3);
  EXPECT_EQ(parse_error_line("[complex a]\ndims 1 1\nd 1 [1/0]\n", &col), 3);
  EXPECT_EQ(col, 6);
  EXPECT_EQ(parse_error_line("[operad p]\nbound 1\ntruncated no\nentry (c;c) size 1\nunit c [0]\nunit c [0]\n"), 6);
  // an action that is not a group action
  EXPECT_EQ(parse_error_line("[sequence s]\nbound 2\nentry (c,c;c) size 2\nact (c,c;c) 0 [0 0]\n"), 3);
  // explicit operad with a missing composition
  EXPECT_GT(parse_error_line("[operad p]\nbound 2\nentry (c;c) size 1\nentry (c,c;c) size 1\nunit c [0]\n"), 0);
  EXPECT_EQ(parse_error_line("[generators x]\nextra c size 1\n"), 2);
  EXPECT_EQ(parse_error_line("[operad p]\nlibrary com\nbound 2\n[operad p]\nlibrary com\nbound 2\n", &col), 4);
  EXPECT_EQ(parse_error_line("variant Sets\n", &col), 1);
  EXPECT_EQ(col, 9);
}
