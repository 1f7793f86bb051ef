#include <gtest/gtest.h>

#include <set>

#include "opkit/verify.hpp"

using namespace opkit;

namespace {

InstanceSpec spec(std::uint64_t seed, bool corrupt = false) {
  InstanceSpec s;
  s.seed = seed;
  s.corrupt = corrupt;
  return s;
}

// The documented corrupted instance of every suite.
InstanceSpec corrupted(const std::string& suite) {
  InstanceSpec s = spec(0, true);
  if (suite == "lq_n-pushout") s.seed = 1;
  if (suite == "compute1" || suite == "compute2") s.size = 3;
  return s;
}

}  // namespace

TEST(Verify, EverySuitePassesOnSeedZero) {
  for (const auto& name : suite_names()) {
    auto r = run_suite(name, spec(0));
    EXPECT_TRUE(r.pass) << name << ": " << r.witness;
    EXPECT_TRUE(r.witness.empty()) << name;
    EXPECT_EQ(r.suite, name);
  }
}

TEST(Verify, SuitesPassOnMoreSeeds) {
  for (const auto& name : suite_names())
    for (std::uint64_t seed = 1; seed < 4; ++seed) {
      auto r = run_suite(name, spec(seed));
      EXPECT_TRUE(r.pass) << name << " seed " << seed << ": " << r.witness;
    }
}

TEST(Verify, TwoColoredAndLinearInstances) {
  for (const std::string name : {"compose-oracle", "lq_n-pushout", "compute1", "compute2", "filtration-oracle"})
    for (Variant v : {Variant::FinSet, Variant::VectQ}) {
      InstanceSpec s = spec(5);
      s.colors = 2;
      s.variant = v;
      auto r = run_suite(name, s);
      EXPECT_TRUE(r.pass) << name << ": " << r.witness;
    }
}

TEST(Verify, EverySuiteDetectsItsMutation) {
  for (const auto& name : suite_names()) {
    auto r = run_suite(name, corrupted(name));
    EXPECT_FALSE(r.pass) << name;
    EXPECT_FALSE(r.witness.empty()) << name;
  }
}

TEST(Verify, CorruptedComputeNamesTheOrbit) {
  auto r = run_suite("compute1", corrupted("compute1"));
  ASSERT_FALSE(r.pass);
  EXPECT_NE(r.witness.find("output c, arity 2"), std::string::npos) << r.witness;
}

TEST(Verify, Deterministic) {
  for (const auto& name : suite_names()) {
    auto a = run_suite(name, corrupted(name)), b = run_suite(name, corrupted(name));
    EXPECT_EQ(a.pass, b.pass) << name;
    EXPECT_EQ(a.witness, b.witness) << name;
  }
}

TEST(Verify, Errors) {
  EXPECT_THROW(run_suite("no-such-suite", spec(0)), Error);
  try {
    run_suite("no-such-suite", spec(0));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownSuite);
  }
  InstanceSpec s = spec(0);
  s.arity = 1;
  try {
    run_suite("lq_n-pushout", s);
    ADD_FAILURE() << "arity 1 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundsTooTight);
  }
  s.arity = 0;
  try {
    generate(s);
    ADD_FAILURE() << "arity 0 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundsTooTight);
  }
}

TEST(Generate, SeedDeterminism) {
  for (int colors = 1; colors <= 2; ++colors)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      InstanceSpec s = spec(seed);
      s.colors = colors;
      EXPECT_EQ(operad_fingerprint(generate(s).op), operad_fingerprint(generate(s).op));
    }
}

TEST(Generate, GeneratedOperadsAreOperads) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    InstanceSpec s = spec(seed);
    Instance in = generate(s);
    auto r = check_operad(in.op, 3);
    EXPECT_TRUE(r.ok) << in.op.name << ": " << (r.failures.empty() ? "" : r.failures[0]);
    EXPECT_EQ(in.x.carrier[0].size(), in.op.seq.value(Signature{0, {}}).size() + in.generators) << in.op.name;
  }
  InstanceSpec s = spec(0);
  s.colors = 3;
  s.arity = 2;
  EXPECT_TRUE(check_operad(generate(s).op, 2).ok);
}

TEST(Generate, ManyDistinctTwoColored) {
  std::set<std::string> prints;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    InstanceSpec s = spec(seed);
    s.colors = 2;
    s.arity = 2;
    prints.insert(operad_fingerprint(generate_operad(s)));
  }
  EXPECT_GE(prints.size(), 30u);
}
