#include <gtest/gtest.h>

#include <fstream>

#include "opkit/cli.hpp"

using namespace opkit;
using nlohmann::json;

namespace {

const std::string kCom = std::string(OPKIT_DATA_DIR) + "/com.def";

struct CliRun {
  int code;
  json out, err;
  std::string raw;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(std::move(args), out, err);
  CliRun r{code, nullptr, nullptr, out.str()};
  if (!out.str().empty() && out.str()[0] == '{') r.out = json::parse(out.str());
  if (!err.str().empty()) r.err = json::parse(err.str());
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, FreeStageTable) {
  CliRun r = run({"free-stage", kCom, "com", "X", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["schema"], 1);
  std::vector<int> sizes;
  for (const auto& row : r.out["table"]) sizes.push_back(row["sizes"]["c"]);
  EXPECT_EQ(sizes, (std::vector<int>{1, 2, 3, 4}));
  // the serialized stages re-parse and every stage checks
  Definitions d = parse_definitions(r.out["stages"].get<std::string>());
  for (int n = 1; n <= 3; ++n) {
    const AlgebraDef& a = d.algebra("X_stage" + std::to_string(n));
    EXPECT_EQ(a.a.carrier[0].size(), n + 1);
    EXPECT_TRUE(check_algebra(d.operad(a.operad), a.a, 1).ok);
  }
}

TEST(Cli, VerifyExitCodes) {
  CliRun ok = run({"verify", "compute1", "--seed", "0"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out["pass"], true);
  EXPECT_EQ(ok.out["schema"], 1);
  EXPECT_TRUE(ok.out["witness"].is_null());
  CliRun bad = run({"verify", "compute1", "--seed", "0", "--size", "3", "--corrupt"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out["pass"], false);
  EXPECT_FALSE(bad.out["witness"].get<std::string>().empty());
  EXPECT_EQ(run({"verify", "no-such-suite"}).code, 2);
  EXPECT_EQ(run({"verify", "compute1", "--arity", "0"}).code, 3);
  CliRun all = run({"verify", "all", "--seed", "2"});
  EXPECT_EQ(all.code, 0);
  EXPECT_EQ(all.out["reports"].size(), suite_names().size());
}

TEST(Cli, MalformedFileExitsTwoWithPosition) {
  std::string path = temp_file("bad.def", "colors c\n[operad p]\nlibrary com\nbound three\n");
  CliRun r = run({"check", path, "p"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err["line"], 4);
  EXPECT_EQ(r.err["column"], 7);
  EXPECT_EQ(run({"check", "/nonexistent/file.def", "p"}).code, 2);
  EXPECT_EQ(run({"check", kCom, "missing"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, DomainErrorsExitThree) {
  EXPECT_EQ(run({"free-stage", kCom, "com", "X", "5"}).code, 3);
  EXPECT_EQ(run({"envelope", kCom, "com", "Z3", "--bound", "2"}).code, 3);
}

TEST(Cli, CheckReportsFailures) {
  EXPECT_EQ(run({"check", kCom, "com"}).code, 0);
  EXPECT_EQ(run({"check", kCom, "Z3"}).code, 0);
  EXPECT_EQ(run({"check", kCom, "SA"}).code, 0);
  // x * y = x is not commutative
  std::string path = temp_file("left.def",
                               "[operad com]\nlibrary com\nbound 2\n"
                               "[algebra L]\noperad com\ncarrier c size 2\n"
                               "act (;c) [0]\nact (c;c) [0 1]\nact (c,c;c) [0 0 1 1]\n");
  CliRun r = run({"check", path, "L"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out["pass"], false);
  EXPECT_FALSE(r.out["failures"].empty());
}

TEST(Cli, ComposeRoundTrip) {
  std::string path = temp_file("seq.def",
                               "[sequence one]\nbound 3\nentry (;c) size 1\nentry (c;c) size 1\n"
                               "entry (c,c;c) size 1\nentry (c,c,c;c) size 1\n"
                               "[sequence pts]\nbound 0\nentry (;c) size 2\n");
  CliRun r = run({"compose", path, "one", "pts", "--bound", "0"});
  ASSERT_EQ(r.code, 0);
  Definitions d = parse_definitions(r.out["result"].get<std::string>());
  // multisets of size <= 3 on two letters
  EXPECT_EQ(d.sequence("one_pts").value(Signature{0, {}}).size(), 1 + 2 + 3 + 4);
  CliRun t = run({"compose", path, "one", "pts", "--bound", "0", "--text"});
  EXPECT_EQ(t.raw, r.out["result"].get<std::string>());
  EXPECT_EQ(write_definitions(parse_definitions(t.raw)), t.raw);
}

TEST(Cli, EnvelopeAndStable) {
  CliRun e = run({"envelope", kCom, "com", "Z3", "--bound", "1", "--extras", "1"});
  ASSERT_EQ(e.code, 0);
  EXPECT_EQ(e.out["hom"][0]["size"], 3);
  Definitions d = parse_definitions(e.out["operad"].get<std::string>());
  EXPECT_TRUE(check_operad(d.operad("com_Z3"), 1).ok);
  CliRun s = run({"stable", kCom, "SA"});
  ASSERT_EQ(s.code, 0);
  ASSERT_EQ(s.out["homology"].size(), 8u);
  // A = Q^2 -> Q of rank one: H_0 = Q, H_1 = 0
  for (const auto& row : s.out["homology"]) {
    int q = row["degree"];
    EXPECT_EQ(row["rank"], q == 0 ? 1 : 0) << q;
  }
}
