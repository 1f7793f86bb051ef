#include <gtest/gtest.h>

#include "opkit/linalg.hpp"
#include "opkit/random.hpp"

using namespace opkit;

TEST(Linalg, RationalRoundTrip) {
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_EQ(to_string(parse_rational("-7")), "-7");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(Linalg, RankAndKernel) {
  SMatrix a = SMatrix::from_dense({{1, 2, 3}, {2, 4, 6}}, 3);
  EXPECT_EQ(rank(a), 1);
  auto ker = kernel_basis(a);
  ASSERT_EQ(ker.size(), 2u);
  for (const auto& v : ker) EXPECT_TRUE(a.apply(v).empty());
}

TEST(Linalg, SolveAndInverse) {
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    int n = uniform_int(rng, 1, 6);
    SMatrix a = random_invertible(rng, n);
    SMatrix ai = inverse(a);
    EXPECT_EQ(a * ai, SMatrix::identity(n));
    EXPECT_EQ(ai * a, SMatrix::identity(n));
  }
  SMatrix s = SMatrix::from_dense({{1, 1}, {1, 1}}, 2);
  EXPECT_THROW(inverse(s), std::domain_error);
  LinearSolver sol(s);
  SparseVec x;
  EXPECT_FALSE(sol.solve(SparseVec::unit(0), x));
  SparseVec b;
  b.e = {{0, 2}, {1, 2}};
  ASSERT_TRUE(sol.solve(b, x));
  EXPECT_EQ(s.apply(x), b);
}

TEST(Linalg, KroneckerMixedProduct) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    SMatrix a = random_matrix(rng, 2, 3), b = random_matrix(rng, 3, 2);
    SMatrix c = random_matrix(rng, 3, 2), d = random_matrix(rng, 2, 2);
    EXPECT_EQ(SMatrix::kron(a, b) * SMatrix::kron(c, d), SMatrix::kron(a * c, b * d));
  }
}

TEST(Linalg, EchelonRankMatchesRandomRank) {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    int n = uniform_int(rng, 1, 7), r = uniform_int(rng, 0, n);
    SMatrix proj(n, n);
    for (int i = 0; i < r; ++i) proj.set(i, i, 1);
    SMatrix a = random_invertible(rng, n) * proj * random_invertible(rng, n);
    EXPECT_EQ(rank(a), r);
    EXPECT_EQ(static_cast<int>(kernel_basis(a).size()), n - r);
  }
}
