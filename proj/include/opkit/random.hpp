#pragma once

// Seeded random generators for base-category data.

#include <random>
#include <vector>

#include "opkit/basecat.hpp"

namespace opkit {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Small integer-valued rational, zero with probability about `zero_bias`.
inline Q random_q(Rng& rng, double zero_bias = 0.4) {
  if (std::uniform_real_distribution<double>(0, 1)(rng) < zero_bias) return 0;
  int v = uniform_int(rng, -3, 3);
  return v == 0 ? Q(1) : Q(v);
}

inline SMatrix random_matrix(Rng& rng, int rows, int cols, double zero_bias = 0.4) {
  SMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      Q v = random_q(rng, zero_bias);
      if (v != 0) m.col(j).e.emplace_back(i, v);
    }
  return m;
}

/// Product of a random permutation matrix with unit lower and upper
/// triangular factors.
inline SMatrix random_invertible(Rng& rng, int n) {
  SMatrix l = SMatrix::identity(n), u = SMatrix::identity(n), p(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) {
      l.set(i, j, random_q(rng, 0.6));
      u.set(j, i, random_q(rng, 0.6));
    }
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int j = 0; j < n; ++j) p.set(perm[j], j, 1);
  return p * l * u;
}

/// Random bounded complex in degrees [lo, hi] with dimensions <= max_dim,
/// obtained from a direct sum of elementary complexes by a random change
/// of basis in every degree.
inline Object random_chain(Rng& rng, int lo, int hi, int max_dim, int min_dim = 0) {
  int n = hi - lo + 1;
  std::vector<int> dims(n);
  for (auto& d : dims) d = uniform_int(rng, min_dim, max_dim);
  // r[i] = rank of the differential out of degree lo + i.
  std::vector<int> r(n, 0);
  for (int i = 1; i < n; ++i) {
    int room_src = dims[i];
    int room_tgt = dims[i - 1] - r[i - 1];
    r[i] = uniform_int(rng, 0, std::max(0, std::min(room_src, room_tgt)));
  }
  // Basis of degree i: [boundary targets of r[i+1]] [sources of r[i]] [rest].
  std::vector<SMatrix> basis, inv;
  for (int i = 0; i < n; ++i) {
    basis.push_back(random_invertible(rng, dims[i]));
    inv.push_back(inverse(basis.back()));
  }
  std::vector<SMatrix> diff;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      diff.emplace_back(0, dims[0]);
      continue;
    }
    SMatrix d(dims[i - 1], dims[i]);
    int tgt0 = 0;  // boundaries in degree i-1 sit first
    int src0 = i + 1 < n ? r[i + 1] : 0;
    for (int k = 0; k < r[i]; ++k) d.set(tgt0 + k, src0 + k, 1);
    diff.push_back(basis[i - 1] * d * inv[i]);
  }
  return Object::chain(lo, dims, std::move(diff));
}

}  // namespace opkit
