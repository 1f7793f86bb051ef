#pragma once

// Exact sparse linear algebra over the rationals.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opkit {

using Q = mpq_class;

inline std::string to_string(const Q& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Q parse_rational(const std::string& s) {
  Q q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

/// Sparse vector: entries sorted by index, no explicit zeros.
struct SparseVec {
  std::vector<std::pair<int, Q>> e;

  bool empty() const { return e.empty(); }
  std::size_t nnz() const { return e.size(); }

  Q get(int i) const {
    auto it = std::lower_bound(e.begin(), e.end(), i,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != e.end() && it->first == i) return it->second;
    return 0;
  }

  static SparseVec unit(int i, Q v = 1) {
    SparseVec s;
    if (v != 0) s.e.emplace_back(i, std::move(v));
    return s;
  }

  // this += a * x
  void axpy(const Q& a, const SparseVec& x) {
    if (a == 0 || x.empty()) return;
    std::vector<std::pair<int, Q>> out;
    out.reserve(e.size() + x.e.size());
    std::size_t i = 0, j = 0;
    while (i < e.size() || j < x.e.size()) {
      if (j == x.e.size() || (i < e.size() && e[i].first < x.e[j].first)) {
        out.push_back(std::move(e[i++]));
      } else if (i == e.size() || x.e[j].first < e[i].first) {
        out.emplace_back(x.e[j].first, a * x.e[j].second);
        ++j;
      } else {
        Q v = e[i].second + a * x.e[j].second;
        if (v != 0) out.emplace_back(e[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    e = std::move(out);
  }

  void scale(const Q& a) {
    if (a == 0) {
      e.clear();
      return;
    }
    for (auto& p : e) p.second *= a;
  }

  SparseVec shifted(int off) const {
    SparseVec s = *this;
    for (auto& p : s.e) p.first += off;
    return s;
  }

  bool operator==(const SparseVec& o) const { return e == o.e; }
};

/// Column-sparse rational matrix.
class SMatrix {
 public:
  SMatrix() = default;
  SMatrix(int rows, int cols) : rows_(rows), cols_(cols), col_(static_cast<std::size_t>(cols)) {}

  static SMatrix identity(int n) {
    SMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.col_[i] = SparseVec::unit(i);
    return m;
  }

  static SMatrix from_dense(const std::vector<std::vector<Q>>& rowsv, int cols) {
    SMatrix m(static_cast<int>(rowsv.size()), cols);
    for (int r = 0; r < m.rows_; ++r)
      for (int c = 0; c < cols; ++c)
        if (rowsv[r][c] != 0) m.col_[c].e.emplace_back(r, rowsv[r][c]);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const SparseVec& col(int j) const { return col_[j]; }
  SparseVec& col(int j) { return col_[j]; }

  Q at(int r, int c) const { return col_[c].get(r); }

  void set(int r, int c, const Q& v) {
    auto& e = col_[c].e;
    auto it = std::lower_bound(e.begin(), e.end(), r,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != e.end() && it->first == r) {
      if (v == 0)
        e.erase(it);
      else
        it->second = v;
    } else if (v != 0) {
      e.insert(it, {r, v});
    }
  }

  void add_to(int r, int c, const Q& v) { set(r, c, at(r, c) + v); }

  bool is_zero() const {
    return std::all_of(col_.begin(), col_.end(), [](const SparseVec& v) { return v.empty(); });
  }

  SparseVec apply(const SparseVec& x) const {
    SparseVec out;
    for (const auto& [j, a] : x.e) out.axpy(a, col_[j]);
    return out;
  }

  SMatrix operator*(const SMatrix& b) const {
    if (cols_ != b.rows_) throw std::logic_error("SMatrix: shape mismatch in product");
    SMatrix out(rows_, b.cols_);
    for (int j = 0; j < b.cols_; ++j) out.col_[j] = apply(b.col_[j]);
    return out;
  }

  SMatrix operator+(const SMatrix& b) const {
    check_same(b);
    SMatrix out = *this;
    for (int j = 0; j < cols_; ++j) out.col_[j].axpy(1, b.col_[j]);
    return out;
  }

  SMatrix operator-(const SMatrix& b) const {
    check_same(b);
    SMatrix out = *this;
    for (int j = 0; j < cols_; ++j) out.col_[j].axpy(-1, b.col_[j]);
    return out;
  }

  SMatrix scaled(const Q& a) const {
    SMatrix out = *this;
    for (auto& c : out.col_) c.scale(a);
    return out;
  }

  bool operator==(const SMatrix& b) const {
    return rows_ == b.rows_ && cols_ == b.cols_ && col_ == b.col_;
  }

  // (a ⊗ b)(i*rb + k, j*cb + l) = a(i,j) * b(k,l)
  static SMatrix kron(const SMatrix& a, const SMatrix& b) {
    SMatrix out(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (int j = 0; j < a.cols_; ++j)
      for (int l = 0; l < b.cols_; ++l) {
        auto& c = out.col_[j * b.cols_ + l];
        for (const auto& [i, x] : a.col_[j].e)
          for (const auto& [k, y] : b.col_[l].e) c.e.emplace_back(i * b.rows_ + k, x * y);
      }
    return out;
  }

  /// Copy `b` into this matrix with its top-left corner at (r0, c0).
  void place(const SMatrix& b, int r0, int c0) {
    for (int j = 0; j < b.cols_; ++j)
      for (const auto& [i, x] : b.col_[j].e) set(r0 + i, c0 + j, x);
  }

  SMatrix transpose() const {
    SMatrix t(cols_, rows_);
    for (int j = 0; j < cols_; ++j)
      for (const auto& [i, x] : col_[j].e) t.col_[i].e.emplace_back(j, x);
    return t;
  }

  std::vector<std::vector<Q>> dense() const {
    std::vector<std::vector<Q>> d(rows_, std::vector<Q>(cols_));
    for (int j = 0; j < cols_; ++j)
      for (const auto& [i, x] : col_[j].e) d[i][j] = x;
    return d;
  }

  Q trace() const {
    Q t = 0;
    for (int j = 0; j < std::min(rows_, cols_); ++j) t += at(j, j);
    return t;
  }

 private:
  void check_same(const SMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw std::logic_error("SMatrix: shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<SparseVec> col_;
};

/// Incremental row echelon form over an n-dimensional space. Each stored row
/// has leading coefficient 1 at its pivot; `reduce` removes all pivot
/// coordinates from a vector.
class Echelon {
 public:
  explicit Echelon(int n = 0) : n_(n) {}

  int dim() const { return n_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  SparseVec reduce(const SparseVec& v) const {
    std::map<int, Q> work;
    for (const auto& [i, a] : v.e) work.emplace(i, a);
    SparseVec out;
    while (!work.empty()) {
      auto it = work.begin();
      int i = it->first;
      Q a = it->second;
      work.erase(it);
      auto r = rows_.find(i);
      if (r == rows_.end()) {
        out.e.emplace_back(i, std::move(a));
        continue;
      }
      for (std::size_t t = 1; t < r->second.e.size(); ++t) {
        const auto& [k, b] = r->second.e[t];
        auto w = work.find(k);
        if (w == work.end()) {
          work.emplace(k, -a * b);
        } else {
          w->second -= a * b;
          if (w->second == 0) work.erase(w);
        }
      }
    }
    return out;
  }

  /// Returns true when v was independent of the stored rows.
  bool insert(const SparseVec& v) {
    SparseVec r = reduce(v);
    if (r.empty()) return false;
    Q lead = r.e.front().second;
    r.scale(1 / lead);
    int piv = r.e.front().first;
    rows_.emplace(piv, std::move(r));
    return true;
  }

  bool contains(const SparseVec& v) const { return reduce(v).empty(); }

  std::vector<int> pivots() const {
    std::vector<int> p;
    for (const auto& kv : rows_) p.push_back(kv.first);
    return p;
  }

  /// Indices not used as pivots, ascending.
  std::vector<int> free_indices() const {
    std::vector<int> f;
    for (int i = 0; i < n_; ++i)
      if (!rows_.count(i)) f.push_back(i);
    return f;
  }

 private:
  int n_;
  std::map<int, SparseVec> rows_;
};

inline int rank(const SMatrix& a) {
  Echelon e(a.rows());
  for (int j = 0; j < a.cols(); ++j) e.insert(a.col(j));
  return e.rank();
}

/// Basis of the null space of a, as columns.
inline std::vector<SparseVec> kernel_basis(const SMatrix& a) {
  const int m = a.rows();
  Echelon e(m + a.cols());
  std::vector<SparseVec> ker;
  for (int j = 0; j < a.cols(); ++j) {
    SparseVec v = a.col(j);
    v.e.emplace_back(m + j, 1);
    SparseVec r = e.reduce(v);
    if (!r.empty() && r.e.front().first >= m) {
      SparseVec k;
      for (const auto& [i, x] : r.e) k.e.emplace_back(i - m, x);
      ker.push_back(std::move(k));
    } else {
      e.insert(r);
    }
  }
  return ker;
}

/// Solver for a x = b against a fixed matrix.
class LinearSolver {
 public:
  explicit LinearSolver(const SMatrix& a) : m_(a.rows()), n_(a.cols()), ech_(a.rows() + a.cols()) {
    for (int j = 0; j < a.cols(); ++j) {
      SparseVec v = a.col(j);
      v.e.emplace_back(m_ + j, 1);
      SparseVec r = ech_.reduce(v);
      if (!r.empty() && r.e.front().first < m_) ech_.insert(r);
    }
  }

  /// Some x with a x = b, or false if b is not in the image.
  bool solve(const SparseVec& b, SparseVec& x) const {
    SparseVec r = ech_.reduce(b);
    if (!r.empty() && r.e.front().first < m_) return false;
    x.e.clear();
    for (const auto& [i, v] : r.e) x.e.emplace_back(i - m_, -v);
    return true;
  }

 private:
  int m_;
  int n_;
  Echelon ech_;
};

/// Inverse of a square matrix; throws if singular.
inline SMatrix inverse(const SMatrix& a) {
  if (a.rows() != a.cols()) throw std::logic_error("inverse: non-square matrix");
  LinearSolver s(a);
  SMatrix inv(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    SparseVec x;
    if (!s.solve(SparseVec::unit(i), x)) throw std::domain_error("inverse: singular matrix");
    inv.col(i) = std::move(x);
  }
  return inv;
}

}  // namespace opkit
