#pragma once

// Exact symmetric monoidal base categories: finite sets, finite-dimensional
// rational vector spaces and bounded rational chain complexes (homological
// grading, d: C_n -> C_{n-1}), with finite colimits, tensor products,
// pushout-products and homology.

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "opkit/error.hpp"
#include "opkit/linalg.hpp"

namespace opkit {

enum class Variant { FinSet, VectQ, ChainQ };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::FinSet: return "FinSet";
    case Variant::VectQ: return "VectQ";
    case Variant::ChainQ: return "ChainQ";
  }
  return "?";
}

struct ObjectData {
  Variant kind = Variant::FinSet;
  int count = 0;                    // FinSet cardinality
  std::vector<std::string> labels;  // optional: empty means index labels
  int lo = 0;
  std::vector<int> dims;      // linear: dimension in degree lo + i
  std::vector<SMatrix> diff;  // linear: diff[i] : C_{lo+i} -> C_{lo+i-1}
};

/// Immutable handle to a base object. Copies are cheap.
class Object {
 public:
  Object() : d_(std::make_shared<ObjectData>()) {}

  static Object finset(int n, std::vector<std::string> labels = {}) {
    if (n < 0) throw Error(ErrorKind::InvalidObject, "negative cardinality");
    if (!labels.empty()) {
      if (static_cast<int>(labels.size()) != n)
        throw Error(ErrorKind::InvalidObject, "label count does not match cardinality");
      auto sorted = labels;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(ErrorKind::InvalidObject, "FinSet labels must be distinct");
    }
    ObjectData d;
    d.kind = Variant::FinSet;
    d.count = n;
    d.labels = std::move(labels);
    return Object(std::move(d));
  }

  static Object finset(std::vector<std::string> labels) {
    int n = static_cast<int>(labels.size());
    return finset(n, std::move(labels));
  }

  static Object vect(int n, std::vector<std::string> basis = {}) {
    if (n < 0) throw Error(ErrorKind::InvalidObject, "negative dimension");
    if (!basis.empty() && static_cast<int>(basis.size()) != n)
      throw Error(ErrorKind::InvalidObject, "basis label count does not match dimension");
    ObjectData d;
    d.kind = Variant::VectQ;
    d.lo = 0;
    d.dims = {n};
    d.diff = {SMatrix(0, n)};
    d.labels = std::move(basis);
    return Object(std::move(d));
  }

  /// diff[i] is the differential out of degree lo + i; it must be
  /// dims[i-1] x dims[i] (0 x dims[0] for i = 0).
  static Object chain(int lo, std::vector<int> dims, std::vector<SMatrix> diff) {
    if (diff.empty() && !dims.empty()) {
      for (std::size_t i = 0; i < dims.size(); ++i)
        diff.emplace_back(i == 0 ? 0 : dims[i - 1], dims[i]);
    }
    if (diff.size() != dims.size())
      throw Error(ErrorKind::InvalidObject, "one differential per degree required");
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (dims[i] < 0) throw Error(ErrorKind::InvalidObject, "negative dimension");
      int rows = i == 0 ? 0 : dims[i - 1];
      if (diff[i].rows() != rows || diff[i].cols() != dims[i])
        throw Error(ErrorKind::InvalidObject,
                    "differential shape mismatch in degree " + std::to_string(lo + int(i)));
      if (i >= 1 && !(diff[i - 1] * diff[i]).is_zero())
        throw Error(ErrorKind::InvalidObject,
                    "d o d != 0 in degree " + std::to_string(lo + int(i)));
    }
    ObjectData d;
    d.kind = Variant::ChainQ;
    d.lo = lo;
    d.dims = std::move(dims);
    d.diff = std::move(diff);
    return Object(std::move(d));
  }

  static Object initial(Variant v) {
    switch (v) {
      case Variant::FinSet: return finset(0);
      case Variant::VectQ: return vect(0);
      case Variant::ChainQ: return chain(0, {}, {});
    }
    return finset(0);
  }

  static Object unit(Variant v) {
    switch (v) {
      case Variant::FinSet: return finset(1, {"*"});
      case Variant::VectQ: return vect(1);
      case Variant::ChainQ: return chain(0, {1}, {});
    }
    return finset(1);
  }

  Variant kind() const { return d_->kind; }
  bool linear() const { return d_->kind != Variant::FinSet; }

  int size() const {
    if (!linear()) return d_->count;
    return std::accumulate(d_->dims.begin(), d_->dims.end(), 0);
  }

  bool is_initial() const { return size() == 0; }

  int lo() const { return linear() ? d_->lo : 0; }
  int hi() const { return linear() ? d_->lo + static_cast<int>(d_->dims.size()) - 1 : 0; }

  int dim(int deg) const {
    if (!linear()) return deg == 0 ? d_->count : 0;
    int i = deg - d_->lo;
    if (i < 0 || i >= static_cast<int>(d_->dims.size())) return 0;
    return d_->dims[i];
  }

  /// Differential out of degree deg.
  SMatrix d(int deg) const {
    if (linear()) {
      int i = deg - d_->lo;
      if (i >= 1 && i < static_cast<int>(d_->dims.size())) return d_->diff[i];
    }
    return SMatrix(dim(deg - 1), dim(deg));
  }

  bool has_labels() const { return !d_->labels.empty(); }
  const std::vector<std::string>& labels() const { return d_->labels; }
  std::string label(int i) const {
    return has_labels() ? d_->labels.at(i) : (linear() ? "e" : "") + std::to_string(i);
  }

  Object with_labels(std::vector<std::string> labels) const {
    ObjectData d = *d_;
    d.labels = std::move(labels);
    return Object(std::move(d));
  }

  const ObjectData& data() const { return *d_; }

 private:
  explicit Object(ObjectData d) : d_(std::make_shared<const ObjectData>(std::move(d))) {}
  std::shared_ptr<const ObjectData> d_;
};

/// Structural equality; labels are ignored.
inline bool same_object(const Object& a, const Object& b) {
  if (a.kind() != b.kind()) return false;
  if (!a.linear()) return a.size() == b.size();
  int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  for (int k = lo; k <= hi; ++k)
    if (a.dim(k) != b.dim(k)) return false;
  for (int k = lo; k <= hi; ++k)
    if (!(a.d(k) == b.d(k))) return false;
  return true;
}

inline void require_same_variant(const Object& a, const Object& b, const char* op) {
  if (a.kind() != b.kind())
    throw Error(ErrorKind::MixedVariant, std::string(op) + ": " + variant_name(a.kind()) +
                                             " vs " + variant_name(b.kind()));
}

/// Map between base objects: a function table for FinSet, per-degree
/// matrices (indexed by source degree) otherwise.
struct Morphism {
  Object src;
  Object tgt;
  std::vector<int> table;
  std::vector<SMatrix> mats;

  static Morphism from_table(Object s, Object t, std::vector<int> tab) {
    if (s.kind() != Variant::FinSet || t.kind() != Variant::FinSet)
      throw Error(ErrorKind::WrongVariant, "function table needs FinSet endpoints");
    if (static_cast<int>(tab.size()) != s.size())
      throw Error(ErrorKind::InvalidObject, "function table is not total");
    for (int v : tab)
      if (v < 0 || v >= t.size()) throw Error(ErrorKind::InvalidObject, "function value out of range");
    Morphism m;
    m.src = std::move(s);
    m.tgt = std::move(t);
    m.table = std::move(tab);
    return m;
  }

  static Morphism from_matrix(Object s, Object t, SMatrix a) {
    if (s.kind() != Variant::VectQ || t.kind() != Variant::VectQ)
      throw Error(ErrorKind::WrongVariant, "single matrix needs VectQ endpoints");
    if (a.rows() != t.size() || a.cols() != s.size())
      throw Error(ErrorKind::InvalidObject, "matrix shape does not match dimensions");
    Morphism m;
    m.src = std::move(s);
    m.tgt = std::move(t);
    m.mats = {std::move(a)};
    return m;
  }

  /// per_degree[i] acts on source degree s.lo() + i.
  static Morphism from_matrices(Object s, Object t, std::vector<SMatrix> per_degree) {
    if (!s.linear() || !t.linear() || s.kind() != t.kind())
      throw Error(ErrorKind::WrongVariant, "matrices need linear endpoints of one variant");
    int n = s.hi() - s.lo() + 1;
    if (static_cast<int>(per_degree.size()) != n)
      throw Error(ErrorKind::InvalidObject, "one matrix per source degree required");
    for (int i = 0; i < n; ++i) {
      int deg = s.lo() + i;
      if (per_degree[i].rows() != t.dim(deg) || per_degree[i].cols() != s.dim(deg))
        throw Error(ErrorKind::InvalidObject, "matrix shape mismatch in degree " + std::to_string(deg));
    }
    Morphism m;
    m.src = std::move(s);
    m.tgt = std::move(t);
    m.mats = std::move(per_degree);
    return m;
  }

  /// Build a linear map degree by degree.
  template <class F>
  static Morphism linear_from(Object s, Object t, F&& at_degree) {
    std::vector<SMatrix> ms;
    for (int k = s.lo(); k <= s.hi(); ++k) ms.push_back(at_degree(k));
    return from_matrices(std::move(s), std::move(t), std::move(ms));
  }

  SMatrix at(int deg) const {
    int i = deg - src.lo();
    if (src.linear() && i >= 0 && i < static_cast<int>(mats.size())) return mats[i];
    return SMatrix(tgt.dim(deg), src.dim(deg));
  }

  Variant kind() const { return src.kind(); }
};

inline Morphism identity(const Object& a) {
  if (!a.linear()) {
    std::vector<int> t(a.size());
    std::iota(t.begin(), t.end(), 0);
    return Morphism::from_table(a, a, std::move(t));
  }
  return Morphism::linear_from(a, a, [&](int k) { return SMatrix::identity(a.dim(k)); });
}

/// The unique map out of an initial object, or the zero map between linear objects.
inline Morphism zero_map(const Object& a, const Object& b) {
  require_same_variant(a, b, "zero_map");
  if (!a.linear()) {
    if (a.size() != 0) throw Error(ErrorKind::WrongVariant, "zero map from a nonempty set");
    return Morphism::from_table(a, b, {});
  }
  return Morphism::linear_from(a, b, [&](int k) { return SMatrix(b.dim(k), a.dim(k)); });
}

/// g o f
inline Morphism compose(const Morphism& g, const Morphism& f) {
  require_same_variant(f.src, g.src, "compose");
  if (!same_object(f.tgt, g.src)) throw Error(ErrorKind::SourceMismatch, "compose: f.tgt != g.src");
  if (!f.src.linear()) {
    std::vector<int> t(f.table.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = g.table[f.table[i]];
    return Morphism::from_table(f.src, g.tgt, std::move(t));
  }
  return Morphism::linear_from(f.src, g.tgt, [&](int k) { return g.at(k) * f.at(k); });
}

inline bool operator==(const Morphism& f, const Morphism& g) {
  if (!same_object(f.src, g.src) || !same_object(f.tgt, g.tgt)) return false;
  if (!f.src.linear()) return f.table == g.table;
  for (int k = f.src.lo(); k <= f.src.hi(); ++k)
    if (!(f.at(k) == g.at(k))) return false;
  return true;
}

inline Morphism add(const Morphism& f, const Morphism& g, const Q& cg = 1) {
  if (!f.src.linear()) throw Error(ErrorKind::WrongVariant, "add: linear maps only");
  return Morphism::linear_from(f.src, f.tgt, [&](int k) { return f.at(k) + g.at(k).scaled(cg); });
}

inline Morphism subtract(const Morphism& f, const Morphism& g) { return add(f, g, -1); }

inline Morphism scale(const Morphism& f, const Q& a) {
  if (!f.src.linear()) throw Error(ErrorKind::WrongVariant, "scale: linear maps only");
  return Morphism::linear_from(f.src, f.tgt, [&](int k) { return f.at(k).scaled(a); });
}

/// d_tgt f = f d_src in every degree (always true for FinSet / VectQ).
inline bool is_chain_map(const Morphism& f) {
  if (f.kind() != Variant::ChainQ) return true;
  int lo = std::min(f.src.lo(), f.tgt.lo()), hi = std::max(f.src.hi(), f.tgt.hi());
  for (int k = lo; k <= hi + 1; ++k)
    if (!(f.tgt.d(k) * f.at(k) == f.at(k - 1) * f.src.d(k))) return false;
  return true;
}

inline bool is_iso(const Morphism& f) {
  if (!f.src.linear()) {
    if (f.src.size() != f.tgt.size()) return false;
    std::vector<char> hit(f.tgt.size(), 0);
    for (int v : f.table) {
      if (hit[v]) return false;
      hit[v] = 1;
    }
    return true;
  }
  int lo = std::min(f.src.lo(), f.tgt.lo()), hi = std::max(f.src.hi(), f.tgt.hi());
  for (int k = lo; k <= hi; ++k) {
    if (f.src.dim(k) != f.tgt.dim(k)) return false;
    if (rank(f.at(k)) != f.src.dim(k)) return false;
  }
  return true;
}

inline Morphism inverse(const Morphism& f) {
  if (!is_iso(f)) throw Error(ErrorKind::StructureMismatch, "inverse of a non-isomorphism");
  if (!f.src.linear()) {
    std::vector<int> t(f.table.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[f.table[i]] = static_cast<int>(i);
    return Morphism::from_table(f.tgt, f.src, std::move(t));
  }
  return Morphism::linear_from(f.tgt, f.src, [&](int k) { return opkit::inverse(f.at(k)); });
}

// ---------------------------------------------------------------------------
// Tensor products

/// Degree profile of a (possibly iterated) tensor product.
struct DimProfile {
  int lo = 0;
  std::vector<int> dims;
  int dim(int k) const {
    int i = k - lo;
    return (i < 0 || i >= static_cast<int>(dims.size())) ? 0 : dims[i];
  }
  int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
  static DimProfile of(const Object& a) {
    DimProfile p;
    if (!a.linear()) {
      p.dims = {a.size()};
    } else {
      p.lo = a.lo();
      for (int k = a.lo(); k <= a.hi(); ++k) p.dims.push_back(a.dim(k));
    }
    return p;
  }
};

/// Block layout of A ⊗ B: in total degree n the blocks are ordered by the
/// degree p of the A factor; inside a block (i, j) sits at i*dim_B(n-p) + j.
struct BinaryLayout {
  DimProfile a, b, out;
  // offset[(n - out.lo)][p - a.lo]
  std::vector<std::vector<int>> offset;

  BinaryLayout(DimProfile pa, DimProfile pb) : a(std::move(pa)), b(std::move(pb)) {
    if (a.dims.empty() || b.dims.empty()) {
      out.lo = 0;
      return;
    }
    out.lo = a.lo + b.lo;
    int nd = static_cast<int>(a.dims.size() + b.dims.size()) - 1;
    out.dims.assign(nd, 0);
    offset.assign(nd, std::vector<int>(a.dims.size(), 0));
    for (int n = out.lo; n < out.lo + nd; ++n) {
      int acc = 0;
      for (int p = a.lo; p <= a.hi(); ++p) {
        offset[n - out.lo][p - a.lo] = acc;
        acc += a.dim(p) * b.dim(n - p);
      }
      out.dims[n - out.lo] = acc;
    }
  }

  int pos(int p, int i, int q, int j) const {
    return offset[p + q - out.lo][p - a.lo] + i * b.dim(q) + j;
  }
};

inline Object tensor(const Object& a, const Object& b) {
  require_same_variant(a, b, "tensor");
  if (!a.linear()) {
    std::vector<std::string> labels;
    if (a.has_labels() && b.has_labels() && a.size() * b.size() <= 20000) {
      labels.reserve(a.size() * b.size());
      for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j) labels.push_back("(" + a.label(i) + "," + b.label(j) + ")");
    }
    return Object::finset(a.size() * b.size(), std::move(labels));
  }
  if (a.kind() == Variant::VectQ) {
    std::vector<std::string> labels;
    if (a.has_labels() && b.has_labels())
      for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j) labels.push_back(a.label(i) + "*" + b.label(j));
    return Object::vect(a.size() * b.size(), std::move(labels));
  }
  BinaryLayout L(DimProfile::of(a), DimProfile::of(b));
  if (L.out.dims.empty()) return Object::initial(Variant::ChainQ);
  std::vector<SMatrix> diff;
  for (int n = L.out.lo; n <= L.out.hi(); ++n) {
    SMatrix d(L.out.dim(n - 1), L.out.dim(n));
    for (int p = a.lo(); p <= a.hi(); ++p) {
      int q = n - p;
      if (b.dim(q) == 0 || a.dim(p) == 0) continue;
      SMatrix da = a.d(p), db = b.d(q);
      Q sign = (p % 2 == 0) ? 1 : -1;
      for (int i = 0; i < a.dim(p); ++i)
        for (int j = 0; j < b.dim(q); ++j) {
          int c = L.pos(p, i, q, j);
          if (a.dim(p - 1) > 0)
            for (const auto& [k, x] : da.col(i).e) d.add_to(L.pos(p - 1, k, q, j), c, x);
          if (b.dim(q - 1) > 0)
            for (const auto& [l, y] : db.col(j).e) d.add_to(L.pos(p, i, q - 1, l), c, sign * y);
        }
    }
    diff.push_back(std::move(d));
  }
  return Object::chain(L.out.lo, L.out.dims, std::move(diff));
}

inline Morphism tensor(const Morphism& f, const Morphism& g) {
  require_same_variant(f.src, g.src, "tensor");
  Object s = tensor(f.src, g.src), t = tensor(f.tgt, g.tgt);
  if (!f.src.linear()) {
    std::vector<int> tab(s.size());
    int ng = g.src.size(), ngt = g.tgt.size();
    for (int i = 0; i < f.src.size(); ++i)
      for (int j = 0; j < ng; ++j) tab[i * ng + j] = f.table[i] * ngt + g.table[j];
    return Morphism::from_table(s, t, std::move(tab));
  }
  if (f.kind() == Variant::VectQ)
    return Morphism::from_matrix(s, t, SMatrix::kron(f.at(0), g.at(0)));
  BinaryLayout Ls(DimProfile::of(f.src), DimProfile::of(g.src));
  BinaryLayout Lt(DimProfile::of(f.tgt), DimProfile::of(g.tgt));
  return Morphism::linear_from(s, t, [&](int n) {
    SMatrix m(t.dim(n), s.dim(n));
    for (int p = f.src.lo(); p <= f.src.hi(); ++p) {
      int q = n - p;
      if (g.src.dim(q) == 0 || f.src.dim(p) == 0) continue;
      SMatrix fp = f.at(p), gq = g.at(q);
      for (int i = 0; i < f.src.dim(p); ++i)
        for (int j = 0; j < g.src.dim(q); ++j) {
          int c = Ls.pos(p, i, q, j);
          for (const auto& [k, x] : fp.col(i).e)
            for (const auto& [l, y] : gq.col(j).e) m.add_to(Lt.pos(p, k, q, l), c, x * y);
        }
    }
    return m;
  });
}

/// Left-associated tensor of a list; the empty list gives the unit.
inline Object tensor_all(const std::vector<Object>& objs, Variant v) {
  if (objs.empty()) return Object::unit(v);
  Object acc = objs[0];
  for (std::size_t i = 1; i < objs.size(); ++i) acc = tensor(acc, objs[i]);
  return acc;
}

inline Morphism tensor_all(const std::vector<Morphism>& fs, Variant v) {
  if (fs.empty()) return identity(Object::unit(v));
  Morphism acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = tensor(acc, fs[i]);
  return acc;
}

inline Morphism same_data(const Object& a, const Object& b);

namespace detail {

/// Every factor is concentrated in one degree (always true for FinSet and
/// VectQ); tensors of such factors are plain mixed radix.
inline bool single_degree(const std::vector<Object>& objs) {
  for (const auto& o : objs)
    if (o.lo() != o.hi()) return false;
  return true;
}

}  // namespace detail

/// Basis bookkeeping for a left-associated iterated tensor product.
class TensorLayout {
 public:
  explicit TensorLayout(const std::vector<Object>& objs) {
    for (const auto& o : objs) factors_.push_back(DimProfile::of(o));
    if (factors_.empty()) {
      total_.dims = {1};
      return;
    }
    DimProfile acc = factors_[0];
    for (std::size_t i = 1; i < factors_.size(); ++i) {
      steps_.emplace_back(acc, factors_[i]);
      acc = steps_.back().out;
    }
    total_ = acc;
  }

  const DimProfile& total() const { return total_; }
  std::size_t arity() const { return factors_.size(); }
  const DimProfile& factor(std::size_t i) const { return factors_[i]; }

  /// (total degree, position) of a basis tuple.
  std::pair<int, int> pos(const std::vector<int>& degs, const std::vector<int>& idx) const {
    if (factors_.empty()) return {0, 0};
    int deg = degs[0], p = idx[0];
    for (std::size_t i = 1; i < factors_.size(); ++i) {
      p = steps_[i - 1].pos(deg, p, degs[i], idx[i]);
      deg += degs[i];
    }
    return {deg, p};
  }

  /// Visit every basis tuple (degrees, indices).
  template <class F>
  void for_each(F&& fn) const {
    std::vector<int> degs(factors_.size()), idx(factors_.size());
    rec(0, degs, idx, fn);
  }

 private:
  template <class F>
  void rec(std::size_t i, std::vector<int>& degs, std::vector<int>& idx, F& fn) const {
    if (i == factors_.size()) {
      fn(static_cast<const std::vector<int>&>(degs), static_cast<const std::vector<int>&>(idx));
      return;
    }
    const auto& f = factors_[i];
    for (int k = f.lo; k <= f.hi(); ++k)
      for (int j = 0; j < f.dim(k); ++j) {
        degs[i] = k;
        idx[i] = j;
        rec(i + 1, degs, idx, fn);
      }
  }

  std::vector<DimProfile> factors_;
  std::vector<BinaryLayout> steps_;
  DimProfile total_;
};

/// Symmetry isomorphism ⊗ objs -> ⊗ objs' with objs'[perm[i]] = objs[i]
/// (factor i moves to slot perm[i]); Koszul signs for chain complexes.
inline Morphism permute_factors(const std::vector<Object>& objs, const std::vector<int>& perm,
                                Variant v) {
  std::vector<Object> out(objs.size());
  for (std::size_t i = 0; i < objs.size(); ++i) out[perm[i]] = objs[i];
  Object s = tensor_all(objs, v), t = tensor_all(out, v);
  const std::size_t n = objs.size();
  if (detail::single_degree(objs)) {
    // Plain mixed radix on both sides, first factor most significant.
    std::vector<int> rad(n), st(n);
    int acc = 1;
    for (std::size_t i = n; i-- > 0;) rad[i] = objs[i].size();
    for (std::size_t i = n; i-- > 0;) {
      st[i] = acc;
      acc *= out[i].size();
    }
    int sign = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j] && objs[i].lo() % 2 != 0 && objs[j].lo() % 2 != 0) sign = -sign;
    std::vector<int> tab(s.size());
    for (int idx = 0; idx < s.size(); ++idx) {
      int rem = idx, pt = 0;
      for (std::size_t i = n; i-- > 0;) {
        pt += (rem % rad[i]) * st[perm[i]];
        rem /= rad[i];
      }
      tab[idx] = pt;
    }
    if (v == Variant::FinSet) return Morphism::from_table(s, t, std::move(tab));
    return Morphism::linear_from(s, t, [&](int k) {
      SMatrix m(t.dim(k), s.dim(k));
      if (s.dim(k) > 0)
        for (int i = 0; i < s.size(); ++i) m.set(tab[i], i, sign);
      return m;
    });
  }
  TensorLayout Ls(objs), Lt(out);
  if (v == Variant::FinSet) {
    std::vector<int> tab(s.size());
    std::vector<int> d2(n), i2(n);
    Ls.for_each([&](const std::vector<int>& degs, const std::vector<int>& idx) {
      for (std::size_t i = 0; i < n; ++i) {
        d2[perm[i]] = degs[i];
        i2[perm[i]] = idx[i];
      }
      tab[Ls.pos(degs, idx).second] = Lt.pos(d2, i2).second;
    });
    return Morphism::from_table(s, t, std::move(tab));
  }
  std::vector<SMatrix> ms;
  for (int k = s.lo(); k <= s.hi(); ++k) ms.emplace_back(t.dim(k), s.dim(k));
  std::vector<int> d2(n), i2(n);
  Ls.for_each([&](const std::vector<int>& degs, const std::vector<int>& idx) {
    int sign = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j] && (degs[i] % 2 != 0) && (degs[j] % 2 != 0)) sign = -sign;
    for (std::size_t i = 0; i < n; ++i) {
      d2[perm[i]] = degs[i];
      i2[perm[i]] = idx[i];
    }
    auto [deg, ps] = Ls.pos(degs, idx);
    auto pt = Lt.pos(d2, i2).second;
    ms[deg - s.lo()].set(pt, ps, sign);
  });
  if (v == Variant::VectQ) return Morphism::from_matrix(s, t, std::move(ms[0]));
  return Morphism::from_matrices(s, t, std::move(ms));
}

/// Re-bracketing isomorphism (⊗ of group tensors) -> ⊗ of all factors flat.
/// groups[g] lists the objects whose left-associated tensor forms factor g.
inline Morphism flatten_tensor(const std::vector<std::vector<Object>>& groups, Variant v) {
  std::vector<Object> grouped, flat;
  for (const auto& g : groups) {
    grouped.push_back(tensor_all(g, v));
    for (const auto& o : g) flat.push_back(o);
  }
  Object s = tensor_all(grouped, v), t = tensor_all(flat, v);
  if (detail::single_degree(flat)) return same_data(s, t);
  TensorLayout Lg(grouped), Lf(flat);
  std::vector<TensorLayout> inner;
  for (const auto& g : groups) inner.emplace_back(g);
  // Enumerate flat tuples and compute their grouped position.
  std::vector<SMatrix> ms;
  std::vector<int> tab;
  if (v == Variant::FinSet)
    tab.assign(s.size(), 0);
  else
    for (int k = s.lo(); k <= s.hi(); ++k) ms.emplace_back(t.dim(k), s.dim(k));
  std::vector<int> gd(groups.size()), gi(groups.size());
  Lf.for_each([&](const std::vector<int>& degs, const std::vector<int>& idx) {
    std::size_t off = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::size_t m = groups[g].size();
      std::vector<int> dd(degs.begin() + off, degs.begin() + off + m);
      std::vector<int> ii(idx.begin() + off, idx.begin() + off + m);
      auto [d, p] = inner[g].pos(dd, ii);
      gd[g] = d;
      gi[g] = p;
      off += m;
    }
    auto [deg, ps] = Lg.pos(gd, gi);
    auto pt = Lf.pos(degs, idx).second;
    if (v == Variant::FinSet)
      tab[ps] = pt;
    else
      ms[deg - s.lo()].set(pt, ps, 1);
  });
  if (v == Variant::FinSet) return Morphism::from_table(s, t, std::move(tab));
  if (v == Variant::VectQ) return Morphism::from_matrix(s, t, std::move(ms[0]));
  return Morphism::from_matrices(s, t, std::move(ms));
}

// ---------------------------------------------------------------------------
// Coproducts

struct Coproduct {
  Object obj;
  std::vector<Morphism> inj;
};

/// Per-degree offsets of the summands.
struct SumLayout {
  int lo = 0, hi = -1;
  std::vector<std::vector<int>> offset;  // offset[summand][deg - lo]
  std::vector<int> total;                // total dim per degree

  explicit SumLayout(const std::vector<Object>& objs) {
    bool any = false;
    for (const auto& o : objs) {
      if (o.linear() && o.hi() < o.lo()) continue;
      if (!any) {
        lo = o.lo();
        hi = o.hi();
        any = true;
      } else {
        lo = std::min(lo, o.lo());
        hi = std::max(hi, o.hi());
      }
    }
    if (!any) {
      lo = 0;
      hi = -1;
    }
    int nd = hi - lo + 1;
    total.assign(std::max(nd, 0), 0);
    for (const auto& o : objs) {
      std::vector<int> off(std::max(nd, 0));
      for (int k = lo; k <= hi; ++k) {
        off[k - lo] = total[k - lo];
        total[k - lo] += o.dim(k);
      }
      offset.push_back(std::move(off));
    }
  }
};

inline Coproduct coproduct(const std::vector<Object>& objs, Variant v) {
  for (const auto& o : objs)
    if (o.kind() != v) throw Error(ErrorKind::MixedVariant, "coproduct: mixed variants");
  Coproduct c;
  if (v == Variant::FinSet) {
    int n = 0;
    bool labeled = !objs.empty();
    for (const auto& o : objs) {
      n += o.size();
      labeled = labeled && o.has_labels();
    }
    std::vector<std::string> labels;
    if (labeled) {
      for (const auto& o : objs)
        for (int i = 0; i < o.size(); ++i) labels.push_back(o.label(i));
      auto sorted = labels;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        labels.clear();
        for (std::size_t k = 0; k < objs.size(); ++k)
          for (int i = 0; i < objs[k].size(); ++i)
            labels.push_back(std::to_string(k) + ":" + objs[k].label(i));
      }
    }
    c.obj = Object::finset(n, std::move(labels));
    int off = 0;
    for (const auto& o : objs) {
      std::vector<int> t(o.size());
      std::iota(t.begin(), t.end(), off);
      off += o.size();
      c.inj.push_back(Morphism::from_table(o, c.obj, std::move(t)));
    }
    return c;
  }
  SumLayout L(objs);
  if (v == Variant::VectQ) {
    int n = L.total.empty() ? 0 : L.total[0];
    c.obj = Object::vect(n);
  } else {
    std::vector<SMatrix> diff;
    for (int k = L.lo; k <= L.hi; ++k) {
      SMatrix d(k - 1 >= L.lo ? L.total[k - 1 - L.lo] : 0, L.total[k - L.lo]);
      for (std::size_t s = 0; s < objs.size(); ++s)
        if (objs[s].dim(k) > 0 && k - 1 >= L.lo)
          d.place(objs[s].d(k), L.offset[s][k - 1 - L.lo], L.offset[s][k - L.lo]);
      diff.push_back(std::move(d));
    }
    c.obj = L.hi < L.lo ? Object::initial(v) : Object::chain(L.lo, L.total, std::move(diff));
  }
  for (std::size_t s = 0; s < objs.size(); ++s) {
    const Object& o = objs[s];
    c.inj.push_back(Morphism::linear_from(o, c.obj, [&](int k) {
      SMatrix m(c.obj.dim(k), o.dim(k));
      for (int i = 0; i < o.dim(k); ++i) m.set(L.offset[s][k - L.lo] + i, i, 1);
      return m;
    }));
  }
  return c;
}

/// The map out of a coproduct with the given components.
inline Morphism copair(const Coproduct& c, const std::vector<Morphism>& maps, const Object& z) {
  if (maps.size() != c.inj.size()) throw Error(ErrorKind::StructureMismatch, "copair: arity mismatch");
  for (std::size_t s = 0; s < maps.size(); ++s) {
    if (!same_object(maps[s].src, c.inj[s].src))
      throw Error(ErrorKind::SourceMismatch, "copair: component source mismatch");
    if (!same_object(maps[s].tgt, z)) throw Error(ErrorKind::SourceMismatch, "copair: target mismatch");
  }
  if (!c.obj.linear()) {
    std::vector<int> t(c.obj.size());
    for (std::size_t s = 0; s < maps.size(); ++s)
      for (int i = 0; i < maps[s].src.size(); ++i) t[c.inj[s].table[i]] = maps[s].table[i];
    return Morphism::from_table(c.obj, z, std::move(t));
  }
  return Morphism::linear_from(c.obj, z, [&](int k) {
    SMatrix m(z.dim(k), c.obj.dim(k));
    for (std::size_t s = 0; s < maps.size(); ++s) {
      SMatrix inj = c.inj[s].at(k), f = maps[s].at(k);
      for (int i = 0; i < inj.cols(); ++i) {
        int col = inj.col(i).e.front().first;
        m.col(col) = f.col(i);
      }
    }
    return m;
  });
}

/// f_1 ∐ ... ∐ f_n between the coproducts of sources and targets.
inline Morphism coproduct_map(const Coproduct& src, const Coproduct& tgt, const std::vector<Morphism>& fs) {
  std::vector<Morphism> comps;
  for (std::size_t s = 0; s < fs.size(); ++s) comps.push_back(compose(tgt.inj[s], fs[s]));
  return copair(src, comps, tgt.obj);
}

// ---------------------------------------------------------------------------
// Quotients: coequalizers, coinvariants, pushouts

/// A quotient T -> T/~ with a set-theoretic / linear splitting of the
/// projection (not a chain map in general).
struct Quotient {
  Object obj;
  Morphism proj;
  Morphism section;
};

namespace detail {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) {
      p[x] = p[p[x]];
      x = p[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b)
      p[b] = a;
    else
      p[a] = b;
  }
};

}  // namespace detail

inline Quotient quotient_finset(const Object& t, const std::vector<std::pair<int, int>>& rel) {
  detail::UnionFind uf(t.size());
  for (auto [a, b] : rel) uf.unite(a, b);
  std::vector<int> cls(t.size(), -1), reps;
  for (int i = 0; i < t.size(); ++i) {
    int r = uf.find(i);
    if (r == i) {
      cls[i] = static_cast<int>(reps.size());
      reps.push_back(i);
    }
  }
  std::vector<int> proj(t.size());
  for (int i = 0; i < t.size(); ++i) proj[i] = cls[uf.find(i)];
  std::vector<std::string> labels;
  if (t.has_labels())
    for (int r : reps) labels.push_back(t.label(r));
  Object q = Object::finset(static_cast<int>(reps.size()), std::move(labels));
  Quotient out;
  out.obj = q;
  out.proj = Morphism::from_table(t, q, std::move(proj));
  out.section = Morphism::from_table(q, t, reps);
  return out;
}

/// Quotient by the subobject spanned by the given vectors in each degree.
/// For chain complexes the span must be a subcomplex.
inline Quotient quotient_linear(const Object& t, const std::vector<std::vector<SparseVec>>& rel_by_degree) {
  struct Deg {
    Echelon ech;
    std::vector<int> free;
    std::vector<int> where;
  };
  std::vector<Deg> ds;
  int lo = t.lo(), hi = t.hi();
  for (int k = lo; k <= hi; ++k) {
    Deg d{Echelon(t.dim(k)), {}, {}};
    if (k - lo < static_cast<int>(rel_by_degree.size()))
      for (const auto& v : rel_by_degree[k - lo]) d.ech.insert(v);
    d.free = d.ech.free_indices();
    d.where.assign(t.dim(k), -1);
    for (std::size_t i = 0; i < d.free.size(); ++i) d.where[d.free[i]] = static_cast<int>(i);
    ds.push_back(std::move(d));
  }
  auto proj_at = [&](int k) {
    const Deg& d = ds[k - lo];
    SMatrix m(static_cast<int>(d.free.size()), t.dim(k));
    for (int i = 0; i < t.dim(k); ++i) {
      SparseVec r = d.ech.reduce(SparseVec::unit(i));
      SparseVec c;
      for (const auto& [j, x] : r.e) c.e.emplace_back(d.where[j], x);
      std::sort(c.e.begin(), c.e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      m.col(i) = std::move(c);
    }
    return m;
  };
  auto sec_at = [&](int k) {
    const Deg& d = ds[k - lo];
    SMatrix m(t.dim(k), static_cast<int>(d.free.size()));
    for (std::size_t i = 0; i < d.free.size(); ++i) m.set(d.free[i], static_cast<int>(i), 1);
    return m;
  };
  std::vector<SMatrix> P, S;
  std::vector<int> qdims;
  for (int k = lo; k <= hi; ++k) {
    P.push_back(proj_at(k));
    S.push_back(sec_at(k));
    qdims.push_back(static_cast<int>(ds[k - lo].free.size()));
  }
  Object q;
  if (t.kind() == Variant::VectQ) {
    std::vector<std::string> labels;
    if (t.has_labels())
      for (int i : ds[0].free) labels.push_back(t.label(i));
    q = Object::vect(qdims[0], std::move(labels));
  } else if (hi < lo) {
    q = Object::initial(Variant::ChainQ);
  } else {
    std::vector<SMatrix> diff;
    for (int k = lo; k <= hi; ++k) {
      if (k == lo)
        diff.emplace_back(0, qdims[0]);
      else
        diff.push_back(P[k - 1 - lo] * t.d(k) * S[k - lo]);
    }
    q = Object::chain(lo, qdims, std::move(diff));
  }
  Quotient out;
  out.obj = q;
  out.proj = Morphism::from_matrices(t, q, std::move(P));
  out.section = Morphism::from_matrices(q, t, std::move(S));
  return out;
}

/// Quotient of T by the relations f_i(s) ~ g_i(s) for all listed parallel pairs.
inline Quotient quotient(const Object& t, const std::vector<std::pair<Morphism, Morphism>>& rel) {
  for (const auto& [f, g] : rel) {
    if (!same_object(f.src, g.src) || !same_object(f.tgt, g.tgt) || !same_object(f.tgt, t))
      throw Error(ErrorKind::NotParallel, "quotient: relation maps are not parallel into the target");
  }
  if (!t.linear()) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [f, g] : rel)
      for (int i = 0; i < f.src.size(); ++i) pairs.emplace_back(f.table[i], g.table[i]);
    return quotient_finset(t, pairs);
  }
  std::vector<std::vector<SparseVec>> vecs(std::max(0, t.hi() - t.lo() + 1));
  for (const auto& [f, g] : rel)
    for (int k = t.lo(); k <= t.hi(); ++k) {
      if (f.src.dim(k) == 0) continue;
      SMatrix diff = f.at(k) - g.at(k);
      for (int j = 0; j < diff.cols(); ++j)
        if (!diff.col(j).empty()) vecs[k - t.lo()].push_back(diff.col(j));
    }
  return quotient_linear(t, vecs);
}

inline Quotient coequalizer(const Morphism& f, const Morphism& g) {
  if (!same_object(f.src, g.src) || !same_object(f.tgt, g.tgt))
    throw Error(ErrorKind::NotParallel, "coequalizer: maps are not parallel");
  return quotient(f.tgt, {{f, g}});
}

/// The map T/~ -> Z induced by h : T -> Z. Throws StructureMismatch if h
/// does not respect the quotient.
inline Morphism descend(const Quotient& q, const Morphism& h) {
  if (!same_object(h.src, q.proj.src))
    throw Error(ErrorKind::SourceMismatch, "descend: map does not start at the quotiented object");
  Morphism ind = compose(h, q.section);
  if (!(compose(ind, q.proj) == h))
    throw Error(ErrorKind::StructureMismatch, "descend: map does not respect the quotient");
  return ind;
}

/// Given jointly epimorphic maps r_a : S_a -> T and maps h_a : S_a -> Z,
/// the unique map T -> Z with h o r_a = h_a. Throws StructureMismatch if
/// the r_a are not jointly epimorphic or no such map exists.
inline Morphism descend_epi(const std::vector<Morphism>& r, const std::vector<Morphism>& h, const Object& t,
                            const Object& z) {
  if (r.size() != h.size()) throw Error(ErrorKind::StructureMismatch, "descend_epi: arity mismatch");
  std::vector<Object> srcs;
  for (const auto& m : r) srcs.push_back(m.src);
  Variant v = t.kind();
  Coproduct c = coproduct(srcs, v);
  Morphism rr = copair(c, r, t), hh = copair(c, h, z);
  Morphism sec;
  if (v == Variant::FinSet) {
    std::vector<int> pre(t.size(), -1);
    for (int i = 0; i < c.obj.size(); ++i)
      if (pre[rr.table[i]] < 0) pre[rr.table[i]] = i;
    for (int x : pre)
      if (x < 0) throw Error(ErrorKind::StructureMismatch, "descend_epi: maps are not jointly surjective");
    sec = Morphism::from_table(t, c.obj, pre);
  } else {
    sec = Morphism::linear_from(t, c.obj, [&](int k) {
      SMatrix rk = rr.at(k);
      LinearSolver sol(rk);
      SMatrix m(c.obj.dim(k), t.dim(k));
      for (int i = 0; i < t.dim(k); ++i) {
        SparseVec x;
        if (!sol.solve(SparseVec::unit(i), x))
          throw Error(ErrorKind::StructureMismatch, "descend_epi: maps are not jointly surjective");
        m.col(i) = std::move(x);
      }
      return m;
    });
  }
  Morphism out = compose(hh, sec);
  if (!(compose(out, rr) == hh)) throw Error(ErrorKind::StructureMismatch, "descend_epi: maps do not factor");
  return out;
}

/// The identity on underlying data between structurally equal objects.
inline Morphism same_data(const Object& a, const Object& b) {
  if (!same_object(a, b)) throw Error(ErrorKind::StructureMismatch, "same_data: objects differ");
  Morphism m = identity(a);
  m.tgt = b;
  return m;
}

/// Inverse of a map whose matrices are signed permutation matrices (or of
/// a bijection).
inline Morphism permutation_inverse(const Morphism& f) {
  if (!f.src.linear()) return inverse(f);
  return Morphism::linear_from(f.tgt, f.src, [&](int k) {
    SMatrix m = f.at(k);
    SMatrix t = m.transpose();
    for (int j = 0; j < t.cols(); ++j)
      for (auto& [i, x] : t.col(j).e) x = 1 / x;
    return t;
  });
}

/// Tensor a quotient with a fixed object on the right: (T/~) ⊗ Z as a
/// quotient of T ⊗ Z.
inline Quotient tensor_quotient(const Quotient& q, const Object& z) {
  Quotient out;
  out.obj = tensor(q.obj, z);
  out.proj = tensor(q.proj, identity(z));
  out.section = tensor(q.section, identity(z));
  return out;
}

inline Quotient tensor_quotient(const Object& z, const Quotient& q) {
  Quotient out;
  out.obj = tensor(z, q.obj);
  out.proj = tensor(identity(z), q.proj);
  out.section = tensor(identity(z), q.section);
  return out;
}

struct Pushout {
  Object obj;
  Morphism leg_b;  // B -> obj
  Morphism leg_c;  // C -> obj
  Coproduct sum;
  Quotient quo;
};

inline Pushout pushout(const Morphism& f, const Morphism& g) {
  require_same_variant(f.src, g.src, "pushout");
  if (!same_object(f.src, g.src)) throw Error(ErrorKind::SourceMismatch, "pushout: maps do not share a source");
  Pushout p;
  p.sum = coproduct({f.tgt, g.tgt}, f.kind());
  p.quo = quotient(p.sum.obj, {{compose(p.sum.inj[0], f), compose(p.sum.inj[1], g)}});
  p.obj = p.quo.obj;
  p.leg_b = compose(p.quo.proj, p.sum.inj[0]);
  p.leg_c = compose(p.quo.proj, p.sum.inj[1]);
  return p;
}

/// The map out of a pushout determined by compatible maps from B and C.
inline Morphism pushout_induced(const Pushout& p, const Morphism& hb, const Morphism& hc) {
  return descend(p.quo, copair(p.sum, {hb, hc}, hb.tgt));
}

struct PushoutProduct {
  Pushout corner;  // Q = A⊗D ∐_{A⊗C} B⊗C
  Morphism map;    // Q -> B⊗D
};

/// f □ g for f : A -> B, g : C -> D.
inline PushoutProduct pushout_product(const Morphism& f, const Morphism& g) {
  require_same_variant(f.src, g.src, "pushout_product");
  PushoutProduct out;
  Morphism ag = tensor(identity(f.src), g);  // A⊗C -> A⊗D
  Morphism fc = tensor(f, identity(g.src));  // A⊗C -> B⊗C
  out.corner = pushout(ag, fc);
  out.map = pushout_induced(out.corner, tensor(f, identity(g.tgt)), tensor(identity(f.tgt), g));
  return out;
}

/// Left-associated iterated pushout-product; returns only the corner map.
/// The empty product is initial -> unit.
inline Morphism pushout_product_all(const std::vector<Morphism>& fs, Variant v) {
  if (fs.empty()) return zero_map(Object::initial(v), Object::unit(v));
  Morphism acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = pushout_product(acc, fs[i]).map;
  return acc;
}

// ---------------------------------------------------------------------------
// Chain complexes: homology, cones, shifts

inline void require_chain(const Object& x, const char* op) {
  if (x.kind() != Variant::ChainQ) throw Error(ErrorKind::WrongVariant, std::string(op) + ": ChainQ required");
}

inline int homology(const Object& x, int deg) {
  require_chain(x, "homology");
  return x.dim(deg) - rank(x.d(deg)) - rank(x.d(deg + 1));
}

inline bool is_acyclic(const Object& x) {
  require_chain(x, "is_acyclic");
  for (int k = x.lo(); k <= x.hi(); ++k)
    if (homology(x, k) != 0) return false;
  return true;
}

/// Cone(f)_n = A_{n-1} ⊕ B_n, d(a, b) = (-da, f(a) + db).
inline Object cone(const Morphism& f) {
  require_chain(f.src, "cone");
  const Object &a = f.src, &b = f.tgt;
  int lo = std::min(a.lo() + 1, b.lo()), hi = std::max(a.hi() + 1, b.hi());
  if (a.hi() < a.lo()) {
    lo = b.lo();
    hi = b.hi();
  }
  if (b.hi() < b.lo() && a.hi() >= a.lo()) {
    lo = a.lo() + 1;
    hi = a.hi() + 1;
  }
  if (hi < lo) return Object::initial(Variant::ChainQ);
  std::vector<int> dims;
  for (int n = lo; n <= hi; ++n) dims.push_back(a.dim(n - 1) + b.dim(n));
  std::vector<SMatrix> diff;
  for (int n = lo; n <= hi; ++n) {
    SMatrix d(n == lo ? 0 : dims[n - 1 - lo], dims[n - lo]);
    if (n > lo) {
      int an1 = a.dim(n - 2);  // offset of B block in degree n-1
      d.place(a.d(n - 1).scaled(-1), 0, 0);
      d.place(f.at(n - 1), an1, 0);
      d.place(b.d(n), an1, a.dim(n - 1));
    }
    diff.push_back(std::move(d));
  }
  return Object::chain(lo, dims, std::move(diff));
}

inline bool is_quasi_iso(const Morphism& f) {
  require_chain(f.src, "is_quasi_iso");
  return is_acyclic(cone(f));
}

/// X[k]_n = X_{n-k} with differential (-1)^k d.
inline Object shift(const Object& x, int k) {
  require_chain(x, "shift");
  if (x.hi() < x.lo()) return x;
  std::vector<int> dims;
  std::vector<SMatrix> diff;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    dims.push_back(x.dim(n));
    diff.push_back(n == x.lo() ? SMatrix(0, x.dim(n)) : x.d(n).scaled(k % 2 == 0 ? 1 : -1));
  }
  return Object::chain(x.lo() + k, dims, std::move(diff));
}

inline Morphism shift(const Morphism& f, int k) {
  Object s = shift(f.src, k), t = shift(f.tgt, k);
  return Morphism::linear_from(s, t, [&](int n) { return f.at(n - k); });
}

/// Rank of the map induced on H_deg.
inline int homology_map_rank(const Morphism& f, int deg) {
  require_chain(f.src, "homology_map_rank");
  auto cycles = kernel_basis(f.src.d(deg));
  Echelon e(f.tgt.dim(deg));
  SMatrix bd = f.tgt.d(deg + 1);
  for (int j = 0; j < bd.cols(); ++j) e.insert(bd.col(j));
  int base = e.rank();
  SMatrix fk = f.at(deg);
  for (const auto& z : cycles) e.insert(fk.apply(z));
  return e.rank() - base;
}

inline bool homology_iso_at(const Morphism& f, int deg) {
  int hs = homology(f.src, deg), ht = homology(f.tgt, deg);
  return hs == ht && homology_map_rank(f, deg) == hs;
}

}  // namespace opkit
