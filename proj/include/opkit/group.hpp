#pragma once

// Finite permutation groups, actions on base objects, coinvariants.

#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "opkit/basecat.hpp"

namespace opkit {

/// p[i] is the image of i.
using Perm = std::vector<int>;

inline Perm perm_identity(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

/// (a * b)(i) = a(b(i))
inline Perm perm_mul(const Perm& a, const Perm& b) {
  Perm c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

inline Perm perm_inv(const Perm& a) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = static_cast<int>(i);
  return c;
}

inline bool is_perm(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

inline Perm transposition(int n, int i, int j) {
  Perm p = perm_identity(n);
  std::swap(p[i], p[j]);
  return p;
}

inline bool perm_is_identity(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

/// Finite permutation group on {0..degree-1}: generators plus the full
/// element list (enumerated by closure; element 0 is the identity).
class PermGroup {
 public:
  PermGroup() = default;

  PermGroup(int degree, std::vector<Perm> gens) : degree_(degree) {
    for (auto& g : gens) {
      if (static_cast<int>(g.size()) != degree || !is_perm(g))
        throw Error(ErrorKind::InvalidAction, "generator is not a permutation of the right degree");
      if (!perm_is_identity(g)) gens_.push_back(std::move(g));
    }
    close();
  }

  static PermGroup trivial(int degree) { return PermGroup(degree, {}); }

  static PermGroup symmetric(int n) {
    std::vector<Perm> g;
    for (int i = 0; i + 1 < n; ++i) g.push_back(transposition(n, i, i + 1));
    return PermGroup(n, std::move(g));
  }

  /// Permutations preserving the blocks of equal values in `key`.
  static PermGroup young(const std::vector<int>& key) {
    int n = static_cast<int>(key.size());
    std::vector<Perm> g;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (key[i] == key[j]) {
          // adjacent in the block order
          bool adjacent = true;
          for (int k = i + 1; k < j; ++k)
            if (key[k] == key[i]) adjacent = false;
          if (adjacent) g.push_back(transposition(n, i, j));
        }
    return PermGroup(n, std::move(g));
  }

  int degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }
  const std::vector<Perm>& elements() const { return elems_; }
  std::size_t order() const { return elems_.size(); }

  int index_of(const Perm& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(const Perm& p) const { return index_of(p) >= 0; }

 private:
  void close() {
    elems_.clear();
    index_.clear();
    Perm e = perm_identity(degree_);
    elems_.push_back(e);
    index_.emplace(e, 0);
    for (std::size_t k = 0; k < elems_.size(); ++k)
      for (const auto& g : gens_) {
        Perm h = perm_mul(g, elems_[k]);
        if (!index_.count(h)) {
          index_.emplace(h, static_cast<int>(elems_.size()));
          elems_.push_back(std::move(h));
        }
      }
  }

  int degree_ = 0;
  std::vector<Perm> gens_;
  std::vector<Perm> elems_;
  std::map<Perm, int> index_;
};

/// A group acting on a base object by automorphisms.
struct GroupAction {
  PermGroup group;
  Object object;
  std::function<Morphism(const Perm&)> act;
};

/// Report of an action check; empty `failure` means valid.
struct ActionCheck {
  bool ok = true;
  std::string failure;
};

/// Exact check: act(e) = id, every act(g) is an automorphism, and
/// act(g s) = act(g) act(s) for every element g and generator s (which
/// forces act to be a homomorphism on the whole group).
inline ActionCheck check_action(const GroupAction& a) {
  ActionCheck r;
  const auto& els = a.group.elements();
  std::vector<Morphism> img;
  img.reserve(els.size());
  for (const auto& g : els) {
    Morphism m = a.act(g);
    if (!same_object(m.src, a.object) || !same_object(m.tgt, a.object) || !is_chain_map(m)) {
      r.ok = false;
      r.failure = "action value is not an endomorphism";
      return r;
    }
    img.push_back(std::move(m));
  }
  if (!(img[0] == identity(a.object))) {
    r.ok = false;
    r.failure = "identity does not act trivially";
    return r;
  }
  for (std::size_t k = 0; k < els.size(); ++k)
    for (const auto& s : a.group.generators()) {
      int gs = a.group.index_of(perm_mul(els[k], s));
      if (!(img[gs] == compose(img[k], a.act(s)))) {
        r.ok = false;
        r.failure = "action not multiplicative at element " + std::to_string(k);
        return r;
      }
    }
  return r;
}

/// Coinvariants: quotient by act(g)(t) ~ t over generators g.
inline Quotient coinvariants(const Object& t, const std::vector<Morphism>& generator_actions) {
  std::vector<std::pair<Morphism, Morphism>> rel;
  Morphism id = identity(t);
  for (const auto& m : generator_actions) rel.emplace_back(m, id);
  return quotient(t, rel);
}

inline Quotient groupoid_colimit(const GroupAction& a) {
  auto chk = check_action(a);
  if (!chk.ok) throw Error(ErrorKind::InvalidAction, chk.failure);
  std::vector<Morphism> gens;
  for (const auto& s : a.group.generators()) gens.push_back(a.act(s));
  return coinvariants(a.object, gens);
}

/// Isomorphism invariant of a G-object: for sets the common fixed-point
/// counts of all pairs of elements; for linear objects the per-degree
/// character (a complete invariant of the graded representation).
struct ActionInvariant {
  std::vector<std::vector<Q>> values;
  bool operator==(const ActionInvariant& o) const { return values == o.values; }
};

inline ActionInvariant action_character(const PermGroup& g, const Object& x,
                                        const std::function<Morphism(const Perm&)>& act) {
  ActionInvariant inv;
  if (!x.linear()) {
    std::vector<std::vector<int>> tabs;
    for (const auto& e : g.elements()) tabs.push_back(act(e).table);
    std::vector<Q> row;
    for (std::size_t a = 0; a < tabs.size(); ++a)
      for (std::size_t b = a; b < tabs.size(); ++b) {
        int fix = 0;
        for (int i = 0; i < x.size(); ++i)
          if (tabs[a][i] == i && tabs[b][i] == i) ++fix;
        row.emplace_back(fix);
      }
    inv.values.push_back(std::move(row));
    return inv;
  }
  for (int k = x.lo(); k <= x.hi(); ++k) {
    std::vector<Q> row;
    for (const auto& e : g.elements()) row.push_back(act(e).at(k).trace());
    inv.values.push_back(std::move(row));
  }
  return inv;
}

}  // namespace opkit
