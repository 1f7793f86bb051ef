#pragma once

// Seeded random symmetric sequences: entries are sums of small
// equivariant building blocks (trivial points, sign pairs, permutation
// actions on a color block).

#include <vector>

#include "opkit/random.hpp"
#include "opkit/symseq.hpp"

namespace opkit {

inline int perm_sign(const Perm& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

namespace gen_detail {

enum class Block { Trivial, Sign, Positions };

struct Piece {
  Block kind;
  int color = 0;     // Positions: which color block
  Object obj;
  std::vector<int> pos;  // Positions: the tuple positions of the block
};

inline Morphism piece_action(const Piece& pc, const Perm& g) {
  const Object& o = pc.obj;
  switch (pc.kind) {
    case Block::Trivial: return identity(o);
    case Block::Sign: {
      if (o.linear()) {
        SMatrix m = SMatrix::identity(o.size()).scaled(perm_sign(g));
        return Morphism::linear_from(o, o, [&](int k) { return k == 0 ? m : SMatrix(o.dim(k), o.dim(k)); });
      }
      bool odd = perm_sign(g) < 0;
      return Morphism::from_table(o, o, odd ? std::vector<int>{1, 0} : std::vector<int>{0, 1});
    }
    case Block::Positions: {
      int m = static_cast<int>(pc.pos.size());
      std::vector<int> tab(m);
      for (int a = 0; a < m; ++a)
        tab[a] = static_cast<int>(std::find(pc.pos.begin(), pc.pos.end(), g[pc.pos[a]]) - pc.pos.begin());
      if (!o.linear()) return Morphism::from_table(o, o, tab);
      SMatrix pm(m, m);
      for (int a = 0; a < m; ++a) pm.set(tab[a], a, 1);
      return Morphism::linear_from(o, o, [&](int k) { return k == 0 ? pm : SMatrix(o.dim(k), o.dim(k)); });
    }
  }
  return identity(o);
}

inline Object block_object(Variant v, int size) {
  if (v == Variant::FinSet) return Object::finset(size);
  if (v == Variant::VectQ) return Object::vect(size);
  return Object::chain(0, {size}, {});
}

}  // namespace gen_detail

/// Random entry on signature s with total size (cardinality or dimension)
/// at most max_size. For ChainQ a trivial-action complex is added as well.
inline Entry random_entry(Rng& rng, Variant v, const Signature& s, int max_size) {
  using namespace gen_detail;
  auto aut = aut_group(s.in);
  bool has_odd = false;
  for (const auto& g : aut->generators()) has_odd = has_odd || perm_sign(g) < 0;
  std::vector<Piece> pieces;
  int budget = uniform_int(rng, 0, max_size);
  int guard = 0;
  while (budget > 0 && guard++ < 20) {
    int choice = uniform_int(rng, 0, 3);
    if (choice == 0 || choice == 3) {
      if (v == Variant::ChainQ && budget >= 2 && uniform_int(rng, 0, 1)) {
        // acyclic-or-not two-term complex with trivial action
        int a = 1, b = 1;
        SMatrix d(a, b);
        if (uniform_int(rng, 0, 1)) d.set(0, 0, random_q(rng, 0.0));
        Piece pc{Block::Trivial, 0, Object::chain(0, {a, b}, {SMatrix(0, a), d}), {}};
        pieces.push_back(pc);
        budget -= 2;
      } else {
        pieces.push_back({Block::Trivial, 0, block_object(v, 1), {}});
        budget -= 1;
      }
    } else if (choice == 1) {
      if (!has_odd) continue;
      int size = v == Variant::FinSet ? 2 : 1;
      if (size > budget) continue;
      pieces.push_back({Block::Sign, 0, block_object(v, size), {}});
      budget -= size;
    } else {
      if (s.in.empty()) continue;
      int c = s.in[uniform_int(rng, 0, s.arity() - 1)];
      std::vector<int> pos;
      for (int i = 0; i < s.arity(); ++i)
        if (s.in[i] == c) pos.push_back(i);
      int m = static_cast<int>(pos.size());
      if (m > budget) continue;
      pieces.push_back({Block::Positions, c, block_object(v, m), pos});
      budget -= m;
    }
  }
  std::vector<Object> objs;
  for (const auto& p : pieces) objs.push_back(p.obj);
  Coproduct c = coproduct(objs, v);
  return entry_from_function(c.obj, aut, [&](const Perm& g) {
    std::vector<Morphism> ms;
    for (const auto& p : pieces) ms.push_back(piece_action(p, g));
    return coproduct_map(c, c, ms);
  });
}

/// Random sequence with entries in arities [min_arity, bound], exact (not
/// truncated) at its bound.
inline SymSeq random_seq(Rng& rng, const ColorSet& w, Variant v, int bound, int max_size, int min_arity = 0,
                         double density = 0.6) {
  SymSeq s(w, v, bound, false);
  for (const auto& sig : all_signatures(w, bound)) {
    if (sig.arity() < min_arity) continue;
    if (std::uniform_real_distribution<double>(0, 1)(rng) > density) continue;
    s.set(sig, random_entry(rng, v, sig, max_size));
  }
  return s;
}

}  // namespace opkit
