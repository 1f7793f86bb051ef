#pragma once

// Brute-force composition product: every labeled (phi : k -> n, slot
// colors) is a separate summand, and the whole sum is divided by the
// slot relabelings at once. Shares no orbit logic with compose.hpp.

#include <map>
#include <vector>

#include "opkit/symseq.hpp"

namespace opkit {

struct LabeledDec {
  std::vector<int> phi;
  std::vector<int> slot;
};

struct OracleOrbit {
  std::vector<LabeledDec> labeled;
  Coproduct raw;
  Quotient quo;
};

struct OracleResult {
  SymSeq result;
  std::map<Signature, OracleOrbit> orbits;
};

namespace oracle_detail {

inline std::vector<Object> factors(const SymSeq& x, const SymSeq& y, const Signature& w, const LabeledDec& d) {
  std::vector<Object> fs{x.at_tuple(w.out, d.slot)};
  for (std::size_t j = 0; j < d.slot.size(); ++j) {
    std::vector<int> cols;
    for (std::size_t i = 0; i < d.phi.size(); ++i)
      if (d.phi[i] == static_cast<int>(j)) cols.push_back(w.in[i]);
    fs.push_back(y.at_tuple(d.slot[j], cols));
  }
  return fs;
}

inline bool next_tuple(std::vector<int>& t, int base) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (++t[i] < base) return true;
    t[i] = 0;
  }
  return false;
}

}  // namespace oracle_detail

inline OracleResult compose_oracle(const SymSeq& x, const SymSeq& y, int out_bound) {
  require_compatible(x, y);
  if (!y.nullary_free() && x.truncated) throw Error(ErrorKind::NonFinitary, "oracle: X truncated, Y has nullaries");
  if (y.nullary_free() && !x.exact_to(out_bound)) throw Error(ErrorKind::NonFinitary, "oracle: X truncated");
  if (!y.exact_to(out_bound)) throw Error(ErrorKind::NonFinitary, "oracle: Y truncated");
  const Variant v = x.variant;
  const int nc = x.colors.size();
  OracleResult res;
  res.result = SymSeq(x.colors, v, out_bound, true);
  for (const auto& w : all_signatures(x.colors, out_bound)) {
    const int k = w.arity();
    int nmax = y.nullary_free() ? std::min(k, x.bound) : x.bound;
    OracleOrbit oo;
    std::vector<Object> objs;
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> where;
    for (int n = 0; n <= nmax; ++n) {
      if (n == 0 && k > 0) continue;
      std::vector<int> phi(k, 0);
      do {
        std::vector<int> slot(n, 0);
        do {
          LabeledDec d{phi, slot};
          Object t = tensor_all(oracle_detail::factors(x, y, w, d), v);
          if (t.is_initial()) continue;
          where.emplace(std::make_pair(phi, slot), static_cast<int>(oo.labeled.size()));
          oo.labeled.push_back(d);
          objs.push_back(t);
        } while (oracle_detail::next_tuple(slot, nc));
      } while (oracle_detail::next_tuple(phi, n));
    }
    oo.raw = coproduct(objs, v);
    // Relabel slots by adjacent transpositions: (phi, slot) -> (t phi, slot t^{-1}).
    std::vector<std::pair<Morphism, Morphism>> rel;
    for (std::size_t a = 0; a < oo.labeled.size(); ++a) {
      const auto& d = oo.labeled[a];
      const int n = static_cast<int>(d.slot.size());
      for (int s = 0; s + 1 < n; ++s) {
        Perm t = transposition(n, s, s + 1);
        std::vector<int> phi2(k), slot2(n);
        for (int i = 0; i < k; ++i) phi2[i] = t[d.phi[i]];
        for (int j = 0; j < n; ++j) slot2[t[j]] = d.slot[j];
        auto it = where.find({phi2, slot2});
        if (it == where.end()) throw Error(ErrorKind::StructureMismatch, "oracle: relabeled summand missing");
        auto fs = oracle_detail::factors(x, y, w, d);
        std::vector<Morphism> maps{x.transport(w.out, d.slot, t)};
        std::vector<Object> tg{maps[0].tgt};
        for (int j = 0; j < n; ++j) {
          maps.push_back(identity(fs[1 + j]));
          tg.push_back(fs[1 + j]);
        }
        Perm p(n + 1);
        p[0] = 0;
        for (int j = 0; j < n; ++j) p[1 + j] = 1 + t[j];
        Morphism m = compose(permute_factors(tg, p, v), tensor_all(maps, v));
        rel.emplace_back(oo.raw.inj[a], compose(oo.raw.inj[it->second], m));
      }
    }
    oo.quo = quotient(oo.raw.obj, rel);
    if (!oo.quo.obj.is_initial()) {
      // Leaf automorphisms: (phi, slot) -> (phi sigma^{-1}, slot).
      auto G = aut_group(w.in);
      auto raw_action = [&](const Perm& sg) {
        std::vector<Morphism> comps;
        for (std::size_t a = 0; a < oo.labeled.size(); ++a) {
          const auto& d = oo.labeled[a];
          const int n = static_cast<int>(d.slot.size());
          std::vector<int> phi2(k);
          for (int i = 0; i < k; ++i) phi2[sg[i]] = d.phi[i];
          int b = where.at({phi2, d.slot});
          std::vector<Morphism> maps{identity(x.at_tuple(w.out, d.slot))};
          for (int j = 0; j < n; ++j) {
            std::vector<int> f, g, cols;
            for (int i = 0; i < k; ++i) {
              if (d.phi[i] == j) {
                f.push_back(i);
                cols.push_back(w.in[i]);
              }
              if (phi2[i] == j) g.push_back(i);
            }
            Perm pi(f.size());
            for (std::size_t q = 0; q < f.size(); ++q)
              pi[q] = static_cast<int>(std::find(g.begin(), g.end(), sg[f[q]]) - g.begin());
            maps.push_back(y.transport(d.slot[j], cols, pi));
          }
          comps.push_back(compose(oo.raw.inj[b], tensor_all(maps, v)));
        }
        return copair(oo.raw, comps, oo.raw.obj);
      };
      Entry e = entry_from_function(oo.quo.obj, G, [&](const Perm& sg) {
        return compose(oo.quo.proj, compose(raw_action(sg), oo.quo.section));
      });
      res.result.set(w, std::move(e));
    }
    res.orbits.emplace(w, std::move(oo));
  }
  res.result.truncated = x.truncated || y.truncated || out_bound < std::max(0, x.bound) * std::max(1, y.bound);
  return res;
}

}  // namespace opkit
