#pragma once

// Canonical comparison maps between independently computed composites.

#include <string>

#include "opkit/compose.hpp"
#include "opkit/oracle.hpp"

namespace opkit {

/// Outcome of an isomorphism check with a witness on failure.
struct IsoCheck {
  bool ok = true;
  std::string witness;
};

/// Check that f is an equivariant isomorphism of group-objects.
template <class ActS, class ActT>
IsoCheck check_equivariant_iso(const Morphism& f, const PermGroup& g, ActS&& act_s, ActT&& act_t) {
  IsoCheck r;
  if (!is_chain_map(f)) return {false, "comparison is not a chain map"};
  if (!is_iso(f)) return {false, "comparison is not invertible (sizes " + std::to_string(f.src.size()) + " vs " +
                                     std::to_string(f.tgt.size()) + ")"};
  for (const auto& s : g.generators())
    if (!(compose(f, act_s(s)) == compose(act_t(s), f))) return {false, "comparison is not equivariant"};
  return r;
}

/// Oracle value -> closed-form value on one orbit.
inline Morphism oracle_to_closed(const ComposeWitness& cw, const OracleResult& o, const Signature& w) {
  const OracleOrbit& oo = o.orbits.at(w);
  Object target = cw.result.value(w);
  std::vector<Morphism> comps;
  for (const auto& d : oo.labeled) comps.push_back(compose_inject(cw, w, d.phi, d.slot));
  Morphism raw = copair(oo.raw, comps, target);
  return descend(oo.quo, raw);
}

inline IsoCheck compare_with_oracle(const ComposeWitness& cw, const OracleResult& o) {
  for (const auto& [w, oo] : o.orbits) {
    Morphism f;
    try {
      f = oracle_to_closed(cw, o, w);
    } catch (const Error& e) {
      return {false, "orbit " + signature_string(w, cw.x.colors) + ": " + e.what()};
    }
    auto G = aut_group(w.in);
    auto r = check_equivariant_iso(
        f, *G, [&](const Perm& g) { return o.result.act(w, g); }, [&](const Perm& g) { return cw.result.act(w, g); });
    if (!r.ok) return {false, "orbit " + signature_string(w, cw.x.colors) + ": " + r.witness};
  }
  return {};
}

}  // namespace opkit
