// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "opkit/verify.hpp"

using namespace opkit;

namespace {

struct Outcome {
  bool pass = true;
  int instances = 0;
  std::string note;
  void fail(const std::string& why) {
    if (pass) note = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

bool report(int n, const std::string& what, double limit, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double s = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit > 0 && s >= limit) o.fail("time limit " + std::to_string(limit) + " s exceeded");
  std::printf("criterion %2d: %s  %s  [%d instances, %.2f s%s]%s%s\n", n, o.pass ? "PASS" : "FAIL", what.c_str(),
              o.instances, s, limit > 0 ? (", limit " + std::to_string(int(limit)) + " s").c_str() : "",
              o.note.empty() ? "" : "  ", o.note.c_str());
  std::fflush(stdout);
  return o.pass;
}

std::string first(const Report& r) { return r.failures.empty() ? "" : r.failures[0]; }

Algebra pointed(const Operad& p, int extra) {
  std::vector<Object> e;
  for (int c = 0; c < p.colors().size(); ++c)
    e.push_back(p.variant() == Variant::FinSet ? Object::finset(extra) : Object::vect(extra));
  return extend_nullary(p, e);
}

// com, ass, mcom and 20 pairwise distinct random two-colored set operads.
std::vector<Operad> filtration_instances() {
  std::vector<Operad> ops{com(3), ass(3), mcom(3)};
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seen.size() < 20; ++seed) {
    Rng rng(seed);
    Operad p = random_two_colored_operad(rng, 3);
    if (seen.insert(operad_fingerprint(p)).second) ops.push_back(p);
  }
  return ops;
}

std::vector<Operad> library_operads(int bound) {
  auto monoid = [&](const std::string& name, int m, std::function<int(int, int)> add) {
    return build_set_operad(rules::constant_monoid(name, m, add, 0), ColorSet::single(), bound, true, predicate_all);
  };
  return {com(bound),
          ass(bound),
          ass(bound, Variant::FinSet, false),
          mcom(bound),
          mp(ass(bound)),
          com(bound, Variant::FinSet, am_colors()),
          monoid("z2", 2, [](int a, int b) { return (a + b) % 2; }),
          monoid("z3", 3, [](int a, int b) { return (a + b) % 3; }),
          monoid("max3", 3, [](int a, int b) { return std::max(a, b); }),
          linearize(com(bound)),
          linearize(ass(bound)),
          linearize(mcom(bound)),
          ass(bound, Variant::VectQ, false)};
}

Outcome compose_oracle_criterion() {
  Outcome o;
  Rng rng(1001);
  for (int t = 0; t < 200; ++t, ++o.instances) {
    ColorSet w = t % 2 ? ColorSet({"a", "b"}) : ColorSet::single();
    Variant v = static_cast<Variant>(t % 3);
    SymSeq x = random_seq(rng, w, v, 3, 3);
    SymSeq y = random_seq(rng, w, v, 3, 3);
    auto r = compare_with_oracle(compose(x, y, 3), compose_oracle(x, y, 3));
    if (!r.ok) o.fail("instance " + std::to_string(t) + ": " + r.witness);
  }
  return o;
}

Outcome unit_assoc_criterion() {
  Outcome o;
  Rng rng(1002);
  for (int t = 0; t < 100; ++t, ++o.instances) {
    ColorSet w = t % 2 ? ColorSet({"a", "b"}) : ColorSet::single();
    Variant v = static_cast<Variant>(t % 3);
    SymSeq x = random_seq(rng, w, v, 2, 2);
    SymSeq y = random_seq(rng, w, v, 2, 2, t % 4 == 0 ? 0 : 1);
    SymSeq z = random_seq(rng, w, v, 2, 2);
    SymSeq u = unit_seq(w, v);
    auto left = compose(u, x, 2);
    auto right = compose(x, u, 2);
    auto a = assoc_data(x, y, z, 2);
    for (const auto& sig : all_signatures(w, 2)) {
      auto G = aut_group(sig.in);
      auto xact = [&](const Perm& g) { return x.act(sig, g); };
      std::string where = "instance " + std::to_string(t) + " " + signature_string(sig, w);
      auto l = check_equivariant_iso(left_unitor(left, sig), *G, [&](const Perm& g) { return left.result.act(sig, g); }, xact);
      auto r = check_equivariant_iso(right_unitor(right, sig), *G, [&](const Perm& g) { return right.result.act(sig, g); }, xact);
      auto s = check_equivariant_iso(associator(a, sig), *G, [&](const Perm& g) { return a.xy_z.result.act(sig, g); },
                                     [&](const Perm& g) { return a.x_yz.result.act(sig, g); });
      if (!l.ok) o.fail(where + " left unitor: " + l.witness);
      if (!r.ok) o.fail(where + " right unitor: " + r.witness);
      if (!s.ok) o.fail(where + " associator: " + s.witness);
    }
  }
  return o;
}

Outcome square_criterion(const std::vector<Operad>& ops) {
  Outcome o;
  for (const auto& p : ops)
    for (int n = 2; n <= 3; ++n, ++o.instances) {
      auto r = lq_square_check(p, n);
      if (!r.ok) o.fail(p.name + " n=" + std::to_string(n) + ": " + first(r));
    }
  return o;
}

Outcome compute1_criterion(const std::vector<Operad>& ops) {
  Outcome o;
  for (const auto& p : ops)
    for (int extra : {1, 2})
      for (int n = 2; n <= 3; ++n)
        for (int w0 = 0; w0 < p.colors().size(); ++w0, ++o.instances) {
          auto r = check_compute1(p, attaching_comparison(p, pointed(p, extra), n, w0));
          if (!r.ok) o.fail(p.name + " n=" + std::to_string(n) + ": " + r.witness);
        }
  return o;
}

Outcome stage_criterion(const std::vector<Operad>& ops) {
  Outcome o;
  for (const auto& p : ops) {
    Algebra x = pointed(p, 1);
    auto st = free_algebra_stages(p, x, 3);
    for (int n = 0; n <= 3; ++n, ++o.instances) {
      auto r = compare_stage(p, x, st[n], skeleton_composite(p, x, n));
      if (!r.ok) o.fail(p.name + " n=" + std::to_string(n) + ": " + r.witness);
      FiltrationStage oracle = free_algebra_stage_oracle(p, x, n);
      for (int c = 0; c < p.colors().size(); ++c)
        if (oracle.value[c].size() != st[n].value[c].size()) o.fail(p.name + ": stage sizes differ from the oracle");
    }
    for (int n = 2; n <= 3; ++n)
      for (int w0 = 0; w0 < p.colors().size(); ++w0) {
        auto r = check_compute2(p, attaching_comparison(p, x, n, w0));
        if (!r.ok) o.fail(p.name + " compute2 n=" + std::to_string(n) + ": " + r.witness);
      }
  }
  for (const auto& p : {com(3), ass(3)}) {
    std::string got;
    for (const auto& s : free_algebra_stages(p, pointed(p, 1), 3)) got += std::to_string(s.value[0].size());
    if (got != "1234") o.fail(p.name + " stage sizes " + got);
  }
  return o;
}

Morphism random_generating_map(Rng& rng, bool linear) {
  if (!linear) {
    int a = uniform_int(rng, 0, 2), b = uniform_int(rng, a == 0 ? 0 : 1, 3);
    std::vector<int> tab(a);
    for (auto& e : tab) e = uniform_int(rng, 0, b - 1);
    return Morphism::from_table(Object::finset(a), Object::finset(b), tab);
  }
  int a = uniform_int(rng, 0, 2), b = uniform_int(rng, 0, 3);
  return Morphism::from_matrix(Object::vect(a), Object::vect(b), random_matrix(rng, b, a));
}

Outcome q_criterion() {
  Outcome o;
  Rng rng(1006);
  for (int t = 0; t < 100; ++t, ++o.instances) {
    std::vector<Morphism> fs;
    for (int i = 0; i < 1 + t % 3; ++i) fs.push_back(random_generating_map(rng, t % 2 == 1));
    auto r = compare_q_with_pushout_product(q_object(fs));
    if (!r.check.ok) o.fail("instance " + std::to_string(t) + ": " + r.check.witness);
  }
  return o;
}

Outcome envelope_criterion() {
  Outcome o;
  for (const auto& p : library_operads(5)) {
    Envelope env = enveloping_operad(p, initial_algebra(p), 2, 1);
    auto r = check_initial_envelope(p, 3, 1, &env);
    ++o.instances;
    if (!r.ok) o.fail(p.name + ": " + first(r));
  }
  Rng rng(1007);
  std::vector<Operad> small{com(3), ass(3), mcom(3), random_two_colored_operad(rng, 3), random_two_colored_operad(rng, 3)};
  for (const auto& q : small) {
    Operad p = one_skeleton(q);
    for (const auto& a : enumerate_algebras(p, 2, 1)) {
      auto u = check_envelope_universal(p, a, 2);
      ++o.instances;
      if (!u.report.ok) o.fail(q.name + ": " + first(u.report));
    }
  }
  return o;
}

Outcome kernel_criterion() {
  Outcome o;
  Rng rng(1008);
  for (int i = 0; i < 100; ++i, ++o.instances) {
    Object a = random_chain(rng, 0, 4, 6), b = random_chain(rng, 0, 4, 6);
    if (!same_object(kernel_functor(include_coprod(a, b)), b)) o.fail("strict unit fails at instance " + std::to_string(i));
  }
  for (int i = 0; i < 100; ++i, ++o.instances) {
    OverUnder x = random_over_under(rng, 0, 4, 6);
    auto c = check_over_under(x);
    if (!c.ok) o.fail("malformed instance " + std::to_string(i) + ": " + first(c));
    auto r = check_counit(x);
    if (!r.ok) o.fail("counit at instance " + std::to_string(i) + ": " + first(r));
  }
  return o;
}

Outcome sigma_criterion() {
  Outcome o;
  Rng rng(1009);
  for (int i = 0; i < 50; ++i, ++o.instances) {
    auto r = sigma_infty_plus_check(random_chain(rng, 0, 4, 6));
    if (!r.report.ok) o.fail("instance " + std::to_string(i) + ": " + first(r.report));
  }
  return o;
}

Outcome cofiber_criterion() {
  Outcome o;
  Rng rng(1010);
  for (int i = 0; i < 50; ++i, ++o.instances) {
    Object a = random_chain(rng, 0, 1, 2);
    Morphism f = random_injection(rng, random_chain(rng, 0, 1, 2), 0, 1, 1, true);
    Morphism g = random_injection(rng, random_chain(rng, 0, 1, 2), 0, 1, 2, i % 2 == 0);
    auto r = cofiber_pushout_product_check(a, f, g, 6);
    if (!r.ok) o.fail("instance " + std::to_string(i) + ": " + first(r));
  }
  return o;
}

// The documented corrupted instance of every suite.
InstanceSpec corrupted(const std::string& suite) {
  InstanceSpec s;
  s.seed = 0;
  s.corrupt = true;
  if (suite == "lq_n-pushout") s.seed = 1;
  if (suite == "compute1" || suite == "compute2") s.size = 3;
  return s;
}

Outcome mutation_criterion() {
  Outcome o;
  for (const auto& name : suite_names()) {
    ++o.instances;
    auto r = run_suite(name, corrupted(name));
    if (r.pass) o.fail(name + " accepts its corrupted instance");
    else if (r.witness.empty()) o.fail(name + " fails without a witness");
  }
  return o;
}

}  // namespace

int main() {
  const auto ops = filtration_instances();
  bool ok = true;
  ok &= report(1, "compose agrees with compose_oracle", 60, compose_oracle_criterion);
  ok &= report(2, "unitors and associator are isomorphisms", 0, unit_assoc_criterion);
  ok &= report(3, "attaching square is a pushout, n = 2, 3", 0, [&] { return square_criterion(ops); });
  ok &= report(4, "closed-form attaching colimit equals the coequalizer", 0, [&] { return compute1_criterion(ops); });
  ok &= report(5, "pushout stages equal the oracle; com and ass sizes 1,2,3,4", 0, [&] { return stage_criterion(ops); });
  ok &= report(6, "q_object is the iterated pushout-product", 0, q_criterion);
  ok &= report(7, "envelope of P_0 is P; P^A-algebras are algebras under A", 0, envelope_criterion);
  ok &= report(8, "kernel strict unit and counit quasi-isomorphism", 30, kernel_criterion);
  ok &= report(9, "stable homology of sigma-infinity-plus A is H(A)", 0, sigma_criterion);
  ok &= report(10, "pushout-product cofiber is stably trivial, T = 6", 0, cofiber_criterion);
  ok &= report(11, "every verify suite rejects its corrupted instance", 0, mutation_criterion);
  std::printf("%s\n", ok ? "all criteria pass" : "some criteria fail");
  return ok ? 0 : 1;
}
