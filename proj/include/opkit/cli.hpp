#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 parse or usage error (including an unknown suite), 3 math-domain error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "opkit/io.hpp"
#include "opkit/verify.hpp"

namespace opkit {

namespace cli {

using nlohmann::json;

enum Exit { Ok = 0, Failed = 1, ParseFailed = 2, Domain = 3 };

inline json header(const std::string& command) { return json{{"schema", 1}, {"command", command}}; }

inline Definitions load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_definitions(ss.str());
}

inline json failures(const Report& r) { return json(r.failures); }

inline json spec_json(const InstanceSpec& s) {
  return json{{"variant", variant_name(s.variant)}, {"colors", s.colors}, {"arity", s.arity},
              {"size", s.size},                     {"seed", s.seed},     {"corrupt", s.corrupt}};
}

inline json report_json(const VerificationReport& r) {
  json j{{"suite", r.suite}, {"spec", spec_json(r.spec)}, {"pass", r.pass}, {"seconds", r.seconds}};
  j["witness"] = r.pass ? json(nullptr) : json(r.witness);
  return j;
}

inline Variant parse_variant(const std::string& s) {
  if (s == "FinSet") return Variant::FinSet;
  if (s == "VectQ") return Variant::VectQ;
  if (s == "ChainQ") return Variant::ChainQ;
  throw Error(ErrorKind::Parse, "unknown variant '" + s + "'");
}

inline json sizes_json(const SymSeq& s) {
  json a = json::array();
  for (const auto& [w, e] : s.entries)
    a.push_back(json{{"signature", signature_string(w, s.colors)}, {"size", e.obj.size()}});
  return a;
}

inline int cmd_check(const Definitions& d, const std::string& entity, int bound, std::ostream& out) {
  json j = header("check");
  j["entity"] = entity;
  std::string kind = d.kind_of(entity);
  if (kind.empty()) throw Error(ErrorKind::Parse, "no entity named '" + entity + "'");
  j["kind"] = kind;
  Report r;
  if (kind == "operad") {
    const Operad& p = d.operad(entity);
    r = check_operad(p, bound < 0 ? p.bound() : bound);
  } else if (kind == "algebra") {
    const AlgebraDef& a = d.algebra(entity);
    const Operad& p = d.operad(a.operad);
    r = check_algebra(p, a.a, bound < 0 ? p.bound() : bound);
  } else if (kind == "module") {
    const ModuleDef& m = d.modules.at(entity);
    const Operad& p = d.operad(m.operad);
    r = check_module(p, d.algebra(m.algebra).a, m.m, bound < 0 ? p.bound() : bound);
  } else if (kind == "prespectrum") {
    const Prespectrum& s = d.prespectrum(entity).s;
    r = check_prespectrum(s);
    if (r.ok) {
      Report o = omega_spectrum_check(s);
      j["omega_spectrum"] = o.ok;
      if (!o.ok) j["omega_witness"] = o.failures[0];
    }
  }
  // sequences, complexes and generators are validated while parsing
  j["pass"] = r.ok;
  j["failures"] = failures(r);
  out << j.dump(2) << "\n";
  return r.ok ? Ok : Failed;
}

inline int cmd_compose(const Definitions& d, const std::string& x, const std::string& y, int bound, bool text,
                       std::ostream& out) {
  auto cw = compose(d.sequence(x), d.sequence(y), bound);
  std::string name = x + "_" + y;
  std::string ser = write_header(d.colors, d.variant) + "\n" + write_sequence(name, cw.result);
  if (text) {
    out << ser;
    return Ok;
  }
  json j = header("compose");
  j["result"] = ser;
  j["sizes"] = sizes_json(cw.result);
  out << j.dump(2) << "\n";
  return Ok;
}

inline int cmd_free_stage(const Definitions& d, const std::string& p_name, const std::string& x_name, int n,
                          bool text, std::ostream& out) {
  const Operad& p = d.operad(p_name);
  const GeneratorsDef& g = d.generator(x_name);
  if (g.operad != p_name) throw Error(ErrorKind::ColorMismatch, "generators belong to operad '" + g.operad + "'");
  auto st = free_algebra_stages(p, g.x, n);
  const ColorSet& w = p.colors();
  Operad skel = one_skeleton(p);
  const std::string skel_name = p_name + "_1";
  std::string ser = "# stage sizes\n# n";
  for (const auto& c : w.names) ser += " " + c;
  ser += "\n";
  for (const auto& s : st) {
    ser += "# " + std::to_string(s.n);
    for (const auto& v : s.value) ser += " " + std::to_string(v.size());
    ser += "\n";
  }
  ser += write_header(w, p.variant()) + "\n" + write_operad(skel_name, skel);
  for (const auto& s : st)
    if (s.n >= 1)
      ser += "\n" + write_algebra(x_name + "_stage" + std::to_string(s.n), skel_name, stage_algebra(p, g.x, s), w);
  if (text) {
    out << ser;
    return Ok;
  }
  json j = header("free-stage");
  json table = json::array();
  for (const auto& s : st) {
    json row{{"n", s.n}};
    json sz = json::object();
    for (int c = 0; c < w.size(); ++c) sz[w.names[c]] = s.value[c].size();
    row["sizes"] = sz;
    table.push_back(row);
  }
  j["table"] = table;
  j["stages"] = ser;
  out << j.dump(2) << "\n";
  return Ok;
}

inline int cmd_envelope(const Definitions& d, const std::string& p_name, const std::string& a_name, int bound,
                        int extras, bool text, std::ostream& out) {
  const Operad& p = d.operad(p_name);
  const AlgebraDef& a = d.algebra(a_name);
  if (a.operad != p_name) throw Error(ErrorKind::ColorMismatch, "algebra over operad '" + a.operad + "'");
  Envelope env = enveloping_operad(p, a.a, bound, extras < 0 ? bound : extras);
  std::string ser = write_header(d.colors, d.variant) + "\n" + write_operad(p_name + "_" + a_name, env.op);
  if (text) {
    out << ser;
    return Ok;
  }
  EnrichedCategory cat = enveloping_category(env);
  json j = header("envelope");
  j["operad"] = ser;
  json hom = json::array();
  for (int s = 0; s < d.colors.size(); ++s)
    for (int t = 0; t < d.colors.size(); ++t)
      hom.push_back(json{{"source", d.colors.names[s]}, {"target", d.colors.names[t]}, {"size", cat.hom_of(s, t).size()}});
  j["hom"] = hom;
  j["sizes"] = sizes_json(env.op.seq);
  out << j.dump(2) << "\n";
  return Ok;
}

inline int cmd_stable(const Definitions& d, const std::string& name, std::ostream& out) {
  const PrespectrumDef& pd = d.prespectrum(name);
  StableHomology h = spectrify(pd.s);
  json j = header("stable");
  j["prespectrum"] = name;
  j["truncation"] = pd.truncation;
  json rows = json::array();
  for (const auto& [q, r] : h.rank) {
    json row{{"degree", q}};
    row["rank"] = r ? json(*r) : json(nullptr);
    row["stabilized_at"] = h.stabilized_at.count(q) ? json(h.stabilized_at.at(q)) : json(nullptr);
    rows.push_back(row);
  }
  j["homology"] = rows;
  j["determined"] = h.determined();
  out << j.dump(2) << "\n";
  return Ok;
}

inline int cmd_verify(const std::string& suite, const InstanceSpec& s, std::ostream& out) {
  if (suite == "all") {
    json j = header("verify");
    json reps = json::array();
    bool ok = true;
    for (const auto& n : suite_names()) {
      auto r = run_suite(n, s);
      ok = ok && r.pass;
      reps.push_back(report_json(r));
    }
    j["reports"] = reps;
    j["pass"] = ok;
    out << j.dump(2) << "\n";
    return ok ? Ok : Failed;
  }
  auto r = run_suite(suite, s);
  json j = header("verify");
  j.update(report_json(r));
  out << j.dump(2) << "\n";
  return r.pass ? Ok : Failed;
}

inline void error_json(std::ostream& err, const std::string& kind, const std::string& msg, int line = 0, int col = 0) {
  json j = header("error");
  j["error"] = kind;
  j["message"] = msg;
  if (line > 0) {
    j["line"] = line;
    j["column"] = col;
  }
  err << j.dump(2) << "\n";
}

}  // namespace cli

/// Run the command line; writes reports to `out`, errors to `err`.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"opkit: operads, free algebras, enveloping operads and stable modules"};
  app.require_subcommand(1);
  std::string file, a1, a2, suite = "compute1", variant = "FinSet";
  int bound = -1, n = 3, extras = -1;
  bool text = false;
  InstanceSpec spec;

  auto* check = app.add_subcommand("check", "check the laws of a declared entity");
  check->add_option("file", file, "definition file")->required();
  check->add_option("entity", a1, "entity name")->required();
  check->add_option("--bound", bound, "arity bound for the check (default: the operad's)");

  auto* comp = app.add_subcommand("compose", "composition product of two sequences");
  comp->add_option("file", file)->required();
  comp->add_option("x", a1)->required();
  comp->add_option("y", a2)->required();
  comp->add_option("--bound", bound, "output arity bound")->required();
  comp->add_flag("--text", text, "print the result as a definition file");

  auto* free = app.add_subcommand("free-stage", "skeletal filtration stages of a free algebra");
  free->add_option("file", file)->required();
  free->add_option("operad", a1)->required();
  free->add_option("generators", a2)->required();
  free->add_option("n", n, "last stage")->required();
  free->add_flag("--text", text, "print the stages as a definition file");

  auto* env = app.add_subcommand("envelope", "enveloping operad of an algebra");
  env->add_option("file", file)->required();
  env->add_option("operad", a1)->required();
  env->add_option("algebra", a2)->required();
  env->add_option("--bound", bound, "arity bound")->required();
  env->add_option("--extras", extras, "extra inputs in the presentation (default: the bound)");
  env->add_flag("--text", text, "print the operad as a definition file");

  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite, "suite name or 'all'")->required();
  ver->add_option("--seed", spec.seed);
  ver->add_option("--colors", spec.colors);
  ver->add_option("--arity", spec.arity);
  ver->add_option("--size", spec.size);
  ver->add_option("--variant", variant, "FinSet, VectQ or ChainQ");
  ver->add_flag("--corrupt", spec.corrupt, "apply the suite's documented mutation");

  auto* stab = app.add_subcommand("stable", "stable homology of a prespectrum");
  stab->add_option("file", file)->required();
  stab->add_option("prespectrum", a1)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    error_json(err, "Usage", e.what());
    return ParseFailed;
  }
  try {
    if (*ver) {
      spec.variant = parse_variant(variant);
      return cmd_verify(suite, spec, out);
    }
    Definitions d = load(file);
    if (*check) return cmd_check(d, a1, bound, out);
    if (*comp) return cmd_compose(d, a1, a2, bound, text, out);
    if (*free) return cmd_free_stage(d, a1, a2, n, text, out);
    if (*env) return cmd_envelope(d, a1, a2, bound, extras, text, out);
    if (*stab) return cmd_stable(d, a1, out);
  } catch (const ParseError& e) {
    error_json(err, "Parse", e.what(), e.line(), e.column());
    return ParseFailed;
  } catch (const Error& e) {
    error_json(err, error_kind_name(e.kind()), e.what());
    return e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::UnknownSuite ? ParseFailed : Domain;
  }
  return ParseFailed;
}

}  // namespace opkit
