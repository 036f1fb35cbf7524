// aal: command-line front end for the checkers.
//
// Exit codes: 0 all checks pass, 1 a check fails, 2 usage, parse or input error.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aal/algebraization.hpp"
#include "aal/glivenko.hpp"
#include "aal/institutions.hpp"
#include "aal/io.hpp"

using namespace aal;
using json = io::json;

namespace {

constexpr std::size_t kGlivenkoSamples = 10'000;
constexpr std::size_t kInstitutionSamples = 10'000;

struct Opts {
  std::string logic = "cpc";
  std::string pair = "classical";
  std::string algebra;
  std::string filter;
  std::string context = "classical";
  std::string gamma;
  std::string phi;
  std::size_t vars = 2;
  std::size_t depth = 2;
  std::size_t gamma_size = 2;
  std::uint64_t seed = 1;
  bool json = false;
  bool exhaustive = false;
  std::string kind;
  std::string corpus;
};

// Text and JSON forms of one report, emitted in a single place.
struct Report {
  std::ostringstream text;
  json doc = json::object();
  bool failed = false;
};

int emit(const Report& r, bool as_json) {
  if (as_json) {
    json d = r.doc;
    d["passed"] = !r.failed;
    std::cout << d.dump(2) << "\n";
  } else {
    std::cout << r.text.str();
  }
  return r.failed ? 1 : 0;
}

json strings(std::span<const Formula> fs) {
  json a = json::array();
  for (const auto& f : fs) a.push_back(to_string(f));
  return a;
}

std::string join(std::span<const Element> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<Element> parse_filter(const std::string& text, std::size_t size) {
  std::vector<Element> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      throw InvalidArgument("bad filter element '" + item + "'");
    }
    if (item.find_first_not_of(" \t", pos) != std::string::npos) throw InvalidArgument("bad filter element '" + item + "'");
    if (v >= size) throw InvalidArgument("filter element " + item + " outside the carrier");
    out.push_back(static_cast<Element>(v));
  }
  return out;
}

void require_bounds(const Opts& o) {
  if (o.vars < 1 || o.depth < 1 || o.gamma_size < 1) throw InvalidArgument("--vars, --depth and --gamma-size must be >= 1");
}

int cmd_consequence(const Opts& o) {
  const auto l = io::load_logic(o.logic);
  const auto gamma = parse_formula_list(l.signature(), o.gamma);
  const auto phi = parse_formula(l.signature(), o.phi);
  const bool r = consequence(l, gamma, phi);
  Report rep;
  rep.text << (r ? "true" : "false") << "\n";
  rep.doc = {{"command", "consequence"}, {"logic", l.name()}, {"gamma", strings(gamma)}, {"phi", to_string(phi)}, {"result", r}};
  emit(rep, o.json);
  return 0;
}

int cmd_glivenko(const Opts& o) {
  const auto ctx = io::load_context(o.context);
  const Signature& sig = ctx.source().signature();
  Report rep;
  rep.doc["command"] = "glivenko";
  rep.doc["context"] = o.context;
  rep.doc["theta"] = to_string(ctx.theta());
  if (o.exhaustive) {
    require_bounds(o);
    const auto s = glivenko_sweep(ctx, o.vars, o.depth, o.gamma_size, kGlivenkoSamples, o.seed);
    rep.failed = !s.all_agree();
    rep.text << "glivenko sweep: context " << o.context << ", theta " << to_string(ctx.theta()) << "\n"
             << "bounds: vars=" << s.vars << " depth=" << s.depth << " gamma-size=" << s.gamma_size
             << " samples=" << s.samples << " seed=" << s.seed << "\n"
             << "instances: " << s.instances << "\n"
             << "agreements: " << s.agreements << "\n"
             << "valid on both sides: " << s.valid << "\n";
    json ds = json::array();
    for (const auto& d : s.disagreements) {
      rep.text << "disagreement: " << to_string(d.sentence) << " source=" << d.source_side << " target=" << d.target_side << "\n";
      ds.push_back({{"gamma", strings(d.sentence.gamma)}, {"phi", to_string(d.sentence.phi)}, {"source", d.source_side},
                    {"target", d.target_side}});
    }
    rep.text << (rep.failed ? "FAIL" : "PASS") << "\n";
    rep.doc["bounds"] = {{"vars", s.vars}, {"depth", s.depth}, {"gamma_size", s.gamma_size}, {"samples", s.samples}, {"seed", s.seed}};
    rep.doc["instances"] = s.instances;
    rep.doc["agreements"] = s.agreements;
    rep.doc["valid"] = s.valid;
    rep.doc["disagreements"] = ds;
    return emit(rep, o.json);
  }
  if (o.phi.empty()) throw InvalidArgument("glivenko needs --phi or --exhaustive");
  const auto gamma = parse_formula_list(sig, o.gamma);
  const auto phi = parse_formula(sig, o.phi);
  const auto [l, r] = glivenko_equivalence(ctx, gamma, phi);
  rep.failed = l != r;
  rep.text << "source: " << (l ? "true" : "false") << "  (" << to_string(Entailment{rho_translate(ctx, gamma), rho_translate(ctx, phi)})
           << ")\n"
           << "target: " << (r ? "true" : "false") << "  (" << to_string(Entailment{gamma, phi}) << ")\n"
           << "agree: " << (l == r ? "yes" : "no") << "\n";
  rep.doc["gamma"] = strings(gamma);
  rep.doc["phi"] = to_string(phi);
  rep.doc["source"] = l;
  rep.doc["target"] = r;
  rep.doc["agree"] = l == r;
  return emit(rep, o.json);
}

int check_bp(const Opts& o) {
  require_bounds(o);
  const auto l = io::load_logic(o.logic);
  const auto p = io::load_pair(o.pair, l.signature());
  const auto r = check_bp_conditions(l, p, o.vars, o.depth);
  Report rep;
  rep.failed = !r.all_passed();
  rep.text << "algebraizability conditions: logic " << o.logic << ", pair " << o.pair << "\n"
           << "bounds: vars=" << r.vars << " depth=" << r.depth << "\n";
  json cs = json::array();
  for (const auto& c : r.conditions) {
    rep.text << "(" << c.name << ") " << (c.passed ? "pass" : "FAIL") << "  instances=" << c.instances;
    if (c.witness) rep.text << "  witness: " << to_string(*c.witness);
    rep.text << "\n";
    json cj{{"name", c.name}, {"passed", c.passed}, {"instances", c.instances}};
    if (c.witness) cj["witness"] = to_string(*c.witness);
    cs.push_back(cj);
  }
  rep.text << (rep.failed ? "FAIL" : "PASS") << "\n";
  rep.doc = {{"command", "check bp"}, {"logic", o.logic}, {"pair", io::to_json(p)}, {"bounds", {{"vars", r.vars}, {"depth", r.depth}}},
             {"conditions", cs}};
  return emit(rep, o.json);
}

int check_lindenbaum(const Opts& o) {
  require_bounds(o);
  const auto l = io::load_logic(o.logic);
  const auto p = io::load_pair(o.pair, l.signature());
  const auto r = is_lindenbaum(l, p, o.vars, o.depth);
  Report rep;
  rep.failed = r.status == LindenbaumStatus::Fail;
  rep.text << "lindenbaum check: logic " << o.logic << ", pair " << o.pair << "\n"
           << "bounds: vars=" << r.vars << " depth=" << r.depth << "\n"
           << "pairs checked: " << r.pairs_checked << "\n"
           << "status: " << to_string(r.status) << "\n";
  if (!r.reason.empty()) rep.text << "reason: " << r.reason << "\n";
  if (r.witness) rep.text << "witness: " << to_string(r.witness->first) << " , " << to_string(r.witness->second) << "\n";
  rep.doc = {{"command", "check lindenbaum"}, {"logic", o.logic}, {"pair", io::to_json(p)},
             {"bounds", {{"vars", r.vars}, {"depth", r.depth}}}, {"pairs_checked", r.pairs_checked},
             {"status", to_string(r.status)}, {"reason", r.reason}};
  if (r.witness) rep.doc["witness"] = {to_string(r.witness->first), to_string(r.witness->second)};
  return emit(rep, o.json);
}

int check_institution(const Opts& o) {
  require_bounds(o);
  const Corpus corpus = o.corpus.empty() ? classical_corpus() : io::load_corpus(o.corpus);
  ReportBounds b;
  b.vars = o.vars;
  b.depth = o.depth;
  b.gamma_size = o.gamma_size;
  Report rep;
  rep.text << "institution satisfaction: corpus " << (o.corpus.empty() ? "classical (builtin)" : o.corpus) << "\n"
           << "bounds: vars=" << b.vars << " depth=" << b.depth << " gamma-size=" << b.gamma_size
           << " samples=" << kInstitutionSamples << " seed=" << o.seed << "\n";
  json ks = json::array();
  for (auto k : {InstitutionKind::If, InstitutionKind::InsAL, InstitutionKind::InsLAL}) {
    const auto r = institution_report(k, corpus, kInstitutionSamples, o.seed, b);
    rep.failed = rep.failed || !r.passed();
    rep.text << to_string(k) << ": checks=" << r.checks << " skipped=" << r.skipped << " violations=" << r.violations << "\n";
    json ws = json::array();
    for (const auto& w : r.witnesses) {
      rep.text << "  witness #" << w.sample << " [" << w.check << "] " << w.where << ": " << w.sentence << "\n";
      ws.push_back({{"sample", w.sample}, {"check", w.check}, {"where", w.where}, {"sentence", w.sentence}});
    }
    ks.push_back({{"kind", to_string(k)}, {"checks", r.checks}, {"skipped", r.skipped}, {"violations", r.violations}, {"witnesses", ws}});
  }
  rep.text << (rep.failed ? "FAIL" : "PASS") << "\n";
  rep.doc = {{"command", "check institution"},
             {"corpus", o.corpus.empty() ? "classical" : o.corpus},
             {"bounds", {{"vars", b.vars}, {"depth", b.depth}, {"gamma_size", b.gamma_size}, {"samples", kInstitutionSamples}, {"seed", o.seed}}},
             {"kinds", ks}};
  return emit(rep, o.json);
}

int check_adjoint(const Opts& o) {
  if (o.algebra.empty()) throw InvalidArgument("check adjoint needs --algebra");
  const auto H = io::load_algebra(o.algebra);
  require_heyting(H);
  const auto reg = regular_elements(H);
  const auto q = left_adjoint_quotient(H);
  const auto u = unit_map(H);
  const auto iso = regular_to_quotient(H);
  Report rep;
  rep.text << "adjoint: algebra " << o.algebra << " (size " << H.size() << ")\n"
           << "regular elements: size " << reg.algebra.size() << ", embedding [" << join(reg.embedding) << "]\n"
           << "unit: [" << join(u) << "]\n"
           << "quotient by filter {" << join(q.generating_filter.elements()) << "}: size " << q.algebra.size() << ", map ["
           << join(q.map) << "]\n";
  if (iso) {
    rep.text << "isomorphism regular -> quotient: [" << join(*iso) << "]\n";
  } else {
    rep.failed = true;
    rep.text << "isomorphism regular -> quotient: none\n";
  }
  json bij = json::array();
  for (std::size_t atoms = 0; atoms <= 2; ++atoms) {
    const auto B = boolean_algebra(atoms);
    const bool ok = unit_precomposition_bijective(H, B);
    rep.failed = rep.failed || !ok;
    rep.text << "hom(regular, B" << B.size() << ") -> hom(H, B" << B.size() << ") by the unit: " << (ok ? "bijective" : "NOT bijective") << "\n";
    bij.push_back({{"boolean_size", B.size()}, {"bijective", ok}});
  }
  rep.text << (rep.failed ? "FAIL" : "PASS") << "\n";
  rep.doc = {{"command", "check adjoint"}, {"algebra", o.algebra}, {"size", H.size()},
             {"regular", {{"algebra", io::to_json(reg.algebra)}, {"embedding", reg.embedding}}}, {"unit", u},
             {"quotient", {{"filter", q.generating_filter.elements()}, {"map", q.map}}}, {"bijections", bij}};
  rep.doc["isomorphism"] = iso ? json(*iso) : json(nullptr);
  return emit(rep, o.json);
}

int check_leibniz(const Opts& o) {
  if (o.algebra.empty()) throw InvalidArgument("check leibniz needs --algebra");
  const auto A = io::load_algebra(o.algebra);
  const auto elems = parse_filter(o.filter, A.size());
  const Subset F(A.size(), std::span<const Element>(elems));
  const auto c = leibniz(A, F);
  const auto r = reduce_matrix(A, F);
  Report rep;
  rep.text << "leibniz congruence: algebra " << o.algebra << ", filter {" << join(F.elements()) << "}\n";
  json bs = json::array();
  for (const auto& b : c.blocks()) {
    rep.text << "block {" << join(b) << "}\n";
    bs.push_back(b);
  }
  rep.text << "identity: " << (c.is_identity() ? "yes" : "no") << "\n"
           << "reduced matrix: size " << r.algebra.size() << ", filter {" << join(r.filter.elements()) << "}\n";
  rep.doc = {{"command", "check leibniz"}, {"algebra", o.algebra}, {"filter", F.elements()}, {"blocks", bs},
             {"identity", c.is_identity()}, {"reduced", {{"size", r.algebra.size()}, {"filter", r.filter.elements()}}}};
  return emit(rep, o.json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite checkers for propositional logics, matrices and Glivenko contexts"};
  app.require_subcommand(1);
  Opts o;

  auto common = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "Emit the report as JSON"); };

  auto* cons = app.add_subcommand("consequence", "Decide Gamma |- phi");
  cons->add_option("--logic", o.logic, "cpc, ipc or a logic file")->capture_default_str();
  cons->add_option("--gamma", o.gamma, "Premises, separated by ';'");
  cons->add_option("--phi", o.phi, "Conclusion")->required();
  common(cons);

  auto* gl = app.add_subcommand("glivenko", "Compare rho[Gamma'] |- rho(phi') with Gamma' |-' phi'");
  gl->add_option("--context", o.context, "classical or a context file")->capture_default_str();
  gl->add_option("--gamma", o.gamma, "Premises, separated by ';'");
  gl->add_option("--phi", o.phi, "Conclusion");
  gl->add_flag("--exhaustive", o.exhaustive, "Sweep every phi' within bounds plus seeded premise samples");
  common(gl);

  auto* check = app.add_subcommand("check", "Run a bounded suite");
  check->add_option("kind", o.kind, "bp, lindenbaum, institution, adjoint or leibniz")
      ->required()
      ->check(CLI::IsMember({"bp", "lindenbaum", "institution", "adjoint", "leibniz"}));
  check->add_option("corpus", o.corpus, "Corpus file for 'institution' (default: builtin classical corpus)");
  check->add_option("--logic", o.logic, "cpc, ipc or a logic file")->capture_default_str();
  check->add_option("--pair", o.pair, "classical or a pair file")->capture_default_str();
  check->add_option("--algebra", o.algebra, "Algebra file");
  check->add_option("--filter", o.filter, "Comma-separated element indices");
  common(check);

  // Per-command default depth; --depth overrides it.
  std::size_t depth_flag = 0;
  for (auto* sub : {gl, check}) {
    sub->add_option("--vars", o.vars, "Variables in enumerated formulas")->capture_default_str();
    sub->add_option("--depth", depth_flag, "Maximum formula depth (a variable has depth 1)");
    sub->add_option("--gamma-size", o.gamma_size, "Maximum number of premises")->capture_default_str();
    sub->add_option("--seed", o.seed, "Seed for sampled instances")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cons) return cmd_consequence(o);
    if (*gl) {
      o.depth = depth_flag ? depth_flag : 3;
      return cmd_glivenko(o);
    }
    o.depth = depth_flag ? depth_flag : (o.kind == "institution" ? 3 : 2);
    if (o.kind == "bp") return check_bp(o);
    if (o.kind == "lindenbaum") return check_lindenbaum(o);
    if (o.kind == "institution") return check_institution(o);
    if (o.kind == "adjoint") return check_adjoint(o);
    return check_leibniz(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
