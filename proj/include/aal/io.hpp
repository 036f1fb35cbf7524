#pragma once

// JSON loaders and writers for signatures, algebras, logics, pairs, contexts
// and corpora. File references inside a document resolve against the
// directory of that document.

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aal/algebraization.hpp"
#include "aal/error.hpp"
#include "aal/glivenko.hpp"
#include "aal/institutions.hpp"
#include "aal/semantics.hpp"
#include "aal/syntax.hpp"

namespace aal::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// Unreadable file or malformed document.
class IoError : public Error {
 public:
  using Error::Error;
};

inline json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

namespace detail {

template <class T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(std::string("field '") + key + "': " + e.what());
  }
}

// A string is a path relative to base; anything else is the inline value.
inline json resolve(const json& j, const fs::path& base, fs::path* dir_out = nullptr) {
  if (j.is_string()) {
    const fs::path p = base / j.get<std::string>();
    if (dir_out) *dir_out = p.parent_path();
    return read_json(p);
  }
  if (dir_out) *dir_out = base;
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Signatures.

inline json to_json(const Signature& sig) {
  json cs = json::array();
  for (const auto& c : sig.connectives()) cs.push_back({{"name", c.name}, {"arity", c.arity}});
  json out{{"connectives", cs}};
  if (!sig.derived().empty()) {
    json ds = json::array();
    for (const auto& d : sig.derived()) ds.push_back({{"name", d.name}, {"arity", d.arity}, {"definition", to_string(d.definition)}});
    out["derived"] = ds;
  }
  return out;
}

/// "classical", a path, or {"connectives": [...], "derived": [...]}.
inline Signature signature_from_json(const json& j, const fs::path& base = ".") {
  if (j.is_string() && j.get<std::string>() == "classical") return Signature::classical();
  const json doc = detail::resolve(j, base);
  std::vector<Connective> cs;
  for (const auto& c : detail::get<json>(doc, "connectives")) {
    cs.push_back({detail::get<std::string>(c, "name"), detail::get<std::size_t>(c, "arity")});
  }
  std::vector<DerivedConnective> ds;
  if (doc.contains("derived")) {
    const Signature prim(cs);
    for (const auto& d : doc.at("derived")) {
      ds.push_back({detail::get<std::string>(d, "name"), detail::get<std::size_t>(d, "arity"),
                    parse_formula(prim, detail::get<std::string>(d, "definition"))});
    }
  }
  return Signature(std::move(cs), std::move(ds));
}

// ---------------------------------------------------------------------------
// Algebras.

inline json to_json(const FiniteAlgebra& A) {
  const std::size_t n = A.size();
  json tables = json::object();
  for (std::size_t i = 0; i < A.signature().connectives().size(); ++i) {
    const auto& c = A.signature().connectives()[i];
    const auto& t = A.table(i);
    if (c.arity == 2) {
      json rows = json::array();
      for (std::size_t a = 0; a < n; ++a) rows.push_back(std::vector<Element>(t.begin() + a * n, t.begin() + (a + 1) * n));
      tables[c.name] = rows;
    } else {
      tables[c.name] = t;
    }
  }
  return {{"signature", to_json(A.signature())}, {"size", n}, {"tables", tables}};
}

/// Unary tables are flat; binary tables are row-major nested arrays (a flat
/// array of size^2 entries is accepted too). Missing signature means classical.
inline FiniteAlgebra algebra_from_json(const json& j, const fs::path& base = ".") {
  fs::path dir;
  const json doc = detail::resolve(j, base, &dir);
  const Signature sig = doc.contains("signature") ? signature_from_json(doc.at("signature"), dir) : Signature::classical();
  const auto n = detail::get<std::size_t>(doc, "size");
  const json& tj = detail::get<json>(doc, "tables");
  std::vector<std::vector<Element>> tables;
  for (const auto& c : sig.connectives()) {
    if (!tj.contains(c.name)) throw IoError("algebra has no table for '" + c.name + "'");
    std::vector<Element> flat;
    const std::function<void(const json&)> collect = [&](const json& x) {
      if (x.is_array()) {
        for (const auto& y : x) collect(y);
      } else if (x.is_number_integer() && x.get<long long>() >= 0) {
        flat.push_back(x.get<Element>());
      } else {
        throw IoError("table for '" + c.name + "' holds a non-index entry");
      }
    };
    collect(tj.at(c.name));
    tables.push_back(std::move(flat));
  }
  return FiniteAlgebra(sig, n, std::move(tables));
}

inline FiniteAlgebra load_algebra(const fs::path& path) { return algebra_from_json(read_json(path), path.parent_path()); }

// ---------------------------------------------------------------------------
// Logics.

inline Matrix matrix_from_json(const json& j, const fs::path& base) {
  const FiniteAlgebra A = algebra_from_json(detail::get<json>(j, "algebra"), base);
  return Matrix(A, Subset(A.size(), std::span<const Element>(detail::get<std::vector<Element>>(j, "filter"))));
}

/// "cpc" / "ipc", a path, or {"signature":..., "engine": {"kind": "builtin"|"matrix", ...}}.
inline LogicSpec logic_from_json(const json& j, const fs::path& base = ".") {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "cpc") return LogicSpec::cpc();
    if (s == "ipc") return LogicSpec::ipc();
  }
  fs::path dir;
  const json doc = detail::resolve(j, base, &dir);
  const Signature sig = doc.contains("signature") ? signature_from_json(doc.at("signature"), dir) : Signature::classical();
  const json& eng = detail::get<json>(doc, "engine");
  const auto kind = detail::get<std::string>(eng, "kind");
  const std::string name = doc.value("name", "");
  if (kind == "builtin") {
    const auto b = detail::get<std::string>(eng, "name");
    if (b == "cpc") return LogicSpec(sig, Builtin::CPC, name.empty() ? "cpc" : name);
    if (b == "ipc") return LogicSpec(sig, Builtin::IPC, name.empty() ? "ipc" : name);
    throw IoError("unknown builtin logic '" + b + "'");
  }
  if (kind != "matrix") throw IoError("unknown engine kind '" + kind + "'");
  std::vector<Matrix> ms;
  for (const auto& m : detail::get<json>(eng, "matrices")) ms.push_back(matrix_from_json(m, dir));
  return LogicSpec(sig, MatrixFamily{std::move(ms)}, name);
}

inline LogicSpec load_logic(const std::string& arg) {
  if (arg == "cpc" || arg == "ipc") return logic_from_json(json(arg));
  return logic_from_json(read_json(arg), fs::path(arg).parent_path());
}

// ---------------------------------------------------------------------------
// Pairs.

inline json to_json(const AlgebraizingPair& p) {
  json d = json::array(), t = json::array();
  for (const auto& f : p.delta) d.push_back(to_string(f));
  for (const auto& [a, b] : p.tau) t.push_back({to_string(a), to_string(b)});
  return {{"delta", d}, {"tau", t}};
}

/// "classical", a path, or {"delta": [...], "tau": [[delta_i, epsilon_i], ...]}.
inline AlgebraizingPair pair_from_json(const json& j, const Signature& sig, const fs::path& base = ".") {
  if (j.is_string() && j.get<std::string>() == "classical") return AlgebraizingPair::classical();
  const json doc = detail::resolve(j, base);
  std::vector<Formula> delta;
  for (const auto& s : detail::get<std::vector<std::string>>(doc, "delta")) delta.push_back(parse_formula(sig, s));
  std::vector<std::pair<Formula, Formula>> tau;
  for (const auto& e : detail::get<json>(doc, "tau")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      throw IoError("tau entries are [delta, epsilon] string pairs");
    }
    tau.emplace_back(parse_formula(sig, e[0].get<std::string>()), parse_formula(sig, e[1].get<std::string>()));
  }
  return AlgebraizingPair(std::move(delta), std::move(tau));
}

inline AlgebraizingPair load_pair(const std::string& arg, const Signature& sig) {
  if (arg == "classical") return AlgebraizingPair::classical();
  return pair_from_json(read_json(arg), sig, fs::path(arg).parent_path());
}

// ---------------------------------------------------------------------------
// Morphisms and contexts.

/// "identity" or {"connective": "image formula", ...}; unlisted connectives map to themselves.
inline FlexibleMorphism morphism_from_json(const json& j, const Signature& source, const Signature& target) {
  if (j.is_string() && j.get<std::string>() == "identity") {
    if (!(source == target)) throw SignatureMismatch("identity morphism between different signatures");
    return FlexibleMorphism::identity(source);
  }
  if (!j.is_object()) throw IoError("morphism is \"identity\" or an object of images");
  std::vector<Formula> images;
  for (const auto& c : source.connectives()) {
    if (j.contains(c.name)) {
      if (!j.at(c.name).is_string()) throw IoError("image of '" + c.name + "' must be a formula string");
      images.push_back(parse_formula(target, j.at(c.name).get<std::string>()));
    } else {
      std::vector<Formula> args;
      for (std::size_t i = 0; i < c.arity; ++i) args.push_back(Formula::var(static_cast<VarIndex>(i)));
      images.push_back(Formula::app(c.name, std::move(args)));
    }
  }
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!source.index_of(k)) throw IoError("morphism maps unknown connective '" + k + "'");
  }
  return FlexibleMorphism(source, target, std::move(images));
}

inline AdjointKind adjoint_kind_from_string(const std::string& s) {
  if (s == "identity") return AdjointKind::Identity;
  if (s == "double_negation") return AdjointKind::DoubleNegation;
  throw IoError("unknown adjoint kind '" + s + "'");
}

/// {"source", "target", "h", "theta", optional "source_pair", "target_pair", "adjoint"}.
/// Pairs default to the classical one; the adjoint defaults to double negation
/// unless theta is x0.
inline GlivenkoContext context_from_json(const json& j, const fs::path& base = ".") {
  fs::path dir;
  const json doc = detail::resolve(j, base, &dir);
  const LogicSpec source = logic_from_json(detail::get<json>(doc, "source"), dir);
  const LogicSpec target = logic_from_json(detail::get<json>(doc, "target"), dir);
  const FlexibleMorphism h = morphism_from_json(doc.value("h", json("identity")), source.signature(), target.signature());
  const Formula theta = parse_formula(source.signature(), detail::get<std::string>(doc, "theta"));
  const auto sp = pair_from_json(doc.value("source_pair", json("classical")), source.signature(), dir);
  const auto tp = pair_from_json(doc.value("target_pair", json("classical")), target.signature(), dir);
  std::vector<AdjointKind> adj;
  if (doc.contains("adjoint")) {
    for (const auto& s : detail::get<std::vector<std::string>>(doc, "adjoint")) adj.push_back(adjoint_kind_from_string(s));
  } else if (!(theta == Formula::var(0))) {
    adj.push_back(AdjointKind::DoubleNegation);
  }
  return GlivenkoContext(source, target, h, theta, sp, tp, std::move(adj));
}

inline GlivenkoContext load_context(const std::string& arg) {
  if (arg == "classical") return GlivenkoContext::classical();
  return context_from_json(read_json(arg), fs::path(arg).parent_path());
}

// ---------------------------------------------------------------------------
// Corpora.

/// {"logics": {name: logic}, "morphisms": [{name, source, target, h, inverse?}],
///  "matrices": [{name, logic, algebra, filter}], "claimed_reducts": [{morphism, matrix, algebra}],
///  "contexts": [{name, ...context}], "algebras": [algebra...], "heyting_up_to": n}.
/// With "base": "classical" the document starts from classical_corpus(); each
/// list present in the document then replaces the base's list.
inline Corpus corpus_from_json(const json& j, const fs::path& base = ".") {
  fs::path dir;
  const json doc = detail::resolve(j, base, &dir);
  Corpus c;
  if (doc.contains("base")) {
    if (doc.at("base") != "classical") throw IoError("unknown corpus base");
    c = classical_corpus();
  }
  if (doc.contains("logics")) {
    c.logics.clear();
    for (const auto& [name, l] : doc.at("logics").items()) c.logics.emplace(name, logic_from_json(l, dir));
  } else if (!doc.contains("base")) {
    throw IoError("missing field 'logics'");
  }
  if (doc.contains("morphisms")) c.morphisms.clear();
  if (doc.contains("matrices")) c.matrices.clear();
  if (doc.contains("claimed_reducts")) c.claimed_reducts.clear();
  if (doc.contains("contexts")) c.contexts.clear();
  if (doc.contains("algebras") || doc.contains("heyting_up_to")) c.algebras.clear();
  for (const auto& m : doc.value("morphisms", json::array())) {
    const auto name = detail::get<std::string>(m, "name");
    const auto src = detail::get<std::string>(m, "source"), tgt = detail::get<std::string>(m, "target");
    const auto& S = c.logic(src).signature();
    const auto& T = c.logic(tgt).signature();
    std::optional<FlexibleMorphism> inv;
    if (m.contains("inverse")) inv = morphism_from_json(m.at("inverse"), T, S);
    c.morphisms.push_back({name, src, tgt, morphism_from_json(detail::get<json>(m, "h"), S, T), std::move(inv)});
  }
  for (const auto& m : doc.value("matrices", json::array())) {
    const auto logic = detail::get<std::string>(m, "logic");
    c.logic(logic);
    c.matrices.push_back({detail::get<std::string>(m, "name"), logic, matrix_from_json(m, dir)});
  }
  for (const auto& r : doc.value("claimed_reducts", json::array())) {
    c.claimed_reducts.push_back({detail::get<std::string>(r, "morphism"), detail::get<std::string>(r, "matrix"),
                                 algebra_from_json(detail::get<json>(r, "algebra"), dir)});
  }
  for (const auto& x : doc.value("contexts", json::array())) {
    json body = x;
    for (const char* k : {"source", "target"}) {
      // Logic names refer to the corpus's logics.
      if (body.contains(k) && body.at(k).is_string() && doc.contains("logics") &&
          doc.at("logics").contains(body.at(k).get<std::string>())) {
        body[k] = doc.at("logics").at(body.at(k).get<std::string>());
      }
    }
    c.contexts.push_back({detail::get<std::string>(x, "name"), context_from_json(body, dir)});
  }
  for (const auto& a : doc.value("algebras", json::array())) c.algebras.push_back(algebra_from_json(a, dir));
  if (doc.contains("heyting_up_to")) {
    for (auto& H : all_heyting_algebras(detail::get<std::size_t>(doc, "heyting_up_to"))) c.algebras.push_back(std::move(H));
  }
  return c;
}

inline Corpus load_corpus(const std::string& path) { return corpus_from_json(read_json(path), fs::path(path).parent_path()); }

}  // namespace aal::io
