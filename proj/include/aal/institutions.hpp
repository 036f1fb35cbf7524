#pragma once

// Finite-sample checkers for the institution of logics with flexible
// morphisms and the two algebraizable institutions, plus seeded reports over
// a corpus of logics, morphisms, matrices and Glivenko contexts.

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "aal/algebraization.hpp"
#include "aal/filters.hpp"
#include "aal/glivenko.hpp"
#include "aal/heyting.hpp"
#include "aal/semantics.hpp"

namespace aal {

/// |- Delta(phi, psi).
inline bool class_equal(const LogicSpec& l, const AlgebraizingPair& p, const Formula& phi, const Formula& psi) {
  for (const auto& d : delta_of(p, phi, psi)) {
    if (!consequence(l, {}, d)) return false;
  }
  return true;
}

/// <Gamma/Delta, phi/Delta>, stored by representatives.
struct InsALSentence {
  std::vector<Formula> gamma_classes;
  Formula phi_class;
};

/// Premises => conclusion over class representatives.
struct InsLALSentence {
  std::vector<Formula> premises;
  Formula conclusion;
};

namespace detail {

inline void require_in_quasivariety(const LogicSpec& l, const FiniteAlgebra& A) {
  if (const auto* b = std::get_if<Builtin>(&l.engine())) {
    const QvClass k = *b == Builtin::CPC ? QvClass::Boolean : QvClass::Heyting;
    if (!qv_membership(k, A)) {
      throw InvalidArgument(std::string("algebra is not in the quasivariety of ") + (l.name().empty() ? "the logic" : l.name()));
    }
  }
}

}  // namespace detail

/// M |= s on representatives. M must be reduced and its algebra in the
/// logic's quasivariety (only checked for builtin logics).
inline bool insal_satisfies(const LogicSpec& l, const Matrix& M, const InsALSentence& s) {
  if (!is_reduced(M.algebra, M.filter)) throw InvalidArgument("matrix is not reduced");
  detail::require_in_quasivariety(l, M.algebra);
  return matrix_satisfies(M, s.gamma_classes, s.phi_class);
}

inline bool inslal_satisfies(const FiniteAlgebra& M, const InsLALSentence& q, const AlgebraizingPair& pair) {
  return tau_quasi_holds(M, pair, q.premises, q.conclusion);
}

/// Both sides of (+): v(phi) in F, and v(delta_i(phi)) = v(epsilon_i(phi)) for all i.
inline std::pair<bool, bool> comorphism_plus_sides(const Matrix& M, const AlgebraizingPair& pair, const Formula& phi,
                                                   std::span<const Element> v) {
  const bool in_filter = M.filter.contains(evaluate(M.algebra, phi, v));
  bool equations = true;
  for (const auto& eq : tau_translate(pair, phi)) {
    if (evaluate(M.algebra, eq.lhs, v) != evaluate(M.algebra, eq.rhs, v)) {
      equations = false;
      break;
    }
  }
  return {in_filter, equations};
}

inline bool comorphism_plus_check(const Matrix& M, const AlgebraizingPair& pair, const Formula& phi,
                                  std::span<const Element> v) {
  const auto [a, b] = comorphism_plus_sides(M, pair, phi, v);
  return a == b;
}

struct PlusViolation {
  Formula phi;
  std::vector<Element> valuation;
};

/// First (phi, v) over the given formulas where (+) fails.
inline std::optional<PlusViolation> find_plus_violation(const Matrix& M, const AlgebraizingPair& pair,
                                                        std::span<const Formula> fs) {
  for (const auto& phi : fs) {
    std::optional<PlusViolation> out;
    const std::size_t vars = variable_bound(std::span<const Formula>(&phi, 1));
    for_each_valuation(M.algebra.size(), vars, [&](std::span<const Element> v) {
      if (comorphism_plus_check(M, pair, phi, v)) return true;
      out = PlusViolation{phi, {v.begin(), v.end()}};
      return false;
    });
    if (out) return out;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Corpora.

struct NamedMorphism {
  std::string name;
  std::string source;
  std::string target;
  FlexibleMorphism h;
  /// Present for presentation isomorphisms.
  std::optional<FlexibleMorphism> inverse;
};

struct NamedMatrix {
  std::string name;
  std::string logic;
  Matrix matrix;
};

/// A reduct table asserted by the corpus instead of being computed.
struct ClaimedReduct {
  std::string morphism;
  std::string matrix;
  FiniteAlgebra algebra;
};

struct NamedContext {
  std::string name;
  GlivenkoContext context;
};

struct Corpus {
  std::map<std::string, LogicSpec> logics;
  std::vector<NamedMorphism> morphisms;
  std::vector<NamedMatrix> matrices;
  std::vector<ClaimedReduct> claimed_reducts;
  std::vector<NamedContext> contexts;
  /// Algebras for Lindenbaum-side checks.
  std::vector<FiniteAlgebra> algebras;

  const LogicSpec& logic(const std::string& name) const {
    auto it = logics.find(name);
    if (it == logics.end()) throw InvalidArgument("corpus has no logic named " + name);
    return it->second;
  }
};

/// IPC, CPC, their inclusion, a presentation of IPC with neg read as
/// x0 -> bottom, De Morgan and-elimination for CPC, the double negation
/// context, and the Heyting algebras up to size 5 with their reduced matrices
/// (named Hk for the k-th algebra, Hkb for its CPC copy when Boolean).
inline Corpus classical_corpus() {
  const Signature sig = Signature::classical();
  const auto P = [&](const char* s) { return parse_formula(sig, s); };
  Corpus c;
  c.logics.emplace("ipc", LogicSpec::ipc(sig));
  c.logics.emplace("cpc", LogicSpec::cpc(sig));
  const auto id = FlexibleMorphism::identity(sig);
  c.morphisms.push_back({"ipc-to-cpc", "ipc", "cpc", id, std::nullopt});
  c.morphisms.push_back({"cpc-id", "cpc", "cpc", id, id});
  c.morphisms.push_back({"ipc-neg-as-bottom", "ipc", "ipc",
                         FlexibleMorphism(sig, sig, {P("imp(x0,neg(imp(x0,x0)))"), P("imp(x0,x1)"), P("and(x0,x1)"), P("or(x0,x1)")}),
                         id});
  c.morphisms.push_back({"cpc-de-morgan", "cpc", "cpc",
                         FlexibleMorphism(sig, sig, {P("neg(x0)"), P("imp(x0,x1)"), P("neg(or(neg(x0),neg(x1)))"), P("or(x0,x1)")}),
                         id});
  c.contexts.push_back({"double-negation", GlivenkoContext::classical()});
  for (const auto& H : all_heyting_algebras(5)) {
    c.algebras.push_back(H);
    const auto [bottom, top] = heyting_bounds(H);
    (void)bottom;
    Matrix M(H, Subset(H.size(), {top}));
    const std::string name = "H" + std::to_string(c.algebras.size() - 1);
    c.matrices.push_back({name, "ipc", M});
    if (is_boolean(H)) c.matrices.push_back({name + "b", "cpc", M});
  }
  return c;
}

// ---------------------------------------------------------------------------
// Reports.

enum class InstitutionKind { If, InsAL, InsLAL };

inline const char* to_string(InstitutionKind k) {
  switch (k) {
    case InstitutionKind::If: return "if";
    case InstitutionKind::InsAL: return "insal";
    case InstitutionKind::InsLAL: return "inslal";
  }
  return "?";
}

struct InstitutionViolation {
  std::size_t sample;
  std::string check;
  std::string where;
  std::string sentence;
};

struct InstitutionReport {
  InstitutionKind kind;
  std::uint64_t seed;
  std::size_t samples;
  std::size_t vars;
  std::size_t depth;
  std::size_t checks = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  /// First few violations in sample order.
  std::vector<InstitutionViolation> witnesses;

  bool passed() const noexcept { return violations == 0; }
};

struct ReportBounds {
  std::size_t vars = 2;
  std::size_t depth = 3;
  std::size_t gamma_size = 2;
  std::size_t max_witnesses = 5;
};

namespace detail {

struct SampleOutcome {
  std::size_t checks = 0;
  bool skipped = false;
  std::vector<InstitutionViolation> violations;
};

inline std::string sentence_string(std::span<const Formula> gamma, const Formula& phi) {
  return to_string(Entailment{{gamma.begin(), gamma.end()}, phi});
}

inline std::vector<Formula> random_gamma(const Signature& sig, const ReportBounds& b, Rng& rng) {
  std::vector<Formula> g;
  const std::size_t n = rng.below(b.gamma_size + 1);
  for (std::size_t i = 0; i < n; ++i) g.push_back(random_formula(sig, b.vars, b.depth, rng));
  return g;
}

// Alternative representatives of phi's class, used for the
// representation-independence check.
inline std::vector<Formula> alternative_representatives(const Signature& sig, const Formula& phi) {
  std::vector<Formula> out;
  for (const char* c : {"and", "or"}) {
    if (sig.has_primitive(c, 2)) out.push_back(Formula::app(c, {phi, phi}));
  }
  if (sig.has_primitive("imp", 2)) out.push_back(Formula::app("imp", {Formula::app("imp", {phi, phi}), phi}));
  return out;
}

struct PreparedIf {
  const NamedMorphism* m;
  const LogicSpec* source;
  const LogicSpec* target;
  std::vector<std::pair<const NamedMatrix*, Matrix>> models;  // target matrix and the reduct used
};

struct PreparedContext {
  const NamedContext* c;
  std::vector<std::pair<const NamedMatrix*, AdjointData>> matrices;
  std::vector<std::pair<const FiniteAlgebra*, AdjointData>> algebras;
};

template <class F>
std::vector<SampleOutcome> run_samples(std::size_t samples, std::uint64_t seed, F&& one) {
  std::vector<SampleOutcome> out(samples);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
  auto chunk = [&](std::size_t w) {
    for (std::size_t i = w; i < samples; i += workers) {
      // Each sample has its own stream, so results do not depend on scheduling.
      Rng rng(seed * 0x9E3779B97F4A7C15ull + i + 1);
      out[i] = one(i, rng);
    }
  };
  if (workers == 1) {
    chunk(0);
  } else {
    std::vector<std::future<void>> fs;
    for (std::size_t w = 0; w < workers; ++w) fs.push_back(std::async(std::launch::async, chunk, w));
    for (auto& f : fs) f.get();
  }
  return out;
}

}  // namespace detail

inline InstitutionReport institution_report(InstitutionKind kind, const Corpus& corpus, std::size_t samples,
                                            std::uint64_t seed, const ReportBounds& bounds = {}) {
  InstitutionReport report{kind, seed, samples, bounds.vars, bounds.depth};
  std::vector<detail::SampleOutcome> outcomes;

  if (kind == InstitutionKind::If) {
    std::vector<detail::PreparedIf> prepared;
    for (const auto& m : corpus.morphisms) {
      detail::PreparedIf p{&m, &corpus.logic(m.source), &corpus.logic(m.target), {}};
      for (const auto& nm : corpus.matrices) {
        if (nm.logic != m.target) continue;
        std::optional<FiniteAlgebra> claimed;
        for (const auto& cr : corpus.claimed_reducts) {
          if (cr.morphism == m.name && cr.matrix == nm.name) claimed = cr.algebra;
        }
        p.models.emplace_back(&nm, Matrix(claimed ? *claimed : reduct(m.h, nm.matrix.algebra), nm.matrix.filter));
      }
      prepared.push_back(std::move(p));
    }
    outcomes = detail::run_samples(samples, seed, [&](std::size_t i, Rng& rng) {
      detail::SampleOutcome o;
      if (prepared.empty()) {
        o.skipped = true;
        return o;
      }
      const auto& p = prepared[rng.below(prepared.size())];
      const Signature& sig = p.source->signature();
      const auto gamma = detail::random_gamma(sig, bounds, rng);
      const Formula phi = random_formula(sig, bounds.vars, bounds.depth, rng);
      if (!p.models.empty()) {
        const auto& [nm, R] = p.models[rng.below(p.models.size())];
        ++o.checks;
        const bool target_side = matrix_satisfies(nm->matrix, extend_all(p.m->h, gamma), p.m->h.extend(phi));
        if (target_side != matrix_satisfies(R, gamma, phi)) {
          o.violations.push_back({i, "satisfaction", p.m->name + " @ " + nm->name, detail::sentence_string(gamma, phi)});
        }
      }
      if (p.m->inverse) {
        // Presentation isomorphism: the round trip is interderivable.
        ++o.checks;
        const Formula back = p.m->inverse->extend(p.m->h.extend(phi));
        if (!consequence(*p.source, {back}, phi) || !consequence(*p.source, {phi}, back)) {
          o.violations.push_back({i, "isomorphism", p.m->name, to_string(phi) + " vs " + to_string(back)});
        }
      }
      if (p.models.empty() && !p.m->inverse) o.skipped = true;
      return o;
    });
  } else {
    std::vector<detail::PreparedContext> prepared;
    for (const auto& nc : corpus.contexts) {
      detail::PreparedContext p{&nc, {}, {}};
      const auto& ctx = nc.context;
      if (kind == InstitutionKind::InsAL) {
        for (const auto& nm : corpus.matrices) {
          if (!(corpus.logic(nm.logic) == ctx.source())) continue;
          if (!is_heyting(nm.matrix.algebra) || !is_reduced(nm.matrix.algebra, nm.matrix.filter)) continue;
          p.matrices.emplace_back(&nm, ctx.adjoint_data(nm.matrix.algebra));
        }
      } else {
        for (const auto& A : corpus.algebras) {
          if (!(A.signature() == ctx.source().signature()) || !is_heyting(A)) continue;
          p.algebras.emplace_back(&A, ctx.adjoint_data(A));
        }
      }
      prepared.push_back(std::move(p));
    }
    outcomes = detail::run_samples(samples, seed, [&](std::size_t i, Rng& rng) {
      detail::SampleOutcome o;
      if (prepared.empty()) {
        o.skipped = true;
        return o;
      }
      const auto& p = prepared[rng.below(prepared.size())];
      const auto& ctx = p.c->context;
      const Signature& sig = ctx.source().signature();
      const auto gamma = detail::random_gamma(sig, bounds, rng);
      const Formula phi = random_formula(sig, bounds.vars, bounds.depth, rng);
      if (kind == InstitutionKind::InsAL) {
        if (p.matrices.empty()) {
          o.skipped = true;
          return o;
        }
        const auto& [nm, d] = p.matrices[rng.below(p.matrices.size())];
        ++o.checks;
        if (!detail::matrix_compatible(ctx, nm->matrix, d, gamma, phi)) {
          o.violations.push_back({i, "matrix-compatibility", p.c->name + " @ " + nm->name, detail::sentence_string(gamma, phi)});
        }
        const bool base = matrix_satisfies(nm->matrix, gamma, phi);
        for (const auto& alt : detail::alternative_representatives(sig, phi)) {
          if (!class_equal(ctx.source(), ctx.source_pair(), phi, alt)) continue;
          ++o.checks;
          if (matrix_satisfies(nm->matrix, gamma, alt) != base) {
            o.violations.push_back({i, "representative", p.c->name + " @ " + nm->name,
                                    detail::sentence_string(gamma, phi) + " vs " + to_string(alt)});
          }
        }
      } else {
        if (p.algebras.empty()) {
          o.skipped = true;
          return o;
        }
        const auto& [A, d] = p.algebras[rng.below(p.algebras.size())];
        ++o.checks;
        if (!detail::lind_compatible(ctx, *A, d, gamma, phi)) {
          o.violations.push_back({i, "lindenbaum-compatibility", p.c->name + " @ algebra of size " + std::to_string(A->size()),
                                  detail::sentence_string(gamma, phi)});
        }
      }
      return o;
    });
  }

  for (auto& o : outcomes) {
    report.checks += o.checks;
    report.skipped += o.skipped ? 1 : 0;
    report.violations += o.violations.size();
    for (auto& v : o.violations) {
      if (report.witnesses.size() < bounds.max_witnesses) report.witnesses.push_back(std::move(v));
    }
  }
  return report;
}

}  // namespace aal
