#pragma once

// Glivenko contexts: a translation h between algebraizable logics with a
// fixed formula theta, and per-algebra adjoint data (left adjoint, unit and
// section). The concrete adjoint is the Heyting -> Boolean reflection.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aal/algebra.hpp"
#include "aal/algebraization.hpp"
#include "aal/error.hpp"
#include "aal/filters.hpp"
#include "aal/heyting.hpp"
#include "aal/semantics.hpp"
#include "aal/syntax.hpp"

namespace aal {

// ---------------------------------------------------------------------------
// Heyting -> Boolean.

struct RegularElements {
  FiniteAlgebra algebra;
  /// Position in H of each element of the Boolean algebra.
  std::vector<Element> embedding;
};

inline void require_heyting(const FiniteAlgebra& H) {
  if (!is_heyting(H)) throw NotHeyting("algebra is not a Heyting algebra");
}

/// {x : neg neg x = x} with meet, imp and neg inherited and join
/// neg neg (a or b).
inline RegularElements regular_elements(const FiniteAlgebra& H) {
  require_heyting(H);
  const auto ops = HeytingOps::of(H);
  std::vector<Element> emb;
  std::vector<Element> pos(H.size(), 0);
  for (Element x = 0; x < H.size(); ++x) {
    if (ops.neg(H, ops.neg(H, x)) == x) {
      pos[x] = static_cast<Element>(emb.size());
      emb.push_back(x);
    }
  }
  const std::size_t m = emb.size();
  std::vector<std::vector<Element>> tables(4);
  for (std::size_t c = 0; c < 4; ++c) tables[c].resize(c == ops.neg_index ? m : m * m);
  for (std::size_t i = 0; i < m; ++i) {
    tables[ops.neg_index][i] = pos[ops.neg(H, emb[i])];
    for (std::size_t j = 0; j < m; ++j) {
      tables[ops.imp_index][i * m + j] = pos[ops.imp(H, emb[i], emb[j])];
      tables[ops.and_index][i * m + j] = pos[ops.meet(H, emb[i], emb[j])];
      tables[ops.or_index][i * m + j] = pos[ops.neg(H, ops.neg(H, ops.join(H, emb[i], emb[j])))];
    }
  }
  FiniteAlgebra B(H.signature(), m, std::move(tables));
  if (!is_boolean(B)) throw Error("regular elements do not form a Boolean algebra");
  return {std::move(B), std::move(emb)};
}

/// a -> neg neg a as a map onto regular_elements(H).
inline std::vector<Element> unit_map(const FiniteAlgebra& H) {
  const auto reg = regular_elements(H);
  const auto ops = HeytingOps::of(H);
  std::vector<Element> out(H.size());
  for (Element a = 0; a < H.size(); ++a) {
    const Element nn = ops.neg(H, ops.neg(H, a));
    out[a] = static_cast<Element>(std::find(reg.embedding.begin(), reg.embedding.end(), nn) - reg.embedding.begin());
  }
  if (!is_homomorphism(H, reg.algebra, out)) throw Error("double negation is not a homomorphism onto the regular elements");
  return out;
}

struct AdjointQuotient {
  FiniteAlgebra algebra;
  std::vector<Element> map;
  Filter generating_filter;
};

/// H / F_H where F_H is the filter generated by the values of
/// iff(x0, neg(neg(x0))), and a ~ b iff (a <-> b) in F_H.
inline AdjointQuotient left_adjoint_quotient(const FiniteAlgebra& H) {
  require_heyting(H);
  const auto ipc = LogicSpec::ipc(H.signature());
  const Formula x0 = Formula::var(0), x1 = Formula::var(1);
  const Formula fixed = Formula::app("iff", {x0, Formula::app("neg", {Formula::app("neg", {x0})})});
  const Formula equiv = Formula::app("iff", {x0, x1});
  Subset S(H.size());
  for (Element a = 0; a < H.size(); ++a) S.insert(evaluate(H, fixed, std::vector<Element>{a}));
  const Filter F = filter_closure(ipc, H, S);
  std::vector<std::size_t> labels(H.size());
  for (Element a = 0; a < H.size(); ++a) {
    labels[a] = a;
    for (Element b = 0; b < a; ++b) {
      if (F.contains(evaluate(H, equiv, std::vector<Element>{a, b}))) {
        labels[a] = labels[b];
        break;
      }
    }
  }
  auto q = quotient(H, Congruence::from_labels(labels));
  return {std::move(q.algebra), std::move(q.map), F};
}

/// The isomorphism regular_elements(H) -> left_adjoint_quotient(H) sending
/// unit(a) to the class of a; nullopt if that is not a well-defined bijective
/// homomorphism.
inline std::optional<std::vector<Element>> regular_to_quotient(const FiniteAlgebra& H) {
  const auto reg = regular_elements(H);
  const auto q = left_adjoint_quotient(H);
  if (reg.algebra.size() != q.algebra.size()) return std::nullopt;
  const auto u = unit_map(H);
  std::vector<std::optional<Element>> iso(reg.algebra.size());
  for (Element a = 0; a < H.size(); ++a) {
    if (iso[u[a]] && *iso[u[a]] != q.map[a]) return std::nullopt;
    iso[u[a]] = q.map[a];
  }
  std::vector<Element> out;
  std::vector<bool> hit(q.algebra.size(), false);
  for (const auto& e : iso) {
    if (!e || hit[*e]) return std::nullopt;
    hit[*e] = true;
    out.push_back(*e);
  }
  if (!is_homomorphism(reg.algebra, q.algebra, out)) return std::nullopt;
  return out;
}

/// Whether g -> g . unit is a bijection hom(H_nn, B) -> hom(H, B).
inline bool unit_precomposition_bijective(const FiniteAlgebra& H, const FiniteAlgebra& B) {
  const auto reg = regular_elements(H);
  const auto u = unit_map(H);
  const auto from_h = homomorphisms(H, B);
  std::set<std::vector<Element>> images;
  std::size_t count = 0;
  for (const auto& g : homomorphisms(reg.algebra, B)) {
    std::vector<Element> gu(H.size());
    for (Element a = 0; a < H.size(); ++a) gu[a] = g[u[a]];
    images.insert(std::move(gu));
    ++count;
  }
  return images.size() == count && images == std::set<std::vector<Element>>(from_h.begin(), from_h.end());
}

/// Reflection of A into a class by congruence search: the quotient by the
/// meet of all congruences whose quotient lies in the class.
inline Quotient reflect(const FiniteAlgebra& A, QvClass k, std::size_t max_size = 5) {
  if (A.size() > max_size) throw BoundExceeded("generic reflection limited to size " + std::to_string(max_size));
  std::optional<Congruence> least;
  for (const auto& c : all_congruences(A, max_size)) {
    if (!qv_membership(k, quotient(A, c).algebra)) continue;
    least = least ? least->meet(c) : c;
  }
  if (!least) throw Error("no quotient lies in the class");
  return quotient(A, *least);
}

// ---------------------------------------------------------------------------
// Contexts.

enum class AdjointKind { Identity, DoubleNegation };

/// L(H) with the unit H -> L(H) and a section L(H) -> H of the unit.
struct AdjointData {
  FiniteAlgebra image;
  std::vector<Element> unit;
  std::vector<Element> section;

  bool operator==(const AdjointData&) const = default;
};

inline AdjointData adjoint_step(AdjointKind k, const FiniteAlgebra& H) {
  if (k == AdjointKind::Identity) {
    std::vector<Element> id(H.size());
    for (Element e = 0; e < H.size(); ++e) id[e] = e;
    return {H, id, id};
  }
  auto reg = regular_elements(H);
  return {std::move(reg.algebra), unit_map(H), std::move(reg.embedding)};
}

class GlivenkoContext {
 public:
  GlivenkoContext(LogicSpec source, LogicSpec target, FlexibleMorphism h, Formula theta, AlgebraizingPair source_pair,
                  AlgebraizingPair target_pair, std::vector<AdjointKind> adjoint)
      : source_(std::move(source)),
        target_(std::move(target)),
        h_(std::move(h)),
        theta_(std::move(theta)),
        source_pair_(std::move(source_pair)),
        target_pair_(std::move(target_pair)),
        adjoint_(std::move(adjoint)) {
    if (!(h_.source() == source_.signature()) || !(h_.target() == target_.signature())) {
      throw SignatureMismatch("context morphism does not connect the two logics");
    }
    source_.signature().require(theta_);
    for (auto v : variables(theta_)) {
      if (v != 0) throw InvalidArgument("fixed formula may only use x0");
    }
    if (!pair_over(source_.signature(), source_pair_) || !pair_over(target_.signature(), target_pair_)) {
      throw SignatureMismatch("algebraizing pair is not over its logic's signature");
    }
  }

  /// IPC -> CPC by inclusion with theta = neg(neg(x0)).
  static GlivenkoContext classical() {
    const auto sig = Signature::classical();
    return GlivenkoContext(LogicSpec::ipc(sig), LogicSpec::cpc(sig), FlexibleMorphism::identity(sig),
                           Formula::app("neg", {Formula::app("neg", {Formula::var(0)})}), AlgebraizingPair::classical(),
                           AlgebraizingPair::classical(), {AdjointKind::DoubleNegation});
  }

  static GlivenkoContext identity(const LogicSpec& l, const AlgebraizingPair& p) {
    return GlivenkoContext(l, l, FlexibleMorphism::identity(l.signature()), Formula::var(0), p, p, {});
  }

  const LogicSpec& source() const noexcept { return source_; }
  const LogicSpec& target() const noexcept { return target_; }
  const FlexibleMorphism& h() const noexcept { return h_; }
  const Formula& theta() const noexcept { return theta_; }
  const AlgebraizingPair& source_pair() const noexcept { return source_pair_; }
  const AlgebraizingPair& target_pair() const noexcept { return target_pair_; }
  const std::vector<AdjointKind>& adjoint_kinds() const noexcept { return adjoint_; }

  /// Composite of the adjoint steps; the section runs back through them.
  AdjointData adjoint_data(const FiniteAlgebra& H) const {
    AdjointData acc = adjoint_step(AdjointKind::Identity, H);
    for (auto k : adjoint_) {
      AdjointData step = adjoint_step(k, acc.image);
      std::vector<Element> unit(acc.unit.size()), section(step.section.size());
      for (std::size_t e = 0; e < unit.size(); ++e) unit[e] = step.unit[acc.unit[e]];
      for (std::size_t e = 0; e < section.size(); ++e) section[e] = acc.section[step.section[e]];
      acc = {std::move(step.image), std::move(unit), std::move(section)};
    }
    return acc;
  }

 private:
  LogicSpec source_;
  LogicSpec target_;
  FlexibleMorphism h_;
  Formula theta_;
  AlgebraizingPair source_pair_;
  AlgebraizingPair target_pair_;
  std::vector<AdjointKind> adjoint_;
};

/// theta[x0 := phi'].
inline Formula rho_translate(const GlivenkoContext& ctx, const Formula& phi_prime) {
  if (!ctx.source().signature().admits(phi_prime)) {
    throw SignatureMismatch("formula " + to_string(phi_prime) + " is not over the context's shared signature");
  }
  return substitute(ctx.theta(), {{0, phi_prime}});
}

inline std::vector<Formula> rho_translate(const GlivenkoContext& ctx, std::span<const Formula> phis) {
  std::vector<Formula> out;
  out.reserve(phis.size());
  for (const auto& f : phis) out.push_back(rho_translate(ctx, f));
  return out;
}

/// (rho[Gamma'] |- rho(phi') in the source, Gamma' |- phi' in the target).
inline std::pair<bool, bool> glivenko_equivalence(const GlivenkoContext& ctx, std::span<const Formula> gamma_prime,
                                                  const Formula& phi_prime) {
  return {consequence(ctx.source(), rho_translate(ctx, gamma_prime), rho_translate(ctx, phi_prime)),
          consequence(ctx.target(), gamma_prime, phi_prime)};
}

struct SweepDisagreement {
  Entailment sentence;
  bool source_side;
  bool target_side;
};

struct GlivenkoSweep {
  std::size_t vars = 0;
  std::size_t depth = 0;
  std::size_t gamma_size = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::size_t agreements = 0;
  std::size_t valid = 0;  // instances where both sides hold
  std::vector<SweepDisagreement> disagreements;  // first few

  bool all_agree() const noexcept { return agreements == instances; }
};

/// Every phi' over the bounded enumeration with empty Gamma', then `samples`
/// seeded draws of (Gamma', phi') with |Gamma'| <= gamma_size from the same set.
inline GlivenkoSweep glivenko_sweep(const GlivenkoContext& ctx, std::size_t vars, std::size_t depth,
                                    std::size_t gamma_size, std::size_t samples, std::uint64_t seed,
                                    std::size_t max_witnesses = 5) {
  GlivenkoSweep out{vars, depth, gamma_size, samples, seed};
  const auto fs = enumerate_formulas(ctx.source().signature(), vars, depth);
  auto run = [&](const std::vector<Formula>& gamma, const Formula& phi) {
    const auto [l, r] = glivenko_equivalence(ctx, gamma, phi);
    ++out.instances;
    if (l == r) {
      ++out.agreements;
      out.valid += l ? 1 : 0;
    } else if (out.disagreements.size() < max_witnesses) {
      out.disagreements.push_back({{gamma, phi}, l, r});
    }
  };
  for (const auto& phi : fs) run({}, phi);
  Rng rng(seed);
  for (std::size_t i = 0; i < samples && !fs.empty(); ++i) {
    std::vector<Formula> gamma;
    const std::size_t n = rng.below(gamma_size + 1);
    for (std::size_t k = 0; k < n; ++k) gamma.push_back(fs[rng.below(fs.size())]);
    run(gamma, fs[rng.below(fs.size())]);
  }
  return out;
}

/// unit . section = id on L(H), and for each homomorphism f: H -> K into a
/// corpus algebra, section_K . L(f) = f . section_H.
inline bool section_check(const GlivenkoContext& ctx, const FiniteAlgebra& H,
                          std::span<const FiniteAlgebra> corpus = {}) {
  const auto dH = ctx.adjoint_data(H);
  for (Element r = 0; r < dH.image.size(); ++r) {
    if (dH.unit[dH.section[r]] != r) return false;
  }
  for (const auto& K : corpus) {
    if (!(K.signature() == H.signature())) continue;
    const auto dK = ctx.adjoint_data(K);
    for (const auto& f : homomorphisms(H, K)) {
      // L(f) is determined by L(f)(unit_H(x)) = unit_K(f(x)).
      std::vector<std::optional<Element>> Lf(dH.image.size());
      for (Element x = 0; x < H.size(); ++x) {
        const Element y = dK.unit[f[x]];
        auto& slot = Lf[dH.unit[x]];
        if (slot && *slot != y) return false;
        slot = y;
      }
      for (Element r = 0; r < dH.image.size(); ++r) {
        if (!Lf[r] || dK.section[*Lf[r]] != f[dH.section[r]]) return false;
      }
    }
  }
  return true;
}

namespace detail {

inline void require_reduced_model(const GlivenkoContext& ctx, const Matrix& M) {
  require_heyting(M.algebra);
  if (!is_reduced(M.algebra, M.filter)) throw InvalidArgument("matrix is not reduced");
  if (is_implicative(ctx.source()) && !(filter_closure(ctx.source(), M.algebra, M.filter) == M.filter)) {
    throw InvalidArgument("filter is not a filter of the source logic");
  }
}

}  // namespace detail

namespace detail {

// Assumes the preconditions of matrix_compatibility_check hold.
inline bool matrix_compatible(const GlivenkoContext& ctx, const Matrix& M, const AdjointData& d,
                              std::span<const Formula> gamma_prime, const Formula& phi_prime) {
  Filter image(d.image.size());
  for (auto e : M.filter.elements()) image.insert(d.unit[e]);
  const bool target_side = matrix_satisfies(Matrix(d.image, image), gamma_prime, phi_prime);
  const bool source_side = matrix_satisfies(M, rho_translate(ctx, gamma_prime), rho_translate(ctx, phi_prime));
  return target_side == source_side;
}

inline bool lind_compatible(const GlivenkoContext& ctx, const FiniteAlgebra& M, const AdjointData& d,
                            std::span<const Formula> premises, const Formula& conclusion) {
  const bool source_side = tau_quasi_holds(M, ctx.source_pair(), rho_translate(ctx, premises), rho_translate(ctx, conclusion));
  const bool target_side = tau_quasi_holds(d.image, ctx.target_pair(), premises, conclusion);
  return source_side == target_side;
}

}  // namespace detail

/// <L(M), unit[F]> |= <Gamma', phi'>  versus  M |= <rho[Gamma'], rho(phi')>.
inline bool matrix_compatibility_check(const GlivenkoContext& ctx, const Matrix& M, std::span<const Formula> gamma_prime,
                                       const Formula& phi_prime) {
  detail::require_reduced_model(ctx, M);
  return detail::matrix_compatible(ctx, M, ctx.adjoint_data(M.algebra), gamma_prime, phi_prime);
}

/// M |= tau[rho(premises)] => tau(rho(conclusion))  versus
/// L(M) |= tau'[premises] => tau'(conclusion).
inline bool lind_compatibility_check(const GlivenkoContext& ctx, const FiniteAlgebra& M,
                                     std::span<const Formula> premises, const Formula& conclusion) {
  require_heyting(M);
  return detail::lind_compatible(ctx, M, ctx.adjoint_data(M), premises, conclusion);
}

/// g after f: morphisms composed, theta'' = theta_f[x0 := theta_g], adjoint
/// steps of f followed by those of g.
inline GlivenkoContext compose_contexts(const GlivenkoContext& g, const GlivenkoContext& f) {
  if (!(f.target() == g.source())) {
    throw SignatureMismatch("cannot compose contexts: target of f differs from source of g");
  }
  std::vector<AdjointKind> steps = f.adjoint_kinds();
  steps.insert(steps.end(), g.adjoint_kinds().begin(), g.adjoint_kinds().end());
  return GlivenkoContext(f.source(), g.target(), compose_morphisms(g.h(), f.h()),
                         substitute(f.theta(), {{0, g.theta()}}), f.source_pair(), g.target_pair(), std::move(steps));
}

// ---------------------------------------------------------------------------
// Bounded validation.

struct ContextCheck {
  std::string name;
  bool passed = true;
  std::size_t instances = 0;
  std::string witness;
};

struct ContextReport {
  std::size_t vars = 0;
  std::size_t depth = 0;
  std::vector<ContextCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ContextCheck& c) { return c.passed; });
  }
};

/// Necessary conditions only: the section equation |-' x0 D' h(theta),
/// preservation of consequence by h on bounded single-premise sentences,
/// preservation of Delta (D' -||-' h(D)), and bounded density of h.
inline ContextReport validate_context(const GlivenkoContext& ctx, std::size_t vars = 2, std::size_t depth = 2) {
  ContextReport rep{vars, depth, {}};
  const auto& a = ctx.source();
  const auto& b = ctx.target();
  const Formula x0 = Formula::var(0), x1 = Formula::var(1);

  ContextCheck section{"section-equation"};
  ++section.instances;
  for (const auto& f : delta_of(ctx.target_pair(), x0, ctx.h().extend(ctx.theta()))) {
    if (!consequence(b, {}, f)) {
      section.passed = false;
      section.witness = "|- " + to_string(f);
    }
  }
  rep.checks.push_back(section);

  const auto fs = enumerate_formulas(a.signature(), vars, depth);
  ContextCheck preserve{"preserves-consequence"};
  for (std::size_t i = 0; i <= fs.size() && preserve.passed; ++i) {
    std::vector<Formula> gamma;
    if (i < fs.size()) gamma.push_back(fs[i]);
    for (const auto& phi : fs) {
      ++preserve.instances;
      if (consequence(a, gamma, phi) && !consequence(b, extend_all(ctx.h(), gamma), ctx.h().extend(phi))) {
        preserve.passed = false;
        preserve.witness = to_string(Entailment{gamma, phi});
        break;
      }
    }
  }
  rep.checks.push_back(preserve);

  ContextCheck delta{"preserves-equivalence-formulas"};
  ++delta.instances;
  const auto target_delta = delta_of(ctx.target_pair(), x0, x1);
  const auto moved = extend_all(ctx.h(), delta_of(ctx.source_pair(), x0, x1));
  for (const auto& f : moved) delta.passed = delta.passed && consequence(b, target_delta, f);
  for (const auto& f : target_delta) delta.passed = delta.passed && consequence(b, moved, f);
  if (!delta.passed) delta.witness = "h(Delta) and Delta' are not interderivable";
  rep.checks.push_back(delta);

  ContextCheck dense{"bounded-density"};
  for (const auto& c : b.signature().connectives()) {
    ++dense.instances;
    std::vector<Formula> args;
    for (std::size_t i = 0; i < c.arity; ++i) args.push_back(Formula::var(static_cast<VarIndex>(i)));
    const Formula target_formula = Formula::app(c.name, args);
    const bool found = std::any_of(fs.begin(), fs.end(), [&](const Formula& psi) {
      const auto d = delta_of(ctx.target_pair(), target_formula, ctx.h().extend(psi));
      return std::all_of(d.begin(), d.end(), [&](const Formula& f) { return consequence(b, {}, f); });
    });
    if (!found) {
      dense.passed = false;
      dense.witness = "no source formula within bounds matches " + c.name;
      break;
    }
  }
  rep.checks.push_back(dense);
  return rep;
}

}  // namespace aal
