#pragma once

// Algebraizing pairs <tau, Delta>, bounded checks of the algebraizability
// conditions, quasi-identity generation and the Lindenbaum property.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aal/algebra.hpp"
#include "aal/error.hpp"
#include "aal/heyting.hpp"
#include "aal/provers.hpp"
#include "aal/semantics.hpp"
#include "aal/syntax.hpp"

namespace aal {

/// Equivalence formulas delta (in x0, x1) and defining equations
/// tau = {delta_i(x0) = epsilon_i(x0)}.
struct AlgebraizingPair {
  std::vector<Formula> delta;
  std::vector<std::pair<Formula, Formula>> tau;

  AlgebraizingPair(std::vector<Formula> d, std::vector<std::pair<Formula, Formula>> t)
      : delta(std::move(d)), tau(std::move(t)) {
    if (delta.empty() || tau.empty()) throw InvalidArgument("algebraizing pair needs nonempty delta and tau");
    for (const auto& f : delta) {
      for (auto v : variables(f)) {
        if (v > 1) throw InvalidArgument("equivalence formula " + to_string(f) + " uses a variable beyond x1");
      }
    }
    for (const auto& [a, b] : tau) {
      for (const auto& f : {a, b}) {
        for (auto v : variables(f)) {
          if (v > 0) throw InvalidArgument("defining equation uses a variable beyond x0: " + to_string(f));
        }
      }
    }
  }

  /// Delta = {iff(x0,x1)}, tau = {imp(x0,x0) = x0}.
  static AlgebraizingPair classical() {
    const auto x0 = Formula::var(0), x1 = Formula::var(1);
    return AlgebraizingPair({Formula::app("iff", {x0, x1})}, {{Formula::app("imp", {x0, x0}), x0}});
  }

  bool operator==(const AlgebraizingPair&) const = default;
};

inline bool pair_over(const Signature& sig, const AlgebraizingPair& p) {
  for (const auto& f : p.delta) {
    if (!sig.admits(f)) return false;
  }
  for (const auto& [a, b] : p.tau) {
    if (!sig.admits(a) || !sig.admits(b)) return false;
  }
  return true;
}

/// Delta(phi, psi).
inline std::vector<Formula> delta_of(const AlgebraizingPair& p, const Formula& phi, const Formula& psi) {
  std::vector<Formula> out;
  const std::vector<Formula> args{phi, psi};
  for (const auto& d : p.delta) out.push_back(instantiate(d, args));
  return out;
}

inline std::vector<Formula> delta_translate(const AlgebraizingPair& p, const Equation& eq) {
  return delta_of(p, eq.lhs, eq.rhs);
}

inline std::vector<Equation> tau_translate(const AlgebraizingPair& p, const Formula& phi) {
  std::vector<Equation> out;
  const std::vector<Formula> args{phi};
  for (const auto& [d, e] : p.tau) out.push_back({instantiate(d, args), instantiate(e, args)});
  return out;
}

inline std::vector<Equation> tau_translate(const AlgebraizingPair& p, std::span<const Formula> phis) {
  std::vector<Equation> out;
  for (const auto& phi : phis) {
    auto t = tau_translate(p, phi);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conditions (a)-(e).

struct ConditionResult {
  std::string name;
  bool passed = true;
  std::size_t instances = 0;
  std::optional<Entailment> witness;
};

struct BpReport {
  std::size_t vars = 0;
  std::size_t depth = 0;
  std::vector<ConditionResult> conditions;

  bool all_passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.passed; });
  }
  const ConditionResult& condition(const std::string& name) const {
    for (const auto& c : conditions) {
      if (c.name == name) return c;
    }
    throw InvalidArgument("no condition " + name);
  }
};

namespace detail {

// Checks Gamma |- psi for every psi in goals; records the first failure.
inline bool entails_all(const LogicSpec& l, const std::vector<Formula>& gamma, const std::vector<Formula>& goals,
                        ConditionResult& r) {
  ++r.instances;
  for (const auto& g : goals) {
    if (!consequence(l, gamma, g)) {
      r.passed = false;
      r.witness = Entailment{gamma, g};
      return false;
    }
  }
  return true;
}

inline std::vector<Formula> concat(std::vector<Formula> a, const std::vector<Formula>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace detail

/// Checks, for all formulas over `vars` variables up to `depth`:
/// (a) |- phi D phi; (b) phi D psi |- psi D phi; (c) phi D psi, psi D chi |- phi D chi;
/// (d) for each primitive c: phi_i D psi_i (all i) |- c(phi) D c(psi);
/// (e) phi -||- D(tau(phi)). Each condition stops at its first counterexample.
inline BpReport check_bp_conditions(const LogicSpec& l, const AlgebraizingPair& p, std::size_t vars,
                                    std::size_t depth) {
  if (vars < 1 || depth < 1) throw InvalidArgument("bounds must be at least 1");
  if (!pair_over(l.signature(), p)) throw SignatureMismatch("algebraizing pair is not over the logic's signature");
  const auto fs = enumerate_formulas(l.signature(), vars, depth);
  BpReport rep{vars, depth, {}};

  ConditionResult a{"a"};
  for (const auto& phi : fs) {
    if (!detail::entails_all(l, {}, delta_of(p, phi, phi), a)) break;
  }
  rep.conditions.push_back(a);

  ConditionResult b{"b"};
  for (std::size_t i = 0; i < fs.size() && b.passed; ++i) {
    for (std::size_t j = 0; j < fs.size(); ++j) {
      if (!detail::entails_all(l, delta_of(p, fs[i], fs[j]), delta_of(p, fs[j], fs[i]), b)) break;
    }
  }
  rep.conditions.push_back(b);

  ConditionResult c{"c"};
  for (std::size_t i = 0; i < fs.size() && c.passed; ++i) {
    for (std::size_t j = 0; j < fs.size() && c.passed; ++j) {
      const auto ij = delta_of(p, fs[i], fs[j]);
      for (std::size_t k = 0; k < fs.size(); ++k) {
        if (!detail::entails_all(l, detail::concat(ij, delta_of(p, fs[j], fs[k])), delta_of(p, fs[i], fs[k]), c)) break;
      }
    }
  }
  rep.conditions.push_back(c);

  ConditionResult d{"d"};
  for (const auto& conn : l.signature().connectives()) {
    const std::size_t n = conn.arity;
    if (n == 0) continue;
    // Odometer over (phi_1..phi_n, psi_1..psi_n).
    std::vector<std::size_t> idx(2 * n, 0);
    bool more = true;
    while (more && d.passed) {
      std::vector<Formula> lhs, rhs, gamma;
      for (std::size_t t = 0; t < n; ++t) {
        lhs.push_back(fs[idx[t]]);
        rhs.push_back(fs[idx[n + t]]);
        auto dt = delta_of(p, fs[idx[t]], fs[idx[n + t]]);
        gamma.insert(gamma.end(), dt.begin(), dt.end());
      }
      detail::entails_all(l, gamma, delta_of(p, Formula::app(conn.name, lhs), Formula::app(conn.name, rhs)), d);
      more = false;
      for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < fs.size()) {
          more = true;
          break;
        }
        idx[k] = 0;
      }
    }
    if (!d.passed) break;
  }
  rep.conditions.push_back(d);

  ConditionResult e{"e"};
  for (const auto& phi : fs) {
    std::vector<Formula> back;
    for (const auto& eq : tau_translate(p, phi)) back = detail::concat(std::move(back), delta_translate(p, eq));
    if (!detail::entails_all(l, {phi}, back, e)) break;
    if (!detail::entails_all(l, back, {phi}, e)) break;
  }
  rep.conditions.push_back(e);
  return rep;
}

// ---------------------------------------------------------------------------
// Interpretation in a class of algebras.

/// (Gamma |- phi, tau[Gamma] |=_K tau(phi)).
inline std::pair<bool, bool> check_interpretation(const LogicSpec& l, const AlgebraizingPair& p,
                                                  std::span<const FiniteAlgebra> K, std::span<const Formula> gamma,
                                                  const Formula& phi) {
  const bool left = consequence(l, gamma, phi);
  const auto premises = tau_translate(p, gamma);
  bool right = true;
  for (const auto& eq : tau_translate(p, phi)) right = right && equational_consequence(K, premises, eq);
  return {left, right};
}

/// (eq |=_K tau(Delta(eq)), tau(Delta(eq)) |=_K eq).
inline std::pair<bool, bool> check_inverse_condition(const AlgebraizingPair& p, std::span<const FiniteAlgebra> K,
                                                     const Equation& eq) {
  const auto back = tau_translate(p, delta_translate(p, eq));
  const std::vector<Equation> single{eq};
  bool forth = true;
  for (const auto& e : back) forth = forth && equational_consequence(K, single, e);
  return {forth, equational_consequence(K, back, eq)};
}

/// phi, phi D psi |- psi.
inline bool detachment_check(const LogicSpec& l, const AlgebraizingPair& p, const Formula& phi, const Formula& psi) {
  std::vector<Formula> gamma{phi};
  auto d = delta_of(p, phi, psi);
  gamma.insert(gamma.end(), d.begin(), d.end());
  return consequence(l, gamma, psi);
}

// ---------------------------------------------------------------------------
// Quasi-identities.

struct QuasiIdentity {
  int kind = 0;  // 1, 2 or 3
  std::vector<Equation> premises;
  Equation conclusion;
};

inline std::string to_string(const QuasiIdentity& q) {
  std::string s;
  for (std::size_t i = 0; i < q.premises.size(); ++i) s += (i ? " & " : "") + to_string(q.premises[i]);
  return (s.empty() ? "" : s + " => ") + to_string(q.conclusion);
}

struct QvBounds {
  std::size_t vars = 2;
  std::size_t depth = 3;
  std::size_t gamma_size = 2;
  /// Consequence checks spent on the kind (iii) search.
  std::size_t max_checks = 300'000;
};

struct QvAxioms {
  QvBounds bounds;
  std::vector<QuasiIdentity> axioms;
  std::size_t checks = 0;
  /// The kind (iii) search stopped at max_checks before exhausting the bounds.
  bool truncated = false;
};

/// Kinds (i) and (ii) from the pair; kind (iii) from entailments Gamma |- phi
/// (phi not in Gamma) found by iterative deepening on the largest depth.
inline QvAxioms qv_axioms(const LogicSpec& l, const AlgebraizingPair& p, const QvBounds& bounds = {}) {
  if (!pair_over(l.signature(), p)) throw SignatureMismatch("algebraizing pair is not over the logic's signature");
  QvAxioms out{bounds, {}, 0, false};
  const auto x0 = Formula::var(0), x1 = Formula::var(1);
  for (const auto& f : delta_of(p, x0, x0)) {
    for (const auto& eq : tau_translate(p, f)) out.axioms.push_back({1, {}, eq});
  }
  {
    std::vector<Equation> prem;
    for (const auto& f : delta_of(p, x0, x1)) {
      auto t = tau_translate(p, f);
      prem.insert(prem.end(), t.begin(), t.end());
    }
    out.axioms.push_back({2, prem, Equation{x0, x1}});
  }

  for (std::size_t d = 1; d <= bounds.depth && !out.truncated; ++d) {
    const auto fs = enumerate_formulas(l.signature(), bounds.vars, d);
    std::vector<std::size_t> gamma;
    auto emit_for = [&]() {
      std::size_t top = 0;
      for (auto i : gamma) top = std::max(top, fs[i].depth());
      std::vector<Formula> g;
      for (auto i : gamma) g.push_back(fs[i]);
      for (std::size_t j = 0; j < fs.size(); ++j) {
        if (std::max(top, fs[j].depth()) != d) continue;
        if (std::find(gamma.begin(), gamma.end(), j) != gamma.end()) continue;
        if (out.checks == bounds.max_checks) {
          out.truncated = true;
          return false;
        }
        ++out.checks;
        if (!consequence(l, g, fs[j])) continue;
        for (const auto& eq : tau_translate(p, fs[j])) out.axioms.push_back({3, tau_translate(p, g), eq});
      }
      return true;
    };
    auto rec = [&](auto&& self, std::size_t start) -> bool {
      if (!emit_for()) return false;
      if (gamma.size() == bounds.gamma_size) return true;
      for (std::size_t i = start; i < fs.size(); ++i) {
        gamma.push_back(i);
        const bool go = self(self, i + 1);
        gamma.pop_back();
        if (!go) return false;
      }
      return true;
    };
    rec(rec, 0);
  }
  return out;
}

/// A |= tau[premises] => tau(conclusion), over every valuation.
inline bool tau_quasi_holds(const FiniteAlgebra& A, const AlgebraizingPair& p, std::span<const Formula> premises,
                            const Formula& conclusion) {
  const auto prem = tau_translate(p, premises);
  for (const auto& eq : tau_translate(p, conclusion)) {
    if (!quasiidentity_holds(A, prem, eq)) return false;
  }
  return true;
}

enum class QvClass { Boolean, Heyting };

inline bool qv_membership(QvClass k, const FiniteAlgebra& A) {
  return k == QvClass::Boolean ? is_boolean(A) : is_heyting(A);
}

// ---------------------------------------------------------------------------
// Lindenbaum property.

enum class LindenbaumStatus { Pass, Fail, NotApplicable };

inline const char* to_string(LindenbaumStatus s) {
  switch (s) {
    case LindenbaumStatus::Pass: return "pass";
    case LindenbaumStatus::Fail: return "fail";
    default: return "not-applicable";
  }
}

struct LindenbaumReport {
  LindenbaumStatus status = LindenbaumStatus::Pass;
  std::size_t vars = 0;
  std::size_t depth = 0;
  std::size_t pairs_checked = 0;
  std::string reason;
  /// Failing pair (phi, psi).
  std::optional<std::pair<Formula, Formula>> witness;
};

/// Checks phi -||- psi  <=>  |- phi D psi for all pairs within bounds, after
/// checking |- phi D phi.
inline LindenbaumReport is_lindenbaum(const LogicSpec& l, const AlgebraizingPair& p, std::size_t vars,
                                      std::size_t depth) {
  LindenbaumReport rep;
  rep.vars = vars;
  rep.depth = depth;
  if (!pair_over(l.signature(), p)) {
    rep.status = LindenbaumStatus::NotApplicable;
    rep.reason = "equivalence formulas are not definable in the logic's signature";
    return rep;
  }
  const auto fs = enumerate_formulas(l.signature(), vars, depth);
  auto theorem_all = [&](const std::vector<Formula>& goals) {
    return std::all_of(goals.begin(), goals.end(), [&](const Formula& g) { return consequence(l, {}, g); });
  };
  for (const auto& phi : fs) {
    if (!theorem_all(delta_of(p, phi, phi))) {
      rep.status = LindenbaumStatus::Fail;
      rep.reason = "condition (a) fails";
      rep.witness = std::make_pair(phi, phi);
      return rep;
    }
  }
  for (const auto& phi : fs) {
    for (const auto& psi : fs) {
      ++rep.pairs_checked;
      const bool inter = consequence(l, {phi}, psi) && consequence(l, {psi}, phi);
      if (inter != theorem_all(delta_of(p, phi, psi))) {
        rep.status = LindenbaumStatus::Fail;
        rep.reason = inter ? "interderivable but equivalence not a theorem" : "equivalence a theorem but not interderivable";
        rep.witness = std::make_pair(phi, psi);
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace aal
