#pragma once

// Logical matrices, logics given by a decidable consequence engine, reducts
// along flexible morphisms and translation of models.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "aal/algebra.hpp"
#include "aal/error.hpp"
#include "aal/provers.hpp"
#include "aal/syntax.hpp"

namespace aal {

struct Matrix {
  FiniteAlgebra algebra;
  Filter filter;

  Matrix(FiniteAlgebra a, Filter f) : algebra(std::move(a)), filter(std::move(f)) {
    if (filter.carrier_size() != algebra.size()) throw InvalidArgument("filter carrier does not match algebra size");
  }

  bool operator==(const Matrix&) const = default;
};

enum class Builtin { CPC, IPC };

struct MatrixFamily {
  std::vector<Matrix> matrices;

  bool operator==(const MatrixFamily&) const = default;
};

/// A propositional logic: a signature plus a decision procedure for its
/// consequence relation.
class LogicSpec {
 public:
  using Engine = std::variant<MatrixFamily, Builtin>;

  LogicSpec(Signature sig, Engine engine, std::string name = "")
      : signature_(std::move(sig)), engine_(std::move(engine)), name_(std::move(name)) {
    if (auto* fam = std::get_if<MatrixFamily>(&engine_)) {
      if (fam->matrices.empty()) throw InvalidArgument("matrix family is empty");
      for (const auto& m : fam->matrices) {
        if (m.algebra.signature().connectives() != signature_.connectives()) {
          throw SignatureMismatch("matrix algebra signature differs from the logic's primitives");
        }
      }
    } else {
      static const Signature full = Signature::classical();
      for (const auto& c : signature_.connectives()) {
        if (!full.has_primitive(c.name, c.arity)) {
          throw SignatureMismatch("builtin logics only use neg/1, imp/2, and/2, or/2; got " + c.name);
        }
      }
    }
  }

  static LogicSpec cpc(Signature sig = Signature::classical()) { return LogicSpec(std::move(sig), Builtin::CPC, "cpc"); }
  static LogicSpec ipc(Signature sig = Signature::classical()) { return LogicSpec(std::move(sig), Builtin::IPC, "ipc"); }
  static LogicSpec of_matrices(std::vector<Matrix> ms, std::string name = "") {
    if (ms.empty()) throw InvalidArgument("matrix family is empty");
    Signature sig = ms.front().algebra.signature();
    return LogicSpec(std::move(sig), MatrixFamily{std::move(ms)}, std::move(name));
  }

  const Signature& signature() const noexcept { return signature_; }
  const Engine& engine() const noexcept { return engine_; }
  const std::string& name() const noexcept { return name_; }
  bool is_builtin() const noexcept { return std::holds_alternative<Builtin>(engine_); }

  /// Same signature and same engine (the name is ignored).
  friend bool operator==(const LogicSpec& a, const LogicSpec& b) {
    return a.signature_ == b.signature_ && a.engine_ == b.engine_;
  }

 private:
  Signature signature_;
  Engine engine_;
  std::string name_;
};

/// A valuation making every premise designated and phi undesignated.
inline std::optional<std::vector<Element>> matrix_countermodel(const Matrix& M, std::span<const Formula> gamma,
                                                               const Formula& phi) {
  const Signature& sig = M.algebra.signature();
  std::vector<CompiledFormula> premises;
  for (const auto& g : gamma) premises.emplace_back(sig, g);
  CompiledFormula goal(sig, phi);
  std::size_t vars = goal.variable_bound();
  for (const auto& p : premises) vars = std::max(vars, p.variable_bound());
  std::optional<std::vector<Element>> found;
  std::vector<Element> stack;
  for_each_valuation(M.algebra.size(), vars, [&](std::span<const Element> v) {
    for (const auto& p : premises) {
      if (!M.filter.contains(p.run(M.algebra, v, stack))) return true;
    }
    if (M.filter.contains(goal.run(M.algebra, v, stack))) return true;
    found.emplace(v.begin(), v.end());
    return false;
  });
  return found;
}

/// M satisfies the sentence <Gamma, phi>: every valuation designating Gamma
/// designates phi.
inline bool matrix_satisfies(const Matrix& M, std::span<const Formula> gamma, const Formula& phi) {
  return !matrix_countermodel(M, gamma, phi).has_value();
}

inline bool consequence(const LogicSpec& l, std::span<const Formula> gamma, const Formula& phi) {
  const Signature& sig = l.signature();
  sig.require(phi);
  for (const auto& g : gamma) sig.require(g);
  if (auto* b = std::get_if<Builtin>(&l.engine())) {
    std::vector<Formula> g;
    g.reserve(gamma.size());
    for (const auto& f : gamma) g.push_back(expand_derived(sig, f));
    const Formula p = expand_derived(sig, phi);
    return *b == Builtin::CPC ? cpc_decide(g, p) : ipc_decide(g, p);
  }
  for (const auto& M : std::get<MatrixFamily>(l.engine()).matrices) {
    if (!matrix_satisfies(M, gamma, phi)) return false;
  }
  return true;
}

inline bool consequence(const LogicSpec& l, std::initializer_list<Formula> gamma, const Formula& phi) {
  return consequence(l, std::span<const Formula>(gamma.begin(), gamma.size()), phi);
}

/// The h-reduct of M: same carrier, each source connective read as the term
/// operation of its image.
inline FiniteAlgebra reduct(const FlexibleMorphism& h, const FiniteAlgebra& M) {
  if (M.signature().connectives() != h.target().connectives()) {
    throw SignatureMismatch("reduct: algebra is not over the morphism's target signature");
  }
  std::vector<std::vector<Element>> tables;
  for (const auto& c : h.source().connectives()) tables.push_back(term_table(M, h.image(c.name), c.arity));
  return FiniteAlgebra(h.source(), M.size(), std::move(tables));
}

/// A sentence Gamma |- phi, used as a witness in reports.
struct Entailment {
  std::vector<Formula> gamma;
  Formula phi;
};

inline std::string to_string(const Entailment& e) {
  std::string s;
  for (std::size_t i = 0; i < e.gamma.size(); ++i) s += (i ? ", " : "") + to_string(e.gamma[i]);
  return s + (s.empty() ? "|- " : " |- ") + to_string(e.phi);
}

struct FilterBounds {
  std::size_t vars = 2;
  std::size_t depth = 2;
  std::size_t gamma_size = 1;
};

/// A consequence Gamma |- phi of the logic not respected by a matrix.
struct FilterViolation {
  std::vector<Formula> gamma;
  Formula phi;
  std::vector<Element> valuation;
};

inline std::string to_string(const FilterViolation& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.gamma.size(); ++i) s += (i ? "; " : "") + to_string(v.gamma[i]);
  s += "} |- " + to_string(v.phi) + " fails under [";
  for (std::size_t i = 0; i < v.valuation.size(); ++i) s += (i ? "," : "") + std::to_string(v.valuation[i]);
  return s + "]";
}

class FilterCheckFailed : public Error {
 public:
  explicit FilterCheckFailed(FilterViolation v) : Error("not a filter of the source logic: " + to_string(v)), violation_(std::move(v)) {}
  const FilterViolation& violation() const noexcept { return violation_; }

 private:
  FilterViolation violation_;
};

/// Looks for a consequence Gamma |- phi of l, with formulas from the bounded
/// enumeration and |Gamma| <= gamma_size, that M does not satisfy.
inline std::optional<FilterViolation> find_filter_violation(const LogicSpec& l, const Matrix& M,
                                                            const FilterBounds& bounds = {}) {
  if (M.algebra.signature().connectives() != l.signature().connectives()) {
    throw SignatureMismatch("matrix is not over the logic's signature");
  }
  const auto fs = enumerate_formulas(l.signature(), bounds.vars, bounds.depth);
  std::vector<Formula> gamma;
  std::optional<FilterViolation> out;
  auto visit = [&](auto&& self, std::size_t start) -> bool {
    for (const auto& phi : fs) {
      if (!consequence(l, gamma, phi)) continue;
      if (auto v = matrix_countermodel(M, gamma, phi)) {
        out = FilterViolation{gamma, phi, *v};
        return false;
      }
    }
    if (gamma.size() == bounds.gamma_size) return true;
    for (std::size_t i = start; i < fs.size(); ++i) {
      gamma.push_back(fs[i]);
      const bool go_on = self(self, i + 1);
      gamma.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  visit(visit, 0);
  return out;
}

/// <h*(M), F>; with `verify`, throws FilterCheckFailed when F is not (within
/// bounds) a filter of the source logic on the reduct.
inline Matrix mod_translate(const FlexibleMorphism& h, const Matrix& M, const LogicSpec* source = nullptr,
                            const FilterBounds& bounds = {}) {
  Matrix out(reduct(h, M.algebra), M.filter);
  if (source) {
    if (auto v = find_filter_violation(*source, out, bounds)) throw FilterCheckFailed(std::move(*v));
  }
  return out;
}

inline std::vector<Formula> extend_all(const FlexibleMorphism& h, std::span<const Formula> fs) {
  std::vector<Formula> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(h.extend(f));
  return out;
}

/// Compares M |= <h[Gamma], h(phi)> with h*(M) |= <Gamma, phi>.
inline bool satisfaction_condition_check(const FlexibleMorphism& h, const Matrix& M, std::span<const Formula> gamma,
                                         const Formula& phi) {
  const bool target_side = matrix_satisfies(M, extend_all(h, gamma), h.extend(phi));
  const bool source_side = matrix_satisfies(Matrix(reduct(h, M.algebra), M.filter), gamma, phi);
  return target_side == source_side;
}

}  // namespace aal
