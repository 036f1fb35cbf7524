#pragma once

// Filters of implicative logics: sets containing every theorem value and
// closed under modus ponens for imp.

#include <algorithm>
#include <span>
#include <vector>

#include "aal/algebra.hpp"
#include "aal/error.hpp"
#include "aal/semantics.hpp"
#include "aal/syntax.hpp"

namespace aal {

struct ClosureBounds {
  /// Theorems are enumerated over min(|A|, max_vars) variables up to this depth.
  std::size_t depth = 2;
  std::size_t max_vars = 6;
  std::size_t max_formulas = 200'000;
};

/// Declares imp/2 as a primitive with |- imp(x0,x0) and x0, imp(x0,x1) |- x1.
inline bool is_implicative(const LogicSpec& l) {
  if (!l.signature().has_primitive("imp", 2)) return false;
  const Formula x0 = Formula::var(0), x1 = Formula::var(1);
  return consequence(l, {}, Formula::app("imp", {x0, x0})) &&
         consequence(l, {x0, Formula::app("imp", {x0, x1})}, x1);
}

namespace detail {

inline void require_implicative(const LogicSpec& l) {
  if (!is_implicative(l)) throw NotImplicative("logic " + l.name() + " does not declare a detachable imp");
}

inline void mp_close(const FiniteAlgebra& A, std::size_t imp, Subset& F) {
  const std::size_t n = A.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Element a = 0; a < n; ++a) {
      if (!F.contains(a)) continue;
      for (Element b = 0; b < n; ++b) {
        if (!F.contains(b) && F.contains(A.table(imp)[a * n + b])) {
          F.insert(b);
          changed = true;
        }
      }
    }
  }
}

inline bool mp_closed(const FiniteAlgebra& A, std::size_t imp, const Subset& F) {
  const std::size_t n = A.size();
  for (Element a = 0; a < n; ++a) {
    if (!F.contains(a)) continue;
    for (Element b = 0; b < n; ++b) {
      if (!F.contains(b) && F.contains(A.table(imp)[a * n + b])) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Values in A of the theorems of l found within the bounds.
inline Subset theorem_values(const LogicSpec& l, const FiniteAlgebra& A, const ClosureBounds& bounds = {}) {
  if (A.signature().connectives() != l.signature().connectives()) {
    throw SignatureMismatch("algebra is not over the logic's signature");
  }
  const std::size_t vars = std::min(A.size(), bounds.max_vars);
  const auto fs = enumerate_formulas(l.signature(), vars, bounds.depth);
  if (fs.size() > bounds.max_formulas) {
    throw BoundExceeded("theorem enumeration needs " + std::to_string(fs.size()) + " formulas, limit " +
                        std::to_string(bounds.max_formulas));
  }
  Subset out(A.size());
  std::vector<Element> stack;
  for (const auto& phi : fs) {
    if (!consequence(l, {}, phi)) continue;
    CompiledFormula c(A.signature(), phi);
    for_each_valuation(A.size(), c.variable_bound(), [&](std::span<const Element> v) {
      out.insert(c.run(A, v, stack));
      return true;
    });
  }
  return out;
}

/// Least filter of l on A containing S.
inline Filter filter_closure(const LogicSpec& l, const FiniteAlgebra& A, const Subset& S,
                             const ClosureBounds& bounds = {}) {
  detail::require_implicative(l);
  if (S.carrier_size() != A.size()) throw InvalidArgument("subset carrier does not match algebra size");
  Subset F = theorem_values(l, A, bounds);
  for (Element e : S.elements()) F.insert(e);
  detail::mp_close(A, *A.signature().index_of("imp"), F);
  return F;
}

/// Bounded check that F respects the consequences of l (see FilterBounds).
inline bool is_filter(const LogicSpec& l, const FiniteAlgebra& A, const Subset& F, const FilterBounds& bounds = {}) {
  return !find_filter_violation(l, Matrix(A, F), bounds).has_value();
}

/// Every filter of l on A, ordered by size and then by elements.
inline std::vector<Filter> all_filters(const LogicSpec& l, const FiniteAlgebra& A, std::size_t max_size = 12,
                                       const ClosureBounds& bounds = {}) {
  detail::require_implicative(l);
  if (A.size() > max_size) {
    throw BoundExceeded("all_filters: algebra of size " + std::to_string(A.size()) + " exceeds " +
                        std::to_string(max_size));
  }
  const Subset base = theorem_values(l, A, bounds);
  const std::size_t imp = *A.signature().index_of("imp");
  std::vector<Filter> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << A.size()); ++mask) {
    Subset F(A.size());
    for (Element e = 0; e < A.size(); ++e) {
      if (mask >> e & 1u) F.insert(e);
    }
    if (F.includes(base) && detail::mp_closed(A, imp, F)) out.push_back(std::move(F));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace aal
