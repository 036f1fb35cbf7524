#pragma once

// Heyting and Boolean algebras in the signature {neg, imp, and, or}: law
// checks, construction from lattice orders, and the finite posets used both
// for Birkhoff duals and for Kripke frames.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aal/algebra.hpp"
#include "aal/error.hpp"
#include "aal/syntax.hpp"

namespace aal {

/// Table indices of the four intuitionistic connectives and the derived
/// lattice bounds of an algebra.
struct HeytingOps {
  std::size_t neg_index, imp_index, and_index, or_index;

  /// Throws SignatureMismatch unless the primitives are exactly neg/1,
  /// imp/2, and/2, or/2 in some order.
  static HeytingOps of(const FiniteAlgebra& A) {
    const auto& sig = A.signature();
    auto need = [&](const char* name, std::size_t arity) {
      if (!sig.has_primitive(name, arity)) {
        throw SignatureMismatch(std::string("Heyting signature needs ") + name + "/" + std::to_string(arity));
      }
      return *sig.index_of(name);
    };
    HeytingOps ops{need("neg", 1), need("imp", 2), need("and", 2), need("or", 2)};
    if (sig.connectives().size() != 4) throw SignatureMismatch("Heyting signature has extra primitive connectives");
    return ops;
  }

  Element neg(const FiniteAlgebra& A, Element a) const { return A.table(neg_index)[a]; }
  Element imp(const FiniteAlgebra& A, Element a, Element b) const { return A.table(imp_index)[a * A.size() + b]; }
  Element meet(const FiniteAlgebra& A, Element a, Element b) const { return A.table(and_index)[a * A.size() + b]; }
  Element join(const FiniteAlgebra& A, Element a, Element b) const { return A.table(or_index)[a * A.size() + b]; }
  bool leq(const FiniteAlgebra& A, Element a, Element b) const { return meet(A, a, b) == a; }
};

/// Lattice reading of the and/or tables, if they form a bounded lattice.
struct LatticeBounds {
  Element bottom;
  Element top;
};

inline std::optional<LatticeBounds> bounded_lattice(const FiniteAlgebra& A, const HeytingOps& ops) {
  const Element n = static_cast<Element>(A.size());
  for (Element a = 0; a < n; ++a) {
    if (ops.meet(A, a, a) != a || ops.join(A, a, a) != a) return std::nullopt;
    for (Element b = 0; b < n; ++b) {
      if (ops.meet(A, a, b) != ops.meet(A, b, a) || ops.join(A, a, b) != ops.join(A, b, a)) return std::nullopt;
      if (ops.meet(A, a, ops.join(A, a, b)) != a || ops.join(A, a, ops.meet(A, a, b)) != a) return std::nullopt;
      for (Element c = 0; c < n; ++c) {
        if (ops.meet(A, ops.meet(A, a, b), c) != ops.meet(A, a, ops.meet(A, b, c))) return std::nullopt;
        if (ops.join(A, ops.join(A, a, b), c) != ops.join(A, a, ops.join(A, b, c))) return std::nullopt;
      }
    }
  }
  std::optional<Element> bottom;
  std::optional<Element> top;
  for (Element a = 0; a < n; ++a) {
    bool below_all = true;
    bool above_all = true;
    for (Element b = 0; b < n; ++b) {
      below_all = below_all && ops.leq(A, a, b);
      above_all = above_all && ops.leq(A, b, a);
    }
    if (below_all) bottom = a;
    if (above_all) top = a;
  }
  if (!bottom || !top) return std::nullopt;
  return LatticeBounds{*bottom, *top};
}

/// Bounded distributive lattice with x and y <= z iff x <= y -> z, and
/// neg x = x -> bottom.
inline bool is_heyting(const FiniteAlgebra& A) {
  const auto ops = HeytingOps::of(A);
  auto bounds = bounded_lattice(A, ops);
  if (!bounds) return false;
  const Element n = static_cast<Element>(A.size());
  for (Element x = 0; x < n; ++x) {
    if (ops.neg(A, x) != ops.imp(A, x, bounds->bottom)) return false;
    for (Element y = 0; y < n; ++y) {
      for (Element z = 0; z < n; ++z) {
        if (ops.meet(A, x, ops.join(A, y, z)) != ops.join(A, ops.meet(A, x, y), ops.meet(A, x, z))) return false;
        if (ops.leq(A, ops.meet(A, x, y), z) != ops.leq(A, x, ops.imp(A, y, z))) return false;
      }
    }
  }
  return true;
}

inline bool is_boolean(const FiniteAlgebra& A) {
  if (!is_heyting(A)) return false;
  const auto ops = HeytingOps::of(A);
  const auto bounds = *bounded_lattice(A, ops);
  for (Element x = 0; x < A.size(); ++x) {
    if (ops.join(A, x, ops.neg(A, x)) != bounds.top) return false;
  }
  return true;
}

inline LatticeBounds heyting_bounds(const FiniteAlgebra& A) {
  auto b = bounded_lattice(A, HeytingOps::of(A));
  if (!b) throw NotHeyting("and/or tables do not form a bounded lattice");
  return *b;
}

/// Builds the Heyting algebra of a finite distributive lattice given by its
/// order relation (leq[a][b] means a <= b), over Signature::classical().
inline FiniteAlgebra heyting_from_order(const std::vector<std::vector<bool>>& leq) {
  const std::size_t n = leq.size();
  if (n == 0) throw InvalidArgument("empty order");
  auto glb = [&](Element a, Element b) -> Element {
    std::optional<Element> best;
    for (Element c = 0; c < n; ++c) {
      if (!leq[c][a] || !leq[c][b]) continue;
      bool greatest = true;
      for (Element d = 0; d < n; ++d) {
        if (leq[d][a] && leq[d][b] && !leq[d][c]) greatest = false;
      }
      if (greatest) best = c;
    }
    if (!best) throw InvalidArgument("order is not a lattice");
    return *best;
  };
  auto lub = [&](Element a, Element b) -> Element {
    std::optional<Element> best;
    for (Element c = 0; c < n; ++c) {
      if (!leq[a][c] || !leq[b][c]) continue;
      bool least = true;
      for (Element d = 0; d < n; ++d) {
        if (leq[a][d] && leq[b][d] && !leq[c][d]) least = false;
      }
      if (least) best = c;
    }
    if (!best) throw InvalidArgument("order is not a lattice");
    return *best;
  };
  std::optional<Element> bottom;
  for (Element a = 0; a < n; ++a) {
    if (std::all_of(leq[a].begin(), leq[a].end(), [](bool b) { return b; })) bottom = a;
  }
  if (!bottom) throw InvalidArgument("order has no least element");

  std::vector<Element> meet(n * n), join(n * n), imp(n * n), neg(n);
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      meet[a * n + b] = glb(a, b);
      join[a * n + b] = lub(a, b);
    }
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      // Relative pseudo-complement: greatest c with a and c <= b.
      std::optional<Element> best;
      for (Element c = 0; c < n; ++c) {
        if (!leq[meet[a * n + c]][b]) continue;
        if (!best || leq[*best][c]) best = c;
      }
      for (Element c = 0; c < n; ++c) {
        if (leq[meet[a * n + c]][b] && !leq[c][*best]) throw InvalidArgument("lattice is not distributive");
      }
      imp[a * n + b] = *best;
    }
  }
  for (Element a = 0; a < n; ++a) neg[a] = imp[a * n + *bottom];
  FiniteAlgebra A(Signature::classical(), n, {neg, imp, meet, join});
  if (!is_heyting(A)) throw InvalidArgument("lattice is not distributive");
  return A;
}

/// n-element chain 0 < 1 < ... < n-1.
inline FiniteAlgebra heyting_chain(std::size_t n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) leq[a][b] = a <= b;
  }
  return heyting_from_order(leq);
}

/// Power set of `atoms` atoms; element k is the subset with bit mask k.
inline FiniteAlgebra boolean_algebra(std::size_t atoms) {
  const std::size_t n = std::size_t{1} << atoms;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) leq[a][b] = (a & ~b) == 0;
  }
  return heyting_from_order(leq);
}

/// Finite poset as a reflexive, transitive, antisymmetric relation.
struct Poset {
  std::size_t size = 0;
  std::vector<std::vector<bool>> leq;

  /// Bit mask of {v : w <= v}.
  std::uint32_t up(std::size_t w) const {
    std::uint32_t m = 0;
    for (std::size_t v = 0; v < size; ++v) {
      if (leq[w][v]) m |= 1u << v;
    }
    return m;
  }

  bool is_upset(std::uint32_t mask) const {
    for (std::size_t w = 0; w < size; ++w) {
      if ((mask >> w & 1u) && (up(w) & ~mask)) return false;
    }
    return true;
  }

  bool is_downset(std::uint32_t mask) const {
    for (std::size_t w = 0; w < size; ++w) {
      if (!(mask >> w & 1u)) continue;
      for (std::size_t v = 0; v < size; ++v) {
        if (leq[v][w] && !(mask >> v & 1u)) return false;
      }
    }
    return true;
  }
};

/// Every poset on {0..n-1} whose order extends the numeric order (a natural
/// labelling), which covers every isomorphism type at least once.
inline std::vector<Poset> naturally_labelled_posets(std::size_t n) {
  if (n > 6) throw BoundExceeded("poset enumeration limited to 6 points");
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  }
  std::vector<Poset> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots.size()); ++bits) {
    Poset p{n, std::vector<std::vector<bool>>(n, std::vector<bool>(n, false))};
    for (std::size_t i = 0; i < n; ++i) p.leq[i][i] = true;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (bits >> s & 1u) p.leq[slots[s].first][slots[s].second] = true;
    }
    bool transitive = true;
    for (std::size_t a = 0; a < n && transitive; ++a) {
      for (std::size_t b = 0; b < n && transitive; ++b) {
        if (!p.leq[a][b]) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (p.leq[b][c] && !p.leq[a][c]) {
            transitive = false;
            break;
          }
        }
      }
    }
    if (transitive) out.push_back(std::move(p));
  }
  return out;
}

/// Heyting algebra of down-sets of a poset, ordered by inclusion. Elements
/// are numbered by (cardinality, bit mask), so 0 is bottom and the last
/// element is top.
inline FiniteAlgebra downset_algebra(const Poset& p) {
  std::vector<std::uint32_t> downs;
  for (std::uint32_t m = 0; m < (1u << p.size); ++m) {
    if (p.is_downset(m)) downs.push_back(m);
  }
  std::stable_sort(downs.begin(), downs.end(),
                   [](std::uint32_t a, std::uint32_t b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  const std::size_t n = downs.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) leq[a][b] = (downs[a] & ~downs[b]) == 0;
  }
  return heyting_from_order(leq);
}

/// All Heyting algebras with at most max_size elements up to isomorphism
/// (as down-set lattices of posets), ordered by size.
inline std::vector<FiniteAlgebra> all_heyting_algebras(std::size_t max_size) {
  std::vector<FiniteAlgebra> out;
  if (max_size >= 1) out.push_back(heyting_chain(1));
  for (std::size_t points = 1; points + 1 <= max_size; ++points) {
    for (const auto& p : naturally_labelled_posets(points)) {
      auto A = downset_algebra(p);
      if (A.size() > max_size) continue;
      bool known = std::any_of(out.begin(), out.end(),
                               [&](const FiniteAlgebra& B) { return find_isomorphism(A, B).has_value(); });
      if (!known) out.push_back(std::move(A));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const FiniteAlgebra& a, const FiniteAlgebra& b) { return a.size() < b.size(); });
  return out;
}

}  // namespace aal
