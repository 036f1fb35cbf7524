#pragma once

// Decision procedures for classical and intuitionistic propositional
// consequence, a Kripke countermodel search, and equational consequence over
// finite algebras.
//
// The propositional procedures accept neg/1, imp/2, and/2, or/2 and iff/2
// (read as and(imp(x0,x1),imp(x1,x0))). Other connectives must be expanded
// by the caller.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "aal/algebra.hpp"
#include "aal/error.hpp"
#include "aal/heyting.hpp"
#include "aal/syntax.hpp"

namespace aal {

namespace detail {

enum class Prop : std::uint8_t { Neg, Imp, And, Or, Iff };

inline Prop prop_kind(const Formula& phi) {
  const auto& c = phi.connective();
  const std::size_t n = phi.args().size();
  if (c == "neg" && n == 1) return Prop::Neg;
  if (c == "imp" && n == 2) return Prop::Imp;
  if (c == "and" && n == 2) return Prop::And;
  if (c == "or" && n == 2) return Prop::Or;
  if (c == "iff" && n == 2) return Prop::Iff;
  throw SignatureMismatch("propositional prover cannot handle connective " + c + "/" + std::to_string(n));
}

// Maps occurring variables onto 0..k-1 in ascending order.
inline std::map<VarIndex, std::size_t> dense_variables(std::span<const Formula> gamma, const Formula& phi) {
  std::set<VarIndex> vs = variables(gamma);
  for (VarIndex v : variables(phi)) vs.insert(v);
  std::map<VarIndex, std::size_t> out;
  for (VarIndex v : vs) out.emplace(v, out.size());
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Classical logic: bit-parallel truth tables.

/// Gamma entails phi classically iff no row of the truth table makes every
/// premise true and phi false.
inline bool cpc_decide(std::span<const Formula> gamma, const Formula& phi) {
  const auto dense = detail::dense_variables(gamma, phi);
  const std::size_t k = dense.size();
  if (k > 26) throw BoundExceeded("truth table over more than 26 variables");
  const std::size_t rows = std::size_t{1} << k;
  const std::size_t words = (rows + 63) / 64;
  using Table = std::vector<std::uint64_t>;

  std::vector<Table> var_tables(k, Table(words));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (r >> i & 1u) var_tables[i][r / 64] |= std::uint64_t{1} << (r % 64);
    }
  }
  std::unordered_map<Formula, Table, FormulaHash> memo;
  auto eval = [&](auto&& self, const Formula& f) -> Table {
    if (f.is_var()) return var_tables[dense.at(f.var_index())];
    if (auto it = memo.find(f); it != memo.end()) return it->second;
    const auto kind = detail::prop_kind(f);
    Table a = self(self, f.args()[0]);
    Table out(words);
    if (kind == detail::Prop::Neg) {
      for (std::size_t w = 0; w < words; ++w) out[w] = ~a[w];
    } else {
      Table b = self(self, f.args()[1]);
      for (std::size_t w = 0; w < words; ++w) {
        switch (kind) {
          case detail::Prop::Imp: out[w] = ~a[w] | b[w]; break;
          case detail::Prop::And: out[w] = a[w] & b[w]; break;
          case detail::Prop::Or: out[w] = a[w] | b[w]; break;
          default: out[w] = ~(a[w] ^ b[w]); break;
        }
      }
    }
    memo.emplace(f, out);
    return out;
  };

  Table bad(words, ~std::uint64_t{0});
  if (rows < 64) bad[0] = (std::uint64_t{1} << rows) - 1;
  for (const auto& g : gamma) {
    const Table t = eval(eval, g);
    for (std::size_t w = 0; w < words; ++w) bad[w] &= t[w];
  }
  const Table t = eval(eval, phi);
  for (std::size_t w = 0; w < words; ++w) {
    if (bad[w] & ~t[w]) return false;
  }
  return true;
}

inline bool cpc_decide(std::initializer_list<Formula> gamma, const Formula& phi) {
  return cpc_decide(std::span<const Formula>(gamma.begin(), gamma.size()), phi);
}

// ---------------------------------------------------------------------------
// Intuitionistic logic: contraction-free sequent calculus (G4ip).

namespace detail {

class G4ip {
 public:
  enum class Kind : std::uint8_t { Atom, Bot, Imp, And, Or };
  using Id = std::uint32_t;

  G4ip() { bot_ = make(Kind::Bot, 0, 0); }

  Id translate(const Formula& f) {
    if (f.is_var()) return make(Kind::Atom, f.var_index(), 0);
    switch (prop_kind(f)) {
      case Prop::Neg: return make(Kind::Imp, translate(f.args()[0]), bot_);
      case Prop::Imp: return make(Kind::Imp, translate(f.args()[0]), translate(f.args()[1]));
      case Prop::And: return make(Kind::And, translate(f.args()[0]), translate(f.args()[1]));
      case Prop::Or: return make(Kind::Or, translate(f.args()[0]), translate(f.args()[1]));
      case Prop::Iff: {
        Id a = translate(f.args()[0]);
        Id b = translate(f.args()[1]);
        return make(Kind::And, make(Kind::Imp, a, b), make(Kind::Imp, b, a));
      }
    }
    return bot_;
  }

  bool prove(std::vector<Id> gamma, Id goal) {
    normalize(gamma);
    return search(gamma, goal);
  }

  std::size_t memo_size() const { return memo_.size(); }
  void clear_memo() { memo_.clear(); }

 private:
  struct Node {
    Kind kind;
    Id a, b;
  };
  struct VecHash {
    std::size_t operator()(const std::vector<Id>& v) const noexcept {
      std::size_t h = v.size();
      for (Id x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };

  Id make(Kind kind, Id a, Id b) {
    const std::uint64_t key = (static_cast<std::uint64_t>(kind) << 60) ^ (static_cast<std::uint64_t>(a) << 30) ^ b;
    auto [it, fresh] = intern_.emplace(key, static_cast<Id>(nodes_.size()));
    if (fresh) nodes_.push_back({kind, a, b});
    return it->second;
  }

  static void normalize(std::vector<Id>& g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
  }

  static bool has(const std::vector<Id>& g, Id x) { return std::binary_search(g.begin(), g.end(), x); }

  // g without position i, plus extra formulas.
  static std::vector<Id> replace(const std::vector<Id>& g, std::size_t i, std::initializer_list<Id> extra) {
    std::vector<Id> out;
    out.reserve(g.size() + extra.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (j != i) out.push_back(g[j]);
    }
    out.insert(out.end(), extra.begin(), extra.end());
    normalize(out);
    return out;
  }

  static std::vector<Id> with(const std::vector<Id>& g, Id x) {
    std::vector<Id> out = g;
    out.insert(std::lower_bound(out.begin(), out.end(), x), x);
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) normalize(out);
    return out;
  }

  bool search(const std::vector<Id>& g, Id goal) {
    if (has(g, goal) || has(g, bot_)) return true;
    std::vector<Id> key = g;
    key.push_back(goal);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool result = search_uncached(g, goal);
    memo_.emplace(std::move(key), result);
    return result;
  }

  bool search_uncached(const std::vector<Id>& g, Id goal) {
    const Node gn = nodes_[goal];
    // Invertible right rules.
    if (gn.kind == Kind::And) return search(g, gn.a) && search(g, gn.b);
    if (gn.kind == Kind::Imp) return search(with(g, gn.a), gn.b);

    // Invertible left rules.
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Node n = nodes_[g[i]];
      if (n.kind == Kind::And) return search(replace(g, i, {n.a, n.b}), goal);
      if (n.kind == Kind::Or) return search(replace(g, i, {n.a}), goal) && search(replace(g, i, {n.b}), goal);
      if (n.kind != Kind::Imp) continue;
      const Node p = nodes_[n.a];
      if (p.kind == Kind::Atom && has(g, n.a)) return search(replace(g, i, {n.b}), goal);
      if (p.kind == Kind::Bot) return search(replace(g, i, {}), goal);
      if (p.kind == Kind::And) return search(replace(g, i, {make(Kind::Imp, p.a, make(Kind::Imp, p.b, n.b))}), goal);
      if (p.kind == Kind::Or) {
        return search(replace(g, i, {make(Kind::Imp, p.a, n.b), make(Kind::Imp, p.b, n.b)}), goal);
      }
    }

    // Non-invertible rules.
    if (gn.kind == Kind::Or && (search(g, gn.a) || search(g, gn.b))) return true;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Node n = nodes_[g[i]];
      if (n.kind != Kind::Imp || nodes_[n.a].kind != Kind::Imp) continue;
      const Node p = nodes_[n.a];
      // (A -> B) -> D: prove A -> B from B -> D, then continue with D.
      if (search(replace(g, i, {make(Kind::Imp, p.b, n.b), p.a}), p.b) && search(replace(g, i, {n.b}), goal)) {
        return true;
      }
    }
    return false;
  }

  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, Id> intern_;
  std::unordered_map<std::vector<Id>, bool, VecHash> memo_;
  Id bot_ = 0;
};

inline G4ip& thread_prover() {
  thread_local G4ip prover;
  if (prover.memo_size() > 2'000'000) prover.clear_memo();
  return prover;
}

}  // namespace detail

/// Gamma entails phi intuitionistically, decided by proof search with Gamma
/// as antecedent.
inline bool ipc_decide(std::span<const Formula> gamma, const Formula& phi) {
  auto& p = detail::thread_prover();
  std::vector<detail::G4ip::Id> g;
  g.reserve(gamma.size());
  for (const auto& f : gamma) g.push_back(p.translate(f));
  return p.prove(std::move(g), p.translate(phi));
}

inline bool ipc_decide(std::initializer_list<Formula> gamma, const Formula& phi) {
  return ipc_decide(std::span<const Formula>(gamma.begin(), gamma.size()), phi);
}

// ---------------------------------------------------------------------------
// Kripke countermodels.

struct KripkeCountermodel {
  Poset frame;
  /// Upset of worlds forcing each variable (bit w = world w), by variable index.
  std::map<VarIndex, std::uint32_t> valuation;
  std::size_t world = 0;
};

/// Set of worlds forcing phi, as a bit mask.
inline std::uint32_t kripke_force(const Poset& frame, const std::map<VarIndex, std::uint32_t>& v, const Formula& phi) {
  if (phi.is_var()) return v.at(phi.var_index());
  const auto kind = detail::prop_kind(phi);
  const std::uint32_t a = kripke_force(frame, v, phi.args()[0]);
  auto imp = [&](std::uint32_t x, std::uint32_t y) {
    std::uint32_t out = 0;
    for (std::size_t w = 0; w < frame.size; ++w) {
      if ((frame.up(w) & x & ~y) == 0) out |= 1u << w;
    }
    return out;
  };
  if (kind == detail::Prop::Neg) return imp(a, 0);
  const std::uint32_t b = kripke_force(frame, v, phi.args()[1]);
  switch (kind) {
    case detail::Prop::Imp: return imp(a, b);
    case detail::Prop::And: return a & b;
    case detail::Prop::Or: return a | b;
    default: return imp(a, b) & imp(b, a);
  }
}

/// Searches every frame with at most max_worlds worlds for a world forcing
/// all of gamma but not phi. Finding one refutes Gamma |- phi in IPC.
inline std::optional<KripkeCountermodel> kripke_refute(std::span<const Formula> gamma, const Formula& phi,
                                                       std::size_t max_worlds = 4) {
  if (max_worlds > 5) throw BoundExceeded("Kripke search limited to 5 worlds");
  std::set<VarIndex> vs = variables(gamma);
  for (VarIndex x : variables(phi)) vs.insert(x);
  const std::vector<VarIndex> vars(vs.begin(), vs.end());
  for (std::size_t n = 1; n <= max_worlds; ++n) {
    for (const auto& frame : naturally_labelled_posets(n)) {
      std::vector<std::uint32_t> upsets;
      for (std::uint32_t m = 0; m < (1u << n); ++m) {
        if (frame.is_upset(m)) upsets.push_back(m);
      }
      std::vector<std::size_t> idx(vars.size(), 0);
      std::map<VarIndex, std::uint32_t> v;
      while (true) {
        for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = upsets[idx[i]];
        std::uint32_t all = (1u << n) - 1;
        for (const auto& g : gamma) all &= kripke_force(frame, v, g);
        const std::uint32_t bad = all & ~kripke_force(frame, v, phi);
        if (bad) {
          return KripkeCountermodel{frame, v, static_cast<std::size_t>(__builtin_ctz(bad))};
        }
        std::size_t k = 0;
        for (; k < idx.size(); ++k) {
          if (++idx[k] < upsets.size()) break;
          idx[k] = 0;
        }
        if (k == idx.size()) break;
      }
    }
  }
  return std::nullopt;
}

inline std::optional<KripkeCountermodel> kripke_refute(std::initializer_list<Formula> gamma, const Formula& phi,
                                                       std::size_t max_worlds = 4) {
  return kripke_refute(std::span<const Formula>(gamma.begin(), gamma.size()), phi, max_worlds);
}

// ---------------------------------------------------------------------------
// Equations.

struct Equation {
  Formula lhs;
  Formula rhs;

  bool operator==(const Equation&) const = default;
};

inline std::string to_string(const Equation& e) { return to_string(e.lhs) + " = " + to_string(e.rhs); }

/// Witness of a failed equational consequence.
struct EquationalCounterexample {
  std::size_t algebra_index = 0;
  std::vector<Element> valuation;  // indexed by variable
};

/// Searches every algebra of K and every valuation for one satisfying all
/// premises but not the conclusion.
inline std::optional<EquationalCounterexample> equational_counterexample(std::span<const FiniteAlgebra> K,
                                                                         std::span<const Equation> gamma,
                                                                         const Equation& eq) {
  if (K.empty()) return std::nullopt;
  for (const auto& A : K) require_same_signature(K.front(), A);
  const Signature& sig = K.front().signature();
  std::vector<std::pair<CompiledFormula, CompiledFormula>> premises;
  std::size_t vars = 0;
  auto compile = [&](const Equation& e) {
    sig.require(e.lhs);
    sig.require(e.rhs);
    std::pair<CompiledFormula, CompiledFormula> c{CompiledFormula(sig, e.lhs), CompiledFormula(sig, e.rhs)};
    vars = std::max({vars, c.first.variable_bound(), c.second.variable_bound()});
    return c;
  };
  for (const auto& e : gamma) premises.push_back(compile(e));
  const auto goal = compile(eq);
  std::vector<Element> stack;
  for (std::size_t ai = 0; ai < K.size(); ++ai) {
    const auto& A = K[ai];
    std::optional<EquationalCounterexample> found;
    for_each_valuation(A.size(), vars, [&](std::span<const Element> v) {
      for (const auto& [l, r] : premises) {
        if (l.run(A, v, stack) != r.run(A, v, stack)) return true;
      }
      if (goal.first.run(A, v, stack) != goal.second.run(A, v, stack)) {
        found = EquationalCounterexample{ai, std::vector<Element>(v.begin(), v.end())};
        return false;
      }
      return true;
    });
    if (found) return found;
  }
  return std::nullopt;
}

inline bool equational_consequence(std::span<const FiniteAlgebra> K, std::span<const Equation> gamma,
                                   const Equation& eq) {
  return !equational_counterexample(K, gamma, eq).has_value();
}

inline bool quasiidentity_holds(const FiniteAlgebra& A, std::span<const Equation> premises, const Equation& conclusion) {
  return equational_consequence(std::span<const FiniteAlgebra>(&A, 1), premises, conclusion);
}

}  // namespace aal
