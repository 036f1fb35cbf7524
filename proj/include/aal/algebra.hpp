#pragma once

// Finite Sigma-algebras on carriers {0..n-1}, homomorphisms, congruences,
// quotients and the Leibniz operator.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "aal/error.hpp"
#include "aal/syntax.hpp"

namespace aal {

using Element = std::uint32_t;

inline std::size_t int_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

class FiniteAlgebra {
 public:
  /// tables[i] interprets signature.connectives()[i]; a k-ary table has
  /// size^k entries in row-major order (first argument most significant).
  FiniteAlgebra(Signature signature, std::size_t size, std::vector<std::vector<Element>> tables)
      : signature_(std::move(signature)), size_(size), tables_(std::move(tables)) {
    if (size_ == 0) throw InvalidArgument("algebra carrier must be nonempty");
    if (tables_.size() != signature_.connectives().size()) {
      throw InvalidArgument("algebra needs exactly one table per connective");
    }
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      const auto& c = signature_.connectives()[i];
      if (tables_[i].size() != int_pow(size_, c.arity)) {
        throw InvalidArgument("table for '" + c.name + "' has wrong length");
      }
      for (auto e : tables_[i]) {
        if (e >= size_) throw InvalidArgument("table for '" + c.name + "' has an out-of-range entry");
      }
    }
  }

  const Signature& signature() const noexcept { return signature_; }
  std::size_t size() const noexcept { return size_; }
  const std::vector<Element>& table(std::size_t connective) const { return tables_.at(connective); }
  const std::vector<std::vector<Element>>& tables() const noexcept { return tables_; }

  Element apply(std::size_t connective, std::span<const Element> args) const {
    std::size_t idx = 0;
    for (auto a : args) idx = idx * size_ + a;
    return tables_[connective][idx];
  }

  Element apply(std::string_view name, std::initializer_list<Element> args) const {
    auto i = signature_.index_of(name);
    if (!i) throw SignatureMismatch("algebra has no connective '" + std::string(name) + "'");
    if (args.size() != signature_.connectives()[*i].arity) throw InvalidArgument("wrong number of arguments");
    for (auto a : args) {
      if (a >= size_) throw InvalidArgument("element out of range");
    }
    return apply(*i, std::span<const Element>(args.begin(), args.size()));
  }

  friend bool operator==(const FiniteAlgebra&, const FiniteAlgebra&) = default;

 private:
  Signature signature_;
  std::size_t size_;
  std::vector<std::vector<Element>> tables_;
};

// ---------------------------------------------------------------------------
// Evaluation.

/// A formula flattened to postfix over one algebra's table indices, so that
/// repeated evaluation under many valuations does no name lookups.
class CompiledFormula {
 public:
  CompiledFormula(const Signature& sig, const Formula& phi) {
    sig.require(phi);
    emit(sig, expand_derived(sig, phi));
  }

  /// Largest variable index used plus one.
  std::size_t variable_bound() const noexcept { return var_bound_; }

  Element run(const FiniteAlgebra& A, std::span<const Element> valuation, std::vector<Element>& stack) const {
    stack.clear();
    const std::size_t n = A.size();
    for (const auto& op : ops_) {
      if (op.is_var) {
        stack.push_back(valuation[op.index]);
        continue;
      }
      std::size_t idx = 0;
      const std::size_t base = stack.size() - op.arity;
      for (std::size_t k = base; k < stack.size(); ++k) idx = idx * n + stack[k];
      stack.resize(base);
      stack.push_back(A.table(op.index)[idx]);
    }
    return stack.back();
  }

  Element run(const FiniteAlgebra& A, std::span<const Element> valuation) const {
    std::vector<Element> stack;
    return run(A, valuation, stack);
  }

 private:
  struct Op {
    bool is_var;
    std::uint32_t index;
    std::uint32_t arity;
  };

  void emit(const Signature& sig, const Formula& phi) {
    if (phi.is_var()) {
      ops_.push_back({true, phi.var_index(), 0});
      var_bound_ = std::max<std::size_t>(var_bound_, phi.var_index() + 1);
      return;
    }
    for (const auto& a : phi.args()) emit(sig, a);
    ops_.push_back({false, static_cast<std::uint32_t>(*sig.index_of(phi.connective())),
                    static_cast<std::uint32_t>(phi.args().size())});
  }

  std::vector<Op> ops_;
  std::size_t var_bound_ = 0;
};

/// Homomorphic extension of v (v[i] is the value of x_i) applied to phi.
inline Element evaluate(const FiniteAlgebra& A, const Formula& phi, std::span<const Element> v) {
  if (!A.signature().admits(phi)) throw SignatureMismatch("formula " + to_string(phi) + " is not over the algebra's signature");
  CompiledFormula compiled(A.signature(), phi);
  if (compiled.variable_bound() > v.size()) {
    throw InvalidArgument("valuation has no value for x" + std::to_string(compiled.variable_bound() - 1));
  }
  for (std::size_t i = 0; i < compiled.variable_bound(); ++i) {
    if (v[i] >= A.size()) throw InvalidArgument("valuation value out of range");
  }
  return compiled.run(A, v);
}

inline Element evaluate(const FiniteAlgebra& A, const Formula& phi, const std::map<VarIndex, Element>& v) {
  std::vector<Element> dense(variable_bound(std::span<const Formula>(&phi, 1)), 0);
  for (auto x : variables(phi)) {
    auto it = v.find(x);
    if (it == v.end()) throw InvalidArgument("valuation has no value for x" + std::to_string(x));
    dense[x] = it->second;
  }
  return evaluate(A, phi, dense);
}

/// Calls fn(valuation) for every map {0..vars-1} -> {0..size-1} in
/// lexicographic order; stops early when fn returns false. Returns false iff
/// stopped early.
template <class Fn>
bool for_each_valuation(std::size_t size, std::size_t vars, Fn&& fn) {
  std::vector<Element> v(vars, 0);
  while (true) {
    if (!fn(std::span<const Element>(v))) return false;
    std::size_t k = vars;
    while (k > 0) {
      --k;
      if (++v[k] < size) break;
      v[k] = 0;
      if (k == 0) return true;
    }
    if (vars == 0) return true;
  }
}

/// The term operation of phi on A as a table over A^arity (row-major).
inline std::vector<Element> term_table(const FiniteAlgebra& A, const Formula& phi, std::size_t arity) {
  CompiledFormula compiled(A.signature(), phi);
  if (compiled.variable_bound() > arity) throw InvalidArgument("formula uses variables beyond the requested arity");
  std::vector<Element> out;
  out.reserve(int_pow(A.size(), arity));
  std::vector<Element> stack;
  for_each_valuation(A.size(), arity, [&](std::span<const Element> v) {
    out.push_back(compiled.run(A, v, stack));
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphisms.

inline void require_same_signature(const FiniteAlgebra& A, const FiniteAlgebra& B) {
  if (A.signature().connectives() != B.signature().connectives()) {
    throw SignatureMismatch("algebras have different signatures");
  }
}

inline bool is_homomorphism(const FiniteAlgebra& A, const FiniteAlgebra& B, std::span<const Element> h) {
  require_same_signature(A, B);
  if (h.size() != A.size()) return false;
  for (auto e : h) {
    if (e >= B.size()) return false;
  }
  const auto& conns = A.signature().connectives();
  std::vector<Element> mapped;
  for (std::size_t c = 0; c < conns.size(); ++c) {
    const std::size_t k = conns[c].arity;
    bool ok = for_each_valuation(A.size(), k, [&](std::span<const Element> args) {
      mapped.assign(k, 0);
      for (std::size_t i = 0; i < k; ++i) mapped[i] = h[args[i]];
      return h[A.apply(c, args)] == B.apply(c, mapped);
    });
    if (!ok) return false;
  }
  return true;
}

/// All homomorphisms A -> B as maps (h[a] = image of a), in lexicographic
/// order of the map table.
inline std::vector<std::vector<Element>> homomorphisms(const FiniteAlgebra& A, const FiniteAlgebra& B) {
  require_same_signature(A, B);
  const std::size_t n = A.size();
  const auto& conns = A.signature().connectives();

  // Each table entry c(args) = r constrains h; it can be tested once the
  // largest element among args and r has been assigned.
  struct Constraint {
    std::size_t connective;
    std::vector<Element> args;
    Element result;
  };
  std::vector<std::vector<Constraint>> ready_at(n);
  for (std::size_t c = 0; c < conns.size(); ++c) {
    for_each_valuation(n, conns[c].arity, [&](std::span<const Element> args) {
      Element r = A.apply(c, args);
      Element top = r;
      for (auto a : args) top = std::max(top, a);
      ready_at[top].push_back({c, std::vector<Element>(args.begin(), args.end()), r});
      return true;
    });
  }

  std::vector<std::vector<Element>> out;
  std::vector<Element> h(n, 0);
  std::vector<Element> mapped;
  std::function<void(std::size_t)> assign = [&](std::size_t pos) {
    if (pos == n) {
      out.push_back(h);
      return;
    }
    for (Element b = 0; b < B.size(); ++b) {
      h[pos] = b;
      bool ok = true;
      for (const auto& con : ready_at[pos]) {
        mapped.resize(con.args.size());
        for (std::size_t i = 0; i < con.args.size(); ++i) mapped[i] = h[con.args[i]];
        if (B.apply(con.connective, mapped) != h[con.result]) {
          ok = false;
          break;
        }
      }
      if (ok) assign(pos + 1);
    }
  };
  assign(0);
  return out;
}

inline std::optional<std::vector<Element>> find_isomorphism(const FiniteAlgebra& A, const FiniteAlgebra& B) {
  require_same_signature(A, B);
  if (A.size() != B.size()) return std::nullopt;
  for (auto& h : homomorphisms(A, B)) {
    std::vector<bool> hit(B.size(), false);
    for (auto e : h) hit[e] = true;
    if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) return std::move(h);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Subsets (filters) of a carrier.

class Subset {
 public:
  Subset() = default;
  explicit Subset(std::size_t carrier) : member_(carrier, false) {}
  Subset(std::size_t carrier, std::initializer_list<Element> elements) : Subset(carrier) {
    for (auto e : elements) insert(e);
  }
  Subset(std::size_t carrier, std::span<const Element> elements) : Subset(carrier) {
    for (auto e : elements) insert(e);
  }

  static Subset full(std::size_t carrier) {
    Subset s(carrier);
    s.member_.assign(carrier, true);
    return s;
  }

  std::size_t carrier_size() const noexcept { return member_.size(); }
  bool contains(Element e) const { return e < member_.size() && member_[e]; }

  void insert(Element e) {
    if (e >= member_.size()) throw InvalidArgument("element " + std::to_string(e) + " out of range");
    member_[e] = true;
  }

  std::size_t count() const { return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true)); }
  bool is_full() const { return count() == member_.size(); }

  std::vector<Element> elements() const {
    std::vector<Element> out;
    for (Element e = 0; e < member_.size(); ++e) {
      if (member_[e]) out.push_back(e);
    }
    return out;
  }

  bool includes(const Subset& other) const {
    for (Element e = 0; e < other.member_.size(); ++e) {
      if (other.member_[e] && !contains(e)) return false;
    }
    return true;
  }

  Subset intersect(const Subset& other) const {
    Subset out(member_.size());
    for (Element e = 0; e < member_.size(); ++e) out.member_[e] = member_[e] && other.contains(e);
    return out;
  }

  friend bool operator==(const Subset&, const Subset&) = default;

  /// Canonical order: by cardinality, then by sorted element list.
  friend bool operator<(const Subset& a, const Subset& b) {
    auto ca = a.count();
    auto cb = b.count();
    if (ca != cb) return ca < cb;
    return a.elements() < b.elements();
  }

 private:
  std::vector<bool> member_;
};

using Filter = Subset;

inline std::string to_string(const Subset& s) {
  std::string out = "{";
  bool first = true;
  for (auto e : s.elements()) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Congruences.

/// Equivalence relation on {0..n-1} stored as each element's least block
/// member, which makes equality structural.
class Congruence {
 public:
  Congruence() = default;

  /// Canonicalizes an arbitrary block labelling.
  static Congruence from_labels(std::span<const std::size_t> labels) {
    Congruence c;
    std::map<std::size_t, Element> first;
    c.rep_.resize(labels.size());
    for (Element e = 0; e < labels.size(); ++e) {
      auto [it, _] = first.emplace(labels[e], e);
      c.rep_[e] = it->second;
    }
    return c;
  }

  static Congruence identity(std::size_t n) {
    Congruence c;
    c.rep_.resize(n);
    std::iota(c.rep_.begin(), c.rep_.end(), Element{0});
    return c;
  }

  static Congruence total(std::size_t n) {
    Congruence c;
    c.rep_.assign(n, 0);
    return c;
  }

  std::size_t carrier_size() const noexcept { return rep_.size(); }
  Element representative(Element e) const { return rep_.at(e); }
  const std::vector<Element>& representatives() const noexcept { return rep_; }
  bool related(Element a, Element b) const { return rep_.at(a) == rep_.at(b); }

  std::size_t block_count() const {
    std::size_t n = 0;
    for (Element e = 0; e < rep_.size(); ++e) n += rep_[e] == e;
    return n;
  }

  bool is_identity() const { return block_count() == rep_.size(); }
  bool is_total() const { return block_count() <= 1; }

  /// Blocks ordered by least member.
  std::vector<std::vector<Element>> blocks() const {
    std::map<Element, std::vector<Element>> by_rep;
    for (Element e = 0; e < rep_.size(); ++e) by_rep[rep_[e]].push_back(e);
    std::vector<std::vector<Element>> out;
    for (auto& [_, b] : by_rep) out.push_back(std::move(b));
    return out;
  }

  /// This relation is contained in `other`.
  bool refines(const Congruence& other) const {
    for (Element e = 0; e < rep_.size(); ++e) {
      if (!other.related(e, rep_[e])) return false;
    }
    return true;
  }

  Congruence meet(const Congruence& other) const {
    std::vector<std::size_t> labels(rep_.size());
    for (Element e = 0; e < rep_.size(); ++e) labels[e] = rep_[e] * rep_.size() + other.rep_.at(e);
    return from_labels(labels);
  }

  friend bool operator==(const Congruence&, const Congruence&) = default;

 private:
  std::vector<Element> rep_;
};

inline std::string to_string(const Congruence& c) {
  std::string out = "{";
  bool first_block = true;
  for (const auto& b : c.blocks()) {
    if (!first_block) out += ",";
    out += "{";
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(b[i]);
    }
    out += "}";
    first_block = false;
  }
  return out + "}";
}

/// The partition is preserved by every operation.
inline bool is_compatible(const FiniteAlgebra& A, const Congruence& theta) {
  if (theta.carrier_size() != A.size()) return false;
  const auto& conns = A.signature().connectives();
  std::vector<Element> other;
  for (std::size_t c = 0; c < conns.size(); ++c) {
    const std::size_t k = conns[c].arity;
    bool ok = for_each_valuation(A.size(), k, [&](std::span<const Element> args) {
      // Replacing each argument by its representative must not change the block.
      other.assign(args.begin(), args.end());
      for (auto& a : other) a = theta.representative(a);
      return theta.related(A.apply(c, args), A.apply(c, other));
    });
    if (!ok) return false;
  }
  return true;
}

/// (a in F and a ~ b) implies b in F.
inline bool is_compatible_with(const Congruence& theta, const Subset& F) {
  for (Element e = 0; e < theta.carrier_size(); ++e) {
    if (F.contains(e) != F.contains(theta.representative(e))) return false;
  }
  return true;
}

/// Calls fn(t) for every basic translation t(x) = c(e0..x..ek-1) of A, given
/// as a table of length |A|.
template <class Fn>
void for_each_basic_translation(const FiniteAlgebra& A, Fn&& fn) {
  const auto& conns = A.signature().connectives();
  std::vector<Element> t(A.size());
  std::vector<Element> args;
  for (std::size_t c = 0; c < conns.size(); ++c) {
    const std::size_t k = conns[c].arity;
    for (std::size_t pos = 0; pos < k; ++pos) {
      for_each_valuation(A.size(), k - 1, [&](std::span<const Element> params) {
        args.assign(k, 0);
        for (std::size_t i = 0, j = 0; i < k; ++i) {
          if (i != pos) args[i] = params[j++];
        }
        for (Element x = 0; x < A.size(); ++x) {
          args[pos] = x;
          t[x] = A.apply(c, args);
        }
        fn(std::span<const Element>(t));
        return true;
      });
    }
  }
}

/// All unary polynomial functions of A that arise from the identity by
/// repeatedly applying basic translations, generated breadth-first until no
/// new function appears. Constant polynomials are omitted since they never
/// separate elements.
inline std::vector<std::vector<Element>> unary_polynomials(const FiniteAlgebra& A, std::size_t limit = 2'000'000) {
  std::vector<std::vector<Element>> translations;
  for_each_basic_translation(A, [&](std::span<const Element> t) { translations.emplace_back(t.begin(), t.end()); });
  std::sort(translations.begin(), translations.end());
  translations.erase(std::unique(translations.begin(), translations.end()), translations.end());

  struct VecHash {
    std::size_t operator()(const std::vector<Element>& v) const noexcept {
      std::size_t h = 1469598103934665603ULL;
      for (auto e : v) h = (h ^ e) * 1099511628211ULL;
      return h;
    }
  };
  std::vector<Element> id(A.size());
  std::iota(id.begin(), id.end(), Element{0});
  std::vector<std::vector<Element>> found{id};
  std::unordered_set<std::vector<Element>, VecHash> seen{id};
  std::vector<Element> next(A.size());
  for (std::size_t head = 0; head < found.size(); ++head) {
    for (const auto& t : translations) {
      for (Element x = 0; x < A.size(); ++x) next[x] = t[found[head][x]];
      if (seen.insert(next).second) {
        found.push_back(next);
        if (found.size() > limit) throw BoundExceeded("unary polynomial enumeration exceeded its limit");
      }
    }
  }
  return found;
}

/// Least congruence containing `pairs`.
inline Congruence congruence_generated(const FiniteAlgebra& A, std::span<const std::pair<Element, Element>> pairs) {
  const std::size_t n = A.size();
  std::vector<Element> parent(n);
  std::iota(parent.begin(), parent.end(), Element{0});
  std::function<Element(Element)> find = [&](Element x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](Element a, Element b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent[a] = b;
    return true;
  };
  for (auto [a, b] : pairs) {
    if (a >= n || b >= n) throw InvalidArgument("pair element out of range");
    unite(a, b);
  }
  std::vector<std::vector<Element>> translations;
  for_each_basic_translation(A, [&](std::span<const Element> t) { translations.emplace_back(t.begin(), t.end()); });
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : translations) {
      for (Element x = 0; x < n; ++x) changed = unite(t[x], t[find(x)]) || changed;
    }
  }
  std::vector<std::size_t> labels(n);
  for (Element e = 0; e < n; ++e) labels[e] = find(e);
  return Congruence::from_labels(labels);
}

inline Congruence congruence_generated(const FiniteAlgebra& A, std::initializer_list<std::pair<Element, Element>> pairs) {
  return congruence_generated(A, std::span<const std::pair<Element, Element>>(pairs.begin(), pairs.size()));
}

/// Every compatible congruence, enumerated through restricted growth strings.
inline std::vector<Congruence> all_congruences(const FiniteAlgebra& A, std::size_t max_size = 10) {
  if (A.size() > max_size) throw BoundExceeded("congruence enumeration limited to carriers of size " + std::to_string(max_size));
  const std::size_t n = A.size();
  std::vector<Congruence> out;
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t blocks) {
    if (pos == n) {
      auto theta = Congruence::from_labels(rgs);
      if (is_compatible(A, theta)) out.push_back(std::move(theta));
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      rgs[pos] = b;
      rec(pos + 1, std::max(blocks, b + 1));
    }
  };
  rec(1, 1);
  return out;
}

struct Quotient {
  FiniteAlgebra algebra;
  /// Element of A to its block index.
  std::vector<Element> map;
};

/// A/theta; blocks are numbered by ascending least representative.
inline Quotient quotient(const FiniteAlgebra& A, const Congruence& theta) {
  if (!is_compatible(A, theta)) throw InvalidArgument("partition is not a congruence of the algebra");
  std::vector<Element> reps;
  std::vector<Element> block_of(A.size());
  for (Element e = 0; e < A.size(); ++e) {
    if (theta.representative(e) == e) reps.push_back(e);
  }
  for (Element e = 0; e < A.size(); ++e) {
    block_of[e] = static_cast<Element>(std::lower_bound(reps.begin(), reps.end(), theta.representative(e)) - reps.begin());
  }
  const std::size_t m = reps.size();
  std::vector<std::vector<Element>> tables;
  const auto& conns = A.signature().connectives();
  std::vector<Element> lifted;
  for (std::size_t c = 0; c < conns.size(); ++c) {
    std::vector<Element> table;
    for_each_valuation(m, conns[c].arity, [&](std::span<const Element> args) {
      lifted.assign(args.size(), 0);
      for (std::size_t i = 0; i < args.size(); ++i) lifted[i] = reps[args[i]];
      table.push_back(block_of[A.apply(c, lifted)]);
      return true;
    });
    tables.push_back(std::move(table));
  }
  return {FiniteAlgebra(A.signature(), m, std::move(tables)), std::move(block_of)};
}

/// Largest congruence compatible with F: a ~ b iff p(a) in F <=> p(b) in F
/// for every unary polynomial p.
inline Congruence leibniz(const FiniteAlgebra& A, const Subset& F) {
  if (F.carrier_size() != A.size()) throw InvalidArgument("filter is not a subset of the carrier");
  const auto polys = unary_polynomials(A);
  std::vector<std::vector<bool>> profile(A.size(), std::vector<bool>(polys.size()));
  for (Element e = 0; e < A.size(); ++e) {
    for (std::size_t p = 0; p < polys.size(); ++p) profile[e][p] = F.contains(polys[p][e]);
  }
  std::vector<std::size_t> labels(A.size());
  for (Element e = 0; e < A.size(); ++e) {
    labels[e] = e;
    for (Element d = 0; d < e; ++d) {
      if (profile[d] == profile[e]) {
        labels[e] = labels[d];
        break;
      }
    }
  }
  return Congruence::from_labels(labels);
}

inline bool is_reduced(const FiniteAlgebra& A, const Subset& F) { return leibniz(A, F).is_identity(); }

struct ReducedMatrix {
  FiniteAlgebra algebra;
  Filter filter;
  /// Element of the original algebra to its class.
  std::vector<Element> map;
};

/// Quotient by the Leibniz congruence together with the image filter.
inline ReducedMatrix reduce_matrix(const FiniteAlgebra& A, const Subset& F) {
  auto q = quotient(A, leibniz(A, F));
  Filter image(q.algebra.size());
  for (auto e : F.elements()) image.insert(q.map[e]);
  return {std::move(q.algebra), std::move(image), std::move(q.map)};
}

}  // namespace aal
