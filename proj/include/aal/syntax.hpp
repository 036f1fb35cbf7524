#pragma once

// Signatures, formulas over the fixed variable set x0, x1, ..., and flexible
// morphisms between signatures.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aal/error.hpp"

namespace aal {

using VarIndex = std::uint32_t;

class Formula {
 public:
  static Formula var(VarIndex index) {
    auto node = std::make_shared<Node>();
    node->var = index;
    node->depth = 1;
    node->size = 1;
    node->hash = std::hash<std::uint64_t>{}(0x9e3779b97f4a7c15ULL ^ index);
    return Formula(std::move(node));
  }

  static Formula app(std::string connective, std::vector<Formula> args = {}) {
    auto node = std::make_shared<Node>();
    node->var = kNoVar;
    std::size_t h = std::hash<std::string>{}(connective);
    std::uint32_t depth = 0;
    std::uint32_t size = 1;
    for (const auto& a : args) {
      h = h * 1000003u ^ a.hash();
      depth = std::max(depth, a.node_->depth);
      size += a.node_->size;
    }
    node->connective = std::move(connective);
    node->args = std::move(args);
    node->depth = depth + 1;
    node->size = size;
    node->hash = h;
    return Formula(std::move(node));
  }

  bool is_var() const noexcept { return node_->var != kNoVar; }
  VarIndex var_index() const noexcept { return node_->var; }
  const std::string& connective() const noexcept { return node_->connective; }
  const std::vector<Formula>& args() const noexcept { return node_->args; }

  /// Height of the tree; a variable has depth 1.
  std::size_t depth() const noexcept { return node_->depth; }
  /// Number of nodes.
  std::size_t size() const noexcept { return node_->size; }
  std::size_t hash() const noexcept { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b) noexcept {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->var != b.node_->var) return false;
    if (a.is_var()) return true;
    return a.node_->connective == b.node_->connective && a.node_->args == b.node_->args;
  }

  /// Canonical total order: variables first (by index), then applications by
  /// connective name and arguments.
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.is_var()) return a.var_index() <=> b.var_index();
    if (auto c = a.connective().compare(b.connective()); c != 0) return c <=> 0;
    const auto& x = a.args();
    const auto& y = b.args();
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
      if (auto c = x[i] <=> y[i]; c != 0) return c;
    }
    return x.size() <=> y.size();
  }

 private:
  static constexpr VarIndex kNoVar = static_cast<VarIndex>(-1);

  struct Node {
    VarIndex var = kNoVar;
    std::string connective;
    std::vector<Formula> args;
    std::size_t hash = 0;
    std::uint32_t depth = 1;
    std::uint32_t size = 1;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

inline void collect_variables(const Formula& phi, std::set<VarIndex>& out) {
  if (phi.is_var()) {
    out.insert(phi.var_index());
    return;
  }
  for (const auto& a : phi.args()) collect_variables(a, out);
}

inline std::set<VarIndex> variables(const Formula& phi) {
  std::set<VarIndex> out;
  collect_variables(phi, out);
  return out;
}

inline std::set<VarIndex> variables(std::span<const Formula> phis) {
  std::set<VarIndex> out;
  for (const auto& p : phis) collect_variables(p, out);
  return out;
}

/// One more than the largest variable index occurring, 0 for none.
inline std::size_t variable_bound(std::span<const Formula> phis) {
  auto vs = variables(phis);
  return vs.empty() ? 0 : static_cast<std::size_t>(*vs.rbegin()) + 1;
}

inline void print(std::ostream& os, const Formula& phi) {
  if (phi.is_var()) {
    os << 'x' << phi.var_index();
    return;
  }
  os << phi.connective() << '(';
  for (std::size_t i = 0; i < phi.args().size(); ++i) {
    if (i) os << ',';
    print(os, phi.args()[i]);
  }
  os << ')';
}

inline std::string to_string(const Formula& phi) {
  std::string out;
  struct Rec {
    static void go(std::string& s, const Formula& f) {
      if (f.is_var()) {
        s += 'x';
        s += std::to_string(f.var_index());
        return;
      }
      s += f.connective();
      s += '(';
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) s += ',';
        go(s, f.args()[i]);
      }
      s += ')';
    }
  };
  Rec::go(out, phi);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Formula& phi) {
  print(os, phi);
  return os;
}

/// Simultaneous substitution; unmapped variables stay fixed.
using Substitution = std::map<VarIndex, Formula>;

inline Formula substitute(const Formula& phi, const Substitution& sigma) {
  if (phi.is_var()) {
    auto it = sigma.find(phi.var_index());
    return it == sigma.end() ? phi : it->second;
  }
  std::vector<Formula> args;
  args.reserve(phi.args().size());
  bool changed = false;
  for (const auto& a : phi.args()) {
    args.push_back(substitute(a, sigma));
    changed = changed || !(args.back() == a);
  }
  return changed ? Formula::app(phi.connective(), std::move(args)) : phi;
}

/// Replaces x_i by args[i] for i < args.size(); other variables stay fixed.
inline Formula instantiate(const Formula& phi, std::span<const Formula> args) {
  if (phi.is_var()) {
    return phi.var_index() < args.size() ? args[phi.var_index()] : phi;
  }
  std::vector<Formula> out;
  out.reserve(phi.args().size());
  for (const auto& a : phi.args()) out.push_back(instantiate(a, args));
  return Formula::app(phi.connective(), std::move(out));
}

// ---------------------------------------------------------------------------

struct Connective {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Connective&, const Connective&) = default;
};

/// A connective defined by a formula over the primitive connectives in the
/// variables x0..x_{arity-1}, e.g. iff(x0,x1) := and(imp(x0,x1),imp(x1,x0)).
struct DerivedConnective {
  std::string name;
  std::size_t arity = 0;
  Formula definition = Formula::var(0);

  friend bool operator==(const DerivedConnective&, const DerivedConnective&) = default;
};

inline bool is_connective_name(std::string_view name) {
  if (name.empty() || !(name[0] >= 'a' && name[0] <= 'z')) return false;
  // A name must not lex as a variable token.
  if (name[0] == 'x' && name.size() > 1 &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; });
}

class Signature {
 public:
  Signature() = default;

  explicit Signature(std::vector<Connective> connectives, std::vector<DerivedConnective> derived = {})
      : connectives_(std::move(connectives)), derived_(std::move(derived)) {
    std::set<std::string> seen;
    for (const auto& c : connectives_) {
      if (!is_connective_name(c.name)) throw InvalidArgument("invalid connective name '" + c.name + "'");
      if (!seen.insert(c.name).second) throw InvalidArgument("duplicate connective '" + c.name + "'");
    }
    for (const auto& d : derived_) {
      if (!is_connective_name(d.name)) throw InvalidArgument("invalid connective name '" + d.name + "'");
      if (!seen.insert(d.name).second) throw InvalidArgument("duplicate connective '" + d.name + "'");
      if (!over_primitives(d.definition)) {
        throw InvalidArgument("definition of '" + d.name + "' must use primitive connectives only");
      }
      for (auto v : variables(d.definition)) {
        if (v >= d.arity) throw InvalidArgument("definition of '" + d.name + "' uses x" + std::to_string(v));
      }
    }
  }

  /// {neg/1, imp/2, and/2, or/2} with iff/2 derived as the conjunction of
  /// both implications.
  static Signature classical() {
    auto x0 = Formula::var(0);
    auto x1 = Formula::var(1);
    auto def = Formula::app("and", {Formula::app("imp", {x0, x1}), Formula::app("imp", {x1, x0})});
    return Signature({{"neg", 1}, {"imp", 2}, {"and", 2}, {"or", 2}}, {{"iff", 2, def}});
  }

  const std::vector<Connective>& connectives() const noexcept { return connectives_; }
  const std::vector<DerivedConnective>& derived() const noexcept { return derived_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < connectives_.size(); ++i) {
      if (connectives_[i].name == name) return i;
    }
    return std::nullopt;
  }

  const DerivedConnective* find_derived(std::string_view name) const {
    for (const auto& d : derived_) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }

  std::optional<std::size_t> arity_of(std::string_view name) const {
    if (auto i = index_of(name)) return connectives_[*i].arity;
    if (const auto* d = find_derived(name)) return d->arity;
    return std::nullopt;
  }

  bool has_primitive(std::string_view name, std::size_t arity) const {
    auto i = index_of(name);
    return i && connectives_[*i].arity == arity;
  }

  /// True iff every connective of phi is declared (primitive or derived)
  /// with the arity it is used at.
  bool admits(const Formula& phi) const {
    if (phi.is_var()) return true;
    auto ar = arity_of(phi.connective());
    if (!ar || *ar != phi.args().size()) return false;
    return std::all_of(phi.args().begin(), phi.args().end(), [this](const Formula& a) { return admits(a); });
  }

  void require(const Formula& phi) const {
    if (!admits(phi)) throw SignatureMismatch("formula " + to_string(phi) + " is not over the signature");
  }

  /// Primitive connectives of `other` are primitives here with equal arity.
  bool includes_primitives_of(const Signature& other) const {
    return std::all_of(other.connectives_.begin(), other.connectives_.end(),
                       [this](const Connective& c) { return has_primitive(c.name, c.arity); });
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  bool over_primitives(const Formula& phi) const {
    if (phi.is_var()) return true;
    if (!has_primitive(phi.connective(), phi.args().size())) return false;
    return std::all_of(phi.args().begin(), phi.args().end(), [this](const Formula& a) { return over_primitives(a); });
  }

  std::vector<Connective> connectives_;
  std::vector<DerivedConnective> derived_;
};

/// Unfolds every derived connective into its definition.
inline Formula expand_derived(const Signature& sig, const Formula& phi) {
  if (phi.is_var()) return phi;
  std::vector<Formula> args;
  args.reserve(phi.args().size());
  for (const auto& a : phi.args()) args.push_back(expand_derived(sig, a));
  if (const auto* d = sig.find_derived(phi.connective())) return instantiate(d->definition, args);
  return Formula::app(phi.connective(), std::move(args));
}

// ---------------------------------------------------------------------------
// Parsing.
//
//   formula := var | name "(" formula ("," formula)* ")"
//   var     := "x" [0-9]+
//   name    := [a-z][a-z0-9_]*
//
// Whitespace between tokens is ignored. A name immediately followed by "("
// with no arguments is accepted for nullary connectives: "c()".

namespace detail {

class Parser {
 public:
  Parser(const Signature& sig, std::string_view text) : sig_(sig), text_(text) {}

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail(ParseError::Kind::Syntax, "trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, const std::string& what) const { throw ParseError(kind, pos_, what); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool name_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; }

  Formula formula() {
    skip_ws();
    if (pos_ >= text_.size()) fail(ParseError::Kind::Syntax, "unexpected end of input");
    const std::size_t start = pos_;
    if (!(text_[pos_] >= 'a' && text_[pos_] <= 'z')) fail(ParseError::Kind::Syntax, "expected a formula");
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    std::string_view word = text_.substr(start, pos_ - start);

    if (word.size() > 1 && word[0] == 'x' &&
        std::all_of(word.begin() + 1, word.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      std::uint64_t v = 0;
      for (char c : word.substr(1)) {
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
        if (v > 0xffffffffULL) {
          pos_ = start;
          fail(ParseError::Kind::Syntax, "variable index too large");
        }
      }
      return Formula::var(static_cast<VarIndex>(v));
    }

    auto arity = sig_.arity_of(word);
    if (!arity) {
      pos_ = start;
      fail(ParseError::Kind::UnknownConnective, "unknown connective '" + std::string(word) + "'");
    }
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '(') fail(ParseError::Kind::Syntax, "expected '('");
    ++pos_;
    std::vector<Formula> args;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ')') {
      ++pos_;
    } else {
      while (true) {
        args.push_back(formula());
        skip_ws();
        if (pos_ >= text_.size()) fail(ParseError::Kind::Syntax, "unexpected end of input");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail(ParseError::Kind::Syntax, "expected ',' or ')'");
      }
    }
    if (args.size() != *arity) {
      std::size_t at = start;
      std::swap(at, pos_);
      fail(ParseError::Kind::ArityMismatch, "'" + std::string(word) + "' expects " + std::to_string(*arity) +
                                                " argument(s), got " + std::to_string(args.size()));
    }
    return Formula::app(std::string(word), std::move(args));
  }

  const Signature& sig_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(const Signature& sig, std::string_view text) { return detail::Parser(sig, text).parse(); }

/// Splits on ';' and parses each non-blank piece.
inline std::vector<Formula> parse_formula_list(const Signature& sig, std::string_view text) {
  std::vector<Formula> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    auto piece = text.substr(start, end - start);
    if (piece.find_first_not_of(" \t\r\n") != std::string_view::npos) out.push_back(parse_formula(sig, piece));
    start = end + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Sends each n-ary primitive connective of the source to a target formula in
/// x0..x_{n-1}.
class FlexibleMorphism {
 public:
  FlexibleMorphism(Signature source, Signature target, std::vector<Formula> assignment)
      : source_(std::move(source)), target_(std::move(target)), assignment_(std::move(assignment)) {
    if (assignment_.size() != source_.connectives().size()) {
      throw InvalidArgument("morphism needs one formula per source connective");
    }
    for (std::size_t i = 0; i < assignment_.size(); ++i) {
      const auto& c = source_.connectives()[i];
      if (!target_.admits(assignment_[i])) {
        throw SignatureMismatch("image of '" + c.name + "' is not a target formula");
      }
      for (auto v : variables(assignment_[i])) {
        if (v >= c.arity) {
          throw InvalidArgument("image of '" + c.name + "' uses x" + std::to_string(v) + " beyond its arity");
        }
      }
    }
    for (const auto& d : source_.derived()) {
      const auto* t = target_.find_derived(d.name);
      keep_derived_.push_back(t != nullptr && t->arity == d.arity &&
                              extend_primitive(expand_derived(source_, d.definition)) == t->definition);
    }
  }

  static FlexibleMorphism identity(const Signature& sig) {
    std::vector<Formula> images;
    for (const auto& c : sig.connectives()) {
      std::vector<Formula> args;
      for (std::size_t i = 0; i < c.arity; ++i) args.push_back(Formula::var(static_cast<VarIndex>(i)));
      images.push_back(Formula::app(c.name, std::move(args)));
    }
    return FlexibleMorphism(sig, sig, std::move(images));
  }

  const Signature& source() const noexcept { return source_; }
  const Signature& target() const noexcept { return target_; }
  const std::vector<Formula>& assignment() const noexcept { return assignment_; }

  const Formula& image(std::string_view connective) const {
    auto i = source_.index_of(connective);
    if (!i) throw SignatureMismatch("'" + std::string(connective) + "' is not a source connective");
    return assignment_[*i];
  }

  /// Unique extension to all source formulas: variables are fixed and
  /// c(a0..an-1) goes to image(c)[x_i := extension(a_i)]. A derived
  /// connective is kept when the target derives the same connective with a
  /// matching definition, and unfolded otherwise.
  Formula extend(const Formula& phi) const {
    if (phi.is_var()) return phi;
    std::vector<Formula> args;
    args.reserve(phi.args().size());
    for (const auto& a : phi.args()) args.push_back(extend(a));
    if (auto i = source_.index_of(phi.connective())) return instantiate(assignment_[*i], args);
    for (std::size_t k = 0; k < source_.derived().size(); ++k) {
      const auto& d = source_.derived()[k];
      if (d.name != phi.connective()) continue;
      if (keep_derived_[k]) return Formula::app(d.name, std::move(args));
      return instantiate(extend(d.definition), args);
    }
    throw SignatureMismatch("formula " + to_string(phi) + " is not over the source signature");
  }

  friend bool operator==(const FlexibleMorphism& a, const FlexibleMorphism& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.assignment_ == b.assignment_;
  }

 private:
  Formula extend_primitive(const Formula& phi) const {
    if (phi.is_var()) return phi;
    std::vector<Formula> args;
    for (const auto& a : phi.args()) args.push_back(extend_primitive(a));
    return instantiate(assignment_[*source_.index_of(phi.connective())], args);
  }

  Signature source_;
  Signature target_;
  std::vector<Formula> assignment_;
  std::vector<bool> keep_derived_;
};

inline Formula extend_morphism(const FlexibleMorphism& f, const Formula& phi) { return f.extend(phi); }

/// (g . f)(c) = g-extension of f(c).
inline FlexibleMorphism compose_morphisms(const FlexibleMorphism& g, const FlexibleMorphism& f) {
  if (!(f.target() == g.source())) throw SignatureMismatch("cannot compose: target of f differs from source of g");
  std::vector<Formula> images;
  images.reserve(f.assignment().size());
  for (const auto& img : f.assignment()) images.push_back(g.extend(img));
  return FlexibleMorphism(f.source(), g.target(), std::move(images));
}

// ---------------------------------------------------------------------------
// Enumeration and sampling.

/// All formulas over the primitive connectives with variables x0..x_{vars-1}
/// and depth <= depth, ordered by depth, then connective order, then argument
/// tuples in lexicographic order of earlier positions.
inline std::vector<Formula> enumerate_formulas(const Signature& sig, std::size_t vars, std::size_t depth) {
  std::vector<Formula> all;
  if (depth == 0) return all;
  for (std::size_t v = 0; v < vars; ++v) all.push_back(Formula::var(static_cast<VarIndex>(v)));
  for (const auto& c : sig.connectives()) {
    if (c.arity == 0) all.push_back(Formula::app(c.name));
  }
  std::size_t prev_level_start = 0;
  for (std::size_t d = 2; d <= depth; ++d) {
    const std::size_t known = all.size();
    for (const auto& c : sig.connectives()) {
      if (c.arity == 0) continue;
      // Odometer over argument tuples; a tuple is new at this depth iff it
      // uses at least one formula from the previous level.
      std::vector<std::size_t> idx(c.arity, 0);
      bool more = true;
      while (more) {
        if (std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= prev_level_start; })) {
          std::vector<Formula> args;
          args.reserve(c.arity);
          for (auto i : idx) args.push_back(all[i]);
          all.push_back(Formula::app(c.name, std::move(args)));
        }
        more = false;
        for (std::size_t k = c.arity; k-- > 0;) {
          if (++idx[k] < known) {
            more = true;
            break;
          }
          idx[k] = 0;
        }
      }
    }
    prev_level_start = known;
  }
  return all;
}

/// Deterministic 64-bit generator with a portable bounded draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

/// Random formula of depth <= max_depth over the primitive connectives.
inline Formula random_formula(const Signature& sig, std::size_t vars, std::size_t max_depth, Rng& rng) {
  if (max_depth <= 1 || sig.connectives().empty() || rng.below(4) == 0) {
    return Formula::var(static_cast<VarIndex>(rng.below(std::max<std::size_t>(vars, 1))));
  }
  const auto& c = sig.connectives()[rng.below(sig.connectives().size())];
  std::vector<Formula> args;
  for (std::size_t i = 0; i < c.arity; ++i) args.push_back(random_formula(sig, vars, max_depth - 1, rng));
  return Formula::app(c.name, std::move(args));
}

}  // namespace aal
