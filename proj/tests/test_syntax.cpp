#include <gtest/gtest.h>

#include "aal/syntax.hpp"

using namespace aal;

namespace {
const Signature kSig = Signature::classical();
const Signature kNegImp({{"neg", 1}, {"imp", 2}});
Formula P(const Signature& s, const char* t) { return parse_formula(s, t); }
Formula x(VarIndex i) { return Formula::var(i); }
}  // namespace

TEST(Parse, BaseCases) {
  EXPECT_EQ(P(kSig, "x0"), x(0));
  EXPECT_EQ(P(kSig, " imp ( x0 ,\n x1 ) "), Formula::app("imp", {x(0), x(1)}));
  EXPECT_EQ(P(kSig, "x12").var_index(), 12u);
}

TEST(Parse, Errors) {
  auto kind = [](const char* text) {
    try {
      parse_formula(kNegImp, text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for " << text;
    return ParseError::Kind::Syntax;
  };
  EXPECT_EQ(kind("imp(x0)"), ParseError::Kind::ArityMismatch);
  EXPECT_EQ(kind("and(x0,x1)"), ParseError::Kind::UnknownConnective);
  EXPECT_EQ(kind("imp(x0,x1"), ParseError::Kind::Syntax);
  EXPECT_EQ(kind("imp(x0,x1) x2"), ParseError::Kind::Syntax);
  EXPECT_EQ(kind(""), ParseError::Kind::Syntax);
  EXPECT_EQ(kind("y0"), ParseError::Kind::UnknownConnective);
  EXPECT_EQ(kind("x"), ParseError::Kind::UnknownConnective);
  EXPECT_EQ(kind("imp(x0,x1"), ParseError::Kind::Syntax);
  try {
    parse_formula(kNegImp, "imp(x0,,x1)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 7u);
  }
}

TEST(Parse, DerivedConnectiveIsAccepted) {
  auto f = P(kSig, "iff(x0,x1)");
  EXPECT_EQ(f.connective(), "iff");
  EXPECT_EQ(expand_derived(kSig, f), P(kSig, "and(imp(x0,x1),imp(x1,x0))"));
}

TEST(Parse, List) {
  auto fs = parse_formula_list(kSig, "x0; imp(x0,x1) ;");
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[1], P(kSig, "imp(x0,x1)"));
  EXPECT_TRUE(parse_formula_list(kSig, "").empty());
}

TEST(Parse, RoundTripExhaustive) {
  for (const auto& phi : enumerate_formulas(kSig, 2, 3)) ASSERT_EQ(parse_formula(kSig, to_string(phi)), phi);
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    auto phi = random_formula(kSig, 4, 6, rng);
    ASSERT_EQ(parse_formula(kSig, to_string(phi)), phi);
  }
}

TEST(Substitute, Examples) {
  EXPECT_EQ(substitute(x(0), {{0, x(0)}}), x(0));
  EXPECT_EQ(substitute(P(kSig, "imp(x0,x1)"), {{0, x(1)}, {1, x(0)}}), P(kSig, "imp(x1,x0)"));
  EXPECT_EQ(substitute(P(kSig, "neg(x0)"), {{0, P(kSig, "neg(x0)")}}), P(kSig, "neg(neg(x0))"));
  EXPECT_EQ(substitute(P(kSig, "imp(x0,x3)"), {{0, x(2)}}), P(kSig, "imp(x2,x3)"));
}

TEST(Signature, Validation) {
  EXPECT_THROW(Signature({{"neg", 1}, {"neg", 2}}), InvalidArgument);
  EXPECT_THROW(Signature({{"Neg", 1}}), InvalidArgument);
  EXPECT_THROW(Signature({{"x1", 1}}), InvalidArgument);
  EXPECT_THROW(Signature({{"imp", 2}}, {{"top", 0, P(kSig, "imp(x0,x0)")}}), InvalidArgument);
  EXPECT_NO_THROW(Signature({{"imp", 2}}, {{"top", 1, P(kSig, "imp(x0,x0)")}}));
}

TEST(Morphism, Examples) {
  const auto id = FlexibleMorphism::identity(kSig);
  for (const auto& phi : enumerate_formulas(kSig, 2, 3)) ASSERT_EQ(extend_morphism(id, phi), phi);
  FlexibleMorphism f(kNegImp, kNegImp, {P(kNegImp, "neg(neg(x0))"), P(kNegImp, "imp(x0,x1)")});

  EXPECT_EQ(f.extend(P(kNegImp, "neg(x0)")), P(kNegImp, "neg(neg(x0))"));
  EXPECT_EQ(f.extend(P(kNegImp, "neg(neg(x0))")), P(kNegImp, "neg(neg(neg(neg(x0))))"));
  EXPECT_EQ(f.extend(x(3)), x(3));
  EXPECT_EQ(compose_morphisms(f, f).image("neg"), P(kNegImp, "neg(neg(neg(neg(x0))))"));
  EXPECT_EQ(compose_morphisms(FlexibleMorphism::identity(kNegImp), f), f);
  EXPECT_EQ(compose_morphisms(f, FlexibleMorphism::identity(kNegImp)), f);
  EXPECT_THROW(compose_morphisms(f, id), SignatureMismatch);
}

TEST(Morphism, Validation) {
  EXPECT_THROW(FlexibleMorphism(kNegImp, kNegImp, {x(0)}), InvalidArgument);
  EXPECT_THROW(FlexibleMorphism(kNegImp, kNegImp, {x(1), x(0)}), InvalidArgument);
  EXPECT_THROW(FlexibleMorphism(kNegImp, kNegImp, {P(kSig, "and(x0,x0)"), x(0)}), SignatureMismatch);
}

TEST(Morphism, DerivedConnectives) {
  // Identity keeps iff; a morphism that moves imp unfolds it.
  const auto id = FlexibleMorphism::identity(kSig);
  EXPECT_EQ(id.extend(P(kSig, "iff(x0,x1)")), P(kSig, "iff(x0,x1)"));
  FlexibleMorphism g(kSig, kSig,
                     {P(kSig, "neg(x0)"), P(kSig, "or(neg(x0),x1)"), P(kSig, "and(x0,x1)"), P(kSig, "or(x0,x1)")});
  EXPECT_EQ(g.extend(P(kSig, "iff(x0,x1)")), P(kSig, "and(or(neg(x0),x1),or(neg(x1),x0))"));
}

// Oracle: extension computed directly from the two clauses.
namespace {
Formula naive_extend(const FlexibleMorphism& f, const Formula& phi) {
  if (phi.is_var()) return phi;
  Substitution s;
  for (std::size_t i = 0; i < phi.args().size(); ++i) s.emplace(static_cast<VarIndex>(i), naive_extend(f, phi.args()[i]));
  return substitute(f.image(phi.connective()), s);
}
}  // namespace

TEST(Morphism, CompositionAndStructuralityExhaustive) {
  FlexibleMorphism f(kNegImp, kNegImp, {P(kNegImp, "neg(neg(x0))"), P(kNegImp, "imp(neg(x1),x0)")});
  FlexibleMorphism g(kNegImp, kNegImp, {P(kNegImp, "imp(x0,neg(x0))"), P(kNegImp, "imp(x1,imp(x0,x1))")});
  const auto gf = compose_morphisms(g, f);
  const Substitution sigma{{0, P(kNegImp, "imp(x1,x2)")}, {1, P(kNegImp, "neg(x0)")}, {2, x(0)}};
  Substitution f_sigma;
  for (const auto& [k, v] : sigma) f_sigma.emplace(k, f.extend(v));
  const auto all = enumerate_formulas(kNegImp, 3, 4);
  ASSERT_EQ(all.size(), 59295u);
  for (const auto& phi : all) {
    const auto fphi = f.extend(phi);
    ASSERT_EQ(fphi, naive_extend(f, phi));
    ASSERT_EQ(gf.extend(phi), g.extend(fphi));
    for (auto v : variables(fphi)) ASSERT_TRUE(variables(phi).count(v));
    ASSERT_EQ(f.extend(substitute(phi, sigma)), substitute(fphi, f_sigma));
  }
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_formulas(kSig, 2, 1).size(), 2u);
  EXPECT_EQ(enumerate_formulas(kSig, 2, 2).size(), 16u);
  EXPECT_EQ(enumerate_formulas(kSig, 2, 3).size(), 786u);
  EXPECT_EQ(enumerate_formulas(kSig, 3, 3).size(), 3303u);
  // Every enumerated formula is distinct and within bounds.
  auto fs = enumerate_formulas(kSig, 2, 3);
  std::set<Formula> uniq(fs.begin(), fs.end());
  EXPECT_EQ(uniq.size(), fs.size());
  for (const auto& f : fs) EXPECT_LE(f.depth(), 3u);
}
