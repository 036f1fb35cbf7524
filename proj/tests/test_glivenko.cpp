#include <gtest/gtest.h>

#include <set>

#include "aal/glivenko.hpp"

using namespace aal;

namespace {
const Signature kSig = Signature::classical();
Formula P(const char* s) { return parse_formula(kSig, s); }
const char* kPeirce = "imp(imp(imp(x0,x1),x0),x0)";

GlivenkoContext wrong_theta() {
  const auto c = GlivenkoContext::classical();
  return GlivenkoContext(c.source(), c.target(), c.h(), Formula::var(0), c.source_pair(), c.target_pair(),
                         c.adjoint_kinds());
}
}  // namespace

TEST(Regular, Examples) {
  const auto B2 = heyting_chain(2);
  EXPECT_EQ(regular_elements(B2).algebra, B2);
  auto r3 = regular_elements(heyting_chain(3));
  EXPECT_EQ(r3.algebra, B2);
  EXPECT_EQ(r3.embedding, (std::vector<Element>{0, 2}));
  auto r4 = regular_elements(heyting_chain(4));
  EXPECT_EQ(r4.embedding, (std::vector<Element>{0, 3}));
  EXPECT_THROW(regular_elements(FiniteAlgebra(kSig, 2, {{1, 0}, {1, 1, 0, 1}, {0, 0, 0, 1}, {0, 0, 0, 1}})), NotHeyting);
}

TEST(Unit, Examples) {
  EXPECT_EQ(unit_map(heyting_chain(2)), (std::vector<Element>{0, 1}));
  EXPECT_EQ(unit_map(heyting_chain(3)), (std::vector<Element>{0, 1, 1}));
  auto u4 = unit_map(heyting_chain(4));
  EXPECT_EQ(std::set<Element>(u4.begin(), u4.end()).size(), 2u);
}

TEST(LeftAdjoint, Examples) {
  auto q2 = left_adjoint_quotient(boolean_algebra(2));
  EXPECT_EQ(q2.generating_filter, Filter(4, {3}));
  EXPECT_TRUE(find_isomorphism(q2.algebra, boolean_algebra(2)).has_value());
  auto q3 = left_adjoint_quotient(heyting_chain(3));
  EXPECT_EQ(q3.generating_filter, Filter(3, {1, 2}));
  EXPECT_EQ(q3.algebra, heyting_chain(2));
  EXPECT_TRUE(find_isomorphism(left_adjoint_quotient(heyting_chain(4)).algebra, heyting_chain(2)).has_value());
}

TEST(LeftAdjoint, IsomorphicToRegularElementsOnCorpus) {
  for (const auto& H : all_heyting_algebras(6)) {
    const auto reg = regular_elements(H);
    const auto q = left_adjoint_quotient(H);
    ASSERT_EQ(reg.algebra.size(), q.algebra.size());
    // Explicit isomorphism: unit(a) -> class of a.
    const auto u = unit_map(H);
    std::vector<std::optional<Element>> iso(reg.algebra.size());
    for (Element a = 0; a < H.size(); ++a) {
      if (iso[u[a]]) ASSERT_EQ(*iso[u[a]], q.map[a]);
      iso[u[a]] = q.map[a];
    }
    std::vector<Element> table;
    for (const auto& e : iso) table.push_back(*e);
    ASSERT_EQ(std::set<Element>(table.begin(), table.end()).size(), table.size());
    ASSERT_TRUE(is_homomorphism(reg.algebra, q.algebra, table));
  }
}

TEST(LeftAdjoint, GenericReflectionAgrees) {
  for (const auto& H : all_heyting_algebras(5)) {
    auto r = reflect(H, QvClass::Boolean);
    ASSERT_TRUE(find_isomorphism(r.algebra, regular_elements(H).algebra).has_value());
  }
  EXPECT_THROW(reflect(heyting_chain(6), QvClass::Boolean), BoundExceeded);
}

// Precomposition with the unit is a bijection hom(H_nn, B) -> hom(H, B).
TEST(Adjunction, HomSetBijection) {
  std::vector<FiniteAlgebra> booleans{heyting_chain(1), heyting_chain(2), boolean_algebra(2)};
  for (const auto& H : all_heyting_algebras(5)) {
    const auto reg = regular_elements(H);
    const auto u = unit_map(H);
    for (const auto& B : booleans) {
      const auto from_reg = homomorphisms(reg.algebra, B);
      const auto from_h = homomorphisms(H, B);
      std::set<std::vector<Element>> images;
      for (const auto& g : from_reg) {
        std::vector<Element> gu(H.size());
        for (Element a = 0; a < H.size(); ++a) gu[a] = g[u[a]];
        ASSERT_TRUE(is_homomorphism(H, B, gu));
        images.insert(gu);
      }
      ASSERT_EQ(images.size(), from_reg.size());
      ASSERT_EQ(images, std::set<std::vector<Element>>(from_h.begin(), from_h.end()));
    }
  }
  for (const auto& B : booleans) ASSERT_EQ(regular_elements(B).algebra, B);
}

TEST(Rho, Examples) {
  const auto ctx = GlivenkoContext::classical();
  EXPECT_EQ(rho_translate(ctx, P("x0")), P("neg(neg(x0))"));
  const auto id = GlivenkoContext::identity(LogicSpec::cpc(), AlgebraizingPair::classical());
  EXPECT_EQ(rho_translate(id, P(kPeirce)), P(kPeirce));
  const std::vector<Formula> g{P("x0"), P("x1")};
  EXPECT_EQ(rho_translate(ctx, g), (std::vector<Formula>{P("neg(neg(x0))"), P("neg(neg(x1))")}));
  EXPECT_THROW(rho_translate(ctx, parse_formula(Signature({{"box", 1}}), "box(x0)")), SignatureMismatch);
}

TEST(Section, ChecksAndNaturality) {
  const auto ctx = GlivenkoContext::classical();
  const auto corpus = all_heyting_algebras(5);
  EXPECT_TRUE(section_check(ctx, heyting_chain(2)));
  EXPECT_TRUE(section_check(ctx, heyting_chain(3)));
  for (const auto& H : corpus) ASSERT_TRUE(section_check(ctx, H, corpus));
}

TEST(Glivenko, Examples) {
  const auto ctx = GlivenkoContext::classical();
  EXPECT_EQ(glivenko_equivalence(ctx, {}, P(kPeirce)), std::make_pair(true, true));
  EXPECT_EQ(glivenko_equivalence(ctx, {}, P("x0")), std::make_pair(false, false));
  const std::vector<Formula> g{P("x0")};
  EXPECT_EQ(glivenko_equivalence(ctx, g, P("neg(neg(x0))")), std::make_pair(true, true));
  EXPECT_EQ(glivenko_equivalence(wrong_theta(), {}, P(kPeirce)), std::make_pair(false, true));
}

TEST(Glivenko, ExhaustiveNoPremisesAndSampledPairs) {
  const auto ctx = GlivenkoContext::classical();
  const auto fs = enumerate_formulas(kSig, 2, 3);
  for (const auto& phi : fs) {
    auto [l, r] = glivenko_equivalence(ctx, {}, phi);
    ASSERT_EQ(l, r) << phi;
  }
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Formula> g;
    for (std::size_t k = rng.below(3); k > 0; --k) g.push_back(fs[rng.below(fs.size())]);
    const auto& phi = fs[rng.below(fs.size())];
    auto [l, r] = glivenko_equivalence(ctx, g, phi);
    ASSERT_EQ(l, r) << phi;
  }
}

TEST(Compatibility, MatrixLevel) {
  const auto ctx = GlivenkoContext::classical();
  const std::vector<Formula> none;
  EXPECT_TRUE(matrix_compatibility_check(ctx, Matrix(heyting_chain(2), Filter(2, {1})), none, P(kPeirce)));
  EXPECT_TRUE(matrix_compatibility_check(ctx, Matrix(heyting_chain(3), Filter(3, {2})), none, P(kPeirce)));
  EXPECT_FALSE(matrix_compatibility_check(wrong_theta(), Matrix(heyting_chain(3), Filter(3, {2})), none, P(kPeirce)));
  EXPECT_THROW(matrix_compatibility_check(ctx, Matrix(heyting_chain(3), Filter(3, {1, 2})), none, P("x0")), InvalidArgument);
  EXPECT_THROW(matrix_compatibility_check(ctx, Matrix(FiniteAlgebra(kSig, 2, {{1, 0}, {1, 1, 0, 1}, {0, 0, 0, 1}, {0, 0, 0, 1}}), Filter(2, {1})), none, P("x0")), NotHeyting);
  const auto id = GlivenkoContext::identity(LogicSpec::ipc(), AlgebraizingPair::classical());
  Rng rng(2);
  const auto corpus = all_heyting_algebras(5);
  for (int i = 0; i < 500; ++i) {
    const auto& H = corpus[rng.below(corpus.size())];
    const Matrix M(H, Filter(H.size(), {static_cast<Element>(H.size() - 1)}));
    std::vector<Formula> g;
    for (std::size_t k = rng.below(3); k > 0; --k) g.push_back(random_formula(kSig, 2, 3, rng));
    const auto phi = random_formula(kSig, 2, 3, rng);
    ASSERT_TRUE(matrix_compatibility_check(ctx, M, g, phi));
    ASSERT_TRUE(matrix_compatibility_check(id, M, g, phi));
  }
}

TEST(Compatibility, LindenbaumLevel) {
  const auto ctx = GlivenkoContext::classical();
  const std::vector<Formula> none;
  EXPECT_TRUE(lind_compatibility_check(ctx, heyting_chain(2), none, P("iff(x0,x0)")));
  EXPECT_TRUE(lind_compatibility_check(ctx, heyting_chain(3), none, P(kPeirce)));
  const std::vector<Formula> x0{P("x0")};
  EXPECT_TRUE(lind_compatibility_check(ctx, heyting_chain(3), x0, P("neg(neg(x0))")));
  EXPECT_FALSE(lind_compatibility_check(wrong_theta(), heyting_chain(3), none, P(kPeirce)));
  Rng rng(4);
  const auto corpus = all_heyting_algebras(5);
  for (int i = 0; i < 500; ++i) {
    const auto& H = corpus[rng.below(corpus.size())];
    std::vector<Formula> g;
    for (std::size_t k = rng.below(3); k > 0; --k) g.push_back(random_formula(kSig, 2, 3, rng));
    ASSERT_TRUE(lind_compatibility_check(ctx, H, g, random_formula(kSig, 2, 3, rng)));
  }
}

TEST(Compose, CategoryLaws) {
  const auto f = GlivenkoContext::classical();
  const auto id_src = GlivenkoContext::identity(f.source(), f.source_pair());
  const auto id_tgt = GlivenkoContext::identity(f.target(), f.target_pair());
  const auto cpc_id = GlivenkoContext::identity(LogicSpec::cpc(), AlgebraizingPair::classical());
  const auto ipc_id = id_src;
  const auto corpus = all_heyting_algebras(5);
  auto same = [&](const GlivenkoContext& a, const GlivenkoContext& b) {
    if (!(a.h() == b.h()) || !(a.theta() == b.theta())) return false;
    for (const auto& H : corpus) {
      if (!(a.adjoint_data(H) == b.adjoint_data(H))) return false;
    }
    return true;
  };
  EXPECT_TRUE(same(compose_contexts(id_tgt, f), f));
  EXPECT_TRUE(same(compose_contexts(f, id_src), f));
  EXPECT_TRUE(same(compose_contexts(compose_contexts(cpc_id, f), ipc_id), compose_contexts(cpc_id, compose_contexts(f, ipc_id))));
  // Double negation inside CPC is a context too; chain it twice after f.
  const GlivenkoContext nn(LogicSpec::cpc(), LogicSpec::cpc(), FlexibleMorphism::identity(kSig), P("neg(neg(x0))"),
                           AlgebraizingPair::classical(), AlgebraizingPair::classical(), {AdjointKind::DoubleNegation});
  EXPECT_TRUE(validate_context(nn).all_passed());
  const auto left = compose_contexts(compose_contexts(nn, nn), f);
  const auto right = compose_contexts(nn, compose_contexts(nn, f));
  EXPECT_TRUE(same(left, right));
  EXPECT_EQ(left.theta(), P("neg(neg(neg(neg(neg(neg(x0))))))"));
  EXPECT_EQ(glivenko_equivalence(left, {}, P(kPeirce)), std::make_pair(true, true));
  EXPECT_THROW(compose_contexts(f, f), SignatureMismatch);
}

TEST(Validate, ClassicalAndWrongContexts) {
  const auto rep = validate_context(GlivenkoContext::classical());
  EXPECT_TRUE(rep.all_passed());
  const auto bad = validate_context(wrong_theta());
  EXPECT_TRUE(bad.all_passed()) << "theta = x0 satisfies the necessary conditions in CPC";
  // Reversed direction does not preserve consequence.
  const auto c = GlivenkoContext::classical();
  GlivenkoContext backwards(c.target(), c.source(), c.h(), c.theta(), c.target_pair(), c.source_pair(), {});
  const auto rb = validate_context(backwards);
  EXPECT_FALSE(rb.all_passed());
}

TEST(LeftAdjoint, LibraryHelpersAgreeWithOracles) {
  for (const auto& H : all_heyting_algebras(6)) {
    const auto iso = regular_to_quotient(H);
    ASSERT_TRUE(iso.has_value());
    ASSERT_TRUE(is_homomorphism(regular_elements(H).algebra, left_adjoint_quotient(H).algebra, *iso));
    for (const auto& B : {heyting_chain(2), boolean_algebra(2)}) ASSERT_TRUE(unit_precomposition_bijective(H, B));
  }
  // Into a non-Boolean target the regular elements lose maps: H3 -> H3 identity has no preimage.
  EXPECT_FALSE(unit_precomposition_bijective(heyting_chain(3), heyting_chain(3)));
}

TEST(Sweep, SmallSweepAgreesAndIsSeeded) {
  const auto ctx = GlivenkoContext::classical();
  const auto a = glivenko_sweep(ctx, 2, 2, 2, 300, 5);
  EXPECT_EQ(a.instances, 16u + 300u);
  EXPECT_TRUE(a.all_agree());
  EXPECT_GT(a.valid, 0u);
  const auto b = glivenko_sweep(ctx, 2, 2, 2, 300, 5);
  EXPECT_EQ(a.valid, b.valid);
  // A wrong fixed formula disagrees on excluded middle.
  const GlivenkoContext bad(LogicSpec::ipc(), LogicSpec::cpc(), FlexibleMorphism::identity(kSig), Formula::var(0),
                            AlgebraizingPair::classical(), AlgebraizingPair::classical(), {AdjointKind::DoubleNegation});
  const auto c = glivenko_sweep(bad, 1, 3, 0, 0, 5);
  EXPECT_FALSE(c.all_agree());
  EXPECT_FALSE(c.disagreements.front().source_side);
  EXPECT_TRUE(c.disagreements.front().target_side);
}
