#include <gtest/gtest.h>

#include "aal/heyting.hpp"
#include "aal/provers.hpp"

using namespace aal;

namespace {

const Signature kSig = Signature::classical();
Formula P(const char* s) { return parse_formula(kSig, s); }
const char* kPeirce = "imp(imp(imp(x0,x1),x0),x0)";

// Oracle: theoremhood in a finite matrix family <A,{top}> by brute force.
bool valid_in(const FiniteAlgebra& A, const Formula& phi) {
  const Element top = static_cast<Element>(A.size() - 1);
  const std::size_t vars = variable_bound(std::span<const Formula>(&phi, 1));
  return for_each_valuation(A.size(), vars, [&](std::span<const Element> v) { return evaluate(A, phi, v) == top; });
}

}  // namespace

TEST(Cpc, Examples) {
  EXPECT_TRUE(cpc_decide({}, P("or(x0,neg(x0))")));
  EXPECT_FALSE(cpc_decide({}, P("x0")));
  EXPECT_TRUE(cpc_decide({}, P(kPeirce)));
  EXPECT_TRUE(cpc_decide({P("x0"), P("imp(x0,x1)")}, P("x1")));
  EXPECT_FALSE(cpc_decide({P("x1"), P("imp(x0,x1)")}, P("x0")));
  EXPECT_TRUE(cpc_decide({P("and(x0,neg(x0))")}, P("x5")));
}

TEST(Cpc, WideTables) {
  // 8 variables spans several words.
  auto phi = P("imp(and(x0,and(x1,and(x2,and(x3,and(x4,and(x5,and(x6,x7))))))),x7)");
  EXPECT_TRUE(cpc_decide({}, phi));
  EXPECT_FALSE(cpc_decide({}, P("imp(or(x0,x7),x7)")));
}

TEST(Cpc, AgreesWithB2Exhaustive) {
  const auto B2 = heyting_chain(2);
  for (const auto& phi : enumerate_formulas(kSig, 3, 3)) {
    ASSERT_EQ(cpc_decide({}, phi), valid_in(B2, phi)) << phi;
  }
}

TEST(Ipc, Examples) {
  EXPECT_TRUE(ipc_decide({}, P("imp(x0,x0)")));
  EXPECT_FALSE(ipc_decide({}, P(kPeirce)));
  EXPECT_TRUE(ipc_decide({}, P("neg(neg(imp(imp(imp(x0,x1),x0),x0)))")));
  EXPECT_FALSE(ipc_decide({}, P("or(x0,neg(x0))")));
  EXPECT_TRUE(ipc_decide({}, P("neg(neg(or(x0,neg(x0))))")));
  EXPECT_FALSE(ipc_decide({}, P("imp(neg(neg(x0)),x0)")));
  EXPECT_TRUE(ipc_decide({}, P("imp(x0,neg(neg(x0)))")));
  EXPECT_TRUE(ipc_decide({P("neg(neg(x0))")}, P("neg(neg(neg(neg(x0))))")));
  EXPECT_TRUE(ipc_decide({P("or(x0,x1)"), P("imp(x0,x2)"), P("imp(x1,x2)")}, P("x2")));
  EXPECT_TRUE(ipc_decide({}, P("iff(and(x0,x1),and(x1,x0))")));
  EXPECT_FALSE(ipc_decide({}, P("or(imp(x0,x1),imp(x1,x0))")));
}

TEST(Ipc, PeirceCountermodelInH3) {
  const auto H3 = heyting_chain(3);
  const std::vector<Element> v{1, 0};
  EXPECT_NE(evaluate(H3, P(kPeirce), v), 2u);
}

TEST(Ipc, RejectsForeignConnectives) {
  Signature s({{"box", 1}}, {});
  EXPECT_THROW(ipc_decide({}, parse_formula(s, "box(x0)")), SignatureMismatch);
  EXPECT_THROW(cpc_decide({}, parse_formula(s, "box(x0)")), SignatureMismatch);
}

// Exhaustive over 2 variables, depth 3: the prover agrees with the Kripke
// refuter and with the finite Heyting algebras, is contained in CPC, and
// satisfies the double-negation correspondence.
TEST(Ipc, OraclesExhaustiveTwoVars) {
  const auto corpus = all_heyting_algebras(5);
  for (const auto& phi : enumerate_formulas(kSig, 2, 3)) {
    const bool ipc = ipc_decide({}, phi);
    const bool cpc = cpc_decide({}, phi);
    if (ipc) ASSERT_TRUE(cpc) << phi;
    const auto cm = kripke_refute({}, phi);
    ASSERT_NE(ipc, cm.has_value()) << phi;
    bool heyting_valid = true;
    for (const auto& H : corpus) heyting_valid = heyting_valid && valid_in(H, phi);
    if (ipc) ASSERT_TRUE(heyting_valid) << phi;
    ASSERT_EQ(cpc, ipc_decide({}, Formula::app("neg", {Formula::app("neg", {phi})}))) << phi;
  }
}

TEST(Ipc, InvariantsExhaustiveThreeVars) {
  for (const auto& phi : enumerate_formulas(kSig, 3, 3)) {
    const bool ipc = ipc_decide({}, phi);
    const bool cpc = cpc_decide({}, phi);
    if (ipc) ASSERT_TRUE(cpc) << phi;
    ASSERT_EQ(cpc, ipc_decide({}, Formula::app("neg", {Formula::app("neg", {phi})}))) << phi;
  }
}

TEST(Ipc, InvariantsSampledDepthFour) {
  Rng rng(20261018);
  const auto corpus = all_heyting_algebras(4);
  for (int i = 0; i < 1500; ++i) {
    const auto phi = random_formula(kSig, 3, 4, rng);
    const bool ipc = ipc_decide({}, phi);
    const bool cpc = cpc_decide({}, phi);
    if (ipc) ASSERT_TRUE(cpc) << phi;
    ASSERT_EQ(cpc, ipc_decide({}, Formula::app("neg", {Formula::app("neg", {phi})}))) << phi;
    if (!ipc) continue;
    for (const auto& H : corpus) ASSERT_TRUE(valid_in(H, phi)) << phi;
  }
}

TEST(Ipc, ConsequenceWithPremisesAgreesWithKripke) {
  Rng rng(7);
  const auto fs = enumerate_formulas(kSig, 2, 2);
  for (int i = 0; i < 400; ++i) {
    std::vector<Formula> gamma{fs[rng.below(fs.size())], fs[rng.below(fs.size())]};
    const auto phi = random_formula(kSig, 2, 3, rng);
    const bool ipc = ipc_decide(gamma, phi);
    ASSERT_NE(ipc, kripke_refute(gamma, phi).has_value()) << phi;
    if (ipc) ASSERT_TRUE(cpc_decide(gamma, phi));
  }
}

TEST(Kripke, CountermodelForcesPremisesOnly) {
  auto cm = kripke_refute({}, P("or(x0,neg(x0))"));
  ASSERT_TRUE(cm.has_value());
  EXPECT_EQ(cm->frame.size, 2u);
  EXPECT_FALSE(kripke_force(cm->frame, cm->valuation, P("or(x0,neg(x0))")) >> cm->world & 1u);
}

TEST(Equations, Examples) {
  const auto B2 = heyting_chain(2);
  const auto H3 = heyting_chain(3);
  std::vector<FiniteAlgebra> b{B2}, h{H3};
  EXPECT_TRUE(equational_consequence(b, {}, Equation{P("x0"), P("x0")}));
  std::vector<Equation> prem{{P("x0"), P("imp(x0,x0)")}};
  EXPECT_TRUE(equational_consequence(b, prem, Equation{P("x0"), P("imp(x1,x1)")}));
  EXPECT_FALSE(equational_consequence(h, {}, Equation{P("neg(neg(x0))"), P("x0")}));
  EXPECT_FALSE(quasiidentity_holds(H3, {}, Equation{P("neg(neg(x0))"), P("x0")}));
  EXPECT_TRUE(quasiidentity_holds(H3, {}, Equation{P("x0"), P("x0")}));
  auto cx = equational_counterexample(h, {}, Equation{P("neg(neg(x0))"), P("x0")});
  ASSERT_TRUE(cx.has_value());
  EXPECT_EQ(cx->valuation, std::vector<Element>{1});
}

TEST(Equations, SignatureMismatch) {
  const auto B2 = heyting_chain(2);
  FiniteAlgebra neg_only(Signature({{"neg", 1}}, {}), 2, {{1, 0}});
  std::vector<FiniteAlgebra> K{B2, neg_only};
  EXPECT_THROW(equational_consequence(K, {}, Equation{P("x0"), P("x0")}), SignatureMismatch);
}
