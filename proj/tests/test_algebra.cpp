#include <gtest/gtest.h>

#include <functional>

#include "aal/algebra.hpp"
#include "aal/heyting.hpp"

using namespace aal;

namespace {

const Signature kSig = Signature::classical();
Formula P(const char* s) { return parse_formula(kSig, s); }

// All partitions of {0..n-1} as label vectors.
std::vector<std::vector<std::size_t>> all_partitions(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> lab(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      out.push_back(lab);
      return;
    }
    for (std::size_t b = 0; b <= used; ++b) {
      lab[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

bool compatible_oracle(const FiniteAlgebra& A, const std::vector<std::size_t>& lab) {
  const auto& cs = A.signature().connectives();
  for (std::size_t c = 0; c < cs.size(); ++c) {
    bool ok = for_each_valuation(A.size(), 2 * cs[c].arity, [&](std::span<const Element> ab) {
      std::size_t k = cs[c].arity;
      for (std::size_t i = 0; i < k; ++i) {
        if (lab[ab[i]] != lab[ab[k + i]]) return true;
      }
      return lab[A.apply(c, ab.subspan(0, k))] == lab[A.apply(c, ab.subspan(k, k))];
    });
    if (!ok) return false;
  }
  return true;
}

// Oracle: the greatest compatible congruence that does not split F.
std::vector<std::size_t> leibniz_oracle(const FiniteAlgebra& A, const Subset& F) {
  std::vector<std::size_t> best;
  std::size_t best_blocks = A.size() + 1;
  for (const auto& lab : all_partitions(A.size())) {
    if (!compatible_oracle(A, lab)) continue;
    bool respects = true;
    for (Element a = 0; a < A.size(); ++a) {
      for (Element b = 0; b < A.size(); ++b) {
        if (lab[a] == lab[b] && F.contains(a) != F.contains(b)) respects = false;
      }
    }
    if (!respects) continue;
    std::size_t blocks = *std::max_element(lab.begin(), lab.end()) + 1;
    if (blocks < best_blocks) {
      best_blocks = blocks;
      best = lab;
    }
  }
  return best;
}

std::vector<FiniteAlgebra> small_corpus() {
  auto out = all_heyting_algebras(4);
  FiniteAlgebra l3(kSig, 3,
                   {{2, 1, 0}, {2, 2, 2, 1, 2, 2, 0, 1, 2}, {0, 0, 0, 0, 1, 1, 0, 1, 2}, {0, 1, 2, 1, 1, 2, 2, 2, 2}});
  out.push_back(l3);
  out.push_back(FiniteAlgebra(Signature({{"neg", 1}}), 4, {{1, 0, 3, 2}}));
  out.push_back(FiniteAlgebra(Signature({{"f", 2}}), 3, {{0, 1, 2, 1, 2, 0, 2, 0, 1}}));
  return out;
}

}  // namespace

TEST(Evaluate, Examples) {
  const auto B2 = heyting_chain(2);
  const auto H3 = heyting_chain(3);
  EXPECT_EQ(evaluate(B2, P("imp(x0,x1)"), std::vector<Element>{1, 0}), 0u);
  EXPECT_EQ(evaluate(H3, P("x0"), std::map<VarIndex, Element>{{0, 1}}), 1u);
  EXPECT_EQ(evaluate(H3, P("neg(neg(x0))"), std::vector<Element>{1}), 2u);
  EXPECT_EQ(evaluate(H3, P("iff(x0,neg(neg(x0)))"), std::vector<Element>{1}), 1u);
  EXPECT_THROW(evaluate(H3, P("x1"), std::map<VarIndex, Element>{{0, 1}}), InvalidArgument);
  FiniteAlgebra neg_only(Signature({{"neg", 1}}), 2, {{1, 0}});
  EXPECT_THROW(evaluate(neg_only, P("imp(x0,x0)"), std::vector<Element>{0}), SignatureMismatch);
}

TEST(Algebra, TableValidation) {
  EXPECT_THROW(FiniteAlgebra(Signature({{"neg", 1}}), 2, {{1, 2}}), InvalidArgument);
  EXPECT_THROW(FiniteAlgebra(Signature({{"neg", 1}}), 2, {{1}}), InvalidArgument);
  EXPECT_THROW(FiniteAlgebra(Signature({{"neg", 1}}), 2, {}), InvalidArgument);
}

TEST(Homomorphisms, Examples) {
  const auto B2 = heyting_chain(2);
  const auto H3 = heyting_chain(3);
  auto hs = homomorphisms(B2, B2);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(hs[0], (std::vector<Element>{0, 1}));
  auto h = homomorphisms(H3, B2);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0], (std::vector<Element>{0, 1, 1}));
  FiniteAlgebra neg_only(Signature({{"neg", 1}}), 2, {{1, 0}});
  EXPECT_THROW(homomorphisms(B2, neg_only), SignatureMismatch);
}

TEST(Homomorphisms, BruteForceOracle) {
  const auto corpus = all_heyting_algebras(4);
  for (const auto& A : corpus) {
    for (const auto& B : corpus) {
      std::vector<std::vector<Element>> expect;
      for_each_valuation(B.size(), A.size(), [&](std::span<const Element> m) {
        if (is_homomorphism(A, B, m)) expect.emplace_back(m.begin(), m.end());
        return true;
      });
      ASSERT_EQ(homomorphisms(A, B), expect);
    }
  }
}

TEST(Homomorphisms, CommuteWithEvaluation) {
  const auto corpus = all_heyting_algebras(4);
  Rng rng(11);
  for (const auto& A : corpus) {
    for (const auto& B : corpus) {
      for (const auto& h : homomorphisms(A, B)) {
        for (int i = 0; i < 20; ++i) {
          auto phi = random_formula(kSig, 2, 4, rng);
          std::vector<Element> v{static_cast<Element>(rng.below(A.size())), static_cast<Element>(rng.below(A.size()))};
          std::vector<Element> hv{h[v[0]], h[v[1]]};
          ASSERT_EQ(h[evaluate(A, phi, v)], evaluate(B, phi, hv));
        }
      }
    }
  }
}

TEST(Congruence, Generated) {
  const auto H3 = heyting_chain(3);
  EXPECT_TRUE(congruence_generated(H3, {}).is_identity());
  EXPECT_TRUE(congruence_generated(H3, {{0, 1}, {1, 2}}).is_total());
  auto c = congruence_generated(H3, {{1, 2}});
  EXPECT_EQ(c, Congruence::from_labels(std::vector<std::size_t>{0, 1, 1}));
  EXPECT_THROW(congruence_generated(H3, {{0, 3}}), InvalidArgument);
}

TEST(Congruence, GeneratedIsLeastOracle) {
  for (const auto& A : small_corpus()) {
    const auto parts = all_partitions(A.size());
    for (Element a = 0; a < A.size(); ++a) {
      for (Element b = a + 1; b < A.size(); ++b) {
        // Oracle: the compatible partition joining a,b with most blocks.
        std::vector<std::size_t> best;
        std::size_t best_blocks = 0;
        for (const auto& lab : parts) {
          if (lab[a] != lab[b] || !compatible_oracle(A, lab)) continue;
          std::size_t blocks = *std::max_element(lab.begin(), lab.end()) + 1;
          if (blocks > best_blocks) {
            best_blocks = blocks;
            best = lab;
          }
        }
        auto got = congruence_generated(A, {{a, b}});
        ASSERT_EQ(got, Congruence::from_labels(best));
        auto q = quotient(A, got);
        for (Element x = 0; x < A.size(); ++x) {
          for (Element y = 0; y < A.size(); ++y) ASSERT_EQ(q.map[x] == q.map[y], got.related(x, y));
        }
        ASSERT_TRUE(is_homomorphism(A, q.algebra, q.map));
      }
    }
  }
}

TEST(Congruence, AllCongruencesMatchOracle) {
  for (const auto& A : small_corpus()) {
    std::vector<Congruence> expect;
    for (const auto& lab : all_partitions(A.size())) {
      if (compatible_oracle(A, lab)) expect.push_back(Congruence::from_labels(lab));
    }
    auto got = all_congruences(A);
    ASSERT_EQ(got.size(), expect.size());
    for (const auto& c : expect) ASSERT_NE(std::find(got.begin(), got.end(), c), got.end());
  }
}

TEST(Quotient, Examples) {
  const auto H3 = heyting_chain(3);
  const auto B2 = heyting_chain(2);
  EXPECT_TRUE(find_isomorphism(quotient(H3, Congruence::identity(3)).algebra, H3).has_value());
  auto q = quotient(H3, Congruence::from_labels(std::vector<std::size_t>{0, 1, 1}));
  EXPECT_EQ(q.algebra, B2);
  EXPECT_EQ(q.map, (std::vector<Element>{0, 1, 1}));
  EXPECT_EQ(quotient(H3, Congruence::total(3)).algebra.size(), 1u);
  EXPECT_THROW(quotient(H3, Congruence::from_labels(std::vector<std::size_t>{0, 0, 1})), InvalidArgument);
}

TEST(Leibniz, Examples) {
  const auto H3 = heyting_chain(3);
  const auto B2 = heyting_chain(2);
  EXPECT_TRUE(leibniz(B2, Subset(2, {1})).is_identity());
  EXPECT_TRUE(leibniz(H3, Subset(3, {2})).is_identity());
  EXPECT_EQ(leibniz(H3, Subset(3, {1, 2})), Congruence::from_labels(std::vector<std::size_t>{0, 1, 1}));
  EXPECT_TRUE(is_reduced(B2, Subset(2, {1})));
  EXPECT_FALSE(is_reduced(H3, Subset(3, {1, 2})));
  EXPECT_TRUE(is_reduced(H3, Subset(3, {2})));
  EXPECT_THROW(leibniz(H3, Subset(2, {1})), InvalidArgument);
}

TEST(Leibniz, ReduceMatrix) {
  const auto H3 = heyting_chain(3);
  const auto B2 = heyting_chain(2);
  auto r = reduce_matrix(H3, Subset(3, {1, 2}));
  EXPECT_EQ(r.algebra, B2);
  EXPECT_EQ(r.filter, Subset(2, {1}));
  auto same = reduce_matrix(B2, Subset(2, {1}));
  EXPECT_EQ(same.algebra, B2);
  auto one = heyting_chain(1);
  auto triv = reduce_matrix(one, Subset(1, {0}));
  EXPECT_EQ(triv.algebra.size(), 1u);
  EXPECT_EQ(triv.filter, Subset(1, {0}));
}

TEST(Leibniz, OracleAllSubsets) {
  for (const auto& A : small_corpus()) {
    for (std::uint32_t mask = 0; mask < (1u << A.size()); ++mask) {
      Subset F(A.size());
      for (Element e = 0; e < A.size(); ++e) {
        if (mask >> e & 1u) F.insert(e);
      }
      const auto omega = leibniz(A, F);
      ASSERT_EQ(omega, Congruence::from_labels(leibniz_oracle(A, F))) << to_string(F);
      ASSERT_TRUE(is_compatible_with(omega, F));
      auto r = reduce_matrix(A, F);
      ASSERT_TRUE(is_reduced(r.algebra, r.filter));
    }
  }
}

TEST(Heyting, Corpus) {
  auto all = all_heyting_algebras(6);
  std::vector<std::size_t> by_size(7, 0);
  for (const auto& H : all) {
    ASSERT_TRUE(is_heyting(H));
    ++by_size[H.size()];
  }
  // Distributive lattices with 1..6 elements: 1,1,1,2,3,5.
  EXPECT_EQ(by_size, (std::vector<std::size_t>{0, 1, 1, 1, 2, 3, 5}));
  EXPECT_TRUE(is_boolean(boolean_algebra(2)));
  EXPECT_TRUE(is_heyting(heyting_chain(3)));
  EXPECT_FALSE(is_boolean(heyting_chain(3)));
}
