#include "genlen/ensembles.hpp"
#include "genlen/tensornets.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace genlen;

namespace {

// Gamma_2 by explicit summation over the four internal bonds of a 2 x 2 patch.
// Sites (0,0) (0,1) / (1,0) (1,1); columns ordered top, bottom, left, right.
oracle::Mat gamma2_by_summation(const PepsTensor& t) {
  const std::size_t n = t.n(), g = t.g();
  const std::size_t cols = n * n * n * n * n * n * n * n;
  oracle::Mat out = oracle::Mat::Zero(static_cast<Eigen::Index>(g * g * g * g), static_cast<Eigen::Index>(cols));
  for (std::size_t p0 = 0; p0 < g; ++p0)
    for (std::size_t p1 = 0; p1 < g; ++p1)
      for (std::size_t p2 = 0; p2 < g; ++p2)
        for (std::size_t p3 = 0; p3 < g; ++p3) {
          const auto row = static_cast<Eigen::Index>(((p0 * g + p1) * g + p2) * g + p3);
          for (std::size_t col = 0; col < cols; ++col) {
            std::size_t x = col;
            std::size_t leg[8];
            for (int i = 7; i >= 0; --i) leg[i] = x % n, x /= n;
            const std::size_t t0 = leg[0], t1 = leg[1], b0 = leg[2], b1 = leg[3];
            const std::size_t l0 = leg[4], l1 = leg[5], r0 = leg[6], r1 = leg[7];
            cplx acc = 0.0;
            for (std::size_t h0 = 0; h0 < n; ++h0)      // row 0 horizontal bond
              for (std::size_t h1 = 0; h1 < n; ++h1)    // row 1 horizontal bond
                for (std::size_t v0 = 0; v0 < n; ++v0)  // column 0 vertical bond
                  for (std::size_t v1 = 0; v1 < n; ++v1) {
                    acc += t(p0, t0, v0, l0, h0) * t(p1, t1, v1, h0, r0) * t(p2, v0, b0, l1, h1) *
                           t(p3, v1, b1, h1, r1);
                  }
            out(row, static_cast<Eigen::Index>(col)) = acc;
          }
        }
  return out;
}

PepsTensor ghz_peps(std::size_t n) {
  std::vector<cplx> e(n * n * n * n * n, 0.0);
  PepsTensor probe(n, n, e);
  for (std::size_t p = 0; p < n; ++p) e[probe.index(p, p, p, p, p)] = 1.0;
  return PepsTensor(n, n, e);
}

std::vector<CMatrix> units(Eigen::Index n) {
  std::vector<CMatrix> out;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) out.push_back(matrix_unit(n, r, c));
  return out;
}

}  // namespace

TEST(MpsGamma, MatrixUnitsAreInjectiveAtOne) {
  const MpsTensor t{GeneratingSystem(units(2))};
  EXPECT_EQ(matrix_rank(mps_gamma_matrix(t, 1)), 4u);
  const auto inj = mps_injectivity_index(t);
  EXPECT_EQ(inj.wie.value, 1u);
  EXPECT_TRUE(inj.consistent);
}

TEST(MpsGamma, GhzIsNeverInjective) {
  const MpsTensor t{GeneratingSystem({matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)})};
  for (std::size_t len = 1; len <= 4; ++len) EXPECT_EQ(matrix_rank(mps_gamma_matrix(t, len)), 2u);
  const auto inj = mps_injectivity_index(t);
  EXPECT_TRUE(inj.never_injective());
  EXPECT_TRUE(inj.consistent);
}

TEST(MpsGamma, EntriesAreTracesOfWords) {
  const auto s = ginibre_system(2, 2, RngSpec{3, 3});
  const CMatrix gamma = mps_gamma_matrix(MpsTensor{s}, 2);
  ASSERT_EQ(gamma.rows(), 4);
  const Word words[] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (Eigen::Index r = 0; r < 4; ++r) {
    const CMatrix w = evaluate_word(s, words[r]);
    for (Eigen::Index a = 0; a < 2; ++a)
      for (Eigen::Index b = 0; b < 2; ++b) {
        EXPECT_NEAR(std::abs(gamma(r, a * 2 + b) - (matrix_unit(2, a, b) * w).trace()), 0.0, 1e-14);
      }
  }
  EXPECT_EQ(matrix_rank(gamma), 4u);
  EXPECT_THROW(mps_gamma_matrix(MpsTensor{s}, 0), std::invalid_argument);
  EXPECT_THROW(mps_gamma_matrix(MpsTensor{s}, 21), BudgetExceeded);
}

TEST(MpsInjectivity, RandomPairInM4) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inj = mps_injectivity_index(MpsTensor{ginibre_system(4, 2, RngSpec{seed, 4})});
    EXPECT_EQ(inj.wie.value, 4u);
    EXPECT_TRUE(inj.consistent);
    EXPECT_EQ(inj.gamma_ranks.size(), 3u);
  }
}

TEST(PepsTensor, IndexingAndValidation) {
  EXPECT_THROW(PepsTensor(2, 2, std::vector<cplx>(5)), DimensionError);
  const auto t = random_peps_tensor(2, 3, RngSpec{1, 1});
  EXPECT_EQ(t.entries().size(), 3u * 16u);
  EXPECT_EQ(t.index(1, 0, 1, 0, 1), ((((1u * 2 + 0) * 2 + 1) * 2 + 0) * 2 + 1));
}

TEST(StringBond, Factorization) {
  const auto b = ginibre_system(2, 2, RngSpec{2, 0});
  const auto bt = ginibre_system(2, 2, RngSpec{2, 1});
  const auto t = string_bond_tensor(2, 2, b, bt);
  EXPECT_EQ(t.g(), 4u);
  EXPECT_LT(t.factorization_defect(), 1e-14);
  // k = i * d + j
  EXPECT_EQ(t(3, 0, 1, 1, 0), b[1](0, 1) * bt[1](1, 0));
  EXPECT_EQ(t(1, 1, 0, 0, 1), b[0](1, 0) * bt[1](0, 1));
  EXPECT_THROW(string_bond_tensor(2, 3, b, bt), DimensionError);
}

TEST(StringBond, ProductStateHasRankOne) {
  const GeneratingSystem id({CMatrix::Identity(2, 2)});
  const auto t = string_bond_tensor(2, 1, id, id);
  EXPECT_EQ(matrix_rank(peps_gamma_matrix(t, 2)), 1u);
  EXPECT_FALSE(peps_injective(t, 2).injective);
}

TEST(StringBond, RandomIsInjectiveAtTwo) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto t = string_bond_tensor(2, 2, ginibre_system(2, 2, RngSpec{seed, 2}),
                                      ginibre_system(2, 2, RngSpec{seed, 3}));
    const auto rep = peps_injective(t, 2);
    EXPECT_EQ(rep.gamma_rank, 256u);
    EXPECT_TRUE(rep.injective);
  }
}

TEST(PepsGamma, ContractionMatchesExplicitSummation) {
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    const auto t = random_peps_tensor(2, 2, RngSpec{seed, 5});
    const oracle::Mat expected = gamma2_by_summation(t);
    const CMatrix got = peps_gamma_matrix(t, 2);
    ASSERT_EQ(got.rows(), expected.rows());
    ASSERT_EQ(got.cols(), expected.cols());
    EXPECT_LT((oracle::Mat(got) - expected).norm(), 1e-10 * expected.norm());
  }
}

TEST(PepsGamma, SingleSiteIsTheTensor) {
  const auto t = random_peps_tensor(2, 3, RngSpec{6, 6});
  const CMatrix g1 = peps_gamma_matrix(t, 1);
  ASSERT_EQ(g1.rows(), 3);
  ASSERT_EQ(g1.cols(), 16);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t c = 0; c < 16; ++c) {
      EXPECT_EQ(g1(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)), t.entries()[p * 16 + c]);
    }
}

TEST(PepsInjective, RandomG4IsInjectiveAtTwo) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto rep = peps_injective(random_peps_tensor(2, 4, RngSpec{seed, 7}), 2);
    EXPECT_TRUE(rep.injective);
    EXPECT_EQ(rep.full_rank_target, 256u);
    EXPECT_FALSE(rep.excluded_by_counting);
  }
}

TEST(PepsInjective, CountingExcludesG3) {
  const auto rep = peps_injective(random_peps_tensor(2, 3, RngSpec{8, 8}), 2);
  EXPECT_TRUE(rep.excluded_by_counting);
  EXPECT_FALSE(rep.injective);
  EXPECT_LE(rep.gamma_rank, 81u);
}

TEST(PepsInjective, GhzDiagonalIsNot) {
  const auto rep = peps_injective(ghz_peps(2), 2);
  EXPECT_FALSE(rep.injective);
  EXPECT_LE(rep.gamma_rank, 2u);
}

TEST(PepsGamma, GaugeInvariantRank) {
  const auto t = extend_physical(
      string_bond_tensor(2, 1, ginibre_system(2, 1, RngSpec{9, 0}), ginibre_system(2, 1, RngSpec{9, 1})), 3,
      RngSpec{9, 2});
  const CMatrix p = random_invertible(2, 10.0, RngSpec{9, 3});
  const CMatrix q = random_invertible(2, 10.0, RngSpec{9, 4});
  const auto gauged = gauge_transform(t, p, q);
  EXPECT_EQ(matrix_rank(peps_gamma_matrix(gauged, 2)), matrix_rank(peps_gamma_matrix(t, 2)));
  const auto r = random_peps_tensor(2, 4, RngSpec{9, 5});
  EXPECT_EQ(matrix_rank(peps_gamma_matrix(gauge_transform(r, p, q), 2)), 256u);
}

TEST(PepsBudget, Limits) {
  EXPECT_NO_THROW(check_peps_budget(2, 4, 2));
  EXPECT_THROW(check_peps_budget(2, 2, 3), BudgetExceeded);  // n^{12} columns
  EXPECT_THROW(check_peps_budget(3, 2, 2), BudgetExceeded);  // 3^8 columns
  EXPECT_THROW(check_peps_budget(2, 2, 0), std::invalid_argument);
}

TEST(PepsBounds, ClosedForms) {
  EXPECT_EQ(generic_injectivity_bound(4, 2, 1), 4u);
  EXPECT_EQ(generic_injectivity_bound(2, 4, 2), 2u);
  EXPECT_EQ(generic_injectivity_bound(16, 9, 2), 6u);
  EXPECT_THROW(generic_injectivity_bound(2, 3, 2), std::invalid_argument);
  EXPECT_EQ(integer_root(8, 3), 2u);
  EXPECT_EQ(integer_root(26, 3), 2u);
  EXPECT_EQ(integer_root(27, 3), 3u);
  EXPECT_EQ(peps_counting_lower_bound(2, 4), 2u);
  EXPECT_EQ(peps_counting_lower_bound(2, 16), 1u);
}
