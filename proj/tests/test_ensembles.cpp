#include "genlen/ensembles.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstring>

using namespace genlen;

TEST(Rng, SplitmixReferenceValues) {
  // First outputs of splitmix64 seeded with 0, as published with the generator.
  std::uint64_t state = 0;
  auto next = [&state] {
    const std::uint64_t out = splitmix64(state);
    state += 0x9E3779B97F4A7C15ULL;
    return out;
  };
  EXPECT_EQ(next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(next(), 0x06C45D188009454FULL);
}

TEST(Rng, SubstreamsAreDistinctAndStable) {
  const RngSpec base{42, 7};
  EXPECT_NE(base.substream(0).stream, base.substream(1).stream);
  EXPECT_EQ(base.substream(3).stream, base.substream(3).stream);
  Rng a(base), b(base), c(base.substream(0));
  EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(Rng(base).next_u64(), c.next_u64());
}

TEST(Rng, UniformAndNormalMoments) {
  Rng rng(RngSpec{5, 5});
  double su = 0.0, sn = 0.0, sn2 = 0.0, sz2 = 0.0;
  constexpr int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double x = rng.normal();
    sn += x;
    sn2 += x * x;
    sz2 += std::norm(rng.complex_normal());
  }
  EXPECT_NEAR(su / N, 0.5, 0.005);
  EXPECT_NEAR(sn / N, 0.0, 0.01);
  EXPECT_NEAR(sn2 / N, 1.0, 0.01);
  EXPECT_NEAR(sz2 / N, 1.0, 0.01);
}

TEST(Ginibre, Reproducible) {
  const CMatrix a = ginibre(4, RngSpec{9, 1});
  const CMatrix b = ginibre(4, RngSpec{9, 1});
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(cplx) * 16), 0);
  EXPECT_NE(ginibre(4, RngSpec{9, 2}), a);
}

TEST(Ginibre, EntryMeansNearZero) {
  Rng rng(RngSpec{10, 0});
  CMatrix sum = CMatrix::Zero(2, 2);
  for (int i = 0; i < 10000; ++i) sum += ginibre(rng, 2, 2);
  sum /= 10000.0;
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_LT(std::abs(sum.data()[i]), 0.05);
}

TEST(Ginibre, FullRank) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const CMatrix g = ginibre(n, RngSpec{s, n});
      EXPECT_EQ(matrix_rank(g), n);
      EXPECT_GT(std::abs(oracle::determinant(g)), 0.0);
    }
  }
}

TEST(Ginibre, SystemsAlwaysGenerate) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const std::size_t n = 2 + s % 5;
    ASSERT_TRUE(length(ginibre_system(n, 2, RngSpec{s, 12})).finite()) << "seed " << s;
  }
}

TEST(HaarIsometry, IsometryAndPositiveR) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const CMatrix q = haar_isometry(6, 3, RngSpec{s, 13});
    EXPECT_LT((q.adjoint() * q - CMatrix::Identity(3, 3)).norm(), 1e-12);
    // Q^dagger Z = R must have a positive real diagonal.
    Rng rng(RngSpec{s, 13});
    const CMatrix z = ginibre(rng, 6, 3);
    const CMatrix r = q.adjoint() * z;
    for (Eigen::Index j = 0; j < 3; ++j) {
      EXPECT_GT(r(j, j).real(), 0.0);
      EXPECT_NEAR(r(j, j).imag(), 0.0, 1e-12);
    }
  }
  EXPECT_THROW(haar_isometry(2, 3, RngSpec{}), DimensionError);
}

TEST(HaarIsometryKraus, TracePreserving) {
  for (std::size_t g = 1; g <= 4; ++g) {
    const auto e = haar_isometry_kraus(3, g, RngSpec{g, 14});
    EXPECT_EQ(e.g(), g);
    EXPECT_LT(e.tp_residual(), 1e-12);
  }
  const auto u = haar_isometry_kraus(3, 1, RngSpec{0, 15});
  EXPECT_LT((u.kraus()[0] * u.kraus()[0].adjoint() - CMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(HaarIsometryKraus, FourOperatorsInM2SpanAtOnce) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    EXPECT_EQ(full_kraus_rank_index(haar_isometry_kraus(2, 4, RngSpec{s, 16})).value, 1u);
  }
}

TEST(RandomSu, Membership) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto x = random_su(3, RngSpec{s, 17});
    EXPECT_LT((x.mat() + x.mat().adjoint()).norm(), 1e-14);
    EXPECT_LT(std::abs(x.mat().trace()), 1e-14);
    const RVector c = su_coords(x, su_basis(3));
    for (Eigen::Index k = 0; k < c.size(); ++k) EXPECT_NE(c[k], 0.0);
  }
}

TEST(RandomPeps, SizeAndReproducibility) {
  const auto a = random_peps_tensor(2, 3, RngSpec{1, 18});
  EXPECT_EQ(a.entries().size(), 48u);
  EXPECT_EQ(a.entries(), random_peps_tensor(2, 3, RngSpec{1, 18}).entries());
  EXPECT_TRUE(a.factorized().empty());
}

TEST(RandomInvertible, ConditionBounded) {
  const CMatrix p = random_invertible(4, 50.0, RngSpec{3, 19});
  const RVector s = singular_values(p);
  EXPECT_LE(s[0] / s[s.size() - 1], 50.0 + 1e-9);
  EXPECT_GE(s[s.size() - 1], 1.0 - 1e-12);
}
