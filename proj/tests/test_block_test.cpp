#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hdlrt/block_test.hpp"
#include "hdlrt/error.hpp"
#include "hdlrt/matrix_core.hpp"
#include "hdlrt/normal.hpp"
#include "oracle/oracle.hpp"
#include "test_helpers.hpp"

namespace hdlrt {
namespace {

using testing::random_data;
using testing::random_matrix;
using testing::rel_diff;

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(-1);
}

// ── constants ────────────────────────────────────────────────────────
// Frozen references below were evaluated in 50-digit arithmetic.

TEST(BlockConstants, ThirtyBlocksOfTwo) {
  const auto c = block_constants(100, BlockPartition::uniform(30, 2));
  EXPECT_NEAR(c.mu_n, -22.899434994715261519, 1e-10);
  EXPECT_NEAR(c.variance(), 0.62041902469714322588, 1e-12);
  EXPECT_NEAR(c.sigma_n, 0.78766682340767865166, 1e-12);
}

TEST(BlockConstants, TwoSingletonsByHand) {
  // mu = 2 (10 - 1 - 1/2) log(9/10) - (10 - 2 - 1/2) log(8/10)
  // sigma^2 = 2 { 2 log(9/10) - log(8/10) }
  const auto c = block_constants(10, BlockPartition({1, 1}));
  EXPECT_NEAR(c.mu_n, 17.0 * std::log(0.9) - 7.5 * std::log(0.8), 1e-14);
  EXPECT_NEAR(c.mu_n, -0.11755213132647395262, 1e-14);
  EXPECT_NEAR(c.variance(), 0.024845039997114306623, 1e-15);
}

TEST(BlockConstants, PermutationInvariant) {
  const auto a = block_constants(150, BlockPartition({3, 10, 1, 40}));
  const auto b = block_constants(150, BlockPartition({40, 1, 3, 10}));
  EXPECT_NEAR(a.mu_n, b.mu_n, 1e-12);
  EXPECT_NEAR(a.sigma_n, b.sigma_n, 1e-14);
}

TEST(BlockConstants, PositiveVarianceOnGrid) {
  for (std::size_t n = 5; n <= 300; n += 7) {
    for (std::size_t p = 2; p < n; p += 3) {
      const auto c = block_constants(n, BlockPartition({1, p - 1}));
      ASSERT_GT(c.variance(), 0.0) << n << " " << p;
      ASSERT_TRUE(std::isfinite(c.mu_n));
    }
  }
}

TEST(BlockConstants, InvalidDesigns) {
  EXPECT_EQ(code_of([] { block_constants(10, BlockPartition({5})); }), ErrorCode::InvalidDesign);
  EXPECT_EQ(code_of([] { block_constants(10, BlockPartition({5, 5})); }), ErrorCode::InvalidDesign);
  EXPECT_EQ(code_of([] { block_constants(10, BlockPartition({6, 5})); }), ErrorCode::InvalidDesign);
}

// ── log_vn ───────────────────────────────────────────────────────────

TEST(LogVn, SingleBlockIsZero) {
  const auto x = random_data(30, 8, 1);
  EXPECT_NEAR(log_vn(x, BlockPartition({8})), 0.0, 1e-12);
  EXPECT_NEAR(log_vn(x, BlockPartition({8}), DeterminantRoute::Cholesky), 0.0, 1e-12);
}

TEST(LogVn, BlockDiagonalCovarianceIsZero) {
  // Columns of different blocks have disjoint supports, so S is block diagonal.
  const DataMatrix x(5, 4, {1, 1, 0, 0,   //
                            1, -1, 0, 0,  //
                            0, 0, 1, 2,   //
                            0, 0, 3, -1,  //
                            0, 0, 0, 0});
  EXPECT_NEAR(log_vn(x, BlockPartition({2, 2})), 0.0, 1e-14);
  EXPECT_NEAR(oracle::naive_log_vn(x, BlockPartition({2, 2})), 0.0, 1e-14);
}

TEST(LogVn, FrozenSixByFour) {
  const DataMatrix x(6, 4, {1, 2, 0, -1,  //
                            0, 1, 3, 2,   //
                            2, -1, 1, 0,  //
                            1, 1, -2, 1,  //
                            -1, 0, 1, 3,  //
                            3, 2, 1, -2});
  const BlockPartition part({2, 2});
  EXPECT_NEAR(log_vn(x, part), -0.4401377171343866313, 1e-12);
  EXPECT_NEAR(log_vn(x, part, DeterminantRoute::Cholesky), -0.4401377171343866313, 1e-12);
}

TEST(LogVn, NonPositiveAndMatchesOracle) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 20 + gen() % 120;
    const std::size_t p = 2 + gen() % (n - 3);
    std::vector<std::size_t> sizes;
    std::size_t left = p;
    while (left > 0) {
      const std::size_t s = std::min<std::size_t>(left, 1 + gen() % 6);
      sizes.push_back(s);
      left -= s;
    }
    if (sizes.size() < 2) continue;
    const BlockPartition part(sizes);
    const auto x = random_data(n, p, 100 + trial);
    const double naive = oracle::naive_log_vn(x, part);
    const double proj = log_vn(x, part);
    const double chol = log_vn(x, part, DeterminantRoute::Cholesky);
    EXPECT_LE(proj, 1e-12);
    EXPECT_LE(rel_diff(proj, naive), 1e-8) << "n=" << n << " p=" << p;
    EXPECT_LE(rel_diff(chol, naive), 1e-8) << "n=" << n << " p=" << p;
  }
}

// Invariance under y_k = D x_k with D block diagonal and invertible.
TEST(LogVn, BlockDiagonalTransformInvariance) {
  const BlockPartition part({3, 1, 4});
  const auto x = random_data(40, 8, 5);
  const double base = log_vn(x, part);
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    Matrix d(8, 8);
    for (std::size_t b = 0; b < part.q(); ++b) {
      const auto blk = random_matrix(part.size(b), part.size(b), 300 + trial * 7 + b);
      for (std::size_t i = 0; i < part.size(b); ++i) {
        for (std::size_t j = 0; j < part.size(b); ++j) {
          d(part.start(b) + i, part.start(b) + j) = blk(i, j) + (i == j ? 3.0 : 0.0);
        }
      }
    }
    const auto y = transform_observations(x, d);
    EXPECT_LE(rel_diff(log_vn(y, part), base), 1e-8);
  }
}

TEST(LogVn, ColumnPermutationWithinBlocks) {
  const auto x = random_data(30, 5, 9);
  // Swap columns 0 and 1 (same block).
  std::vector<double> v(x.matrix().values().begin(), x.matrix().values().end());
  for (std::size_t k = 0; k < 30; ++k) std::swap(v[k * 5], v[k * 5 + 1]);
  const DataMatrix y(30, 5, std::move(v));
  const BlockPartition part({2, 3});
  EXPECT_NEAR(log_vn(x, part), log_vn(y, part), 1e-10);
}

TEST(LogVn, RequiresMoreObservationsThanVariables) {
  const auto x = random_data(5, 5, 1);
  EXPECT_EQ(code_of([&] { log_vn(x, BlockPartition({2, 3})); }),
            ErrorCode::DimensionExceedsSample);
  EXPECT_EQ(code_of([&] { log_vn(x, BlockPartition({2, 2})); }), ErrorCode::DimensionMismatch);
}

// ── block_test ───────────────────────────────────────────────────────

TEST(BlockTest, BoundaryRejects) {
  const auto c = block_constants(100, BlockPartition::uniform(30, 2));
  const double crit = c.sigma_n * normal_quantile(0.05) + c.mu_n;
  const auto r = make_report(crit, c.mu_n, c.sigma_n, 0.05);
  EXPECT_TRUE(r.reject);
  EXPECT_NEAR(r.z, normal_quantile(0.05), 1e-12);
  const auto above = make_report(std::nextafter(crit, 0.0), c.mu_n, c.sigma_n, 0.05);
  EXPECT_FALSE(above.reject);
}

TEST(BlockTest, DecisionMatchesPValue) {
  const BlockPartition part = BlockPartition::uniform(10, 2);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto x = random_data(40, 20, seed);
    if (seed % 2 == 1) x = transform_observations(x, compound_symmetry_sqrt(0.3, 20).matrix());
    const auto r = block_test(x, part, 0.1);
    EXPECT_EQ(r.reject, r.p_value <= 0.1);
    EXPECT_NEAR(r.z, (r.log_statistic - r.mu) / r.sigma, 1e-12);
    EXPECT_NEAR(r.p_value, normal_cdf(r.z), 1e-15);
  }
}

TEST(BlockTest, StrongDependenceRejects) {
  auto x = random_data(200, 40, 3);
  x = transform_observations(x, compound_symmetry_sqrt(0.5, 40).matrix());
  EXPECT_TRUE(block_test(x, BlockPartition::uniform(20, 2), 0.05).reject);
}

TEST(BlockTest, Warnings) {
  EXPECT_TRUE(block_assumption_warnings(100, BlockPartition::uniform(30, 2)).empty());
  EXPECT_FALSE(block_assumption_warnings(100, BlockPartition::uniform(48, 2)).empty());
  EXPECT_FALSE(block_assumption_warnings(100, BlockPartition({1, 50})).empty());
}

TEST(BlockTest, InvalidAlpha) {
  const auto x = random_data(20, 4, 1);
  EXPECT_EQ(code_of([&] { block_test(x, BlockPartition({2, 2}), 1.0); }),
            ErrorCode::InvalidAlpha);
}

// ── correlation test ─────────────────────────────────────────────────

TEST(Correlation, OrthogonalColumnsGiveZero) {
  const DataMatrix x(4, 3, {1, 1, 1,   //
                            1, -1, 1,  //
                            1, 1, -1,  //
                            1, -1, -1});
  EXPECT_NEAR(log_det_correlation(x), 0.0, 1e-14);
}

TEST(Correlation, TwoVariables) {
  const DataMatrix x(4, 2, {1, 2, 0, 1, 2, -1, 1, 3});
  const auto s = sample_covariance(x);
  const double r = s(0, 1) / std::sqrt(s(0, 0) * s(1, 1));
  EXPECT_NEAR(log_det_correlation(x), std::log(1.0 - r * r), 1e-14);
}

TEST(Correlation, EqualsUnitPartitionLogVn) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 30 + seed * 5, p = 5 + seed * 3;
    const auto x = random_data(n, p, seed);
    EXPECT_NEAR(log_det_correlation(x), log_vn(x, BlockPartition::unit(p)), 1e-10);
  }
}

TEST(Correlation, FrozenConstants) {
  const auto c = correlation_constants(100, 60);
  EXPECT_NEAR(c.mu_n, -23.20400098516439232, 1e-10);
  EXPECT_NEAR(c.variance(), 0.62654116132813718834, 1e-12);
  EXPECT_NEAR(c.sigma_n, 0.79154353091168472283, 1e-12);
}

TEST(Correlation, ConstantsSpecializeBlockConstants) {
  for (std::size_t n = 3; n <= 300; n += 13) {
    for (std::size_t p = 2; p < n; p += 5) {
      const auto a = correlation_constants(n, p);
      const auto b = block_constants(n, BlockPartition::unit(p));
      ASSERT_NEAR(a.mu_n, b.mu_n, 1e-12 * std::max(1.0, std::abs(b.mu_n)));
      ASSERT_NEAR(a.sigma_n, b.sigma_n, 1e-12);
    }
  }
}

// Difference to the closed form -(n-p-1/2) log(1-(p-1)/n) - (p-1) + p/n at
// p/n = 1/2 shrinks like 1/n. References from 40-digit arithmetic.
TEST(Correlation, MeanApproachesClosedForm) {
  const std::size_t ns[] = {100, 1000, 10000};
  const double expected[] = {-0.017674027333702034, -0.0017892115739084653,
                             -0.00017914208657864008};
  double previous = 1.0;
  for (int k = 0; k < 3; ++k) {
    const double n = static_cast<double>(ns[k]), p = n / 2.0;
    const double closed = -(n - p - 0.5) * std::log1p(-(p - 1.0) / n) - (p - 1.0) + p / n;
    const double diff = correlation_constants(ns[k], ns[k] / 2).mu_n - closed;
    EXPECT_NEAR(diff, expected[k], 1e-9 * n);
    EXPECT_LT(std::abs(diff), previous);
    previous = std::abs(diff);
  }
}

TEST(Correlation, ZeroVarianceColumn) {
  const DataMatrix x(3, 2, {1, 0, 2, 0, 3, 0});
  EXPECT_EQ(code_of([&] { log_det_correlation(x); }), ErrorCode::ZeroVariance);
}

TEST(Correlation, NeedsPBelowN) {
  const auto x = random_data(5, 6, 2);
  EXPECT_EQ(code_of([&] { correlation_test(x, 0.05); }), ErrorCode::DimensionExceedsSample);
}

}  // namespace
}  // namespace hdlrt
