#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dioprime/acceptance.hpp"
#include "dioprime/expsum.hpp"

namespace dioprime {
namespace {

const AlphaSpec kSqrt2 = AlphaSpec::sqrt_of(2);

TEST(LinearExpSum, TrivialCases) {
  EXPECT_NEAR(std::abs(linear_exp_sum(0, 10, 0.0) - std::complex<double>(10, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(linear_exp_sum(0, 10, 3.0) - std::complex<double>(10, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(linear_exp_sum(0, 10, 0.5)), 0.0, 1e-15);
  EXPECT_EQ(linear_exp_sum_range(5, 4, 0.3), std::complex<double>(0, 0));
  EXPECT_THROW(linear_exp_sum(2.0, 1.0, 0.1), Error);
}

TEST(LinearExpSum, RealEndpoints) {
  // (0.5, 3.7] holds n = 1, 2, 3
  const auto s = linear_exp_sum(0.5, 3.7, 0.1);
  const auto r = reference::linear_exp_sum(1, 3, 0.1);
  EXPECT_NEAR(std::abs(s - r), 0.0, 1e-14);
}

TEST(LinearExpSum, ClosedFormMatchesNaive) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const auto a = static_cast<std::int64_t>(rng() % 2'000'001) - 1'000'000;
    const auto len = static_cast<std::int64_t>(rng() % 3000);
    const double x = acceptance::unit_double(rng);
    const auto closed = linear_exp_sum_range(a, a + len - 1, x);
    EXPECT_LE(std::abs(closed - reference::linear_exp_sum(a, a + len - 1, x)), 1e-10);
    EXPECT_LE(std::abs(closed), linear_exp_sum_bound(len, x) * (1 + 1e-12));
  }
}

TEST(MinSum, Examples) {
  const auto o = AngleOracle::build(kSqrt2, 100);
  const auto a = min_sum(o, 10, 100.0);
  EXPECT_NEAR(a.value, 55.2582740309848347, 1e-9);
  EXPECT_EQ(a.flagged, 0u);
  EXPECT_NEAR(min_sum(o, 10, 5.0).value, 38.3734977201345991, 1e-9);
  EXPECT_NEAR(min_sum(o, 1, 100.0).value, 1.0 / (std::sqrt(2.0) - 1.0), 1e-9);
  EXPECT_THROW(min_sum(o, 101, 5.0), Error);
  EXPECT_THROW(min_sum(o, 10, 0.5), Error);
}

TEST(MinSum, MonotoneInMAndN) {
  const auto o = AngleOracle::build(AlphaSpec::golden_ratio(), 5000);
  double last = 0.0;
  for (std::uint64_t M = 1; M <= 5000; M += 37) {
    const double v = min_sum(o, M, 50.0).value;
    EXPECT_GE(v, last);
    last = v;
  }
  last = 0.0;
  for (double N = 1.0; N < 1e6; N *= 1.7) {
    const double v = min_sum(o, 1000, N).value;
    EXPECT_GE(v, last);
    last = v;
  }
}

TEST(StandardEstimate, Branches) {
  auto e = standard_estimate_bound(14, 1e6, 29);
  EXPECT_EQ(e.branch, EstimateBranch::SmallM);
  EXPECT_NEAR(e.value, 29 * std::log(29.0), 1e-12);
  EXPECT_NEAR(e.value, 97.6516, 1e-4);
  e = standard_estimate_bound(100, 50, 29);
  EXPECT_EQ(e.branch, EstimateBranch::LargeM);
  EXPECT_NEAR(e.value, 509.1434, 1e-4);
  e = standard_estimate_bound(7, 30, 1);
  EXPECT_EQ(e.branch, EstimateBranch::LargeM);
  EXPECT_NEAR(e.value, 7 * 30 + 7, 1e-12);
  // type I comparator plug-in: M = 8, H = 2, q = 29, Y = 60
  e = standard_estimate_bound(16, 60.0 / 8, 29);
  EXPECT_EQ(e.branch, EstimateBranch::LargeM);
  EXPECT_NEAR(e.value, 2 * 60.0 / 29 + 16 * std::log(29.0), 1e-12);
  EXPECT_NEAR(standard_estimate_collapsed(100, 50, 29), 100 * 50 / 29.0 + 129 * std::log(29.0), 1e-12);
  EXPECT_THROW(standard_estimate_bound(0.5, 1, 1), Error);
}

TEST(EmpiricalConstant, Examples) {
  const auto table = empirical_constant({{kSqrt2, 14, 1e6, 29},
                                         {AlphaSpec::golden_ratio(), 6, 1e3, 13},
                                         {kSqrt2, 7, 1e3, 1}});
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_NEAR(table.rows[0].ratio, table.rows[0].min_sum / (29 * std::log(29.0)), 1e-12);
  EXPECT_LE(table.rows[0].ratio, 8.0);
  EXPECT_LE(table.rows[1].ratio, 8.0);
  EXPECT_LE(table.rows[2].ratio, 1.0);
  EXPECT_LE(table.max_ratio, 8.0);
  EXPECT_THROW(empirical_constant({{kSqrt2, 14, 1e3, 10}}), Error);
}

TEST(EmpiricalConstant, ShippedGrid) {
  bool passed = false;
  const auto detail = acceptance::criterion_5_detail(passed);
  EXPECT_TRUE(passed) << detail.dump();
}

TEST(PointsPerInterval, AtMostTwoInHalfPeriodWindows) {
  std::mt19937_64 rng(2);
  for (const auto& c : convergents(kSqrt2, 12)) {
    const auto q = static_cast<std::uint64_t>(c.q);
    if (q < 2) continue;
    const auto o = AngleOracle::build(kSqrt2, 200 * q, std::ldexp(1.0, -56));
    for (int i = 0; i < 20; ++i) {
      const std::uint64_t M0 = rng() % (100 * q);
      const int best = max_points_per_interval(o, q, M0, M0 + q / 2);
      EXPECT_GE(best, 1);
      EXPECT_LE(best, 2) << q << " " << M0;
    }
  }
}

}  // namespace
}  // namespace dioprime
