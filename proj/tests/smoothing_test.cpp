#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dioprime/smoothing.hpp"

namespace dioprime {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(FDirect, Values) {
  EXPECT_NEAR(f_direct(0.0, 0.5), 1.0000069746847124, 1e-15);
  EXPECT_LT(f_direct(0.5, 0.1), 1e-30);
  for (double delta : {0.05, 0.2, 0.5}) EXPECT_GE(f_direct(delta, delta), std::exp(-kPi));
  EXPECT_THROW(f_direct(0.0, 0.0), Error);
  EXPECT_THROW(f_direct(0.0, 0.6), Error);
}

TEST(FDirect, PeriodicAndEven) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(f_direct(x, 0.3), f_direct(x + 1.0, 0.3), 1e-14);
    EXPECT_NEAR(f_direct(x, 0.3), f_direct(-x, 0.3), 1e-14);
  }
}

TEST(FDirect, ShapeProperties) {
  for (double delta : {0.05, 0.1, 0.25, 0.5}) {
    const double peak = f_direct(0.0, delta);
    EXPECT_LE(peak, 1.0 + 3.0 * std::exp(-kPi / (delta * delta)));
    for (int j = 0; j <= 2000; ++j) {
      const double x = j / 4000.0;  // ||x|| = x on [0, 1/2]
      const double f = f_direct(x, delta);
      EXPECT_LE(f, peak);
      if (x <= delta) {
        EXPECT_GE(f, std::exp(-kPi));
      }
      for (double T : {2.0, 3.0})
        if (x >= T * delta) {
          EXPECT_LE(f, 2.0 * std::exp(-kPi * T * T));
        }
    }
  }
}

TEST(Kernel, Coefficients) {
  const SmoothingKernel k(0.1, 30);
  EXPECT_EQ(k.coefficient(0), 1.0);
  for (int l = 1; l <= 30; ++l) {
    EXPECT_LE(k.coefficient(l), 1.0);
    EXPECT_GT(k.coefficient(l), 0.0);
    EXPECT_LT(k.coefficient(l), k.coefficient(l - 1));
    EXPECT_EQ(k.coefficient(-l), k.coefficient(l));
  }
  EXPECT_EQ(k.coefficient(31), 0.0);
}

TEST(Kernel, ExperimentLength) {
  EXPECT_EQ(SmoothingKernel::experiment_length(0.45, 1e6, 0.01), 3);  // 10^0.06 / 0.45 = 2.55
  EXPECT_EQ(SmoothingKernel::experiment_length(0.3, 200, 0.05), 5);
  EXPECT_GE(SmoothingKernel::experiment_length(0.5, 10, 0.0), 2);
}

TEST(FFourier, MatchesDirect) {
  const SmoothingKernel k(0.5, 50);
  EXPECT_NEAR(f_fourier(0.0, k), 1.0000069746847124, 1e-14);
  const SmoothingKernel k2(0.1, 200);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(f_fourier(x, k2), f_direct(x, 0.1), 1e-12);
  }
  EXPECT_EQ(f_fourier(0.3, SmoothingKernel(0.2, 0)), 0.2);
}

TEST(FFourier, WithinTruncationBound) {
  // short kernels so the tail bound is actually visible
  for (auto [delta, L] : {std::pair{0.5, 2}, std::pair{0.3, 3}, std::pair{0.2, 4}, std::pair{0.1, 10}}) {
    const SmoothingKernel k(delta, L);
    const double tb = truncation_bound(delta, L).value;
    ASSERT_GT(tb, 0.0);
    double worst = 0.0;
    for (int j = 0; j < 10000; ++j) {
      const double x = j / 10000.0;
      worst = std::max(worst, std::abs(f_direct(x, delta) - f_fourier(x, k)));
    }
    EXPECT_LE(worst, tb + 1e-12) << delta << " " << L;
    EXPECT_GT(worst, 0.01 * tb) << "bound far from sharp";
  }
}

TEST(FFourier, LongKernelPhaseDrift) {
  // L beyond the re-seed period exercises the recurrence restarts
  const SmoothingKernel k(0.001, 5000);
  for (double x : {0.0, 0.123456789, 0.5, 0.77})
    EXPECT_NEAR(f_fourier(x, k), f_direct(x, 0.001), 1e-11) << x;
}

TEST(TruncationBound, Values) {
  const auto tb = truncation_bound(0.5, 10);
  EXPECT_NEAR(tb.value / 7.773e-35, 1.0, 1e-3);
  EXPECT_FALSE(tb.underflow);
  const auto u = truncation_bound(0.1, 200);
  EXPECT_TRUE(u.underflow);
  EXPECT_EQ(u.value, 0.0);
  EXPECT_NEAR(u.log_value, std::log(0.2) - 400 * kPi - std::log1p(-std::exp(-kPi * 0.01 * 401)), 1e-9);
  for (int L = 1; L < 40; ++L) EXPECT_LT(truncation_bound(0.3, L + 1).log_value, truncation_bound(0.3, L).log_value);
  EXPECT_THROW(truncation_bound(0.3, 0), Error);
}

}  // namespace
}  // namespace dioprime
