#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dioprime/acceptance.hpp"
#include "dioprime/vaughan.hpp"

namespace dioprime {
namespace {

const AlphaSpec kSqrt2 = AlphaSpec::sqrt_of(2);

SumContext context(std::uint64_t X, std::uint64_t Y, double delta, double eps, const AlphaSpec& alpha = kSqrt2,
                   std::uint64_t budget = 1'000'000'000) {
  return make_sum_context(X, Y, delta, eps, alpha, AngleOracle::kDefaultErrTarget, budget, 29);
}

double s1_naive(const SumContext& ctx, long double alpha) {
  long double total = 0.0L;
  const std::int64_t L = ctx.kernel.length();
  for (std::uint64_t m = 1; m <= ctx.cbrt_X2; ++m) {
    const auto lo = static_cast<std::int64_t>((ctx.X - ctx.Y) / m) + 1, hi = static_cast<std::int64_t>(ctx.X / m);
    long double best = 0.0L;
    for (auto s = lo; s <= hi; ++s) {
      std::complex<long double> acc{0.0L, 0.0L};
      for (auto n = s; n <= hi; ++n)
        for (std::int64_t l = 1; l <= L; ++l)
          acc += static_cast<long double>(reference::gaussian_weight(ctx.delta, l)) *
                 reference::phase(reference::frac_of(l * static_cast<std::int64_t>(m) * n, alpha));
      best = std::max(best, std::abs(acc));
    }
    total += best;
  }
  return static_cast<double>(total);
}

TEST(VaughanPieces, Examples) {
  const SmallTables t(200);
  auto p = vaughan_pieces(101, {4, 4}, t);
  EXPECT_NEAR(p.A1, std::log(101.0), 1e-14);
  EXPECT_NEAR(p.A2, 0.0, 1e-14);
  EXPECT_NEAR(p.A3, 0.0, 1e-14);
  p = vaughan_pieces(12, {4, 4}, t);
  EXPECT_NEAR(p.A1, -std::log(2.0), 1e-14);
  EXPECT_NEAR(p.A2, -std::log(2.0), 1e-14);
  EXPECT_NEAR(p.A3, 0.0, 1e-14);
  p = vaughan_pieces(35, {2, 2}, t);
  EXPECT_NEAR(p.A1, std::log(35.0), 1e-14);
  EXPECT_NEAR(p.A2, 0.0, 1e-14);
  EXPECT_NEAR(p.A3, std::log(35.0), 1e-14);
  EXPECT_THROW(vaughan_pieces(4, {4, 4}, t), Error);
}

TEST(VaughanPieces, IdentityHoldsEverywhere) {
  const SmallTables t(5000);
  for (double u : {4.0, 10.0, 17.0, 2.5})
    for (double v : {u, 3.0, 30.0})
      for (std::uint64_t n = static_cast<std::uint64_t>(u) + 1; n <= 5000; ++n)
        ASSERT_NEAR(vaughan_pieces(n, {u, v}, t).combined(), t.mangoldt(n), 1e-9) << n << " " << u << " " << v;
}

TEST(VaughanParams, Validation) {
  EXPECT_NO_THROW((VaughanParams{10, 10}.validate(100)));
  EXPECT_THROW((VaughanParams{11, 10}.validate(100)), Error);
  EXPECT_THROW((VaughanParams{0.5, 10}.validate(100)), Error);
}

TEST(BCoeff, ExamplesAndDivisorBound) {
  const SmallTables t(100'000);
  EXPECT_EQ(b_coeff(1, 1, t), 1);
  EXPECT_EQ(b_coeff(1, 50, t), 1);
  EXPECT_EQ(b_coeff(6, 2, t), 0);
  EXPECT_EQ(b_coeff(30, 5, t), -2);
  EXPECT_EQ(t.tau(30), 8u);
  for (double V : {2.0, 7.0, 46.0})
    for (std::uint64_t n = 1; n <= 100'000; ++n)
      ASSERT_LE(std::llabs(b_coeff(n, V, t)), static_cast<long long>(t.tau(n))) << n;
}

TEST(Context, ExactCubeRoots) {
  const auto ctx = context(1000, 300, 0.3, 0.05);
  EXPECT_EQ(ctx.cbrt_X, 10u);
  EXPECT_EQ(ctx.cbrt_X2, 100u);
  EXPECT_GE(ctx.kernel.length(), 1);
  EXPECT_GE(ctx.oracle.n_max(), 1000u * 6);
}

TEST(TypeI, T1MatchesNaive) {
  for (auto [X, Y, delta] : {std::tuple{200, 60, 0.3}, std::tuple{500, 150, 0.3}, std::tuple{1000, 200, 0.2}}) {
    const auto ctx = context(X, Y, delta, 0.05);
    const long double a = reference::alpha_value(kSqrt2);
    for (double H : {1.0, 2.0, 3.0, 4.0}) {
      if (H > ctx.L()) continue;
      const auto r = t1_sum(H, ctx);
      const double naive = reference::t1_naive(ctx, H, a);
      EXPECT_NEAR(r.value, naive, 1e-8 * std::max(1.0, naive)) << X << " H=" << H;
      ASSERT_TRUE(r.ratio.has_value());
      EXPECT_NEAR(*r.ratio, r.value / Y, 1e-15);
    }
  }
}

TEST(TypeI, S1MatchesNaive) {
  const auto ctx = context(200, 60, 0.3, 0.05);
  const auto r = s1_type_I(ctx);
  const double naive = s1_naive(ctx, reference::alpha_value(kSqrt2));
  EXPECT_NEAR(r.value, naive, 1e-8 * naive);
  EXPECT_GT(r.bound_terms.at("comparator.min_sum_total"), 0.0);
}

TEST(TypeI, ComparatorAndFirstCondition) {
  const auto ctx = context(200, 60, 0.3, 0.05);
  const auto r = t1_sum(2, ctx);
  EXPECT_NEAR(r.bound_terms.at("ourfirstcond.Y_over_q"), 60.0 / 29, 1e-12);
  EXPECT_NEAR(r.bound_terms.at("ourfirstcond.delta_q"), 0.3 * 29, 1e-12);
  EXPECT_NEAR(r.bound_terms.at("ourfirstcond.X_2_3"), std::pow(200.0, 2.0 / 3.0), 1e-9);
  EXPECT_EQ(r.q_used, 29u);
  const auto c = type_i_comparator(8, 2, ctx);
  EXPECT_EQ(c.estimate.branch, EstimateBranch::LargeM);
  EXPECT_NEAR(c.estimate.value, 2 * 60.0 / 29 + 16 * std::log(29.0), 1e-12);
}

TEST(TypeI, GridFallbackIsFlaggedAndBelowExact) {
  const auto exact = t1_value(2, context(1'000'000, 100'000, 0.45, 0.01));
  const auto coarse_ctx = context(1'000'000, 100'000, 0.45, 0.01, kSqrt2, 700'000);
  const auto coarse = t1_sum(2, coarse_ctx);
  EXPECT_NE(std::find(coarse.flags.begin(), coarse.flags.end(), "grid_fallback"), coarse.flags.end());
  EXPECT_LE(coarse.value, exact.value * (1 + 1e-12));
  EXPECT_GT(coarse.value, 0.5 * exact.value);
  EXPECT_FALSE(exact.grid_fallback);
}

TEST(TypeI, WorkloadGuard) {
  const auto ctx = context(500, 150, 0.3, 0.05, kSqrt2, 10);
  try {
    t1_sum(2, ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::kWorkload);
  }
  EXPECT_THROW(t1_sum(0.5, context(500, 150, 0.3, 0.05)), Error);
  EXPECT_THROW(t1_sum(100, context(500, 150, 0.3, 0.05)), Error);
}

TEST(TypeII, T2MatchesNaive) {
  const long double a = reference::alpha_value(kSqrt2);
  const auto ctx = context(500, 150, 0.3, 0.05);
  const auto r = t2_sum(2, 16, ctx);
  const auto naive = reference::t2_naive(ctx, 2, 16, a);
  EXPECT_NEAR(r.bound_terms.at("T2.re"), naive.real(), 1e-8 * std::max(1.0, std::abs(naive)));
  EXPECT_NEAR(r.bound_terms.at("T2.im"), naive.imag(), 1e-8 * std::max(1.0, std::abs(naive)));
  EXPECT_TRUE(r.flags.empty());
  for (std::uint64_t X : {200, 729, 1000}) {
    const auto c = context(X, X / 3, 0.3, 0.05);
    for (double H : dyadic_fourier_blocks(c)) {
      if (H > 4) continue;
      for (double M : dyadic_type_ii_blocks(c)) {
        const auto v = evaluate_type_ii(H, M, c).t2;
        const auto n = reference::t2_naive(c, H, M, a);
        EXPECT_NEAR(std::abs(v - n), 0.0, 1e-8 * std::max(1.0, std::abs(n))) << X << " " << H << " " << M;
      }
    }
  }
}

TEST(TypeII, EmptyBlock) {
  const auto ctx = context(500, 150, 0.3, 0.05);
  const auto r = t2_sum(2, 200, ctx);  // M/2 >= X^{2/3}
  EXPECT_EQ(r.value, 0.0);
  ASSERT_EQ(r.flags.size(), 1u);
  EXPECT_EQ(r.flags[0], "empty_block");
}

TEST(TypeII, SplitIdentityAndCauchySchwarz) {
  for (const auto& alpha : {kSqrt2, AlphaSpec::golden_ratio()}) {
    const auto ctx = context(500, 150, 0.3, 0.05, alpha);
    for (double H : dyadic_fourier_blocks(ctx))
      for (double M : dyadic_type_ii_blocks(ctx)) {
        const auto s = t3_t4_t5_split(H, M, ctx);
        EXPECT_LE(s.identity_residual, 1e-9);
        EXPECT_NEAR(std::abs(s.t4 + s.t5 - std::complex<double>(s.t3, 0)), 0.0, 1e-9 * std::max(1.0, s.t3));
        EXPECT_TRUE(s.cauchy_schwarz);
        EXPECT_LE(std::norm(s.t2), s.sum_a2 * s.t3 * (1 + 1e-12));
        EXPECT_LE(static_cast<double>(s.max_m_length), s.m_length_limit);
      }
  }
}

TEST(TypeII, EmptyPairRanges) {
  const auto ctx = context(1000, 300, 0.3, 0.05);
  for (double M : dyadic_type_ii_blocks(ctx))
    for (std::int64_t n1 = 11; n1 <= 100; ++n1)
      for (std::int64_t n2 = n1; n2 <= 100; ++n2)
        if ((n2 - n1) * 1000 >= n2 * 300) {
          auto [lo, hi] = pair_m_range(n1, n2, M, ctx);
          EXPECT_GT(lo, hi) << n1 << " " << n2;
        }
}

TEST(TypeII, WorkloadGuard) {
  const auto ctx = context(1000, 300, 0.3, 0.05, kSqrt2, 100);
  EXPECT_THROW(t2_sum(2, 50, ctx), Error);
  EXPECT_THROW(t3_t4_t5_split(2, 50, ctx), Error);
}

TEST(Gamma, TinyInstance) {
  const auto g = GammaRanges::from(256, 64, 4, 32);
  EXPECT_EQ(g.n_lo, 5);
  EXPECT_EQ(g.n_hi, 16);
  EXPECT_EQ(g.k_max, 4);
  EXPECT_EQ(g.h_lo, 3);
  EXPECT_EQ(g.h_hi, 4);
  EXPECT_EQ(g.l_bound, 64);
  const auto zero = gamma_counts(0, g);
  EXPECT_EQ(zero.gamma0, 12u * 2u);
  EXPECT_LE(zero.gamma0, 2u * 256 * 4 / 32);
  std::uint64_t mass = 0;
  const auto brute = reference::enumerate_quadruples(g);
  for (auto l = -g.l_bound; l <= g.l_bound; ++l) {
    const auto c = gamma_counts(l, g);
    const double gamma0_lo = -2.0 * 64 * 4 / 32;
    if (l < gamma0_lo || l > 0) {
      EXPECT_EQ(c.gamma0, 0u) << l;
    }
    EXPECT_LE(c.gamma1, gamma1_divisor_bound(l, g)) << l;
    auto it = brute.by_l.find(l);
    if (it == brute.by_l.end()) {
      EXPECT_EQ(c.total(), 0u);
    } else {
      EXPECT_EQ(c.gamma0, it->second.first) << l;
      EXPECT_EQ(c.gamma1, it->second.second) << l;
    }
    mass += c.total();
  }
  EXPECT_EQ(mass, brute.total);
  EXPECT_EQ(mass, gamma_total_quadruples(g));
}

TEST(Gamma, Guards) {
  EXPECT_THROW(GammaRanges::from(10000, 100, 4, 10), Error);  // X/M > 512
  EXPECT_THROW(GammaRanges::from(256, 64, 32, 32), Error);    // H > 16
  const auto g = GammaRanges::from(256, 64, 4, 32);
  EXPECT_THROW(gamma_counts(65, g), Error);
}

TEST(Gamma, DivisorCount) {
  EXPECT_EQ(divisor_count(1), 1u);
  EXPECT_EQ(divisor_count(12), 6u);
  EXPECT_EQ(divisor_count(49), 3u);
  const SmallTables t(2000);
  for (std::uint64_t n = 1; n <= 2000; ++n) ASSERT_EQ(divisor_count(n), t.tau(n));
}

TEST(BoundChain, Flags) {
  auto c = t2_bound_chain(1e6, 1e5, 0.45, 0.01, 4, 1e3, 300);
  EXPECT_TRUE(c.anothercond);
  EXPECT_FALSE(c.newcondi);  // 2YH/M = 800 > 150
  EXPECT_FALSE(c.uses_large_m);  // M = X^{1/2} exactly
  EXPECT_TRUE(c.q_window == (300 >= 292.9459 && 300 <= 336.3469));
  c = t2_bound_chain(1e6, 1e5, 0.45, 0.01, 4, 2000, 300);
  EXPECT_TRUE(c.uses_large_m);
  EXPECT_TRUE(c.newcondi == (2e5 * 4 / 2000 <= 150));
}

TEST(BoundChain, DominantTerm) {
  const double X = 1e6, Y = 1e5, H = 3, M = 1e4, q = 300, x4 = std::pow(X, 0.04);
  const auto c = t2_bound_chain(X, Y, 0.45, 0.01, H, M, q);
  const std::array<double, 8> terms{Y * Y * H * H / q, Y * H * H * M / q, X * Y * H * H / M, X * H * H,
                                    Y * H * q,         H * q * M,         Y * H * M,         X * q};
  std::size_t best = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(c.bound_large[i], terms[i] * x4, 1e-9 * terms[i] * x4) << i;
    if (terms[i] > terms[best]) best = i;
  }
  EXPECT_EQ(c.dominant, best);
  EXPECT_EQ(c.named().at("selected.dominant_index"), static_cast<double>(best));
  EXPECT_GT(c.final_rhs, 0.0);
}

}  // namespace
}  // namespace dioprime
