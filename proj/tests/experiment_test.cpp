#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dioprime/experiment.hpp"

namespace dioprime {
namespace {

ExperimentConfig config(std::uint64_t X, std::uint64_t Y, double delta, double eps = 0.01) {
  ExperimentConfig c;
  c.X = X;
  c.Y = Y;
  c.delta = delta;
  c.eps = eps;
  return c;
}

bool has_flag(const SumReport& r, const std::string& f) {
  return std::find(r.flags.begin(), r.flags.end(), f) != r.flags.end();
}

TEST(Admissibility, DefaultPoint) {
  const auto a = check_admissible(ExperimentConfig{});
  EXPECT_TRUE(a.admissible());
  EXPECT_NEAR(a.y_floor, 39810.717, 1e-3);
  EXPECT_NEAR(a.delta_floor, 0.398107, 1e-6);
  EXPECT_NEAR(a.q_window.first, 292.946, 1e-3);
  EXPECT_NEAR(a.q_window.second, 336.347, 1e-3);
}

TEST(Admissibility, NamesTheFailingInequality) {
  const auto a = check_admissible(config(1'000'000, 500'001, 0.45));
  EXPECT_FALSE(a.admissible());
  const auto v = a.violated();
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "Y <= X/2");
}

TEST(Admissibility, TotalOnGarbage) {
  for (auto c : {config(0, 0, -1, -1), config(3, 100, 7, 0), config(1, 0, std::nan(""), 1e9)}) {
    Admissibility a;
    EXPECT_NO_THROW(a = check_admissible(c));
    EXPECT_FALSE(a.admissible());
    EXPECT_NO_THROW(a.to_json().dump());
  }
}

TEST(SelectQ, Examples) {
  const auto w = q_window(1e6, 1e5, 0.45, 0.01);
  auto c = select_q(AlphaSpec::sqrt_of(2), w, QPolicy::NearestConvergent);
  EXPECT_EQ(c.q(), 408u);
  EXPECT_FALSE(c.in_window);
  c = select_q(AlphaSpec::golden_ratio(), w, QPolicy::NearestConvergent);
  EXPECT_EQ(c.q(), 377u);
  EXPECT_FALSE(c.in_window);
  c = select_q(AlphaSpec::sqrt_of(2), {10, 40}, QPolicy::StrictWindow);
  EXPECT_EQ(c.q(), 12u);
  EXPECT_TRUE(c.in_window);
  try {
    select_q(AlphaSpec::sqrt_of(2), w, QPolicy::StrictWindow);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::kWindowNotFound);
  }
}

TEST(SmoothedSum, ZeroLengthInterval) {
  const auto r = run_smoothed_sum(config(10'000, 0, 0.3));
  EXPECT_EQ(r.value, 0.0);
  ASSERT_TRUE(r.main_term.has_value());
  EXPECT_EQ(*r.main_term, 0.0);
  EXPECT_FALSE(r.ratio.has_value());
  EXPECT_EQ(to_json(r).at("ratio"), nullptr);
}

TEST(SmoothedSum, HalfDeltaTracksPsi) {
  const auto c = config(100'000, 20'000, 0.5);
  const auto r = run_smoothed_sum(c);
  const double psi = r.bound_terms.at("psi_interval");
  EXPECT_NEAR(psi, mangoldt_sum_interval(100'000, 20'000), 1e-9 * psi);
  EXPECT_NEAR(*r.main_term, 0.5 * 20'000, 1e-9);
  EXPECT_NEAR(r.bound_terms.at("delta_psi_interval"), 0.5 * psi, 1e-9);
  EXPECT_NEAR(r.bound_terms.at("error_sum"), r.value - 0.5 * psi, 1e-6 * psi);
  EXPECT_NEAR(r.value / (0.5 * psi), 1.0, 0.05);

  const auto kernel = SmoothingKernel::for_experiment(c.delta, static_cast<double>(c.X), c.eps);
  const auto oracle = AngleOracle::build(c.alpha, c.X);
  KahanSum fourier;
  sieve_interval(c.X - c.Y, c.X).for_each_prime_power([&](const PrimePower& pp) {
    fourier += pp.log_p() * f_fourier(oracle.frac(static_cast<std::int64_t>(pp.n)), kernel);
  });
  const double tail = std::exp(r.bound_terms.at("fourier_tail_log"));
  EXPECT_NEAR(r.value, fourier.value(), psi * tail + 1e-9 * psi);
}

TEST(SmoothedSum, InadmissibleRunsWithFlags) {
  const auto r = run_smoothed_sum(config(100'000, 60'000, 0.3));
  EXPECT_TRUE(has_flag(r, "inadmissible: Y <= X/2"));
  EXPECT_GT(r.value, 0.0);
  EXPECT_THROW(run_smoothed_sum(config(1000, 2000, 0.3)), Error);
  EXPECT_THROW(run_smoothed_sum(config(1000, 100, 0.6)), Error);
}

TEST(PrimeCount, HalfDeltaCountsAllPrimes) {
  const auto r = run_prime_count(config(100'000, 20'000, 0.5));
  const auto sieve = sieve_interval(80'000, 100'000);
  EXPECT_EQ(r.value, static_cast<double>(sieve.prime_count()));
  EXPECT_NEAR(*r.main_term, 2 * 0.5 * 20'000 / std::log(100'000.0), 1e-9);
}

TEST(PrimeCount, NearDensity) {
  const auto r = run_prime_count(ExperimentConfig{});
  ASSERT_TRUE(r.ratio.has_value());
  EXPECT_NEAR(*r.ratio, 1.0, 0.15);
  EXPECT_EQ(r.q_used, 408u);
  EXPECT_TRUE(has_flag(r, "window_fallback"));
}

TEST(Config, ParsesAndRejectsUnknownKeys) {
  const auto c = ExperimentConfig::from_json(json::parse(
      R"({"X": 5e5, "Y": 60000, "delta": 0.4, "alpha": "golden", "precision": "2^-30", "q_policy": "strict"})"));
  EXPECT_EQ(c.X, 500'000u);
  EXPECT_EQ(c.Y, 60'000u);
  EXPECT_EQ(c.delta, 0.4);
  EXPECT_EQ(c.precision, std::ldexp(1.0, -30));
  EXPECT_EQ(c.q_policy, QPolicy::StrictWindow);
  EXPECT_EQ(c.alpha.to_string(), AlphaSpec::golden_ratio().to_string());
  try {
    ExperimentConfig::from_json(json::parse(R"({"X": 1000, "U": 10})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::kConfig);
  }
  EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"X": 1.5})")), Error);
  EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"format": "xml"})")), Error);
  EXPECT_THROW(ExperimentConfig::from_json(json::array()), Error);
}

TEST(Config, RoundTrip) {
  ExperimentConfig c = config(123'456, 40'000, 0.35, 0.02);
  c.alpha = AlphaSpec::sqrt_of(7);
  const auto back = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
}

TEST(Config, PrecisionGrammar) {
  EXPECT_EQ(parse_precision("2^-40"), std::ldexp(1.0, -40));
  EXPECT_EQ(parse_precision("1e-9"), 1e-9);
  EXPECT_THROW(parse_precision("tiny"), Error);
  EXPECT_THROW(parse_q_policy("closest"), Error);
}

TEST(Determinism, RepeatedRunsMatch) {
  const auto c = config(200'000, 30'000, 0.45);
  EXPECT_EQ(report_json(run_smoothed_sum(c), c).dump(), report_json(run_smoothed_sum(c), c).dump());
  EXPECT_EQ(report_json(run_prime_count(c), c).dump(), report_json(run_prime_count(c), c).dump());
}

TEST(BoundSuite, SmallInstanceHolds) {
  auto c = config(500, 150, 0.3, 0.05);
  const auto out = run_bound_suite(c);
  EXPECT_TRUE(out.summary.ok());
  EXPECT_GT(out.summary.nonempty_blocks, 0u);
  EXPECT_LE(out.summary.max_split_residual, 1e-9);
  EXPECT_GT(out.summary.gamma_instances, 0u);
  EXPECT_EQ(run_bound_suite(c).report.dump(), out.report.dump());
}

TEST(BoundSuite, EmptyGridIsFlagged) {
  const auto out = run_bound_suite(config(1009, 1, 0.3, 0.05));
  EXPECT_EQ(out.summary.nonempty_blocks, 0u);
  const auto& flags = out.report.at("flags");
  EXPECT_TRUE(std::any_of(flags.begin(), flags.end(),
                          [](const json& f) { return f.get<std::string>().rfind("empty_grid", 0) == 0; }));
}

TEST(Sweep, TwoPointsInOrder) {
  const auto spec = SweepSpec::from_json(
      json::parse(R"({"run": "ssum", "base": {"delta": 0.45}, "vary": {"X": [100000, 1000000]}, "Y_over_X": 0.1})"));
  ASSERT_EQ(spec.points.size(), 2u);
  const auto rows = sweep(spec);
  ASSERT_EQ(rows.size(), 2u);
  ASSERT_TRUE(rows[0].report && rows[1].report);
  EXPECT_LT(rows[0].report->bound_terms.at("psi_interval"), rows[1].report->bound_terms.at("psi_interval"));
  const auto csv = sweep_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.rfind("index,X,Y,delta", 0), 0u);
}

TEST(Sweep, EmptyGeneratorGivesHeaderOnly) {
  const auto rows = sweep(SweepSpec::from_json(json::parse(R"({"points": []})")));
  EXPECT_TRUE(rows.empty());
  const auto csv = sweep_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  EXPECT_EQ(sweep_json(rows), json::array());
}

TEST(Sweep, MixedRowsCarryErrorCodes) {
  const auto rows = sweep(SweepSpec::from_json(json::parse(
      R"({"run": "count", "points": [{"X": 100000, "Y": 10000, "delta": 0.4}, {"X": 1000, "Y": 5000},
                                      {"X": 1000, "bogus": 1}, {"X": 100000, "Y": 10000, "delta": 0.9}]})")));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(rows[0].report.has_value());
  EXPECT_TRUE(rows[0].error_code.empty());
  EXPECT_EQ(rows[1].error_code, errc::kInvalidArgument);
  EXPECT_EQ(rows[2].error_code, errc::kConfig);
  EXPECT_EQ(rows[3].error_code, errc::kInvalidArgument);
  const auto j = sweep_json(rows);
  EXPECT_EQ(j.size(), 4u);
  EXPECT_THROW(SweepSpec::from_json(json::parse(R"({"vary": {"eps": [0.1]}})")), Error);
}

}  // namespace
}  // namespace dioprime
