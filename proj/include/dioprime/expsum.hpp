#pragma once

// Linear exponential sums, the min-sums sum_{m<=M} min(N, 1/||alpha m||), and
// the two-branch standard estimate for them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "dioprime/alpha_engine.hpp"
#include "dioprime/errors.hpp"
#include "dioprime/numeric.hpp"

namespace dioprime {

/// sum_{n=a}^{b} e(n x) = e((a+b) x / 2) sin(pi N x) / sin(pi x), N = b - a + 1.
/// Empty (zero) when b < a. Requires |a|, |b| < 2^52.
inline std::complex<double> linear_exp_sum_range(std::int64_t a, std::int64_t b, double x) {
  if (b < a) return {0.0, 0.0};
  const std::int64_t count = b - a + 1;
  const double t = frac(x);
  if (t == 0.0) return {static_cast<double>(count), 0.0};
  const double phase = mul_mod2(a + b, t);  // (a + b) t mod 2, in half-turns
  const double ratio = sinpi(mul_mod2(count, t)) / sinpi(t);
  return {ratio * cospi(phase), ratio * sinpi(phase)};
}

/// sum_{w < n <= z} e(n x) for real endpoints.
inline std::complex<double> linear_exp_sum(double w, double z, double x) {
  if (z < w) fail(errc::kInvalidArgument, "linear_exp_sum: need z >= w");
  const auto a = static_cast<std::int64_t>(std::floor(w)) + 1;
  const auto b = static_cast<std::int64_t>(std::floor(z));
  return linear_exp_sum_range(a, b, x);
}

/// min(count, 1 / (2 ||x||)): the sharp form of the linear-sum bound.
inline double linear_exp_sum_bound(std::int64_t count, double x) {
  const double t = frac(x);
  const double dist = std::min(t, 1.0 - t);
  if (dist == 0.0) return static_cast<double>(count);
  return std::min(static_cast<double>(count), 1.0 / (2.0 * dist));
}

struct MinSumResult {
  double value = 0.0;
  std::uint64_t flagged = 0;  // terms whose certified interval straddles 1/N
};

/// sum_{1<=m<=M} min(N, 1/||alpha m||) with certified angles.
inline MinSumResult min_sum(const AngleOracle& oracle, std::uint64_t M, double N) {
  if (!(N >= 1.0)) fail(errc::kInvalidArgument, "min_sum: N must be >= 1");
  if (M > oracle.n_max()) fail(errc::kOutOfRange, "min_sum: oracle does not cover M");
  const double switch_point = 1.0 / N;
  MinSumResult out;
  KahanSum acc;
  for (std::uint64_t m = 1; m <= M; ++m) {
    const auto d = oracle.dist_nearest_int(m);
    const double margin = d.error + AngleOracle::kDivisionSlack;
    if (d.value - margin < switch_point && d.value + margin > switch_point) ++out.flagged;
    acc += d.value <= switch_point ? N : 1.0 / d.value;
  }
  out.value = acc.value();
  return out;
}

enum class EstimateBranch { SmallM, LargeM };

inline const char* to_string(EstimateBranch b) { return b == EstimateBranch::SmallM ? "small-M" : "large-M"; }

struct StandardEstimate {
  EstimateBranch branch;
  double value;
};

/// q log q if M <= q/2, else M N / q + M log q; log q is floored at 1.
inline StandardEstimate standard_estimate_bound(double M, double N, double q) {
  if (!(M >= 1.0 && N >= 1.0 && q >= 1.0))
    fail(errc::kInvalidArgument, "standard_estimate_bound: need M, N, q >= 1");
  const double lg = std::max(1.0, std::log(q));
  if (M <= q / 2.0) return {EstimateBranch::SmallM, q * lg};
  return {EstimateBranch::LargeM, M * N / q + M * lg};
}

/// Collapsed form M N / q + (M + q) log q.
inline double standard_estimate_collapsed(double M, double N, double q) {
  const double lg = std::max(1.0, std::log(q));
  return M * N / q + (M + q) * lg;
}

struct MinSumInstance {
  AlphaSpec alpha;
  std::uint64_t M;
  double N;
  std::uint64_t q;
};

struct EmpiricalRow {
  std::uint64_t M;
  double N;
  std::uint64_t q;
  double min_sum;
  std::uint64_t flagged;
  StandardEstimate bound;
  double ratio;
};

struct EmpiricalTable {
  std::vector<EmpiricalRow> rows;
  double max_ratio = 0.0;
};

/// Ratio min_sum / standard_estimate_bound per instance. Each q must satisfy
/// |alpha - a/q| < 1/q^2 with (a, q) = 1.
inline EmpiricalTable empirical_constant(const std::vector<MinSumInstance>& grid,
                                         double err_target = AngleOracle::kDefaultErrTarget) {
  EmpiricalTable table;
  for (const auto& inst : grid) {
    if (!satisfies_dio(inst.alpha, BigInt(inst.q)))
      fail(errc::kInvalidArgument, "empirical_constant: q = " + std::to_string(inst.q) +
                                       " is not a rational-approximation denominator for " + inst.alpha.to_string());
    auto oracle = AngleOracle::build(inst.alpha, std::max<std::uint64_t>(inst.M, 1), err_target);
    auto ms = min_sum(oracle, inst.M, inst.N);
    auto bound = standard_estimate_bound(static_cast<double>(inst.M), inst.N, static_cast<double>(inst.q));
    EmpiricalRow row{inst.M, inst.N, inst.q, ms.value, ms.flagged, bound, ms.value / bound.value};
    table.max_ratio = std::max(table.max_ratio, row.ratio);
    table.rows.push_back(row);
  }
  return table;
}

/// Largest number of points {m alpha}, M0 < m <= M1, falling into one of the
/// intervals [j/q, (j+1)/q). Returns -1 if some point cannot be placed with
/// certainty.
inline int max_points_per_interval(const AngleOracle& oracle, std::uint64_t q, std::uint64_t M0, std::uint64_t M1) {
  if (q < 1) fail(errc::kInvalidArgument, "max_points_per_interval: q must be positive");
  if (M1 > oracle.n_max()) fail(errc::kOutOfRange, "max_points_per_interval: oracle does not cover M1");
  const std::uint64_t Q = oracle.modulus();
  // {m alpha} = t/Q + err with |err| <= ebound: bucket floor(q t / Q) is certain
  // when q t mod Q stays clear of 0 and Q by q * ebound * Q.
  const long double guard = static_cast<long double>(q) * (oracle.error_bound() + AngleOracle::kDivisionSlack) *
                            static_cast<long double>(Q);
  std::vector<int> counts(q, 0);
  int best = 0;
  for (std::uint64_t m = M0 + 1; m <= M1; ++m) {
    const u128 scaled = static_cast<u128>(q) * oracle.residue(m);
    const auto bucket = static_cast<std::uint64_t>(scaled / Q);
    const auto rem = static_cast<long double>(static_cast<std::uint64_t>(scaled % Q));
    if (rem <= guard || static_cast<long double>(Q) - rem <= guard) return -1;
    best = std::max(best, ++counts[bucket]);
  }
  return best;
}

}  // namespace dioprime
