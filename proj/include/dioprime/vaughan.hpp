#pragma once

// Vaughan's identity as an exact decomposition of Lambda(n), the type I and
// type II exponential sums built from it, the quadruple counts gamma(l) of the
// type II diagonal analysis, and the bound chains as computable comparators.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dioprime/alpha_engine.hpp"
#include "dioprime/arith_sieve.hpp"
#include "dioprime/errors.hpp"
#include "dioprime/expsum.hpp"
#include "dioprime/numeric.hpp"
#include "dioprime/report.hpp"
#include "dioprime/smoothing.hpp"

namespace dioprime {

// ---------------------------------------------------------------------------
// The identity

struct VaughanParams {
  double U = 1.0;
  double V = 1.0;

  void validate(std::uint64_t X) const {
    if (!(U >= 1.0 && V >= 1.0)) fail(errc::kInvalidArgument, "Vaughan parameters need U, V >= 1");
    if (U * V > static_cast<double>(X)) fail(errc::kInvalidArgument, "Vaughan parameters need U V <= X");
  }
};

/// Lambda(n) = A1 - A2 - A3 for n > U.
struct VaughanPieces {
  double A1 = 0.0;  // sum_{bc=n, b<=V} mu(b) log c
  double A2 = 0.0;  // sum_{bcd=n, b<=V, c<=U} mu(b) Lambda(c)
  double A3 = 0.0;  // sum_{dm=n, d>U, m>V} Lambda(d) beta(m)

  double combined() const { return A1 - A2 - A3; }
};

/// b(n) = sum_{d | n, d <= V} mu(d); depends only on V and |b(n)| <= tau(n).
inline std::int64_t b_coeff(std::uint64_t n, double V, const SmallTables& tables) {
  std::int64_t s = 0;
  for (auto d : tables.divisors(n)) {
    if (static_cast<double>(d) > V) break;
    s += tables.mu(d);
  }
  return s;
}

inline VaughanPieces vaughan_pieces(std::uint64_t n, const VaughanParams& params, const SmallTables& tables) {
  if (!(static_cast<double>(n) > params.U)) fail(errc::kInvalidArgument, "vaughan_pieces: need n > U");
  const auto divs = tables.divisors(n);
  const double log_n = std::log(static_cast<double>(n));
  KahanSum a1, a2, a3;
  for (auto b : divs) {
    if (static_cast<double>(b) > params.V) break;
    const int mu = tables.mu(b);
    if (mu == 0) continue;
    a1 += mu * (log_n - std::log(static_cast<double>(b)));
    const std::uint64_t rest = n / b;
    for (auto c : divs) {
      if (static_cast<double>(c) > params.U || c > rest) break;
      if (rest % c == 0) a2 += mu * tables.mangoldt(c);
    }
  }
  for (auto d : divs) {
    if (!(static_cast<double>(d) > params.U)) continue;
    const std::uint64_t m = n / d;
    if (!(static_cast<double>(m) > params.V)) continue;
    const double lam = tables.mangoldt(d);
    if (lam == 0.0) continue;
    a3 += lam * static_cast<double>(b_coeff(m, params.V, tables));
  }
  return {a1.value(), a2.value(), a3.value()};
}

// ---------------------------------------------------------------------------
// Evaluation context for the bilinear sums

/// Everything the type I / type II evaluators need for one (X, Y, delta, alpha).
/// Ranges use exact integer cube roots: m <= X^{2/3} iff m <= floor(X^{2/3}),
/// n > X^{1/3} iff n > floor(X^{1/3}).
struct SumContext {
  std::uint64_t X = 0;
  std::uint64_t Y = 0;
  double delta = 0.5;
  double eps = 0.0;
  SmoothingKernel kernel;
  AngleOracle oracle;
  SmallTables tables;
  std::uint64_t cbrt_X = 0;
  std::uint64_t cbrt_X2 = 0;
  std::uint64_t q = 1;
  std::pair<double, double> q_window{0.0, 0.0};
  bool q_in_window = false;
  std::uint64_t budget = 1'000'000'000;
  std::vector<std::int64_t> beta;  // b(n) with V = X^{1/3}, indexed by n

  double L() const { return static_cast<double>(kernel.length()); }
  double Xd() const { return static_cast<double>(X); }
  double Yd() const { return static_cast<double>(Y); }

  void charge(double work, const char* what) const {
    if (work > static_cast<double>(budget))
      fail(errc::kWorkload, std::string(what) + ": estimated " + std::to_string(static_cast<long long>(work)) +
                                " inner operations exceed the budget of " + std::to_string(budget));
  }
};

inline SumContext make_sum_context(std::uint64_t X, std::uint64_t Y, double delta, double eps,
                                   const AlphaSpec& alpha, double err_target, std::uint64_t budget,
                                   std::uint64_t q = 1, std::pair<double, double> q_window = {0.0, 0.0},
                                   bool q_in_window = false) {
  if (X < 8) fail(errc::kInvalidArgument, "sum context needs X >= 8");
  if (Y > X) fail(errc::kInvalidArgument, "sum context needs Y <= X");
  SmoothingKernel kernel = SmoothingKernel::for_experiment(delta, static_cast<double>(X), eps);
  const std::uint64_t cbrt_X = icbrt(X);
  const std::uint64_t cbrt_X2 = icbrt(static_cast<u128>(X) * X);
  const auto L = static_cast<std::uint64_t>(kernel.length());
  const std::uint64_t n_max = X * (L + 1);
  SumContext ctx{X,
                 Y,
                 delta,
                 eps,
                 std::move(kernel),
                 AngleOracle::build(alpha, n_max, err_target),
                 SmallTables(cbrt_X2 + 2),
                 cbrt_X,
                 cbrt_X2,
                 q,
                 q_window,
                 q_in_window,
                 budget,
                 {}};
  ctx.beta.assign(cbrt_X2 + 3, 0);
  for (std::uint64_t n = 1; n <= cbrt_X2 + 2; ++n)
    ctx.beta[n] = b_coeff(n, static_cast<double>(cbrt_X), ctx.tables);
  return ctx;
}

/// Integers h with H/2 < h <= H.
struct HalfOpenBlock {
  std::int64_t lo = 1;
  std::int64_t hi = 0;

  static HalfOpenBlock dyadic(double top) {
    return {static_cast<std::int64_t>(std::floor(top / 2.0)) + 1, static_cast<std::int64_t>(std::floor(top))};
  }
  std::int64_t size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

inline void check_fourier_block(double H, const SumContext& ctx) {
  if (!(H >= 1.0 && H <= ctx.L() + 1e-9))
    fail(errc::kInvalidArgument, "Fourier block needs 1 <= H <= L = " + std::to_string(ctx.kernel.length()));
}

/// H_j = L / 2^j while H_j >= 1; the blocks (H/2, H] cover 1..L.
inline std::vector<double> dyadic_fourier_blocks(const SumContext& ctx) {
  std::vector<double> out;
  for (double H = ctx.L(); H >= 1.0; H /= 2.0) out.push_back(H);
  return out;
}

/// M_j = X^{2/3} / 2^j while M_j >= 1 (type I m-range).
inline std::vector<double> dyadic_type_i_blocks(const SumContext& ctx) {
  std::vector<double> out;
  for (double M = static_cast<double>(ctx.cbrt_X2); M >= 1.0; M /= 2.0) out.push_back(M);
  return out;
}

/// M_j = X^{2/3} / 2^j while M_j > X^{1/3} (type II m-range (X^{1/3}, X^{2/3}]).
inline std::vector<double> dyadic_type_ii_blocks(const SumContext& ctx) {
  std::vector<double> out;
  for (double M = static_cast<double>(ctx.cbrt_X2); M > static_cast<double>(ctx.cbrt_X); M /= 2.0) out.push_back(M);
  return out;
}

// ---------------------------------------------------------------------------
// Type I

struct TypeIValue {
  double value = 0.0;
  bool grid_fallback = false;
};

namespace detail {

inline constexpr int kCoarseGridPoints = 64;

/// n-range (w, X/m] endpoints for the smallest admissible w = (X-Y)/m.
inline std::pair<std::int64_t, std::int64_t> type_i_n_range(std::uint64_t m, const SumContext& ctx) {
  return {static_cast<std::int64_t>((ctx.X - ctx.Y) / m) + 1, static_cast<std::int64_t>(ctx.X / m)};
}

inline double type_i_exact_cost(double per_term, const SumContext& ctx) {
  double cost = 0.0;
  for (std::uint64_t m = 1; m <= ctx.cbrt_X2; ++m) cost += static_cast<double>(ctx.Y / m + 1);
  return cost * per_term;
}

/// max over the w-breakpoints of |sum_{n=s}^{hi} term(n)|: suffix sums
/// computed from the top of the range downward.
template <class Term>
double max_suffix(std::int64_t lo, std::int64_t hi, Term&& term) {
  std::complex<double> s{0.0, 0.0};
  double best = 0.0;
  for (std::int64_t n = hi; n >= lo; --n) {
    s += term(n);
    best = std::max(best, std::abs(s));
  }
  return best;
}

/// Coarse variant: start points s_j = floor(w_j) + 1 on a 64-point grid of w.
template <class Closed>
double max_on_grid(std::int64_t lo, std::int64_t hi, Closed&& closed) {
  double best = 0.0;
  const double span = static_cast<double>(hi - lo + 1);
  for (int j = 0; j < kCoarseGridPoints; ++j) {
    const auto s = lo + static_cast<std::int64_t>(std::floor(span * j / (kCoarseGridPoints - 1)));
    if (s > hi) continue;
    best = std::max(best, std::abs(closed(s, hi)));
  }
  return best;
}

}  // namespace detail

/// T1(H) = sum_{H/2<h<=H} c(h) sum_{m<=X^{2/3}} max_w |sum_{w<n<=X/m} e(h m n alpha)|.
inline TypeIValue t1_value(double H, const SumContext& ctx) {
  check_fourier_block(H, ctx);
  const auto hb = HalfOpenBlock::dyadic(H);
  const double exact_cost = detail::type_i_exact_cost(static_cast<double>(hb.size()), ctx);
  const double grid_cost = static_cast<double>(hb.size() * ctx.cbrt_X2) * detail::kCoarseGridPoints;
  TypeIValue out;
  out.grid_fallback = exact_cost > static_cast<double>(ctx.budget);
  ctx.charge(out.grid_fallback ? grid_cost : exact_cost, "t1_sum");
  KahanSum total;
  for (std::int64_t h = hb.lo; h <= hb.hi; ++h) {
    KahanSum inner;
    for (std::uint64_t m = 1; m <= ctx.cbrt_X2; ++m) {
      auto [lo, hi] = detail::type_i_n_range(m, ctx);
      if (lo > hi) continue;
      const std::int64_t hm = h * static_cast<std::int64_t>(m);
      if (!out.grid_fallback) {
        inner += detail::max_suffix(lo, hi, [&](std::int64_t n) { return unit_phase(ctx.oracle.frac(hm * n)); });
      } else {
        const double x = ctx.oracle.frac(hm);
        inner += detail::max_on_grid(lo, hi, [&](std::int64_t s, std::int64_t e) { return linear_exp_sum_range(s, e, x); });
      }
    }
    total += ctx.kernel.coefficient(h) * inner.value();
  }
  out.value = total.value();
  return out;
}

/// S1' = sum_{m<=X^{2/3}} max_w |sum_{w<n<=X/m} sum_{0<l<=L} c(l) e(l m n alpha)|.
inline TypeIValue s1_value(const SumContext& ctx) {
  const double exact_cost = detail::type_i_exact_cost(ctx.L(), ctx);
  const double grid_cost = static_cast<double>(ctx.cbrt_X2) * detail::kCoarseGridPoints * ctx.L();
  TypeIValue out;
  out.grid_fallback = exact_cost > static_cast<double>(ctx.budget);
  ctx.charge(out.grid_fallback ? grid_cost : exact_cost, "s1_type_I");
  KahanSum total;
  const std::int64_t L = ctx.kernel.length();
  for (std::uint64_t m = 1; m <= ctx.cbrt_X2; ++m) {
    auto [lo, hi] = detail::type_i_n_range(m, ctx);
    if (lo > hi) continue;
    const auto mi = static_cast<std::int64_t>(m);
    if (!out.grid_fallback) {
      total += detail::max_suffix(lo, hi, [&](std::int64_t n) { return ctx.kernel.one_sided(ctx.oracle.frac(mi * n)); });
    } else {
      total += detail::max_on_grid(lo, hi, [&](std::int64_t s, std::int64_t e) {
        ComplexKahanSum acc;
        for (std::int64_t l = 1; l <= L; ++l)
          acc += ctx.kernel.coefficient(l) * linear_exp_sum_range(s, e, ctx.oracle.frac(l * mi));
        return acc.value();
      });
    }
  }
  out.value = total.value();
  return out;
}

/// The type I comparator for one (M, H) block: sum_{k<=MH} min(Y/M, 1/||k alpha||)
/// against the standard estimate with q, and its worst case over H <= L, M <= X^{2/3}.
struct TypeIComparator {
  double M = 0.0;
  double H = 0.0;
  double min_sum = 0.0;
  std::uint64_t flagged = 0;
  StandardEstimate estimate{EstimateBranch::SmallM, 0.0};
  double worst_case = 0.0;
};

inline TypeIComparator type_i_comparator(double M, double H, const SumContext& ctx) {
  TypeIComparator c;
  c.M = M;
  c.H = H;
  const double N = std::max(1.0, ctx.Yd() / M);
  const auto K = static_cast<std::uint64_t>(std::floor(M * H));
  ctx.charge(static_cast<double>(K), "type I comparator");
  auto ms = min_sum(ctx.oracle, K, N);
  c.min_sum = ms.value;
  c.flagged = ms.flagged;
  const double q = static_cast<double>(ctx.q);
  c.estimate = standard_estimate_bound(std::max(1.0, M * H), N, q);
  const double lg = std::max(1.0, std::log(q));
  const double xe = std::pow(ctx.Xd(), ctx.eps);
  if (c.estimate.branch == EstimateBranch::LargeM)
    c.worst_case = xe * ctx.Yd() / (ctx.delta * q) + std::pow(ctx.Xd(), 2.0 / 3.0) * xe * lg / ctx.delta;
  else
    c.worst_case = q * lg;
  return c;
}

/// Terms of max{Y/q, X^{2/3}, delta q} <= delta Y X^{-eta-2 eps}, reported at eta = 0.
struct FirstCondition {
  double y_over_q = 0.0;
  double x_two_thirds = 0.0;
  double delta_q = 0.0;
  double rhs = 0.0;

  double lhs() const { return std::max({y_over_q, x_two_thirds, delta_q}); }
  bool holds() const { return lhs() <= rhs; }
};

inline FirstCondition first_condition(double X, double Y, double delta, double eps, double q) {
  return {Y / q, std::pow(X, 2.0 / 3.0), delta * q, delta * Y * std::pow(X, -2.0 * eps)};
}

inline void add_first_condition(SumReport& r, const FirstCondition& fc) {
  r.bound_terms["ourfirstcond.Y_over_q"] = fc.y_over_q;
  r.bound_terms["ourfirstcond.X_2_3"] = fc.x_two_thirds;
  r.bound_terms["ourfirstcond.delta_q"] = fc.delta_q;
  r.bound_terms["ourfirstcond.rhs"] = fc.rhs;
  r.bound_terms["ourfirstcond.holds"] = fc.holds() ? 1.0 : 0.0;
}

namespace detail {
inline void stamp_q(SumReport& r, const SumContext& ctx) {
  r.q_used = ctx.q;
  r.q_window = ctx.q_window;
  r.q_in_window = ctx.q_in_window;
}

inline std::string block_key(const char* prefix, std::size_t j) {
  return std::string(prefix) + std::to_string(j);
}
}  // namespace detail

/// T1(H) with its type I comparator chain; main_term is the target scale Y.
inline SumReport t1_sum(double H, const SumContext& ctx) {
  auto v = t1_value(H, ctx);
  SumReport r;
  r.value = v.value;
  r.set_main_term(ctx.Yd());
  r.set_measured_exponent(v.value / ctx.Yd(), ctx.Xd());
  detail::stamp_q(r, ctx);
  if (v.grid_fallback) r.flag("grid_fallback");
  KahanSum min_total, est_total;
  std::uint64_t flagged = 0;
  const auto blocks = dyadic_type_i_blocks(ctx);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    auto c = type_i_comparator(blocks[j], H, ctx);
    const auto key = detail::block_key("M", j);
    r.bound_terms[key + ".M"] = c.M;
    r.bound_terms[key + ".min_sum"] = c.min_sum;
    r.bound_terms[key + ".estimate"] = c.estimate.value;
    r.bound_terms[key + ".large_branch"] = c.estimate.branch == EstimateBranch::LargeM ? 1.0 : 0.0;
    r.bound_terms[key + ".worst_case"] = c.worst_case;
    min_total += c.min_sum;
    est_total += c.estimate.value;
    flagged += c.flagged;
  }
  r.bound_terms["comparator.min_sum_total"] = min_total.value();
  r.bound_terms["comparator.estimate_total"] = est_total.value();
  if (min_total.value() > 0.0) r.bound_terms["comparator.measured_over_min_sum"] = v.value / min_total.value();
  if (est_total.value() > 0.0) r.bound_terms["comparator.measured_over_estimate"] = v.value / est_total.value();
  if (flagged > 0) r.flag("min_sum_switch_boundary");
  add_first_condition(r, first_condition(ctx.Xd(), ctx.Yd(), ctx.delta, ctx.eps, static_cast<double>(ctx.q)));
  return r;
}

/// S1' with the type I comparator summed over every dyadic (H, M) block.
inline SumReport s1_type_I(const SumContext& ctx) {
  auto v = s1_value(ctx);
  SumReport r;
  r.value = v.value;
  r.set_main_term(ctx.Yd());
  r.set_measured_exponent(v.value / ctx.Yd(), ctx.Xd());
  detail::stamp_q(r, ctx);
  if (v.grid_fallback) r.flag("grid_fallback");
  KahanSum min_total, est_total;
  for (double H : dyadic_fourier_blocks(ctx))
    for (double M : dyadic_type_i_blocks(ctx)) {
      auto c = type_i_comparator(M, H, ctx);
      min_total += c.min_sum;
      est_total += c.estimate.value;
    }
  r.bound_terms["comparator.min_sum_total"] = min_total.value();
  r.bound_terms["comparator.estimate_total"] = est_total.value();
  add_first_condition(r, first_condition(ctx.Xd(), ctx.Yd(), ctx.delta, ctx.eps, static_cast<double>(ctx.q)));
  return r;
}

// ---------------------------------------------------------------------------
// Type II

/// m in (M/2, M] clipped to (X^{1/3}, X^{2/3}].
inline std::pair<std::int64_t, std::int64_t> type_ii_m_range(double M, const SumContext& ctx) {
  const auto lo = std::max<std::int64_t>(static_cast<std::int64_t>(std::floor(M / 2.0)) + 1,
                                         static_cast<std::int64_t>(ctx.cbrt_X) + 1);
  const auto hi = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(M)), static_cast<std::int64_t>(ctx.cbrt_X2));
  return {lo, hi};
}

/// n with max{X^{1/3}, (X-Y)/m} < n <= X/m.
inline std::pair<std::int64_t, std::int64_t> type_ii_n_range(std::int64_t m, const SumContext& ctx) {
  const auto lo = std::max<std::int64_t>(static_cast<std::int64_t>(ctx.cbrt_X) + 1,
                                         static_cast<std::int64_t>((ctx.X - ctx.Y) / static_cast<std::uint64_t>(m)) + 1);
  const auto hi = static_cast<std::int64_t>(ctx.X / static_cast<std::uint64_t>(m));
  return {lo, hi};
}

struct TypeIIBlock {
  std::complex<double> t2{0.0, 0.0};  // sum_m Lambda(m) S(m)
  double t3 = 0.0;                    // sum_m |S(m)|^2
  double sum_a2 = 0.0;                // sum_m Lambda(m)^2
  std::int64_t m_lo = 1;
  std::int64_t m_hi = 0;
  std::uint64_t n_terms = 0;
  bool beta_within_tau = true;

  bool empty() const { return n_terms == 0; }
};

/// S(m) = sum_n b(n) sum_{H/2<h<=H} c(h) e(h m n alpha), accumulated into
/// T2(H, M) and the squared form T3(H, M) in one pass.
inline TypeIIBlock evaluate_type_ii(double H, double M, const SumContext& ctx) {
  check_fourier_block(H, ctx);
  if (!(M >= 1.0)) fail(errc::kInvalidArgument, "type II block needs M >= 1");
  const auto hb = HalfOpenBlock::dyadic(H);
  TypeIIBlock out;
  std::tie(out.m_lo, out.m_hi) = type_ii_m_range(M, ctx);
  double cost = 0.0;
  for (auto m = out.m_lo; m <= out.m_hi; ++m) {
    auto [lo, hi] = type_ii_n_range(m, ctx);
    if (hi >= lo) cost += static_cast<double>(hi - lo + 1);
  }
  ctx.charge(cost * static_cast<double>(hb.size()), "t2_sum");

  ComplexKahanSum t2;
  KahanSum t3, a2;
  for (auto m = out.m_lo; m <= out.m_hi; ++m) {
    const double lam = ctx.tables.mangoldt(static_cast<std::uint64_t>(m));
    a2 += lam * lam;
    auto [lo, hi] = type_ii_n_range(m, ctx);
    ComplexKahanSum s;
    for (auto n = lo; n <= hi; ++n) {
      const std::int64_t b = ctx.beta[static_cast<std::size_t>(n)];
      if (std::llabs(b) > static_cast<long long>(ctx.tables.tau(static_cast<std::uint64_t>(n)))) out.beta_within_tau = false;
      ++out.n_terms;
      if (b == 0) continue;
      std::complex<double> inner{0.0, 0.0};
      for (std::int64_t h = hb.lo; h <= hb.hi; ++h)
        inner += ctx.kernel.coefficient(h) * unit_phase(ctx.oracle.frac(h * m * n));
      s += static_cast<double>(b) * inner;
    }
    const auto sv = s.value();
    t2 += lam * sv;
    t3 += std::norm(sv);
  }
  out.t2 = t2.value();
  out.t3 = t3.value();
  out.sum_a2 = a2.value();
  return out;
}

inline SumReport t2_sum(double H, double M, const SumContext& ctx) {
  auto blk = evaluate_type_ii(H, M, ctx);
  SumReport r;
  r.value = std::abs(blk.t2);
  r.set_main_term(ctx.Yd());
  r.set_measured_exponent(r.value / ctx.Yd(), ctx.Xd());
  detail::stamp_q(r, ctx);
  r.bound_terms["T2.re"] = blk.t2.real();
  r.bound_terms["T2.im"] = blk.t2.imag();
  r.bound_terms["T3"] = blk.t3;
  r.bound_terms["sum_lambda_sq"] = blk.sum_a2;
  r.bound_terms["cauchy_schwarz.rhs"] = blk.sum_a2 * blk.t3;
  r.bound_terms["cauchy_schwarz.holds"] = std::norm(blk.t2) <= blk.sum_a2 * blk.t3 * (1.0 + 1e-12) ? 1.0 : 0.0;
  if (blk.empty()) r.flag("empty_block");
  if (!blk.beta_within_tau) r.flag("beta_exceeds_tau");
  return r;
}

/// m-range of the rearranged T3: all m in the block for which both n1 and n2
/// lie in the type II n-range of m.
inline std::pair<std::int64_t, std::int64_t> pair_m_range(std::int64_t n1, std::int64_t n2, double M,
                                                          const SumContext& ctx) {
  auto [lo, hi] = type_ii_m_range(M, ctx);
  const auto low = static_cast<std::int64_t>(ctx.X - ctx.Y);
  const auto X = static_cast<std::int64_t>(ctx.X);
  lo = std::max({lo, low / n1 + 1, low / n2 + 1});
  hi = std::min({hi, X / n1, X / n2});
  return {lo, hi};
}

struct T3Split {
  double t3 = 0.0;  // squared form
  std::complex<double> t4{0.0, 0.0};  // n1 <= n2 contribution of the expanded form
  std::complex<double> t5{0.0, 0.0};  // n1 > n2
  double identity_residual = 0.0;     // |T3 - (T4 + T5)| / T3
  std::complex<double> t2{0.0, 0.0};
  double sum_a2 = 0.0;
  bool cauchy_schwarz = true;         // |T2|^2 <= (sum Lambda^2) T3
  std::int64_t max_m_length = 0;      // longest nonempty m-range among n1 <= n2
  double m_length_limit = 0.0;        // 2 M Y / X + 1
  std::uint64_t nonempty_pairs = 0;
};

/// T3 computed twice: from the squared form and from the expanded quadruple
/// sum with the m-sum innermost (closed geometric form), split by n1 <= n2.
inline T3Split t3_t4_t5_split(double H, double M, const SumContext& ctx) {
  auto blk = evaluate_type_ii(H, M, ctx);
  T3Split out;
  out.t3 = blk.t3;
  out.t2 = blk.t2;
  out.sum_a2 = blk.sum_a2;
  out.cauchy_schwarz = std::norm(blk.t2) <= blk.sum_a2 * blk.t3 * (1.0 + 1e-12);
  out.m_length_limit = 2.0 * M * ctx.Yd() / ctx.Xd() + 1.0;
  if (blk.m_lo > blk.m_hi) return out;

  const auto hb = HalfOpenBlock::dyadic(H);
  std::int64_t n_lo = std::numeric_limits<std::int64_t>::max(), n_hi = 0;
  for (auto m = blk.m_lo; m <= blk.m_hi; ++m) {
    auto [lo, hi] = type_ii_n_range(m, ctx);
    if (lo > hi) continue;
    n_lo = std::min(n_lo, lo);
    n_hi = std::max(n_hi, hi);
  }
  if (n_hi < n_lo) return out;
  const double span = static_cast<double>(n_hi - n_lo + 1);
  ctx.charge(span * span * static_cast<double>(hb.size() * hb.size()), "t3_t4_t5_split");

  ComplexKahanSum t4, t5;
  for (auto n1 = n_lo; n1 <= n_hi; ++n1) {
    const auto b1 = ctx.beta[static_cast<std::size_t>(n1)];
    for (auto n2 = n_lo; n2 <= n_hi; ++n2) {
      auto [mlo, mhi] = pair_m_range(n1, n2, M, ctx);
      if (mlo > mhi) continue;
      if (n1 <= n2) {
        ++out.nonempty_pairs;
        out.max_m_length = std::max(out.max_m_length, mhi - mlo + 1);
      }
      const auto b2 = ctx.beta[static_cast<std::size_t>(n2)];
      if (b1 == 0 || b2 == 0) continue;
      std::complex<double> hsum{0.0, 0.0};
      for (std::int64_t h1 = hb.lo; h1 <= hb.hi; ++h1)
        for (std::int64_t h2 = hb.lo; h2 <= hb.hi; ++h2) {
          const std::int64_t l = h1 * n1 - h2 * n2;
          hsum += ctx.kernel.coefficient(h1) * ctx.kernel.coefficient(h2) *
                  linear_exp_sum_range(mlo, mhi, ctx.oracle.frac(l));
        }
      const auto term = static_cast<double>(b1 * b2) * hsum;
      if (n1 <= n2)
        t4 += term;
      else
        t5 += term;
    }
  }
  out.t4 = t4.value();
  out.t5 = t5.value();
  out.identity_residual = std::abs(out.t3 - (out.t4 + out.t5)) / std::max(out.t3, 1e-300);
  return out;
}

// ---------------------------------------------------------------------------
// gamma(l)

/// Ranges X/(2M) < n1 <= n2 <= 2X/M, n2 - n1 <= 2Y/M, H/2 < h1, h2 <= H.
struct GammaRanges {
  std::int64_t n_lo = 0, n_hi = 0, k_max = 0, h_lo = 0, h_hi = 0;
  std::int64_t l_bound = 0;  // floor(2 X H / M)

  static constexpr double kMaxXOverM = 512.0;
  static constexpr double kMaxH = 16.0;

  static GammaRanges from(double X, double Y, double H, double M) {
    if (!(M >= 1.0 && H >= 1.0)) fail(errc::kInvalidArgument, "gamma ranges need M, H >= 1");
    if (X / M > kMaxXOverM || H > kMaxH)
      fail(errc::kWorkload, "gamma enumeration budget exceeded (needs X/M <= 512, H <= 16)");
    GammaRanges g;
    g.n_lo = static_cast<std::int64_t>(std::floor(X / (2.0 * M))) + 1;
    g.n_hi = static_cast<std::int64_t>(std::floor(2.0 * X / M));
    g.k_max = static_cast<std::int64_t>(std::floor(2.0 * Y / M));
    auto hb = HalfOpenBlock::dyadic(H);
    g.h_lo = hb.lo;
    g.h_hi = hb.hi;
    g.l_bound = static_cast<std::int64_t>(std::floor(2.0 * X * H / M));
    return g;
  }
};

struct GammaCounts {
  std::uint64_t gamma0 = 0;  // l + k h2 = 0 (equivalently h1 = h2)
  std::uint64_t gamma1 = 0;

  std::uint64_t total() const { return gamma0 + gamma1; }
};

/// gamma(l) through the substitution k = n2 - n1, s = h1 - h2,
/// l = n1 s - k h2: for each (n1, h2, k) at most one s works.
inline GammaCounts gamma_counts(std::int64_t l, const GammaRanges& g) {
  if (std::llabs(l) > g.l_bound) fail(errc::kInvalidArgument, "gamma_counts: need |l| <= 2XH/M");
  GammaCounts out;
  for (auto n1 = g.n_lo; n1 <= g.n_hi; ++n1) {
    const auto kmax = std::min(g.k_max, g.n_hi - n1);
    for (auto h2 = g.h_lo; h2 <= g.h_hi; ++h2)
      for (std::int64_t k = 0; k <= kmax; ++k) {
        const std::int64_t v = l + k * h2;
        if (v % n1 != 0) continue;
        const std::int64_t h1 = h2 + v / n1;
        if (h1 < g.h_lo || h1 > g.h_hi) continue;
        if (v == 0)
          ++out.gamma0;
        else
          ++out.gamma1;
      }
  }
  return out;
}

inline GammaCounts gamma_counts(std::int64_t l, double H, double M, const SumContext& ctx) {
  return gamma_counts(l, GammaRanges::from(ctx.Xd(), ctx.Yd(), H, M));
}

/// Number of quadruples over all l: (#(n1, n2) pairs) * (#h)^2.
inline std::uint64_t gamma_total_quadruples(const GammaRanges& g) {
  std::uint64_t pairs = 0;
  for (auto n1 = g.n_lo; n1 <= g.n_hi; ++n1) {
    const auto kmax = std::min(g.k_max, g.n_hi - n1);
    if (kmax >= 0) pairs += static_cast<std::uint64_t>(kmax + 1);
  }
  const auto hs = static_cast<std::uint64_t>(std::max<std::int64_t>(0, g.h_hi - g.h_lo + 1));
  return pairs * hs * hs;
}

/// Number of positive divisors by trial division.
inline std::uint64_t divisor_count(std::uint64_t v) {
  std::uint64_t count = 0;
  for (std::uint64_t d = 1; d * d <= v; ++d)
    if (v % d == 0) count += (d * d == v) ? 1 : 2;
  return count;
}

/// sum_{0<=k<=2Y/M, H/2<h2<=H, l+k h2 != 0} tau(|l + k h2|), which dominates gamma1(l).
inline std::uint64_t gamma1_divisor_bound(std::int64_t l, const GammaRanges& g) {
  std::uint64_t total = 0;
  for (auto h2 = g.h_lo; h2 <= g.h_hi; ++h2)
    for (std::int64_t k = 0; k <= g.k_max; ++k) {
      const std::int64_t v = l + k * h2;
      if (v != 0) total += divisor_count(static_cast<std::uint64_t>(std::llabs(v)));
    }
  return total;
}

// ---------------------------------------------------------------------------
// Type II bound chain

/// Every term of the type II bounds with coefficient 1 in place of the
/// implied constants and the X^{k eps} factors kept.
struct T2BoundChain {
  std::array<double, 8> t4_terms{};      // T4 bound, factor X^{3 eps}
  std::array<double, 8> bound_large{};   // M > X^{1/2}, factor X^{4 eps}
  std::array<double, 8> bound_small{};   // M <= X^{1/2}, roles of m and n swapped
  std::array<double, 8> bound_uniform{}; // both regimes combined, factor X^{4 eps}
  bool uses_large_m = false;
  std::size_t dominant = 0;              // index of the largest selected term
  double selected_sum = 0.0;

  bool anothercond = false;  // M Y / X >= 1
  bool newcondi = false;     // 2 Y H / M <= q / 2
  bool transcond_y = false;  // Y >= X^{1/2}
  bool transcond_q = false;  // q >= 4 Y H / X^{1/2}
  bool q_window = false;     // Y/(delta X^{1/2-2eps}) <= q <= Y/(delta X^{1/2-3eps})

  std::array<double, 8> final_lhs{};     // finalcondis, eta = 0
  double final_rhs = 0.0;
  std::array<double, 6> reduced_lhs{};   // after substituting the q-window
  double reduced_rhs = 0.0;

  const std::array<double, 8>& selected() const { return uses_large_m ? bound_large : bound_small; }
  bool final_holds() const { return *std::max_element(final_lhs.begin(), final_lhs.end()) <= final_rhs; }
  bool reduced_holds() const { return *std::max_element(reduced_lhs.begin(), reduced_lhs.end()) <= reduced_rhs; }

  std::map<std::string, double> named() const {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < 8; ++i) {
      out["t4all." + std::to_string(i)] = t4_terms[i];
      out["T2bound1." + std::to_string(i)] = bound_large[i];
      out["T2bound2." + std::to_string(i)] = bound_small[i];
      out["T2uniform." + std::to_string(i)] = bound_uniform[i];
      out["finalcondis.lhs." + std::to_string(i)] = final_lhs[i];
    }
    for (std::size_t i = 0; i < 6; ++i) out["finalcondis.reduced_lhs." + std::to_string(i)] = reduced_lhs[i];
    out["finalcondis.rhs"] = final_rhs;
    out["finalcondis.reduced_rhs"] = reduced_rhs;
    out["finalcondis.holds"] = final_holds() ? 1.0 : 0.0;
    out["finalcondis.reduced_holds"] = reduced_holds() ? 1.0 : 0.0;
    out["selected.uses_T2bound1"] = uses_large_m ? 1.0 : 0.0;
    out["selected.dominant_index"] = static_cast<double>(dominant);
    out["selected.sum"] = selected_sum;
    out["anothercond"] = anothercond ? 1.0 : 0.0;
    out["newcondi"] = newcondi ? 1.0 : 0.0;
    out["transcond.Y"] = transcond_y ? 1.0 : 0.0;
    out["transcond.q"] = transcond_q ? 1.0 : 0.0;
    out["qc.window"] = q_window ? 1.0 : 0.0;
    return out;
  }
};

inline T2BoundChain t2_bound_chain(double X, double Y, double delta, double eps, double H, double M, double q) {
  T2BoundChain c;
  const double x3 = std::pow(X, 3.0 * eps);
  const double x4 = std::pow(X, 4.0 * eps);
  const double x12 = std::sqrt(X);
  const double x23 = std::pow(X, 2.0 / 3.0);
  c.t4_terms = {Y * Y * H * H / (M * q), Y * H * H / q, X * Y * H * H / (M * M), X * H * H / M,
                Y * H * q / M, H * q, Y * H, X * q / M};
  for (auto& t : c.t4_terms) t *= x3;
  c.bound_large = {Y * Y * H * H / q, Y * H * H * M / q, X * Y * H * H / M, X * H * H,
                   Y * H * q, H * q * M, Y * H * M, X * q};
  c.bound_small = {Y * Y * H * H / q, X * Y * H * H / (M * q), Y * H * H * M, X * H * H,
                   Y * H * q, X * H * q / M, X * Y * H / M, X * q};
  c.bound_uniform = {Y * Y * H * H / q, x23 * Y * H * H / q, x12 * Y * H * H, X * H * H,
                     Y * H * q, x23 * H * q, x23 * Y * H, X * q};
  for (auto* arr : {&c.bound_large, &c.bound_small, &c.bound_uniform})
    for (auto& t : *arr) t *= x4;
  c.uses_large_m = M > x12;
  const auto& sel = c.selected();
  c.dominant = static_cast<std::size_t>(std::max_element(sel.begin(), sel.end()) - sel.begin());
  for (double t : sel) c.selected_sum += t;

  c.anothercond = M * Y / X >= 1.0;
  c.newcondi = 2.0 * Y * H / M <= q / 2.0;
  c.transcond_y = Y >= x12;
  c.transcond_q = q >= 4.0 * Y * H / x12;
  c.q_window = Y / (delta * std::pow(X, 0.5 - 2.0 * eps)) <= q && q <= Y / (delta * std::pow(X, 0.5 - 3.0 * eps));

  const double d2 = delta * delta;
  c.final_lhs = {Y * Y / q, x23 * Y / q, x12 * Y, X, delta * Y * q, delta * x23 * q, delta * x23 * Y, d2 * X * q};
  c.final_rhs = d2 * Y * Y * std::pow(X, -6.0 * eps);
  c.reduced_lhs = {delta * x12 * Y, delta * std::pow(X, 7.0 / 6.0), x12 * Y, X, Y * Y / x12, delta * x23 * Y};
  c.reduced_rhs = d2 * Y * Y * std::pow(X, -9.0 * eps);
  return c;
}

inline T2BoundChain t2_bound_chain(double H, double M, const SumContext& ctx) {
  return t2_bound_chain(ctx.Xd(), ctx.Yd(), ctx.delta, ctx.eps, H, M, static_cast<double>(ctx.q));
}

}  // namespace dioprime
