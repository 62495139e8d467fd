#pragma once

// Experiment configuration, admissibility, choice of the rational
// approximation q, end-to-end runs, the bound suite and sweeps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dioprime/alpha_engine.hpp"
#include "dioprime/arith_sieve.hpp"
#include "dioprime/errors.hpp"
#include "dioprime/report.hpp"
#include "dioprime/smoothing.hpp"
#include "dioprime/vaughan.hpp"

namespace dioprime {

using nlohmann::json;

enum class QPolicy { StrictWindow, NearestConvergent };

inline const char* to_string(QPolicy p) { return p == QPolicy::StrictWindow ? "strict" : "nearest"; }

inline QPolicy parse_q_policy(std::string_view s) {
  if (s == "strict" || s == "strict-window") return QPolicy::StrictWindow;
  if (s == "nearest" || s == "nearest-convergent") return QPolicy::NearestConvergent;
  fail(errc::kConfig, "unknown q_policy '" + std::string(s) + "' (expected strict or nearest)");
}

/// Accepts a plain number or a power of two written "2^-40".
inline double parse_precision(std::string_view s) {
  if (s.rfind("2^", 0) == 0) {
    const auto e = detail::parse_i64(s.substr(2));
    return std::ldexp(1.0, static_cast<int>(e));
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(errc::kParse, "cannot parse precision '" + std::string(s) + "'");
}

struct ExperimentConfig {
  std::uint64_t X = 1'000'000;
  std::uint64_t Y = 100'000;
  double delta = 0.45;
  double eps = 0.01;
  AlphaSpec alpha = AlphaSpec::sqrt_of(2);
  double precision = AngleOracle::kDefaultErrTarget;
  QPolicy q_policy = QPolicy::NearestConvergent;
  std::uint64_t budget = 1'000'000'000;
  std::uint64_t seed = 20240229;
  std::string format = "json";
  double tolerance = 0.15;  // relative band for the asymptotic ratio checks

  std::int64_t L() const { return SmoothingKernel::experiment_length(delta, static_cast<double>(X), eps); }
  /// U = V = X^{1/3}.
  double U() const { return std::cbrt(static_cast<double>(X)); }
  double V() const { return U(); }

  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> k{"X",         "Y",        "delta",  "eps",  "alpha",    "precision",
                                            "q_policy",  "budget",   "seed",   "format", "tolerance"};
    return k;
  }

  static ExperimentConfig from_json(const json& j) {
    if (!j.is_object()) fail(errc::kConfig, "config must be a JSON object");
    for (const auto& [key, _] : j.items())
      if (std::find(keys().begin(), keys().end(), key) == keys().end())
        fail(errc::kConfig, "unknown config key '" + key + "'");
    ExperimentConfig c;
    auto uint_field = [&](const char* key, std::uint64_t& out) {
      if (!j.contains(key)) return;
      const auto& v = j.at(key);
      if (v.is_number_unsigned()) {
        out = v.get<std::uint64_t>();
      } else if (v.is_number()) {
        const double d = v.get<double>();
        if (!(d >= 0.0 && d == std::floor(d) && d < 0x1p63))
          fail(errc::kConfig, std::string("config key '") + key + "' must be a nonnegative integer");
        out = static_cast<std::uint64_t>(d);
      } else {
        fail(errc::kConfig, std::string("config key '") + key + "' must be a number");
      }
    };
    auto real_field = [&](const char* key, double& out) {
      if (!j.contains(key)) return;
      if (!j.at(key).is_number()) fail(errc::kConfig, std::string("config key '") + key + "' must be a number");
      out = j.at(key).get<double>();
    };
    auto string_field = [&](const char* key) -> std::optional<std::string> {
      if (!j.contains(key)) return std::nullopt;
      if (!j.at(key).is_string()) fail(errc::kConfig, std::string("config key '") + key + "' must be a string");
      return j.at(key).get<std::string>();
    };
    uint_field("X", c.X);
    uint_field("Y", c.Y);
    real_field("delta", c.delta);
    real_field("eps", c.eps);
    if (auto a = string_field("alpha")) c.alpha = AlphaSpec::parse(*a);
    if (j.contains("precision")) {
      const auto& p = j.at("precision");
      if (p.is_number())
        c.precision = p.get<double>();
      else if (p.is_string())
        c.precision = parse_precision(p.get<std::string>());
      else
        fail(errc::kConfig, "config key 'precision' must be a number or a string like 2^-40");
    }
    if (auto q = string_field("q_policy")) c.q_policy = parse_q_policy(*q);
    uint_field("budget", c.budget);
    uint_field("seed", c.seed);
    if (auto f = string_field("format")) c.format = *f;
    real_field("tolerance", c.tolerance);
    c.validate();
    return c;
  }

  void validate() const {
    if (X < 1) fail(errc::kConfig, "X must be positive");
    if (format != "json" && format != "csv") fail(errc::kConfig, "format must be json or csv");
    if (!(precision > 0.0 && precision < 0.25)) fail(errc::kConfig, "precision must lie in (0, 1/4)");
    if (!(tolerance > 0.0)) fail(errc::kConfig, "tolerance must be positive");
    if (!std::isfinite(delta) || !std::isfinite(eps)) fail(errc::kConfig, "delta and eps must be finite");
  }

  json to_json() const {
    return {{"X", X},
            {"Y", Y},
            {"delta", delta},
            {"eps", eps},
            {"alpha", alpha.to_string()},
            {"precision", precision},
            {"q_policy", dioprime::to_string(q_policy)},
            {"budget", budget},
            {"seed", seed},
            {"format", format},
            {"tolerance", tolerance}};
  }
};

// ---------------------------------------------------------------------------
// Admissibility

struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct Admissibility {
  std::vector<Inequality> checks;
  std::pair<double, double> q_window{0.0, 0.0};
  double y_floor = 0.0;      // X^{2/3 + 10 eps}
  double delta_floor = 0.0;  // X^{10 eps} max(X^{1/4} Y^{-1/2}, X^{2/3} Y^{-1})

  bool admissible() const {
    return std::all_of(checks.begin(), checks.end(), [](const Inequality& i) { return i.holds; });
  }
  std::vector<std::string> violated() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.holds) out.push_back(c.name);
    return out;
  }
  json to_json() const {
    json arr = json::array();
    for (const auto& c : checks)
      arr.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
    return {{"admissible", admissible()},
            {"checks", arr},
            {"q_window", {q_window.first, q_window.second}},
            {"y_floor", y_floor},
            {"delta_floor", delta_floor}};
  }
};

/// [Y / (delta X^{1/2 - 2 eps}), Y / (delta X^{1/2 - 3 eps})].
inline std::pair<double, double> q_window(double X, double Y, double delta, double eps) {
  return {Y / (delta * std::pow(X, 0.5 - 2.0 * eps)), Y / (delta * std::pow(X, 0.5 - 3.0 * eps))};
}

/// Total: never throws, every inequality is reported.
inline Admissibility check_admissible(const ExperimentConfig& c) {
  Admissibility a;
  const double X = static_cast<double>(c.X), Y = static_cast<double>(c.Y);
  const double x10 = std::pow(X, 10.0 * c.eps);
  a.y_floor = std::pow(X, 2.0 / 3.0 + 10.0 * c.eps);
  a.delta_floor = Y > 0.0 ? x10 * std::max(std::pow(X, 0.25) / std::sqrt(Y), std::pow(X, 2.0 / 3.0) / Y)
                          : std::numeric_limits<double>::infinity();
  a.checks.push_back({"X >= 10", X, 10.0, X >= 10.0});
  a.checks.push_back({"eps > 0", c.eps, 0.0, c.eps > 0.0});
  a.checks.push_back({"Y >= X^(2/3+10eps)", Y, a.y_floor, Y >= a.y_floor});
  a.checks.push_back({"Y <= X/2", Y, X / 2.0, Y <= X / 2.0});
  a.checks.push_back({"delta >= X^(10eps) max(X^(1/4) Y^(-1/2), X^(2/3) Y^(-1))", c.delta, a.delta_floor,
                      c.delta >= a.delta_floor});
  a.checks.push_back({"delta <= 1/2", c.delta, 0.5, c.delta <= 0.5});
  a.q_window = q_window(X, Y, c.delta, c.eps);
  return a;
}

// ---------------------------------------------------------------------------
// Choice of q

struct QChoice {
  Convergent convergent;
  bool in_window = false;
  std::pair<double, double> window{0.0, 0.0};

  std::uint64_t q() const { return static_cast<std::uint64_t>(convergent.q); }
};

/// Strict policy: a convergent denominator inside the window or an error.
/// Nearest policy: falls back to the straddling convergent closest to the
/// window's geometric midpoint.
inline QChoice select_q(const AlphaSpec& alpha, std::pair<double, double> window, QPolicy policy) {
  QChoice out;
  out.window = window;
  const double lo = std::max(1.0, window.first);
  const double hi = std::max(lo, window.second);
  auto search = find_q_in_window(alpha, lo, hi);
  if (search.found && window.first <= window.second) {
    out.convergent = *search.found;
    out.in_window = true;
    return out;
  }
  if (policy == QPolicy::StrictWindow)
    fail(errc::kWindowNotFound, "no convergent denominator of " + alpha.to_string() + " in [" + std::to_string(window.first) +
                                    ", " + std::to_string(window.second) + "]");
  if (search.found) {  // empty window (lo > hi): take what the clipped search found
    out.convergent = *search.found;
    return out;
  }
  const double log_mid = 0.5 * (std::log(lo) + std::log(hi));
  auto gap = [&](const Convergent& c) { return std::abs(std::log(c.q.convert_to<double>()) - log_mid); };
  if (search.below && (!search.above || gap(*search.below) <= gap(*search.above)))
    out.convergent = *search.below;
  else
    out.convergent = *search.above;
  return out;
}

inline QChoice select_q(const ExperimentConfig& c) {
  return select_q(c.alpha, check_admissible(c).q_window, c.q_policy);
}

// ---------------------------------------------------------------------------
// End-to-end runs

namespace detail {

inline SumReport start_report(const ExperimentConfig& c, const Admissibility& adm, const QChoice& qc) {
  SumReport r;
  r.q_used = qc.q();
  r.q_window = adm.q_window;
  r.q_in_window = qc.in_window;
  for (const auto& v : adm.violated()) r.flag("inadmissible: " + v);
  if (!qc.in_window) r.flag("window_fallback");
  (void)c;
  return r;
}

inline void require_interval(const ExperimentConfig& c) {
  if (c.Y > c.X) fail(errc::kInvalidArgument, "need Y <= X");
  if (c.Y > 0 && c.X - c.Y < 2) fail(errc::kInvalidArgument, "need X - Y >= 2");
  if (c.X > SieveOptions{}.ceiling) fail(errc::kCeiling, "X exceeds the sieve ceiling 2^48");
}

}  // namespace detail

/// sum_{X-Y<n<=X} Lambda(n) F(n alpha) against delta Y.
inline SumReport run_smoothed_sum(const ExperimentConfig& c) {
  detail::require_interval(c);
  if (!(c.delta > 0.0 && c.delta <= 0.5)) fail(errc::kInvalidArgument, "delta must lie in (0, 1/2]");
  const auto adm = check_admissible(c);
  const auto qc = select_q(c);
  SumReport r = detail::start_report(c, adm, qc);
  const double main = c.delta * static_cast<double>(c.Y);
  if (c.Y == 0) {
    r.value = 0.0;
    r.set_main_term(0.0);
    return r;
  }
  const int terms = default_direct_terms(c.delta);
  const double work = static_cast<double>(c.Y) * (2 * terms + 1);
  if (work > static_cast<double>(c.budget)) fail(errc::kWorkload, "run_smoothed_sum: workload exceeds the budget");

  const auto sieve = sieve_interval(c.X - c.Y, c.X);
  const auto oracle = AngleOracle::build(c.alpha, c.X, c.precision);
  KahanSum value, error, psi;
  sieve.for_each_prime_power([&](const PrimePower& pp) {
    const double lam = pp.log_p();
    const double F = f_direct(oracle.frac(static_cast<std::int64_t>(pp.n)), c.delta, terms);
    value += lam * F;
    error += lam * (F - c.delta);
    psi += lam;
  });
  r.value = value.value();
  r.set_main_term(main);
  r.set_measured_exponent(std::abs(error.value()) / main, static_cast<double>(c.X));
  const auto kernel_len = c.L();
  r.bound_terms["error_sum"] = error.value();
  r.bound_terms["psi_interval"] = psi.value();
  r.bound_terms["delta_psi_interval"] = c.delta * psi.value();
  r.bound_terms["fourier_length"] = static_cast<double>(kernel_len);
  r.bound_terms["fourier_tail_log"] = truncation_bound(c.delta, kernel_len).log_value;
  r.bound_terms["oracle_error_bound"] = oracle.error_bound();
  return r;
}

/// #{p prime : X-Y < p <= X, ||p alpha|| < delta} against 2 delta Y / log X.
inline SumReport run_prime_count(const ExperimentConfig& c) {
  detail::require_interval(c);
  if (!(c.delta > 0.0 && c.delta <= 0.5)) fail(errc::kInvalidArgument, "delta must lie in (0, 1/2]");
  const auto adm = check_admissible(c);
  const auto qc = select_q(c);
  SumReport r = detail::start_report(c, adm, qc);
  const double main = 2.0 * c.delta * static_cast<double>(c.Y) / std::log(static_cast<double>(c.X));
  if (c.Y == 0) {
    r.value = 0.0;
    r.set_main_term(main);
    return r;
  }
  if (static_cast<double>(c.Y) > static_cast<double>(c.budget))
    fail(errc::kWorkload, "run_prime_count: workload exceeds the budget");
  const auto sieve = sieve_interval(c.X - c.Y, c.X);
  const auto oracle = AngleOracle::build(c.alpha, c.X, c.precision);
  const auto count = primes_with_small_angle(sieve, oracle, c.delta);
  r.value = static_cast<double>(count.count);
  r.set_main_term(main);
  if (main > 0.0) r.set_measured_exponent(std::abs(r.value - main) / main, static_cast<double>(c.X));
  r.bound_terms["primes_in_interval"] = static_cast<double>(count.examined);
  r.bound_terms["expected_density_count"] = 2.0 * c.delta * static_cast<double>(count.examined);
  r.bound_terms["boundary_samples"] = static_cast<double>(count.flagged_boundary);
  if (count.flagged_boundary > 0) r.flag("boundary_samples");
  return r;
}

inline json report_json(const SumReport& r, const ExperimentConfig& c) {
  json j = to_json(r);
  j["seed"] = c.seed;
  j["config_echo"] = c.to_json();
  return j;
}

// ---------------------------------------------------------------------------
// Bound suite

inline SumContext make_sum_context(const ExperimentConfig& c, const QChoice& qc) {
  const auto adm = check_admissible(c);
  return make_sum_context(c.X, c.Y, c.delta, c.eps, c.alpha, c.precision, c.budget, qc.q(), adm.q_window,
                          qc.in_window);
}

struct BoundSuiteSummary {
  std::size_t type_ii_blocks = 0;
  std::size_t nonempty_blocks = 0;
  double max_split_residual = 0.0;
  bool cauchy_schwarz = true;
  bool m_length = true;
  bool gamma_mass = true;
  bool gamma_divisor_bound = true;
  std::size_t gamma_instances = 0;

  bool ok() const {
    return max_split_residual <= 1e-9 && cauchy_schwarz && m_length && gamma_mass && gamma_divisor_bound;
  }
};

struct BoundSuite {
  json report;
  BoundSuiteSummary summary;
};

/// t1_sum, t2_sum, the T3 split, gamma(l) and the type II bound chain over the
/// dyadic grid of (H, M) blocks.
inline BoundSuite run_bound_suite(const ExperimentConfig& c) {
  detail::require_interval(c);
  const auto adm = check_admissible(c);
  const auto qc = select_q(c);
  const auto ctx = make_sum_context(c, qc);
  BoundSuite out;
  auto& s = out.summary;
  json flags = json::array();
  for (const auto& v : adm.violated()) flags.push_back("inadmissible: " + v);
  if (!qc.in_window) flags.push_back("window_fallback");

  const auto fc = first_condition(ctx.Xd(), ctx.Yd(), c.delta, c.eps, static_cast<double>(ctx.q));
  json t1 = json::array();
  for (double H : dyadic_fourier_blocks(ctx)) {
    auto rep = t1_sum(H, ctx);
    t1.push_back({{"H", H}, {"report", to_json(rep)}});
  }

  json blocks = json::array();
  for (double H : dyadic_fourier_blocks(ctx))
    for (double M : dyadic_type_ii_blocks(ctx)) {
      ++s.type_ii_blocks;
      const auto t2 = t2_sum(H, M, ctx);
      const auto split = t3_t4_t5_split(H, M, ctx);
      const auto chain = t2_bound_chain(H, M, ctx);
      const bool empty = std::find(t2.flags.begin(), t2.flags.end(), "empty_block") != t2.flags.end();
      if (!empty) ++s.nonempty_blocks;
      s.max_split_residual = std::max(s.max_split_residual, split.identity_residual);
      s.cauchy_schwarz = s.cauchy_schwarz && split.cauchy_schwarz;
      const bool m_len_ok = static_cast<double>(split.max_m_length) <= split.m_length_limit;
      s.m_length = s.m_length && m_len_ok;

      json block = {{"H", H},
                    {"M", M},
                    {"T2", to_json(t2)},
                    {"split",
                     {{"T3", split.t3},
                      {"T4", {split.t4.real(), split.t4.imag()}},
                      {"T5", {split.t5.real(), split.t5.imag()}},
                      {"identity_residual", split.identity_residual},
                      {"cauchy_schwarz", split.cauchy_schwarz},
                      {"max_m_length", split.max_m_length},
                      {"m_length_limit", split.m_length_limit}}},
                    {"chain", chain.named()}};
      const double sel = chain.selected_sum;
      if (sel > 0.0) block["measured_over_bound"] = t2.value / sel;

      if (ctx.Xd() / M <= GammaRanges::kMaxXOverM && H <= GammaRanges::kMaxH) {
        const auto g = GammaRanges::from(ctx.Xd(), ctx.Yd(), H, M);
        std::uint64_t mass = 0;
        bool divisor_ok = true;
        for (auto l = -g.l_bound; l <= g.l_bound; ++l) {
          const auto gc = gamma_counts(l, g);
          mass += gc.total();
          if (gc.gamma1 > gamma1_divisor_bound(l, g)) divisor_ok = false;
        }
        const auto expected = gamma_total_quadruples(g);
        ++s.gamma_instances;
        s.gamma_mass = s.gamma_mass && mass == expected;
        s.gamma_divisor_bound = s.gamma_divisor_bound && divisor_ok;
        block["gamma"] = {{"l_bound", g.l_bound}, {"mass", mass}, {"quadruples", expected}, {"divisor_bound_ok", divisor_ok}};
      }
      blocks.push_back(std::move(block));
    }
  if (s.nonempty_blocks == 0) flags.push_back("empty_grid: no type II block has a nonempty range");

  out.report = {{"config_echo", c.to_json()},
                {"seed", c.seed},
                {"q_used", ctx.q},
                {"q_window", {adm.q_window.first, adm.q_window.second}},
                {"q_in_window", qc.in_window},
                {"L", ctx.kernel.length()},
                {"ourfirstcond",
                 {{"Y_over_q", fc.y_over_q},
                  {"X_2_3", fc.x_two_thirds},
                  {"delta_q", fc.delta_q},
                  {"rhs", fc.rhs},
                  {"holds", fc.holds()}}},
                {"t1", t1},
                {"type_ii", blocks},
                {"summary",
                 {{"type_ii_blocks", s.type_ii_blocks},
                  {"nonempty_blocks", s.nonempty_blocks},
                  {"max_split_residual", s.max_split_residual},
                  {"cauchy_schwarz", s.cauchy_schwarz},
                  {"m_length", s.m_length},
                  {"gamma_instances", s.gamma_instances},
                  {"gamma_mass", s.gamma_mass},
                  {"gamma_divisor_bound", s.gamma_divisor_bound},
                  {"ok", s.ok()}}},
                {"flags", flags}};
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class RunKind { SmoothedSum, PrimeCount };

inline RunKind parse_run_kind(std::string_view s) {
  if (s == "ssum") return RunKind::SmoothedSum;
  if (s == "count") return RunKind::PrimeCount;
  fail(errc::kConfig, "unknown sweep run '" + std::string(s) + "' (expected ssum or count)");
}

inline const char* to_string(RunKind k) { return k == RunKind::SmoothedSum ? "ssum" : "count"; }

struct SweepPoint {
  json config;  // raw point, validated when run
};

struct SweepRow {
  std::size_t index = 0;
  json config;
  std::optional<SumReport> report;
  std::string error_code;
  std::string error_message;
};

struct SweepSpec {
  RunKind run = RunKind::SmoothedSum;
  std::vector<SweepPoint> points;

  /// {"run": "ssum"|"count", "base": {...}, "vary": {"X": [...], "Y": [...],
  ///  "delta": [...], "alpha": [...]}, "Y_over_X": r} or {"points": [{...}, ...]}.
  /// Points come out in lexicographic order X, Y, delta, alpha.
  static SweepSpec from_json(const json& j) {
    static const std::set<std::string> allowed{"run", "base", "vary", "Y_over_X", "points"};
    if (!j.is_object()) fail(errc::kConfig, "sweep spec must be a JSON object");
    for (const auto& [key, _] : j.items())
      if (!allowed.count(key)) fail(errc::kConfig, "unknown sweep key '" + key + "'");
    SweepSpec s;
    if (j.contains("run")) s.run = parse_run_kind(j.at("run").get<std::string>());
    if (j.contains("points")) {
      for (const auto& p : j.at("points")) s.points.push_back({p});
      return s;
    }
    const json base = j.value("base", json::object());
    const json vary = j.value("vary", json::object());
    static const std::vector<std::string> order{"X", "Y", "delta", "alpha"};
    for (const auto& [key, _] : vary.items())
      if (std::find(order.begin(), order.end(), key) == order.end())
        fail(errc::kConfig, "sweep can only vary X, Y, delta, alpha (got '" + key + "')");
    std::vector<json> acc{base};
    for (const auto& key : order) {
      if (!vary.contains(key)) continue;
      const auto& values = vary.at(key);
      if (!values.is_array()) fail(errc::kConfig, "sweep vary." + key + " must be an array");
      std::vector<json> next;
      for (const auto& partial : acc)
        for (const auto& v : values) {
          json p = partial;
          p[key] = v;
          next.push_back(std::move(p));
        }
      acc = std::move(next);
    }
    if (j.contains("Y_over_X")) {
      const double r = j.at("Y_over_X").get<double>();
      for (auto& p : acc)
        if (!vary.contains("Y") && p.contains("X"))
          p["Y"] = static_cast<std::uint64_t>(std::floor(p.at("X").get<double>() * r));
    }
    for (auto& p : acc) s.points.push_back({std::move(p)});
    return s;
  }
};

/// Runs every point in order; a failing point records its error code and the
/// stream continues.
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    SweepRow row;
    row.index = i;
    row.config = spec.points[i].config;
    try {
      const auto cfg = ExperimentConfig::from_json(row.config);
      row.config = cfg.to_json();
      row.report = spec.run == RunKind::SmoothedSum ? run_smoothed_sum(cfg) : run_prime_count(cfg);
    } catch (const Error& e) {
      row.error_code = e.code();
      row.error_message = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json sweep_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j = {{"index", r.index}, {"config_echo", r.config}};
    if (r.report) {
      j["report"] = to_json(*r.report);
    } else {
      j["error"] = {{"code", r.error_code}, {"message", r.error_message}};
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

namespace detail {
inline std::string csv_number(double v) { return std::isfinite(v) ? json(v).dump() : ""; }
inline std::string csv_optional(const std::optional<double>& v) { return v ? csv_number(*v) : ""; }
inline std::string csv_field(const json& j, const char* key) {
  if (!j.contains(key)) return "";
  const auto& v = j.at(key);
  return v.is_string() ? v.get<std::string>() : v.dump();
}
inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}
}  // namespace detail

/// One row per point; bound_terms are flattened into bound_terms.<name> columns.
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  static const std::vector<std::string> fixed{"index",     "X",        "Y",           "delta",       "eps",
                                              "alpha",     "error",    "value",       "main_term",   "ratio",
                                              "q_used",    "q_window_lo", "q_window_hi", "q_in_window", "measured_exponent",
                                              "flags"};
  std::set<std::string> bound_keys;
  for (const auto& r : rows)
    if (r.report)
      for (const auto& [k, _] : r.report->bound_terms) bound_keys.insert(k);
  std::ostringstream out;
  bool first = true;
  for (const auto& h : fixed) {
    out << (first ? "" : ",") << h;
    first = false;
  }
  for (const auto& k : bound_keys) out << ",bound_terms." << k;
  out << "\n";
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.index),
                                   detail::csv_field(r.config, "X"),
                                   detail::csv_field(r.config, "Y"),
                                   detail::csv_field(r.config, "delta"),
                                   detail::csv_field(r.config, "eps"),
                                   detail::csv_field(r.config, "alpha"),
                                   r.error_code};
    if (r.report) {
      const auto& s = *r.report;
      std::string flags;
      for (std::size_t i = 0; i < s.flags.size(); ++i) flags += (i ? ";" : "") + s.flags[i];
      cells.insert(cells.end(), {detail::csv_number(s.value), detail::csv_optional(s.main_term),
                                 detail::csv_optional(s.ratio), std::to_string(s.q_used),
                                 detail::csv_number(s.q_window.first), detail::csv_number(s.q_window.second),
                                 s.q_in_window ? "true" : "false", detail::csv_optional(s.measured_exponent), flags});
      for (const auto& k : bound_keys) {
        auto it = s.bound_terms.find(k);
        cells.push_back(it == s.bound_terms.end() ? "" : detail::csv_number(it->second));
      }
    } else {
      cells.resize(fixed.size() + bound_keys.size());
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << detail::csv_quote(cells[i]);
    out << "\n";
  }
  return out.str();
}

}  // namespace dioprime
