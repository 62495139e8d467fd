#pragma once

// Exact continued-fraction machinery for an irrational alpha: partial
// quotients, convergents, denominator windows, and a certified evaluator of
// ||n alpha|| built on a deep convergent.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dioprime/errors.hpp"
#include "dioprime/numeric.hpp"

namespace dioprime {

using BigInt = boost::multiprecision::cpp_int;

/// (a + b sqrt(d)) / c with c > 0, b != 0 and d a positive non-square.
struct QuadraticSurd {
  BigInt a, b, c, d;
};

/// [a0; pre_1, ..., pre_k, period, period, ...]. `preperiod` starts with a0.
struct ExplicitCf {
  std::vector<std::int64_t> preperiod;
  std::vector<std::int64_t> period;
};

namespace detail {

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

inline BigInt abs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

inline BigInt gcd(BigInt a, BigInt b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    BigInt t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

inline bool is_square(const BigInt& d) {
  if (d < 0) return false;
  BigInt s = boost::multiprecision::sqrt(d);
  return s * s == d;
}

inline std::int64_t to_i64(const BigInt& x, const char* what) {
  if (x > std::numeric_limits<std::int64_t>::max() ||
      x < std::numeric_limits<std::int64_t>::min())
    fail(errc::kOverflow, std::string(what) + " does not fit in 64 bits");
  return static_cast<std::int64_t>(x);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::int64_t parse_i64(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    fail(errc::kParse, "not an integer: '" + std::string(s) + "'");
  return v;
}

inline BigInt parse_big(std::string_view s) {
  std::string_view digits = s;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    fail(errc::kParse, "not an integer: '" + std::string(s) + "'");
  return BigInt(std::string(s));
}

}  // namespace detail

/// Exact description of an irrational alpha.
class AlphaSpec {
 public:
  static AlphaSpec surd(BigInt a, BigInt b, BigInt c, BigInt d) {
    if (b == 0) fail(errc::kInvalidArgument, "surd coefficient b must be nonzero");
    if (c <= 0) fail(errc::kInvalidArgument, "surd denominator c must be positive");
    if (d <= 0) fail(errc::kInvalidArgument, "surd radicand d must be positive");
    if (detail::is_square(d))
      fail(errc::kRationalAlpha, "radicand " + d.str() + " is a perfect square; alpha is rational");
    AlphaSpec s;
    s.value_ = QuadraticSurd{std::move(a), std::move(b), std::move(c), std::move(d)};
    return s;
  }

  static AlphaSpec sqrt_of(BigInt d) { return surd(0, 1, 1, std::move(d)); }
  static AlphaSpec golden_ratio() { return surd(1, 1, 2, 5); }

  static AlphaSpec continued_fraction(std::vector<std::int64_t> preperiod,
                                      std::vector<std::int64_t> period) {
    if (preperiod.empty()) fail(errc::kInvalidArgument, "continued fraction needs a0");
    if (period.empty()) fail(errc::kInvalidArgument, "continued fraction period must be nonempty");
    for (std::size_t i = 1; i < preperiod.size(); ++i)
      if (preperiod[i] < 1) fail(errc::kInvalidArgument, "partial quotients a_n (n >= 1) must be >= 1");
    for (auto t : period)
      if (t < 1) fail(errc::kInvalidArgument, "partial quotients a_n (n >= 1) must be >= 1");
    AlphaSpec s;
    s.value_ = ExplicitCf{std::move(preperiod), std::move(period)};
    return s;
  }

  /// Grammar: `sqrt:<d>`, `surd:<a>,<b>,<c>,<d>`, `cf:<a0>;<pre,...>;<period,...>`.
  static AlphaSpec parse(std::string_view text) {
    if (text == "golden") return golden_ratio();
    auto colon = text.find(':');
    if (colon == std::string_view::npos) fail(errc::kParse, "alpha spec needs a kind prefix: '" + std::string(text) + "'");
    auto kind = text.substr(0, colon);
    auto body = text.substr(colon + 1);
    if (kind == "sqrt") return sqrt_of(detail::parse_big(body));
    if (kind == "surd") {
      auto parts = detail::split(body, ',');
      if (parts.size() != 4) fail(errc::kParse, "surd needs 4 integers a,b,c,d");
      return surd(detail::parse_big(parts[0]), detail::parse_big(parts[1]),
                  detail::parse_big(parts[2]), detail::parse_big(parts[3]));
    }
    if (kind == "cf") {
      auto parts = detail::split(body, ';');
      if (parts.size() != 3) fail(errc::kParse, "cf needs '<a0>;<pre...>;<period...>'");
      std::vector<std::int64_t> pre{detail::parse_i64(parts[0])};
      if (!parts[1].empty())
        for (auto item : detail::split(parts[1], ',')) pre.push_back(detail::parse_i64(item));
      std::vector<std::int64_t> per;
      if (!parts[2].empty())
        for (auto item : detail::split(parts[2], ',')) per.push_back(detail::parse_i64(item));
      return continued_fraction(std::move(pre), std::move(per));
    }
    fail(errc::kParse, "unknown alpha kind '" + std::string(kind) + "'");
  }

  std::string to_string() const {
    if (const auto* s = std::get_if<QuadraticSurd>(&value_)) {
      if (s->a == 0 && s->b == 1 && s->c == 1) return "sqrt:" + s->d.str();
      return "surd:" + s->a.str() + "," + s->b.str() + "," + s->c.str() + "," + s->d.str();
    }
    const auto& cf = std::get<ExplicitCf>(value_);
    auto join = [](auto first, auto last) {
      std::string out;
      for (auto it = first; it != last; ++it) {
        if (!out.empty()) out += ',';
        out += std::to_string(*it);
      }
      return out;
    };
    return "cf:" + std::to_string(cf.preperiod.front()) + ";" +
           join(cf.preperiod.begin() + 1, cf.preperiod.end()) + ";" +
           join(cf.period.begin(), cf.period.end());
  }

  bool is_surd() const { return std::holds_alternative<QuadraticSurd>(value_); }
  const QuadraticSurd& as_surd() const { return std::get<QuadraticSurd>(value_); }
  const ExplicitCf& as_cf() const { return std::get<ExplicitCf>(value_); }

  friend bool operator==(const AlphaSpec& x, const AlphaSpec& y) { return x.to_string() == y.to_string(); }

 private:
  AlphaSpec() = default;
  std::variant<QuadraticSurd, ExplicitCf> value_;
};

/// Lazy generator of partial quotients a0, a1, ...
///
/// Quadratic surds run the exact integer algorithm on the reduced state
/// (P + sqrt(D)) / Q with Q | D - P^2, so no real arithmetic is involved.
class CfStream {
 public:
  explicit CfStream(const AlphaSpec& alpha) {
    if (alpha.is_surd()) {
      const auto& s = alpha.as_surd();
      surd_ = true;
      D_ = s.b * s.b * s.d;
      if (s.b > 0) {
        P_ = s.a;
        Q_ = s.c;
      } else {
        P_ = -s.a;
        Q_ = -s.c;
      }
      if ((D_ - P_ * P_) % Q_ != 0) {
        BigInt absq = detail::abs(Q_);
        P_ *= absq;
        D_ *= Q_ * Q_;
        Q_ *= absq;
      }
      sqrtD_ = boost::multiprecision::sqrt(D_);
    } else {
      cf_ = alpha.as_cf();
    }
  }

  std::int64_t next() {
    if (!surd_) {
      std::int64_t t = index_ < cf_.preperiod.size()
                           ? cf_.preperiod[index_]
                           : cf_.period[(index_ - cf_.preperiod.size()) % cf_.period.size()];
      ++index_;
      return t;
    }
    BigInt a = Q_ > 0 ? detail::floor_div(P_ + sqrtD_, Q_) : detail::floor_div(P_ + sqrtD_ + 1, Q_);
    BigInt p_next = a * Q_ - P_;
    BigInt q_next = (D_ - p_next * p_next) / Q_;
    P_ = std::move(p_next);
    Q_ = std::move(q_next);
    ++index_;
    return detail::to_i64(a, "partial quotient");
  }

  /// Surd state (P, Q) before the next term; used for period detection.
  std::pair<BigInt, BigInt> surd_state() const { return {P_, Q_}; }
  bool is_surd() const { return surd_; }
  std::size_t index() const { return index_; }

 private:
  bool surd_ = false;
  std::size_t index_ = 0;
  BigInt P_, Q_, D_, sqrtD_;
  ExplicitCf cf_;
};

/// The first `count` partial quotients [a0, a1, ...].
inline std::vector<std::int64_t> cf_terms(const AlphaSpec& alpha, std::size_t count) {
  if (count < 1) fail(errc::kInvalidArgument, "cf_terms: count must be >= 1");
  CfStream cf(alpha);
  std::vector<std::int64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(cf.next());
  return out;
}

struct CfPeriod {
  std::size_t preperiod_length;  // includes a0
  std::size_t period_length;
};

/// Detects the eventual period of the expansion by state revisit.
inline CfPeriod cf_period(const AlphaSpec& alpha, std::size_t step_cap = 1'000'000) {
  if (!alpha.is_surd()) {
    const auto& cf = alpha.as_cf();
    return {cf.preperiod.size(), cf.period.size()};
  }
  CfStream cf(alpha);
  std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
  for (std::size_t i = 0; i < step_cap; ++i) {
    auto state = cf.surd_state();
    auto [it, inserted] = seen.emplace(state, i);
    if (!inserted) return {it->second, i - it->second};
    cf.next();
  }
  fail(errc::kDepthCap, "cf_period: no period found within step cap");
}

/// Max of a_1..a_probe. For a quadratic surd this is the true bound on all
/// partial quotients once the probe covers the preperiod and one period.
inline std::int64_t bounded_terms_constant(const AlphaSpec& alpha, std::size_t probe) {
  if (probe < 1) fail(errc::kInvalidArgument, "bounded_terms_constant: probe must be >= 1");
  auto terms = cf_terms(alpha, probe + 1);
  return *std::max_element(terms.begin() + 1, terms.end());
}

struct Convergent {
  std::size_t index = 0;
  BigInt p;
  BigInt q;
};

/// Convergents p_n/q_n via p_n = a_n p_{n-1} + p_{n-2}, q_n = a_n q_{n-1} + q_{n-2}.
class ConvergentStream {
 public:
  explicit ConvergentStream(const AlphaSpec& alpha) : cf_(alpha) {}

  Convergent next() {
    std::int64_t a = cf_.next();
    last_term_ = a;
    BigInt p = a * p1_ + p2_;
    BigInt q = a * q1_ + q2_;
    p2_ = std::move(p1_);
    q2_ = std::move(q1_);
    p1_ = p;
    q1_ = q;
    return Convergent{index_++, std::move(p), std::move(q)};
  }

  std::int64_t last_term() const { return last_term_; }

 private:
  CfStream cf_;
  BigInt p1_ = 1, p2_ = 0, q1_ = 0, q2_ = 1;
  std::size_t index_ = 0;
  std::int64_t last_term_ = 0;
};

inline std::vector<Convergent> convergents(const AlphaSpec& alpha, std::size_t count) {
  if (count < 2) fail(errc::kInvalidArgument, "convergents: count must be >= 2");
  ConvergentStream stream(alpha);
  std::vector<Convergent> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(stream.next());
  return out;
}

/// True iff every point strictly between the fractions `e1` and `e2` lies within
/// 1/q^2 of p/q; checked by cross-multiplication at both endpoints.
inline bool bracket_within_dio(const BigInt& p, const BigInt& q, const Convergent& e1, const Convergent& e2) {
  auto inside = [&](const Convergent& e) { return detail::abs(e.p * q - p * e.q) * q <= e.q; };
  return inside(e1) && inside(e2);
}

/// Exact check of |alpha - p/q| < 1/q^2 for a convergent p/q, bracketing alpha
/// between the two next convergents (alpha lies strictly between any two
/// consecutive convergents).
inline bool convergent_satisfies_dio(const Convergent& c, const Convergent& next1, const Convergent& next2) {
  return bracket_within_dio(c.p, c.q, next1, next2);
}

struct ConvergentAudit {
  std::size_t checked = 0;
  std::size_t gcd_failures = 0;
  std::size_t recurrence_failures = 0;
  std::size_t dio_failures = 0;
  std::size_t growth_failures = 0;
  std::int64_t max_term = 0;

  bool ok() const { return gcd_failures + recurrence_failures + dio_failures + growth_failures == 0; }
};

/// Verifies the first `count` convergents: coprimality, the recurrence,
/// |alpha - p/q| < 1/q^2 and q_{n-1} < q_n <= (M+1) q_{n-1} for n >= 2.
inline ConvergentAudit audit_convergents(const AlphaSpec& alpha, std::size_t count) {
  auto terms = cf_terms(alpha, count + 2);
  auto conv = convergents(alpha, count + 2);
  ConvergentAudit audit;
  audit.max_term = *std::max_element(terms.begin() + 1, terms.end());
  for (std::size_t n = 0; n < count; ++n) {
    const auto& c = conv[n];
    ++audit.checked;
    if (detail::gcd(c.p, c.q) != 1) ++audit.gcd_failures;
    BigInt pm1 = n >= 1 ? conv[n - 1].p : BigInt(1);
    BigInt qm1 = n >= 1 ? conv[n - 1].q : BigInt(0);
    BigInt pm2 = n >= 2 ? conv[n - 2].p : (n == 1 ? BigInt(1) : BigInt(0));
    BigInt qm2 = n >= 2 ? conv[n - 2].q : (n == 1 ? BigInt(0) : BigInt(1));
    if (c.p != terms[n] * pm1 + pm2 || c.q != terms[n] * qm1 + qm2) ++audit.recurrence_failures;
    if (!convergent_satisfies_dio(c, conv[n + 1], conv[n + 2])) ++audit.dio_failures;
    if (n >= 2 && !(conv[n - 1].q < c.q && c.q <= (audit.max_term + 1) * conv[n - 1].q)) ++audit.growth_failures;
  }
  return audit;
}

/// If some integer a with gcd(a, q) = 1 satisfies |alpha - a/q| < 1/q^2,
/// returns it. Decided exactly by narrowing a convergent bracket around alpha.
inline std::optional<BigInt> satisfies_dio(const AlphaSpec& alpha, const BigInt& q, std::size_t depth_cap = 4000) {
  if (q < 1) fail(errc::kInvalidArgument, "satisfies_dio: q must be positive");
  ConvergentStream stream(alpha);
  Convergent prev = stream.next();
  std::optional<BigInt> floor_q_alpha;
  // per candidate: 0 undecided, 1 yes, -1 no
  int verdict[2] = {0, 0};
  for (std::size_t depth = 0; depth < depth_cap; ++depth) {
    Convergent cur = stream.next();
    if (!floor_q_alpha) {
      BigInt f1 = detail::floor_div(q * prev.p, prev.q);
      BigInt f2 = detail::floor_div(q * cur.p, cur.q);
      if (f1 == f2) floor_q_alpha = f1;
    }
    if (floor_q_alpha) {
      for (int i = 0; i < 2; ++i) {
        if (verdict[i] != 0) continue;
        BigInt a = *floor_q_alpha + i;
        if (detail::gcd(a, q) != 1) {
          verdict[i] = -1;
          continue;
        }
        if (bracket_within_dio(a, q, prev, cur)) {
          verdict[i] = 1;
          continue;
        }
        // side of each endpoint relative to [a/q - 1/q^2, a/q + 1/q^2]
        auto side = [&](const Convergent& e) {
          BigInt diff = (e.p * q - a * e.q) * q;  // q^2 e.q (e - a/q)
          if (diff > e.q) return 1;
          if (diff < -e.q) return -1;
          return 0;
        };
        int s1 = side(prev), s2 = side(cur);
        if (s1 != 0 && s1 == s2) verdict[i] = -1;
      }
      if (verdict[0] == 1) return *floor_q_alpha;
      if (verdict[1] == 1) return *floor_q_alpha + 1;
      if (verdict[0] == -1 && verdict[1] == -1) return std::nullopt;
    }
    prev = std::move(cur);
  }
  fail(errc::kDepthCap, "satisfies_dio: undecided within depth cap");
}

/// Outcome of a denominator-window search. Exactly one of `found` or the
/// straddling pair is meaningful; `below` may be absent when lo <= 1.
struct WindowSearch {
  std::optional<Convergent> found;
  std::optional<Convergent> below;
  std::optional<Convergent> above;

  bool ok() const { return found.has_value(); }
};

/// First convergent with lo <= q <= hi, or the two convergents straddling the window.
inline WindowSearch find_q_in_window(const AlphaSpec& alpha, double lo, double hi, std::size_t depth_cap = 20000) {
  if (!(lo >= 1.0 && lo <= hi) || !std::isfinite(hi))
    fail(errc::kInvalidArgument, "find_q_in_window: need 1 <= lo <= hi < inf");
  const BigInt lo_int(std::ceil(lo));
  const BigInt hi_int(std::floor(hi));
  ConvergentStream stream(alpha);
  WindowSearch result;
  for (std::size_t i = 0; i < depth_cap; ++i) {
    Convergent c = stream.next();
    if (c.q >= lo_int && c.q <= hi_int) {
      result.found = std::move(c);
      result.below.reset();
      return result;
    }
    if (c.q < lo_int) {
      result.below = std::move(c);
    } else {
      result.above = std::move(c);
      return result;
    }
  }
  fail(errc::kDepthCap, "find_q_in_window: depth cap reached");
}

struct CertifiedDistance {
  double value;  // ||n P/Q||, in [0, 1/2]
  double error;  // bound on | ||n alpha|| - value |
};

enum class Comparison { Below, NotBelow, Boundary };

/// ||n alpha|| through a deep convergent P/Q: the residue nP mod Q is exact,
/// and | ||n alpha|| - ||n P/Q|| | < n/Q^2 <= n_max/Q^2.
class AngleOracle {
 public:
  static constexpr double kDefaultErrTarget = 0x1p-40;
  static constexpr std::size_t kDefaultDepthCap = 512;
  /// Final division into double adds at most one ulp of [0, 1).
  static constexpr double kDivisionSlack = 0x1p-52;

  static AngleOracle build(const AlphaSpec& alpha, std::uint64_t n_max, double err_target = kDefaultErrTarget,
                           std::size_t depth_cap = kDefaultDepthCap) {
    if (n_max < 1) fail(errc::kInvalidArgument, "AngleOracle: n_max must be positive");
    if (!(err_target > 0.0 && err_target < 0.25))
      fail(errc::kInvalidArgument, "AngleOracle: err_target must lie in (0, 1/4)");
    ConvergentStream stream(alpha);
    for (std::size_t i = 0; i < depth_cap; ++i) {
      Convergent c = stream.next();
      if (c.index == 0) continue;
      if (c.q >= kMaxModulus) break;
      if (rounded_bound(n_max, static_cast<std::uint64_t>(c.q)) <= err_target) return AngleOracle(std::move(c), n_max);
    }
    fail(errc::kDepthCap, "AngleOracle: requested precision needs a convergent beyond the depth cap");
  }

  /// Oracle anchored at convergent number `index` (for cross-checks).
  static AngleOracle from_anchor(const AlphaSpec& alpha, std::size_t index, std::uint64_t n_max) {
    if (index < 1) fail(errc::kInvalidArgument, "AngleOracle: anchor index must be >= 1");
    ConvergentStream stream(alpha);
    Convergent c;
    for (std::size_t i = 0; i <= index; ++i) c = stream.next();
    if (c.q >= kMaxModulus) fail(errc::kDepthCap, "AngleOracle: anchor denominator exceeds 2^62");
    return AngleOracle(std::move(c), n_max);
  }

  const Convergent& anchor() const { return anchor_; }
  std::uint64_t modulus() const { return q_; }
  std::uint64_t n_max() const { return n_max_; }
  double error_bound() const { return ebound_; }

  /// n P mod Q, exact.
  std::uint64_t residue(std::uint64_t n) const {
    check_range(n);
    return static_cast<std::uint64_t>((static_cast<u128>(n) * r_) % q_);
  }

  CertifiedDistance dist_nearest_int(std::uint64_t n) const {
    if (n < 1) fail(errc::kOutOfRange, "dist_nearest_int: n must be positive");
    const std::uint64_t t = residue(n);
    const std::uint64_t d = std::min(t, q_ - t);
    return {static_cast<double>(static_cast<long double>(d) / static_cast<long double>(q_)), ebound_};
  }

  /// Approximation of {k alpha} in [0, 1) for signed k with |k| <= n_max.
  double frac(std::int64_t k) const {
    const std::uint64_t mag = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
    if (mag == 0) return 0.0;
    std::uint64_t t = residue(mag);
    if (k < 0 && t != 0) t = q_ - t;
    return static_cast<double>(static_cast<long double>(t) / static_cast<long double>(q_));
  }

  /// Decides ||n alpha|| < delta on the certified interval.
  Comparison compare_below(std::uint64_t n, double delta) const {
    const auto d = dist_nearest_int(n);
    const double margin = d.error + kDivisionSlack;
    if (d.value + margin < delta) return Comparison::Below;
    if (d.value - margin >= delta) return Comparison::NotBelow;
    return Comparison::Boundary;
  }

 private:
  static inline const BigInt kMaxModulus = BigInt(1) << 62;

  AngleOracle(Convergent anchor, std::uint64_t n_max) : anchor_(std::move(anchor)), n_max_(n_max) {
    q_ = static_cast<std::uint64_t>(anchor_.q);
    BigInt r = anchor_.p % anchor_.q;
    if (r < 0) r += anchor_.q;
    r_ = static_cast<std::uint64_t>(r);
    ebound_ = rounded_bound(n_max_, q_);
  }

  // n_max / Q^2 rounded upward.
  static double rounded_bound(std::uint64_t n_max, std::uint64_t q) {
    const double qd = static_cast<double>(q);
    return std::nextafter(static_cast<double>(n_max) / (qd * qd), 1.0);
  }

  void check_range(std::uint64_t n) const {
    if (n > n_max_)
      fail(errc::kOutOfRange, "angle oracle covers n <= " + std::to_string(n_max_) + ", asked for " + std::to_string(n));
  }

  Convergent anchor_;
  std::uint64_t q_ = 1;
  std::uint64_t r_ = 0;
  std::uint64_t n_max_ = 1;
  double ebound_ = 0.0;
};

}  // namespace dioprime
