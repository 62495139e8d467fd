#pragma once

// Segmented prime sieving over short windows (lo, hi], von Mangoldt sums,
// and small multiplicative tables (mu, tau, Lambda) from a linear sieve.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dioprime/alpha_engine.hpp"
#include "dioprime/errors.hpp"
#include "dioprime/numeric.hpp"

namespace dioprime {

/// n = p^k with k >= 1.
struct PrimePower {
  std::uint64_t n = 0;
  std::uint64_t p = 0;
  unsigned k = 0;

  double log_p() const { return std::log(static_cast<double>(p)); }
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct SieveOptions {
  std::uint64_t ceiling = std::uint64_t{1} << 48;
  std::uint64_t segment_size = std::uint64_t{1} << 20;
};

/// Plain Eratosthenes up to `limit` inclusive.
inline std::vector<std::uint32_t> base_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

/// Primality flags and prime-power annotations for the window (lo, hi].
class IntervalSieve {
 public:
  IntervalSieve(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint8_t> flags,
                std::vector<PrimePower> higher_powers)
      : lo_(lo), hi_(hi), flags_(std::move(flags)), higher_powers_(std::move(higher_powers)) {}

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }

  bool is_prime(std::uint64_t n) const {
    check(n);
    return flags_[n - lo_ - 1] != 0;
  }

  /// (p, k) if n = p^k, k >= 1.
  std::optional<PrimePower> prime_power(std::uint64_t n) const {
    if (is_prime(n)) return PrimePower{n, n, 1};
    auto it = std::lower_bound(higher_powers_.begin(), higher_powers_.end(), n,
                               [](const PrimePower& pp, std::uint64_t v) { return pp.n < v; });
    if (it != higher_powers_.end() && it->n == n) return *it;
    return std::nullopt;
  }

  double mangoldt(std::uint64_t n) const {
    auto pp = prime_power(n);
    return pp ? pp->log_p() : 0.0;
  }

  /// Prime powers with k >= 2, sorted by n.
  const std::vector<PrimePower>& higher_powers() const { return higher_powers_; }

  template <class F>
  void for_each_prime(F&& f) const {
    for (std::size_t i = 0; i < flags_.size(); ++i)
      if (flags_[i]) f(lo_ + 1 + i);
  }

  /// Every prime power (k >= 1) in increasing order of n.
  template <class F>
  void for_each_prime_power(F&& f) const {
    auto hp = higher_powers_.begin();
    for (std::size_t i = 0; i < flags_.size(); ++i) {
      const std::uint64_t n = lo_ + 1 + i;
      if (flags_[i]) {
        f(PrimePower{n, n, 1});
      } else if (hp != higher_powers_.end() && hp->n == n) {
        f(*hp);
        ++hp;
      }
    }
  }

  std::size_t prime_count() const {
    return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
  }

 private:
  void check(std::uint64_t n) const {
    if (n <= lo_ || n > hi_) fail(errc::kOutOfRange, "n outside sieved window");
  }

  std::uint64_t lo_, hi_;
  std::vector<std::uint8_t> flags_;
  std::vector<PrimePower> higher_powers_;
};

/// Sieves (lo, hi] segment by segment with the primes up to sqrt(hi).
inline IntervalSieve sieve_interval(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts = {}) {
  if (lo < 2 || lo >= hi) fail(errc::kInvalidArgument, "sieve_interval: need 2 <= lo < hi");
  if (hi > opts.ceiling) fail(errc::kCeiling, "sieve_interval: hi exceeds the configured ceiling");
  const std::uint64_t root = isqrt(hi);
  const auto primes = base_primes(root);
  const std::uint64_t width = hi - lo;
  std::vector<std::uint8_t> flags(width, 1);

  const std::uint64_t seg = std::max<std::uint64_t>(opts.segment_size, 1);
  for (std::uint64_t seg_lo = lo + 1; seg_lo <= hi; seg_lo += seg) {
    const std::uint64_t seg_hi = std::min(hi, seg_lo + seg - 1);
    for (std::uint32_t p : primes) {
      const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > seg_hi) break;
      std::uint64_t start = std::max(pp, (seg_lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= seg_hi; m += p) flags[m - lo - 1] = 0;
    }
  }

  std::vector<PrimePower> powers;
  for (std::uint32_t p : primes) {
    std::uint64_t v = static_cast<std::uint64_t>(p) * p;
    unsigned k = 2;
    while (v <= hi) {
      if (v > lo) powers.push_back({v, p, k});
      if (v > hi / p) break;
      v *= p;
      ++k;
    }
  }
  std::sort(powers.begin(), powers.end(), [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
  return IntervalSieve(lo, hi, std::move(flags), std::move(powers));
}

/// Sum of Lambda(n) over the sieved window, compensated.
inline double mangoldt_sum(const IntervalSieve& sieve) {
  KahanSum acc;
  sieve.for_each_prime_power([&](const PrimePower& pp) { acc += pp.log_p(); });
  return acc.value();
}

/// psi(X) - psi(X - Y).
inline double mangoldt_sum_interval(std::uint64_t X, std::uint64_t Y, const SieveOptions& opts = {}) {
  if (Y < 2 || 2 * Y > X) fail(errc::kInvalidArgument, "mangoldt_sum_interval: need 2 <= Y <= X/2");
  return mangoldt_sum(sieve_interval(X - Y, X, opts));
}

/// mu, tau and Lambda (as p^k) for 1 <= n <= limit, filled by a linear sieve.
class SmallTables {
 public:
  explicit SmallTables(std::uint64_t limit) : limit_(limit) {
    if (limit < 1) fail(errc::kInvalidArgument, "small_tables: N must be >= 1");
    const std::size_t size = limit + 1;
    mu_.assign(size, 0);
    tau_.assign(size, 0);
    spf_.assign(size, 0);
    lam_p_.assign(size, 0);
    lam_k_.assign(size, 0);
    std::vector<std::uint8_t> spf_exp(size, 0);  // exponent of spf in n
    std::vector<std::uint32_t> primes;
    mu_[1] = 1;
    tau_[1] = 1;
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = static_cast<std::uint32_t>(i);
        primes.push_back(static_cast<std::uint32_t>(i));
        mu_[i] = -1;
        tau_[i] = 2;
        spf_exp[i] = 1;
        lam_p_[i] = static_cast<std::uint32_t>(i);
        lam_k_[i] = 1;
      }
      for (std::uint32_t p : primes) {
        const std::uint64_t m = i * p;
        if (p > spf_[i] || m > limit) break;
        spf_[m] = p;
        if (p == spf_[i]) {
          mu_[m] = 0;
          spf_exp[m] = static_cast<std::uint8_t>(spf_exp[i] + 1);
          tau_[m] = tau_[i] / (spf_exp[i] + 1u) * (spf_exp[m] + 1u);
          if (lam_p_[i] == p) {
            lam_p_[m] = p;
            lam_k_[m] = static_cast<std::uint8_t>(lam_k_[i] + 1);
          }
        } else {
          mu_[m] = static_cast<std::int8_t>(-mu_[i]);
          spf_exp[m] = 1;
          tau_[m] = tau_[i] * 2;
        }
      }
    }
  }

  std::uint64_t limit() const { return limit_; }
  int mu(std::uint64_t n) const { return mu_[at(n)]; }
  std::uint32_t tau(std::uint64_t n) const { return tau_[at(n)]; }
  std::uint32_t smallest_prime_factor(std::uint64_t n) const { return spf_[at(n)]; }

  std::optional<PrimePower> prime_power(std::uint64_t n) const {
    if (lam_p_[at(n)] == 0) return std::nullopt;
    return PrimePower{n, lam_p_[n], lam_k_[n]};
  }

  /// Lambda(n), log taken lazily.
  double mangoldt(std::uint64_t n) const {
    const auto p = lam_p_[at(n)];
    return p == 0 ? 0.0 : std::log(static_cast<double>(p));
  }

  /// Positive divisors of n in increasing order.
  std::vector<std::uint64_t> divisors(std::uint64_t n) const {
    std::vector<std::uint64_t> divs{1};
    std::uint64_t m = n;
    at(n);
    while (m > 1) {
      const std::uint64_t p = spf_[m];
      unsigned e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      const std::size_t base = divs.size();
      std::uint64_t pk = 1;
      for (unsigned j = 1; j <= e; ++j) {
        pk *= p;
        for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
      }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
  }

 private:
  std::size_t at(std::uint64_t n) const {
    if (n < 1 || n > limit_) fail(errc::kOutOfRange, "small tables cover 1..N only");
    return static_cast<std::size_t>(n);
  }

  std::uint64_t limit_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint32_t> tau_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> lam_p_;
  std::vector<std::uint8_t> lam_k_;
};

inline SmallTables small_tables(std::uint64_t N) { return SmallTables(N); }

/// Certified count of #{n : ||n alpha|| < delta}; undecidable samples are
/// reported separately instead of being tie-broken.
struct AngleCount {
  std::uint64_t count = 0;
  std::uint64_t flagged_boundary = 0;
  std::uint64_t examined = 0;
  std::vector<std::uint64_t> sample;  // first members found, ascending
};

inline AngleCount primes_with_small_angle(const IntervalSieve& sieve, const AngleOracle& oracle, double delta,
                                          std::size_t sample_cap = 32) {
  if (!(delta > 0.0 && delta <= 0.5)) fail(errc::kInvalidArgument, "primes_with_small_angle: delta must lie in (0, 1/2]");
  if (oracle.n_max() < sieve.hi()) fail(errc::kOutOfRange, "primes_with_small_angle: oracle does not cover the window");
  AngleCount out;
  sieve.for_each_prime([&](std::uint64_t p) {
    ++out.examined;
    switch (oracle.compare_below(p, delta)) {
      case Comparison::Below:
        ++out.count;
        if (out.sample.size() < sample_cap) out.sample.push_back(p);
        break;
      case Comparison::Boundary:
        ++out.flagged_boundary;
        break;
      case Comparison::NotBelow:
        break;
    }
  });
  return out;
}

/// Same count over every integer in (lo, hi]; the equidistribution baseline.
inline AngleCount integers_with_small_angle(std::uint64_t lo, std::uint64_t hi, const AngleOracle& oracle,
                                            double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) fail(errc::kInvalidArgument, "integers_with_small_angle: delta must lie in (0, 1/2]");
  AngleCount out;
  for (std::uint64_t n = lo + 1; n <= hi; ++n) {
    ++out.examined;
    auto c = oracle.compare_below(n, delta);
    if (c == Comparison::Below) ++out.count;
    if (c == Comparison::Boundary) ++out.flagged_boundary;
  }
  return out;
}

}  // namespace dioprime
