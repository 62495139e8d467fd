#pragma once

// Small numeric helpers shared by the rest of the library: compensated
// summation, sin/cos of pi-scaled arguments, exact integer roots.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace dioprime {

using u128 = unsigned __int128;
using i128 = __int128;

/// Kahan-Babuska (Neumaier) compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexKahanSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  ComplexKahanSum& operator+=(std::complex<double> z) {
    add(z);
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

/// x reduced to [-1, 1) modulo 2.
inline double reduce_mod2(double x) {
  double r = std::fmod(x, 2.0);
  if (r >= 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  return r;
}

/// sin(pi x), exact at integers and half-integers.
inline double sinpi(double x) {
  double r = reduce_mod2(x);
  if (r == 0.0 || r == -1.0) return 0.0;
  // fold into [-1/2, 1/2] using sin(pi (1 - r)) = sin(pi r)
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

/// cos(pi x), exact at integers and half-integers.
inline double cospi(double x) { return sinpi(x + 0.5); }

/// e(t) = exp(2 pi i t).
inline std::complex<double> unit_phase(double t) { return {cospi(2.0 * t), sinpi(2.0 * t)}; }

/// Fractional part in [0, 1).
inline double frac(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;
  return f;
}

/// {k x} computed with an error-free product so that large |k| does not
/// lose the low bits of k * x. Requires |k| < 2^53.
inline double mul_frac(std::int64_t k, double x) {
  const double kd = static_cast<double>(k);
  const double hi = kd * x;
  const double lo = std::fma(kd, x, -hi);
  double f = (hi - std::floor(hi)) + lo;
  f -= std::floor(f);
  if (f >= 1.0) f = 0.0;
  return f;
}

/// (k x) mod 2, same error-free treatment as mul_frac.
inline double mul_mod2(std::int64_t k, double x) {
  const double kd = static_cast<double>(k);
  const double hi = kd * x;
  const double lo = std::fma(kd, x, -hi);
  double f = (hi - 2.0 * std::floor(hi / 2.0)) + lo;
  f -= 2.0 * std::floor(f / 2.0);
  if (f >= 2.0) f = 0.0;
  return f;
}

/// floor(a / b) for b != 0.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Largest r with r*r <= n.
inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Largest r with r^3 <= n.
inline std::uint64_t icbrt(u128 n) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Number of integers n with a < n <= b for real a, b.
inline std::int64_t count_in_half_open(double a, double b) {
  if (b <= a) return 0;
  return static_cast<std::int64_t>(std::floor(b)) - static_cast<std::int64_t>(std::floor(a));
}

}  // namespace dioprime
