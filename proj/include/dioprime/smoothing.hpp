#pragma once

// The Gaussian periodization
//   F(x) = sum_n exp(-pi (x - n)^2 / delta^2)
// and its truncated Fourier series
//   F(x) = delta + delta * sum_{0 < |l| <= L} exp(-pi delta^2 l^2) e(l x) + tail.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "dioprime/errors.hpp"
#include "dioprime/numeric.hpp"

namespace dioprime {

/// Shifts kept by f_direct so the dropped Gaussian tail is below 1e-30.
inline int default_direct_terms(double delta) {
  return std::max(3, static_cast<int>(std::ceil(delta * std::sqrt(30.0 / std::numbers::pi))));
}

/// F(x) by direct summation over shifts |n - round(x)| <= terms.
inline double f_direct(double x, double delta, int terms = 0) {
  if (!(delta > 0.0 && delta <= 0.5)) fail(errc::kInvalidArgument, "f_direct: delta must lie in (0, 1/2]");
  if (terms <= 0) terms = default_direct_terms(delta);
  // Only the offset from the nearest integer matters; reducing first keeps
  // the result exactly 1-periodic.
  const double r = x - std::nearbyint(x);
  const double scale = std::numbers::pi / (delta * delta);
  // smallest terms first
  double sum = 0.0;
  for (int j = terms; j >= 1; --j) {
    const double a = r - j, b = r + j;
    sum += std::exp(-scale * a * a) + std::exp(-scale * b * b);
  }
  return sum + std::exp(-scale * r * r);
}

struct TruncationBound {
  double value = 0.0;      // 0 when it underflows
  double log_value = 0.0;  // natural log of the bound, always finite
  bool underflow = false;
};

/// Certified sup_x |F(x) - f_fourier(x)| for a kernel of length L:
///   2 delta exp(-pi delta^2 L^2) / (1 - exp(-pi delta^2 (2L + 1))).
inline TruncationBound truncation_bound(double delta, std::int64_t L) {
  if (L < 1) fail(errc::kInvalidArgument, "truncation_bound: L must be >= 1");
  if (!(delta > 0.0 && delta <= 0.5)) fail(errc::kInvalidArgument, "truncation_bound: delta must lie in (0, 1/2]");
  const double d2 = delta * delta;
  const double Ld = static_cast<double>(L);
  const double ratio_exponent = -std::numbers::pi * d2 * (2.0 * Ld + 1.0);
  TruncationBound tb;
  tb.log_value = std::log(2.0 * delta) - std::numbers::pi * d2 * Ld * Ld - std::log(-std::expm1(ratio_exponent));
  tb.value = std::exp(tb.log_value);
  tb.underflow = tb.value == 0.0 || !std::isnormal(tb.value);
  if (tb.underflow) tb.value = 0.0;
  return tb;
}

/// Fourier weights c(l) = exp(-pi delta^2 l^2), 0 < l <= L.
class SmoothingKernel {
 public:
  /// Angle-addition steps between exact re-seeds of the phase recurrence.
  static constexpr std::int64_t kRenormEvery = 1024;

  SmoothingKernel(double delta, std::int64_t L) : delta_(delta), L_(L) {
    if (!(delta > 0.0 && delta <= 0.5)) fail(errc::kInvalidArgument, "SmoothingKernel: delta must lie in (0, 1/2]");
    if (L < 0) fail(errc::kInvalidArgument, "SmoothingKernel: L must be >= 0");
    coeffs_.resize(static_cast<std::size_t>(L) + 1);
    coeffs_[0] = 1.0;
    for (std::int64_t l = 1; l <= L; ++l) {
      const double ld = static_cast<double>(l);
      coeffs_[l] = std::exp(-std::numbers::pi * delta * delta * ld * ld);
    }
  }

  /// L = ceil(X^eps / delta).
  static SmoothingKernel for_experiment(double delta, double X, double eps) {
    return SmoothingKernel(delta, experiment_length(delta, X, eps));
  }

  static std::int64_t experiment_length(double delta, double X, double eps) {
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::pow(X, eps) / delta)));
  }

  double delta() const { return delta_; }
  std::int64_t length() const { return L_; }
  double coefficient(std::int64_t l) const {
    if (l < 0) l = -l;
    return l <= L_ ? coeffs_[static_cast<std::size_t>(l)] : 0.0;
  }

  /// sum_{0 < l <= L} c(l) e(l x), phases by angle addition.
  std::complex<double> one_sided(double x) const {
    const double t = frac(x);
    const std::complex<double> step = unit_phase(t);
    std::complex<double> phase = step;
    ComplexKahanSum acc;
    for (std::int64_t l = 1; l <= L_; ++l) {
      if (l % kRenormEvery == 0) phase = unit_phase(mul_frac(l, t));
      acc += coeffs_[l] * phase;
      phase *= step;
    }
    return acc.value();
  }

  /// delta + 2 delta sum_{l=1}^{L} c(l) cos(2 pi l x).
  double fourier(double x) const { return delta_ + 2.0 * delta_ * one_sided(x).real(); }

  TruncationBound tail_bound() const { return truncation_bound(delta_, std::max<std::int64_t>(L_, 1)); }

 private:
  double delta_;
  std::int64_t L_;
  std::vector<double> coeffs_;
};

inline double f_fourier(double x, const SmoothingKernel& kernel) { return kernel.fourier(x); }

}  // namespace dioprime
