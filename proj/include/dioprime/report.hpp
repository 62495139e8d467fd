#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace dioprime {

/// Result of one experiment or one bilinear-sum evaluation.
struct SumReport {
  double value = 0.0;
  std::optional<double> main_term;
  std::optional<double> ratio;  // value / main_term
  std::uint64_t q_used = 0;
  std::pair<double, double> q_window{0.0, 0.0};
  bool q_in_window = false;
  /// -log(error ratio) / log X; stands in for the unspecified saving exponent.
  std::optional<double> measured_exponent;
  std::map<std::string, double> bound_terms;
  std::vector<std::string> flags;

  void set_main_term(double main) {
    main_term = main;
    if (main != 0.0)
      ratio = value / main;
    else
      ratio.reset();
  }

  void set_measured_exponent(double error_ratio, double X) {
    if (error_ratio > 0.0 && std::isfinite(error_ratio) && X > 1.0)
      measured_exponent = -std::log(error_ratio) / std::log(X);
    else
      measured_exponent.reset();
  }

  void flag(std::string f) { flags.push_back(std::move(f)); }
};

namespace detail {
inline nlohmann::json optional_number(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}
inline nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}
}  // namespace detail

inline nlohmann::json to_json(const SumReport& r) {
  nlohmann::json bounds = nlohmann::json::object();
  for (const auto& [k, v] : r.bound_terms) bounds[k] = detail::finite_or_null(v);
  return {
      {"value", detail::finite_or_null(r.value)},
      {"main_term", detail::optional_number(r.main_term)},
      {"ratio", detail::optional_number(r.ratio)},
      {"q_used", r.q_used},
      {"q_window", {r.q_window.first, r.q_window.second}},
      {"q_in_window", r.q_in_window},
      {"measured_exponent", detail::optional_number(r.measured_exponent)},
      {"bound_terms", bounds},
      {"flags", r.flags},
  };
}

}  // namespace dioprime
