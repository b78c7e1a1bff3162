#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "binspec/errors.hpp"
#include "binspec/indicator.hpp"

namespace binspec {

/// Per-bin truncation budget eps / (2 (M+1)).
inline double per_bin_budget(double eta, double epsilon) {
  return epsilon / (2.0 * (max_bin_index(eta) + 1));
}

/// Upper bound on sum_{|t|>T} |F_t| for the cos^2 indicator, from
/// |F_t| <= (1/2pi) pi^2 / (t^3 eta^2 - t pi^2) and the integral test on both
/// tails: (1/2pi) log(eta^2 T^2 / (eta^2 T^2 - pi^2)). Needs T > pi/eta.
inline double cos2_analytic_tail(double eta, double T) {
  const double x = eta * T;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  detail::require(x > std::numbers::pi, "analytic cos2 tail needs T > pi/eta");
  return -std::log1p(-pi2 / (x * x)) / (2.0 * std::numbers::pi);
}

/// Certified tails of the cos^2 coefficients: exact |F_t| summed for
/// T < |t| <= window, plus the analytic remainder beyond the window.
class Cos2TailTable {
 public:
  Cos2TailTable(double eta, long window) : eta_(eta), window_(window), suffix_(static_cast<std::size_t>(window + 2)) {
    detail::require(window >= 1, "summation window must be positive");
    const auto ind = IndicatorFunction::cos2(eta);
    const double remainder =
        eta * static_cast<double>(window) > std::numbers::pi ? cos2_analytic_tail(eta, static_cast<double>(window))
                                                             : HUGE_VAL;
    // suffix_[T] = sum_{T < |t| <= window} |F_t| + remainder
    suffix_[static_cast<std::size_t>(window)] = remainder;
    suffix_[static_cast<std::size_t>(window + 1)] = remainder;
    for (long t = window; t >= 1; --t)
      suffix_[static_cast<std::size_t>(t - 1)] = suffix_[static_cast<std::size_t>(t)] + 2.0 * std::abs(ind.fourier_coeff(t));
  }

  [[nodiscard]] double eta() const { return eta_; }
  [[nodiscard]] long window() const { return window_; }

  /// Certified upper bound on sum_{|t|>T} |F_t|.
  [[nodiscard]] double tail(long T) const {
    detail::require(T >= 0, "T must be non-negative");
    if (T <= window_) return suffix_[static_cast<std::size_t>(T)];
    return cos2_analytic_tail(eta_, static_cast<double>(T));
  }

  /// Smallest integer T whose certified tail is <= target; tails are
  /// non-increasing in T, so this is a binary search.
  [[nodiscard]] long smallest_certified(double target) const {
    long lo = 0;
    long hi = window_;
    if (tail(hi) > target) return -1;
    if (tail(lo) <= target) return 0;
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      if (tail(mid) <= target) hi = mid; else lo = mid;
    }
    return hi;
  }

 private:
  double eta_;
  long window_;
  std::vector<double> suffix_;
};

inline constexpr long kDefaultTailWindow = 100000;

/// Summation window used for the numeric bound: at least 10^5 coefficients,
/// extended to 4 * ceil(min_time_cos2) so the exact sum always covers the
/// analytic truncation time.
inline long numeric_window(double eta, double epsilon, long minimum = kDefaultTailWindow) {
  return std::max(minimum, 4 * static_cast<long>(std::ceil(min_time_cos2(eta, epsilon))));
}

/// Smallest integer T for which the cos^2 tail, summed exactly over the
/// window and bounded analytically beyond it, is <= eps / (2 (M+1)).
inline long numeric_min_time_cos2(double eta, double epsilon, long window = 0) {
  if (window <= 0) window = numeric_window(eta, epsilon);
  const Cos2TailTable table(eta, window);
  const long T = table.smallest_certified(per_bin_budget(eta, epsilon));
  if (T < 0) throw NumericalError("numeric truncation time exceeds the summation window");
  return T;
}

}  // namespace binspec
