#pragma once

#include <cmath>
#include <numbers>

#include "binspec/errors.hpp"

namespace binspec {

/// Lower real branch W_{-1}: the solution w <= -1 of w e^w = y for
/// y in [-1/e, 0).
///
/// Halley iteration kept inside a shrinking bracket [lo, -1]; f(w) = w e^w - y
/// is decreasing on (-inf, -1], positive at -inf and non-positive at -1.
inline double product_log_m1(double y) {
  constexpr double inv_e = 1.0 / std::numbers::e;
  detail::require(std::isfinite(y) && y >= -inv_e - 1e-16 && y < 0.0,
                  "product log branch -1 needs y in [-1/e, 0)");
  const double branch_distance = 1.0 + std::numbers::e * y;
  if (branch_distance <= 0.0) return -1.0;

  double w = 0.0;
  if (branch_distance < 0.1) {
    // Series about the branch point.
    const double p = -std::sqrt(2.0 * branch_distance);
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    const double l1 = std::log(-y);
    w = l1 - std::log(-l1);
  }

  auto f = [y](double x) { return x * std::exp(x) - y; };
  double hi = -1.0;
  double lo = std::min(w, -1.0) - 1.0;
  while (f(lo) <= 0.0) lo = 2.0 * lo - 1.0;
  if (!(w > lo && w < hi)) w = 0.5 * (lo + hi);

  for (int iter = 0; iter < 100; ++iter) {
    const double ew = std::exp(w);
    const double fw = w * ew - y;
    if (fw == 0.0) return w;
    if (fw > 0.0) lo = w; else hi = w;
    const double d1 = ew * (w + 1.0);
    const double d2 = ew * (w + 2.0);
    double next = w;
    if (d1 != 0.0) next = w - fw / (d1 - 0.5 * fw * d2 / d1);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= 1e-16 * std::abs(w)) return next;
    w = next;
    if (hi - lo <= 1e-16 * std::abs(w)) return w;
  }
  return w;
}

}  // namespace binspec
