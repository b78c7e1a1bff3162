#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "binspec/errors.hpp"
#include "binspec/product_log.hpp"

namespace binspec {

enum class IndicatorKind { somma, cos2 };

inline std::string to_string(IndicatorKind kind) { return kind == IndicatorKind::somma ? "somma" : "cos2"; }

inline IndicatorKind indicator_kind_from_string(const std::string& name) {
  if (name == "somma") return IndicatorKind::somma;
  if (name == "cos2") return IndicatorKind::cos2;
  throw ValidationError("unknown indicator kind '" + name + "'");
}

/// Largest bin index M = floor(1/eta); bins are centred at w_j = j*eta - 1/2.
inline int max_bin_index(double eta) {
  detail::require(eta > 0.0 && eta <= 1.0, "bin width must lie in (0, 1]");
  return static_cast<int>(std::floor(1.0 / eta + 1e-9));
}

namespace detail {

inline constexpr double kQuadratureRelTolerance = 1e-13;
inline constexpr double kQuadratureAbsTolerance = 1e-15;
inline constexpr int kQuadratureDepth = 30;

/// Adaptive Gauss-Kronrod (61 points per panel). A panel is accepted once its
/// error estimate is below the largest of: its share of abs_tol, rel_tol times
/// its value, or the rounding floor 100 eps times its L1 norm. Boost's own
/// adaptive driver is relative-only, which stalls on integrals near zero.
template <class F>
double integrate(F f, double a, double b, double abs_error_limit = 1e-9,
                 double abs_tol = kQuadratureAbsTolerance) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr double kRoundingFloor = 100.0 * std::numeric_limits<double>::epsilon();
  double total_error = 0.0;
  const double width = b - a;
  auto panel = [&](auto&& self, double lo, double hi, int depth) -> double {
    // Map the panel onto [-1, 1] ourselves so value, error and L1 all carry
    // the same width factor.
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double error = 0.0;
    double l1 = 0.0;
    const double value = half * GK::integrate([&](double x) { return f(mid + half * x); }, -1.0, 1.0, 0, 0.0, &error, &l1);
    error *= half;
    l1 *= half;
    const double tol = std::max({abs_tol * (hi - lo) / width, kQuadratureRelTolerance * std::abs(value),
                                 kRoundingFloor * l1});
    if (depth == 0 || error <= tol) {
      total_error += error;
      return value;
    }
    return self(self, lo, mid, depth - 1) + self(self, mid, hi, depth - 1);
  };
  const double value = panel(panel, a, b, kQuadratureDepth);
  if (!(total_error <= abs_error_limit))
    throw NumericalError("quadrature did not converge (error " + std::to_string(total_error) + ")");
  return value;
}

/// Unnormalised bump exp(-1/(1-x^2)) on (-1, 1).
inline double bump(double x) {
  const double s = 1.0 - x * x;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

/// int_{-1}^{1} exp(-1/(1-x^2)) dx ~= 0.443994.
inline double bump_integral() {
  static const double value = 2.0 * integrate(bump, 0.0, 1.0, 1e-14);
  return value;
}

/// Normalised cumulative distribution of the bump on [-1, 1]. Uses
/// Phi(x) = 1 - Phi(-x) so that Phi(x) + Phi(-x) = 1 holds to rounding.
inline double bump_cdf(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x > 0.0) return 1.0 - bump_cdf(-x);
  return integrate(bump, -1.0, x, 1e-13) / bump_integral();
}

/// sinc(d) = sin(d)/d with the removable point at 0.
inline double sinc(double d) {
  if (std::abs(d) < 1e-4) return 1.0 - d * d / 6.0;
  return std::sin(d) / d;
}

}  // namespace detail

/// Normalisation of the bump kernel h(w) = a exp(-1/(1-(c w)^2)): with the
/// kernel supported on [-eta/2, eta/2] we have c = 2/eta, and `a` makes the
/// kernel integrate to one.
struct SommaNormalization {
  double a = 0.0;
  double c = 0.0;
};

/// Dimensionless normalisation 1 / int_{-1}^{1} exp(-1/(1-x^2)) dx ~= 2.2523.
inline double somma_unit_norm() { return 1.0 / detail::bump_integral(); }

inline SommaNormalization normalize_somma(double eta) {
  detail::require(eta > 0.0 && std::isfinite(eta), "bin width must be positive");
  const double c = 2.0 / eta;
  const double mass = detail::integrate([c](double w) { return detail::bump(c * w); }, -eta / 2.0, eta / 2.0,
                                        1e-12 * eta);
  return {1.0 / mass, c};
}

/// A bin shape f supported on [-eta, eta] with f(w) + f(w - eta) = 1 on
/// [0, eta]. Two kinds:
///   cos2:  f(w) = cos^2(pi w / (2 eta))
///   somma: f = rect_eta * h, rect of width eta convolved with the bump kernel
///          h supported on [-eta/2, eta/2].
class IndicatorFunction {
 public:
  static IndicatorFunction cos2(double eta) { return IndicatorFunction(IndicatorKind::cos2, eta, std::nullopt); }

  static IndicatorFunction somma(double eta, std::optional<double> alpha = std::nullopt) {
    return IndicatorFunction(IndicatorKind::somma, eta, alpha);
  }

  static IndicatorFunction make(IndicatorKind kind, double eta, std::optional<double> alpha = std::nullopt) {
    return IndicatorFunction(kind, eta, alpha);
  }

  [[nodiscard]] IndicatorKind kind() const { return kind_; }
  [[nodiscard]] double eta() const { return eta_; }
  /// Kernel normalisation (somma only; zero for cos2).
  [[nodiscard]] const SommaNormalization& somma_normalization() const { return norm_; }
  /// Decay-onset constant alpha for the somma kind, when known.
  [[nodiscard]] std::optional<double> somma_alpha() const { return alpha_; }

  /// f(w) in [0, 1].
  [[nodiscard]] double value(double w) const {
    if (!(std::abs(w) < eta_)) return 0.0;
    if (kind_ == IndicatorKind::cos2) {
      const double c = std::cos(std::numbers::pi * w / (2.0 * eta_));
      return c * c;
    }
    // f(w) = int_{w-eta/2}^{w+eta/2} h(s) ds = Phi(c(w + eta/2)) - Phi(c(w - eta/2))
    const double x = 2.0 * w / eta_;
    return detail::bump_cdf(x + 1.0) - detail::bump_cdf(x - 1.0);
  }

  /// Fourier-series coefficient F_t = (1/2pi) int f(w) e^{-itw} dw (real, even).
  [[nodiscard]] double fourier_coeff(long t) const {
    const double at = std::abs(static_cast<double>(t));
    if (at == 0.0) return eta_ / (2.0 * std::numbers::pi);
    if (kind_ == IndicatorKind::cos2) {
      // pi sin(t eta) / (2 t pi^2 - 2 t^3 eta^2), written via sin(x) = sin(pi - x)
      // so that the removable point t = pi/eta (value eta/(4 pi)) is stable.
      const double x = at * eta_;
      const double pi = std::numbers::pi;
      return pi * detail::sinc(pi - x) / (2.0 * at * (pi + x));
    }
    // Convolution theorem: F[rect * h] = 2 pi F[rect] F[h], with
    // int rect e^{-itw} = 2 sin(t eta/2)/t and the kernel transform evaluated
    // in the unit variable x = c w.
    const double k = at * eta_ / 2.0;
    const double kernel =
        2.0 * detail::integrate([k](double x) { return detail::bump(x) * std::cos(k * x); }, 0.0, 1.0) /
        detail::bump_integral();
    return (2.0 * std::sin(k) / at) * kernel / (2.0 * std::numbers::pi);
  }

  /// F_t for t = 0..max_t.
  [[nodiscard]] std::vector<double> fourier_coeffs(long max_t) const {
    std::vector<double> coeffs(static_cast<std::size_t>(max_t + 1));
    for (long t = 0; t <= max_t; ++t) coeffs[static_cast<std::size_t>(t)] = fourier_coeff(t);
    return coeffs;
  }

 private:
  IndicatorFunction(IndicatorKind kind, double eta, std::optional<double> alpha)
      : kind_(kind), eta_(eta), alpha_(alpha) {
    detail::require(eta > 0.0 && eta <= 1.0, "bin width must lie in (0, 1]");
    if (kind == IndicatorKind::somma) {
      norm_ = normalize_somma(eta);
      detail::require(!alpha || *alpha >= 1.0, "somma alpha must be >= 1");
    } else {
      alpha_.reset();
    }
  }

  IndicatorKind kind_;
  double eta_;
  SommaNormalization norm_{};
  std::optional<double> alpha_;
};

/// eta exp(-sqrt(|t| eta / 2)) without the |t| >= alpha/eta check.
inline double decay_bound_somma_unchecked(double eta, double t) {
  return eta * std::exp(-std::sqrt(std::abs(t) * eta / 2.0));
}

/// Decay bound |F_t| <= eta exp(-sqrt(|t| eta/2)), certified only for
/// |t| >= alpha/eta.
inline double decay_bound_somma(double eta, double t, double alpha) {
  detail::require(std::abs(t) >= alpha / eta, "somma decay bound is only certified for |t| >= alpha/eta");
  return decay_bound_somma_unchecked(eta, t);
}

struct AlphaEstimate {
  double alpha = 1.0;
  long verified_t_min = 0;   // ceil(alpha / eta)
  long verified_t_max = 0;   // floor(horizon / eta)
  double horizon = 0.0;
};

inline constexpr double kAlphaGridRatio = 1.25;
inline constexpr double kDefaultAlphaHorizon = 50.0;

/// Smallest alpha >= 1 on the grid 1.25^k such that |F_t| <= the somma decay
/// bound for every integer t in [alpha/eta, horizon/eta], checked against the
/// quadrature coefficients.
inline AlphaEstimate estimate_alpha(double eta, double horizon = kDefaultAlphaHorizon) {
  detail::require(eta > 0.0 && eta <= 1.0, "bin width must lie in (0, 1]");
  detail::require(horizon > 1.0, "alpha search horizon must exceed 1");
  const auto ind = IndicatorFunction::somma(eta);
  const long t_lo = static_cast<long>(std::ceil(1.0 / eta - 1e-9));
  const long t_hi = static_cast<long>(std::floor(horizon / eta + 1e-9));
  long last_violation = 0;
  for (long t = t_lo; t <= t_hi; ++t) {
    if (std::abs(ind.fourier_coeff(t)) > decay_bound_somma_unchecked(eta, static_cast<double>(t)))
      last_violation = t;
  }
  for (double alpha = 1.0; alpha <= horizon; alpha *= kAlphaGridRatio) {
    const long t_min = static_cast<long>(std::ceil(alpha / eta - 1e-9));
    if (t_min > last_violation) return {alpha, t_min, t_hi, horizon};
  }
  throw NumericalError("no alpha on the grid satisfies the somma decay bound up to horizon " +
                       std::to_string(horizon));
}

/// Truncation time for the somma indicator:
///   T = (2/eta) (1 + W_{-1}(-eps eta / (32 e)))^2,
/// the point where e^{-s}(1+s) = eps eta/32 with s = sqrt(T eta/2).
/// Callers must also enforce T >= alpha/eta.
inline double min_time_somma(double eta, double epsilon) {
  detail::require(eta > 0.0 && epsilon > 0.0, "eta and epsilon must be positive");
  const double y = -epsilon * eta / (32.0 * std::numbers::e);
  detail::require(y > -1.0 / std::numbers::e, "eps*eta/(32e) outside the branch -1 domain");
  const double w = product_log_m1(y);
  return (2.0 / eta) * (1.0 + w) * (1.0 + w);
}

/// Truncation time for the cos^2 indicator:
///   T = (pi/eta) e^{pi eta eps/2} / sqrt(e^{pi eta eps} - 1).
inline double min_time_cos2(double eta, double epsilon) {
  detail::require(eta > 0.0 && epsilon > 0.0, "eta and epsilon must be positive");
  const double x = std::numbers::pi * eta * epsilon;
  return (std::numbers::pi / eta) * std::exp(x / 2.0) / std::sqrt(std::expm1(x));
}

inline double min_time(IndicatorKind kind, double eta, double epsilon) {
  return kind == IndicatorKind::cos2 ? min_time_cos2(eta, epsilon) : min_time_somma(eta, epsilon);
}

}  // namespace binspec
