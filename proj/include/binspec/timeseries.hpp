#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "binspec/errors.hpp"
#include "binspec/rng.hpp"
#include "binspec/spectrum.hpp"

namespace binspec {

using cplx = std::complex<double>;

enum class SeriesMode { exact, sampled };

/// Samples g_t for every integer t in [-max_t, max_t].
class TimeSeries {
 public:
  TimeSeries(int max_t, std::vector<cplx> samples, SeriesMode mode, std::int64_t shots_per_point,
             std::uint64_t seed)
      : max_t_(max_t), samples_(std::move(samples)), mode_(mode), shots_(shots_per_point), seed_(seed) {
    detail::require(max_t_ >= 0, "max_t must be non-negative");
    detail::require(samples_.size() == static_cast<std::size_t>(2 * max_t_ + 1),
                    "time series needs 2*max_t+1 samples");
    for (const cplx& z : samples_)
      detail::require(std::isfinite(z.real()) && std::isfinite(z.imag()), "time series contains NaN/Inf");
  }

  /// Zero series (useful for linearity checks and tests).
  static TimeSeries zeros(int max_t) {
    return TimeSeries(max_t, std::vector<cplx>(static_cast<std::size_t>(2 * max_t + 1)), SeriesMode::exact, 0, 0);
  }

  [[nodiscard]] int max_t() const { return max_t_; }
  [[nodiscard]] cplx at(int t) const {
    detail::require(t >= -max_t_ && t <= max_t_, "time index outside series");
    return samples_[static_cast<std::size_t>(t + max_t_)];
  }
  [[nodiscard]] std::span<const cplx> samples() const { return samples_; }
  [[nodiscard]] SeriesMode mode() const { return mode_; }
  [[nodiscard]] std::int64_t shots_per_point() const { return shots_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  int max_t_;
  std::vector<cplx> samples_;
  SeriesMode mode_;
  std::int64_t shots_;
  std::uint64_t seed_;
};

/// g(t) = sum_n w_n exp(i lambda_n t). Works on any eigenvalue/weight pair,
/// including unscaled spectra.
inline cplx exact_g(std::span<const double> eigenvalues, std::span<const double> weights, double t) {
  cplx sum{0.0, 0.0};
  for (std::size_t n = 0; n < eigenvalues.size(); ++n) sum += weights[n] * std::polar(1.0, eigenvalues[n] * t);
  return sum;
}

inline cplx exact_g(const Spectrum& s, double t) { return exact_g(s.eigenvalues(), s.weights(), t); }

inline TimeSeries exact_series(const Spectrum& s, int max_t) {
  detail::require(max_t >= 0, "T must be non-negative");
  std::vector<cplx> samples(static_cast<std::size_t>(2 * max_t + 1));
  samples[static_cast<std::size_t>(max_t)] = exact_g(s, 0.0);
  for (int t = 1; t <= max_t; ++t) {
    const cplx g = exact_g(s, static_cast<double>(t));
    samples[static_cast<std::size_t>(max_t + t)] = g;
    samples[static_cast<std::size_t>(max_t - t)] = std::conj(g);
  }
  return TimeSeries(max_t, std::move(samples), SeriesMode::exact, 0, 0);
}

/// Shots N per quadrature per time point such that the sampled series obeys
/// ||g~ - g||_1 <= epsilon/2 with probability >= confidence.
///
/// Per-point budget b = epsilon / (4 (2T+1)), each quadrature gets b/2. A
/// two-sided Hoeffding bound on the mean of N +-1 outcomes, union-bounded over
/// the 2(2T+1) estimates, gives N = ceil(2 ln(4(2T+1)/(1-c)) / (b/2)^2).
inline std::int64_t shots_required(int max_t, double epsilon, double confidence) {
  detail::require(max_t >= 0, "T must be non-negative");
  detail::require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
  detail::require(confidence > 0.0 && confidence < 1.0, "confidence must lie in (0, 1)");
  const double points = 2.0 * max_t + 1.0;
  const double budget = epsilon / (2.0 * 2.0 * points);
  const double per_quadrature = budget / 2.0;
  const double n = std::ceil(2.0 * std::log(4.0 * points / (1.0 - confidence)) / (per_quadrature * per_quadrature));
  if (!(n < 0x1.0p63)) throw NumericalError("infeasible shot count");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

namespace detail {

/// Mean of `shots` +-1 outcomes whose expectation is `mean`.
inline double sample_pm1_mean(Engine& engine, double mean, std::int64_t shots) {
  const double p = std::clamp((1.0 + mean) / 2.0, 0.0, 1.0);
  std::binomial_distribution<std::int64_t> draw(shots, p);
  const auto plus = draw(engine);
  return (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) / static_cast<double>(shots);
}

}  // namespace detail

/// Simulated measurement of the time series: at every t the X and Y ancilla
/// expectations (Re g(t), Im g(t)) are each estimated from `shots` +-1
/// outcomes. Each t draws from its own stream split off (seed, t), so a sample
/// does not depend on evaluation order or on max_t.
inline TimeSeries sampled_series_with_shots(const Spectrum& s, int max_t, std::int64_t shots, std::uint64_t seed) {
  detail::require(max_t >= 0, "T must be non-negative");
  detail::require(shots >= 1, "need at least one shot");
  std::vector<cplx> samples(static_cast<std::size_t>(2 * max_t + 1));
  for (int t = -max_t; t <= max_t; ++t) {
    const cplx g = exact_g(s, static_cast<double>(t));
    Engine engine = make_engine(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(t)));
    const double re = detail::sample_pm1_mean(engine, g.real(), shots);
    const double im = detail::sample_pm1_mean(engine, g.imag(), shots);
    samples[static_cast<std::size_t>(t + max_t)] = {re, im};
  }
  return TimeSeries(max_t, std::move(samples), SeriesMode::sampled, shots, seed);
}

inline TimeSeries sampled_series(const Spectrum& s, int max_t, double epsilon, double confidence,
                                 std::uint64_t seed) {
  return sampled_series_with_shots(s, max_t, shots_required(max_t, epsilon, confidence), seed);
}

/// sum_t |a_t - b_t| over the common range of two series.
inline double l1_distance(const TimeSeries& a, const TimeSeries& b) {
  const int T = std::min(a.max_t(), b.max_t());
  double sum = 0.0;
  for (int t = -T; t <= T; ++t) sum += std::abs(a.at(t) - b.at(t));
  return sum;
}

}  // namespace binspec
