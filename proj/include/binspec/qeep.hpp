#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "binspec/errors.hpp"
#include "binspec/indicator.hpp"
#include "binspec/spectrum.hpp"
#include "binspec/timeseries.hpp"

namespace binspec {

enum class Provenance { exact_p, estimated_q };

inline std::string to_string(Provenance p) { return p == Provenance::exact_p ? "exact_p" : "estimated_q"; }

/// Binned spectral weights over the centres w_j = j*eta - 1/2, j = 0..M.
struct BinnedEstimate {
  double eta = 0.0;
  std::vector<double> values;
  int truncation_T = 0;
  IndicatorKind indicator_kind = IndicatorKind::cos2;
  double epsilon_target = 0.0;
  Provenance provenance = Provenance::exact_p;
  /// Largest |Im| discarded by the estimator (zero for exact_p).
  double imag_residue = 0.0;

  [[nodiscard]] int M() const { return static_cast<int>(values.size()) - 1; }
  [[nodiscard]] double center(int j) const { return j * eta - 0.5; }
  [[nodiscard]] std::vector<double> centers() const {
    std::vector<double> w(values.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = center(static_cast<int>(j));
    return w;
  }
};

inline double l1_distance(const BinnedEstimate& a, const BinnedEstimate& b) {
  detail::require(a.values.size() == b.values.size(), "estimates have different bin counts");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) sum += std::abs(a.values[j] - b.values[j]);
  return sum;
}

/// p_j = sum_i f(lambda_i - w_j) weight_i, evaluated directly. This is the
/// reference every estimator is checked against.
inline BinnedEstimate exact_p(const Spectrum& s, const IndicatorFunction& ind, double epsilon_target = 0.0) {
  const double eta = ind.eta();
  const int M = max_bin_index(eta);
  BinnedEstimate out;
  out.eta = eta;
  out.values.assign(static_cast<std::size_t>(M + 1), 0.0);
  out.indicator_kind = ind.kind();
  out.epsilon_target = epsilon_target;
  out.provenance = Provenance::exact_p;
  const auto eigenvalues = s.eigenvalues();
  const auto weights = s.weights();
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    // Only bins with |lambda - w_j| < eta contribute.
    const double pos = (eigenvalues[i] + 0.5) / eta;
    const int j_lo = std::max(0, static_cast<int>(std::floor(pos)) - 1);
    const int j_hi = std::min(M, static_cast<int>(std::ceil(pos)) + 1);
    for (int j = j_lo; j <= j_hi; ++j)
      out.values[static_cast<std::size_t>(j)] += weights[i] * ind.value(eigenvalues[i] - out.center(j));
  }
  return out;
}

namespace detail {

/// q_j = Re sum_{t=-T}^{T} e^{i t w_j} F_t g(-t), t ascending.
inline BinnedEstimate fourier_estimate(const TimeSeries& g, const IndicatorFunction& ind, int T) {
  detail::require(T >= 0, "truncation T must be non-negative");
  detail::require(T <= g.max_t(), "truncation T=" + std::to_string(T) + " exceeds the series length " +
                                      std::to_string(g.max_t()));
  const double eta = ind.eta();
  const int M = max_bin_index(eta);
  const std::vector<double> coeffs = ind.fourier_coeffs(T);

  BinnedEstimate out;
  out.eta = eta;
  out.values.assign(static_cast<std::size_t>(M + 1), 0.0);
  out.truncation_T = T;
  out.indicator_kind = ind.kind();
  out.provenance = Provenance::estimated_q;
  for (int j = 0; j <= M; ++j) {
    const double w = out.center(j);
    const std::complex<double> step = std::polar(1.0, w);
    std::complex<double> phase;
    std::complex<double> sum{0.0, 0.0};
    for (int t = -T; t <= T; ++t) {
      // Phase by recurrence, re-anchored every 256 steps to bound drift.
      if ((t + T) % 256 == 0) phase = std::polar(1.0, t * w); else phase *= step;
      sum += coeffs[static_cast<std::size_t>(std::abs(t))] * phase * g.at(-t);
    }
    out.values[static_cast<std::size_t>(j)] = sum.real();
    out.imag_residue = std::max(out.imag_residue, std::abs(sum.imag()));
  }
  return out;
}

}  // namespace detail

/// The QEEP estimator over a measured (or exact) time series.
inline BinnedEstimate estimate_q(const TimeSeries& g, const IndicatorFunction& ind, int T,
                                 double epsilon_target = 0.0) {
  detail::require(T >= 1, "truncation T must be >= 1");
  BinnedEstimate out = detail::fourier_estimate(g, ind, T);
  out.epsilon_target = epsilon_target;
  return out;
}

/// ||p - p'||_1 where p' is the truncated Fourier sum on the exact series:
/// the realised truncation error at T.
inline double truncation_residual(const Spectrum& s, const IndicatorFunction& ind, int T) {
  const BinnedEstimate p = exact_p(s, ind);
  const BinnedEstimate truncated = detail::fourier_estimate(exact_series(s, T), ind, T);
  return l1_distance(p, truncated);
}

/// Integer truncation time for a target (eta, eps): ceil of the kind's bound,
/// and for somma no less than alpha/eta when alpha is known.
inline int truncation_time(const IndicatorFunction& ind, double epsilon) {
  double T = min_time(ind.kind(), ind.eta(), epsilon);
  if (ind.kind() == IndicatorKind::somma && ind.somma_alpha()) T = std::max(T, *ind.somma_alpha() / ind.eta());
  detail::require(T < 2e9, "truncation time too large");
  return static_cast<int>(std::ceil(T));
}

/// Optional post-processing: clip to [0, 1] and rescale so the values sum to
/// the same total as before clipping (when that total is positive).
inline BinnedEstimate clip_and_renormalize(BinnedEstimate q) {
  double before = 0.0;
  for (double v : q.values) before += v;
  double after = 0.0;
  for (double& v : q.values) {
    v = std::clamp(v, 0.0, 1.0);
    after += v;
  }
  if (before > 0.0 && after > 0.0)
    for (double& v : q.values) v = std::min(1.0, v * before / after);
  return q;
}

}  // namespace binspec
