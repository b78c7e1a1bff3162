#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "binspec/errors.hpp"
#include "binspec/indicator.hpp"
#include "binspec/qeep.hpp"
#include "binspec/rng.hpp"
#include "binspec/spectrum.hpp"
#include "binspec/timeseries.hpp"

namespace binspec {

/// Parameters of the randomized eigenvalue-counting problem.
///
/// `dimension` plays the role of 2^Q (the number of eigenvalues), so
/// spectra whose size is not a power of two are accepted.
class RQeepParams {
 public:
  RQeepParams(int m, double delta, double confidence, double dimension)
      : m_(m), delta_(delta), confidence_(confidence), dimension_(dimension) {
    detail::require(m >= 1, "number of segments m = 2/xi must be a positive integer");
    detail::require(delta > 0.0 && std::isfinite(delta), "deviation Delta must be positive");
    detail::require(confidence > 0.0 && confidence < 1.0, "confidence must lie in (0, 1)");
    detail::require(dimension >= 1.0, "dimension must be >= 1");
  }

  /// From the maximal point spacing xi; 2/xi must be an integer.
  static RQeepParams from_xi(double xi, double delta, double confidence, double dimension) {
    detail::require(xi > 0.0, "point spacing xi must be positive");
    const double m = 2.0 / xi;
    const double rounded = std::round(m);
    detail::require(std::abs(m - rounded) <= 1e-9 * std::max(1.0, m), "2/xi must be an integer");
    return RQeepParams(static_cast<int>(rounded), delta, confidence, dimension);
  }

  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] double xi() const { return 2.0 / m_; }
  [[nodiscard]] double delta() const { return delta_; }
  [[nodiscard]] double confidence() const { return confidence_; }
  [[nodiscard]] double dimension() const { return dimension_; }
  [[nodiscard]] double qubits() const { return std::log2(dimension_); }

 private:
  int m_;
  double delta_;
  double confidence_;
  double dimension_;
};

struct QeepParams {
  double eta = 0.0;
  double epsilon = 0.0;
  int repetitions = 0;
};

/// repetitions = ceil(log_{1-c/2}(1-c)).
inline int rqeep_repetitions(double confidence) {
  detail::require(confidence > 0.0 && confidence < 1.0, "confidence must lie in (0, 1)");
  return static_cast<int>(std::ceil(std::log1p(-confidence) / std::log1p(-confidence / 2.0) - 1e-12));
}

/// QEEP subcall parameters: eta = Delta / (6 * 2^{Q+1} (m+1)^2),
/// eps = Delta / (8 * 2^{Q+1}).
inline QeepParams derive_qeep_params(const RQeepParams& p) {
  const double two_q1 = 2.0 * p.dimension();
  const double m1 = p.m() + 1.0;
  return {p.delta() / (6.0 * two_q1 * m1 * m1), p.delta() / (8.0 * two_q1), rqeep_repetitions(p.confidence())};
}

struct InverseParams {
  bool achievable = false;  // m >= 1
  double m_real = 0.0;      // sqrt(4 eps / (3 eta)) - 1 (NaN when 4 eps < 3 eta)
  int m = 0;                // floor(m_real), 0 when not achievable
  double delta = 0.0;       // dimension * 16 eps
  double delta_over_dimension = 0.0;
};

/// Number of rQEEP segments and deviation reachable from a QEEP solver with
/// bin width eta and precision eps.
inline InverseParams inverse_params(double eta, double epsilon, double dimension) {
  detail::require(eta > 0.0 && epsilon > 0.0 && dimension >= 1.0, "eta, epsilon and dimension must be positive");
  InverseParams out;
  out.delta_over_dimension = 16.0 * epsilon;
  out.delta = dimension * out.delta_over_dimension;
  if (4.0 * epsilon < 3.0 * eta) {
    out.m_real = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.m_real = std::sqrt(4.0 * epsilon / (3.0 * eta)) - 1.0;
  const double floored = std::floor(out.m_real + 1e-9);
  out.m = static_cast<int>(floored);
  out.achievable = out.m >= 1;
  if (!out.achievable) out.m = 0;
  return out;
}

/// Breakpoints x_0 = -1/2 < x_1 < ... < x_m < x_{m+1} = 1/2 with x_i drawn
/// uniformly from segment S_i = [-1/2 + (i-1) xi/2, -1/2 + i xi/2).
inline std::vector<double> sample_breakpoints(int m, std::uint64_t seed) {
  detail::require(m >= 1, "need m >= 1 segments");
  Engine engine = make_engine(seed, 0);
  const double width = 1.0 / m;  // xi / 2
  std::vector<double> x(static_cast<std::size_t>(m + 2));
  x.front() = -0.5;
  x.back() = 0.5;
  for (int i = 1; i <= m; ++i) x[static_cast<std::size_t>(i)] = -0.5 + (i - 1 + uniform01(engine)) * width;
  return x;
}

struct Envelopes {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> estimate;
  [[nodiscard]] double gap() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) sum += upper[i] - lower[i];
    return sum;
  }
};

/// For each interval [x_i, x_{i+1}), i = 0..m:
///   y_lwr_i = dim * sum of q_j over w_j in [x_i + eta, x_{i+1} - eta]
///   y_upr_i = dim * sum of q_j over w_j in [x_i - eta, x_{i+1} + eta]
///   y_i     = (y_lwr_i + y_upr_i) / 2
/// with closed regions; an inverted lower region is empty.
inline Envelopes envelopes(const BinnedEstimate& q, const std::vector<double>& breakpoints, double dimension) {
  detail::require(breakpoints.size() >= 2, "need at least two breakpoints");
  const double eta = q.eta;
  const std::size_t intervals = breakpoints.size() - 1;
  Envelopes env;
  env.lower.assign(intervals, 0.0);
  env.upper.assign(intervals, 0.0);
  env.estimate.assign(intervals, 0.0);
  for (std::size_t i = 0; i < intervals; ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    double lower = 0.0;
    double upper = 0.0;
    for (int j = 0; j <= q.M(); ++j) {
      const double w = q.center(j);
      const double value = q.values[static_cast<std::size_t>(j)];
      if (w >= a + eta && w <= b - eta) lower += value;
      if (w >= a - eta && w <= b + eta) upper += value;
    }
    env.lower[i] = dimension * lower;
    env.upper[i] = dimension * upper;
    env.estimate[i] = 0.5 * (env.lower[i] + env.upper[i]);
  }
  return env;
}

/// Eigenvalue counts per interval [x_{i-1}, x_i); the last interval also
/// takes an eigenvalue sitting exactly on +1/2.
inline std::vector<double> true_counts(const Spectrum& s, const std::vector<double>& breakpoints) {
  const std::size_t intervals = breakpoints.size() - 1;
  std::vector<double> counts(intervals, 0.0);
  for (double lambda : s.eigenvalues()) {
    auto it = std::upper_bound(breakpoints.begin() + 1, breakpoints.end() - 1, lambda);
    counts[static_cast<std::size_t>(it - (breakpoints.begin() + 1))] += 1.0;
  }
  return counts;
}

/// dim * 6 eta (m+1)^2: bound on the expected total envelope gap for an
/// ideal QEEP solver.
inline double expected_envelope_gap_bound(const RQeepParams& p, double eta) {
  const double m1 = p.m() + 1.0;
  return p.dimension() * 6.0 * eta * m1 * m1;
}

enum class SolverKind { exact_p, estimated };

struct RQeepSolver {
  SolverKind kind = SolverKind::exact_p;
  IndicatorKind indicator = IndicatorKind::cos2;
  /// Truncation time; 0 picks ceil of the indicator's bound.
  int truncation_T = 0;
  /// Sampled (shot-noise) series when true, exact series otherwise.
  bool sampled = true;
  std::optional<double> somma_alpha;
};

struct RQeepResult {
  std::vector<double> breakpoints;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> estimate;
  std::vector<double> true_counts;
  double envelope_gap = 0.0;
  double deviation = 0.0;  // sum |y_i - n_i|
  bool success = false;    // deviation <= Delta
  std::uint64_t seed = 0;
  int iteration = 0;
  int repetitions = 0;
  QeepParams qeep;
  int truncation_T = 0;
  std::int64_t shots_per_point = 0;
};

/// Randomized eigenvalue counting by repeated QEEP subcalls with random
/// breakpoints; keeps the repetition with the smallest envelope gap (ties to
/// the lowest index). The QEEP subcall always uses the maximally mixed state.
inline RQeepResult run_rqeep(const Spectrum& s, const RQeepParams& p, const RQeepSolver& solver, std::uint64_t seed) {
  const QeepParams qp = derive_qeep_params(p);
  detail::require(p.xi() / qp.eta > 2.0, "rQEEP requires xi/eta > 2");
  detail::require(qp.eta <= 1.0, "derived bin width exceeds 1; reduce Delta");
  const Spectrum mixed = s.maximally_mixed();
  const auto ind = IndicatorFunction::make(solver.indicator, qp.eta, solver.somma_alpha);

  int T = 0;
  std::int64_t shots = 0;
  if (solver.kind == SolverKind::estimated) {
    const int needed = truncation_time(ind, qp.epsilon);
    T = solver.truncation_T > 0 ? solver.truncation_T : needed;
    detail::require(T >= needed, "truncation T below the indicator's bound");
    if (solver.sampled) shots = shots_required(T, qp.epsilon, p.confidence());
  }

  std::optional<BinnedEstimate> ideal;
  std::optional<TimeSeries> exact;
  if (solver.kind == SolverKind::exact_p) ideal = exact_p(mixed, ind, qp.epsilon);
  else if (!solver.sampled) exact = exact_series(mixed, T);

  RQeepResult best;
  best.envelope_gap = HUGE_VAL;
  for (int r = 0; r < qp.repetitions; ++r) {
    const std::uint64_t round_seed = split_seed(seed, static_cast<std::uint64_t>(r));
    const auto x = sample_breakpoints(p.m(), split_seed(round_seed, 1));
    BinnedEstimate q;
    if (ideal) q = *ideal;
    else if (exact) q = estimate_q(*exact, ind, T, qp.epsilon);
    else q = estimate_q(sampled_series_with_shots(mixed, T, shots, split_seed(round_seed, 2)), ind, T, qp.epsilon);
    const Envelopes env = envelopes(q, x, p.dimension());
    const double gap = env.gap();
    if (gap < best.envelope_gap) {
      best.breakpoints = x;
      best.lower = env.lower;
      best.upper = env.upper;
      best.estimate = env.estimate;
      best.envelope_gap = gap;
      best.iteration = r;
    }
  }
  best.true_counts = true_counts(mixed, best.breakpoints);
  best.deviation = 0.0;
  for (std::size_t i = 0; i < best.estimate.size(); ++i) best.deviation += std::abs(best.estimate[i] - best.true_counts[i]);
  best.success = best.deviation <= p.delta();
  best.seed = seed;
  best.repetitions = qp.repetitions;
  best.qeep = qp;
  best.truncation_T = T;
  best.shots_per_point = shots;
  return best;
}

}  // namespace binspec
