#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "binspec/errors.hpp"
#include "binspec/hamiltonian.hpp"
#include "binspec/rng.hpp"

namespace binspec {

/// Eigenvalues with their input-state weights, before any rescaling.
struct RawSpectrum {
  std::vector<double> eigenvalues;
  std::vector<double> weights;
  std::string source;
};

/// Rescaled spectrum satisfying the promise ||H|| <= 1/2.
///
/// Invariants (checked on construction): eigenvalues sorted and inside
/// [-1/2, 1/2]; weights non-negative and summing to 1; everything finite.
class Spectrum {
 public:
  static constexpr double kWeightSumTolerance = 1e-12;
  static constexpr double kPromiseTolerance = 1e-12;

  Spectrum(std::vector<double> eigenvalues, std::vector<double> weights, double scale_factor,
           std::string source)
      : eigenvalues_(std::move(eigenvalues)),
        weights_(std::move(weights)),
        scale_factor_(scale_factor),
        source_(std::move(source)) {
    validate();
  }

  [[nodiscard]] std::span<const double> eigenvalues() const { return eigenvalues_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] double scale_factor() const { return scale_factor_; }
  [[nodiscard]] const std::string& source() const { return source_; }
  [[nodiscard]] std::size_t dimension() const { return eigenvalues_.size(); }

  /// Same eigenvalues with the maximally mixed input state.
  [[nodiscard]] Spectrum maximally_mixed() const {
    return Spectrum(eigenvalues_, std::vector<double>(dimension(), 1.0 / static_cast<double>(dimension())),
                    scale_factor_, source_);
  }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  void validate() const {
    detail::require(!eigenvalues_.empty(), "spectrum must not be empty");
    detail::require(eigenvalues_.size() == weights_.size(),
                    "spectrum eigenvalue and weight counts differ");
    detail::require(std::isfinite(scale_factor_) && scale_factor_ > 0.0,
                    "scale_factor must be positive and finite");
    double sum = 0.0;
    for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
      const double lambda = eigenvalues_[i];
      const double w = weights_[i];
      detail::require(std::isfinite(lambda) && std::isfinite(w), "spectrum contains NaN/Inf");
      detail::require(std::abs(lambda) <= 0.5 + kPromiseTolerance,
                      "eigenvalue " + std::to_string(lambda) + " violates the promise |lambda| <= 1/2");
      detail::require(i == 0 || eigenvalues_[i - 1] <= lambda, "eigenvalues must be non-decreasing");
      detail::require(w >= 0.0, "weights must be non-negative");
      sum += w;
    }
    const double tolerance =
        kWeightSumTolerance + static_cast<double>(weights_.size()) * 1e-16;
    detail::require(std::abs(sum - 1.0) <= tolerance,
                    "weights sum to " + std::to_string(sum) + ", expected 1");
  }

  std::vector<double> eigenvalues_;
  std::vector<double> weights_;
  double scale_factor_;
  std::string source_;
};

struct Eigendecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // columns
};

inline Eigendecomposition eigendecompose(const HamiltonianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.entries());
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues of `h` with maximally mixed weights 1/dimension.
inline RawSpectrum diagonalize(const HamiltonianMatrix& h) {
  const auto eig = eigendecompose(h);
  RawSpectrum raw;
  raw.eigenvalues.assign(eig.values.begin(), eig.values.end());
  raw.weights.assign(h.dimension(), 1.0 / static_cast<double>(h.dimension()));
  raw.source = h.label();
  return raw;
}

/// Eigenvalues of `h` with caller-provided weights, one per (ascending)
/// eigenvalue.
inline RawSpectrum diagonalize(const HamiltonianMatrix& h, std::span<const double> weights) {
  detail::require(weights.size() == h.dimension(), "custom weight vector has wrong length");
  RawSpectrum raw = diagonalize(h);
  raw.weights.assign(weights.begin(), weights.end());
  return raw;
}

/// Eigenvalues of `h` weighted by <lambda_i|psi><psi|lambda_i> for a pure
/// input state.
inline RawSpectrum diagonalize_for_state(const HamiltonianMatrix& h, const Eigen::VectorXcd& psi) {
  detail::require(static_cast<std::size_t>(psi.size()) == h.dimension(),
                  "input state has wrong dimension");
  const auto eig = eigendecompose(h);
  const Eigen::VectorXcd overlaps = eig.vectors.adjoint() * psi.normalized();
  RawSpectrum raw;
  raw.eigenvalues.assign(eig.values.begin(), eig.values.end());
  raw.weights.resize(h.dimension());
  for (std::size_t i = 0; i < h.dimension(); ++i) raw.weights[i] = std::norm(overlaps(static_cast<Eigen::Index>(i)));
  raw.source = h.label();
  return raw;
}

/// Divides eigenvalues by a scale factor so they fit in [-1/2, 1/2].
///
/// With `bound` (an a-priori norm bound such as 10*Lambda for Fermi-Hubbard,
/// where ||H|| <= 5*Lambda) the scale factor is the bound itself; otherwise it
/// is 2 max|lambda|. An all-zero spectrum without a bound keeps scale 1.
inline Spectrum rescale_to_promise(RawSpectrum raw, std::optional<double> bound = std::nullopt) {
  detail::require(!raw.eigenvalues.empty(), "cannot rescale an empty spectrum");
  double scale = 1.0;
  if (bound) {
    detail::require(std::isfinite(*bound) && *bound > 0.0, "norm bound must be positive");
    scale = *bound;
  } else {
    double max_abs = 0.0;
    for (double lambda : raw.eigenvalues) max_abs = std::max(max_abs, std::abs(lambda));
    if (max_abs > 0.0) scale = 2.0 * max_abs;
  }
  std::vector<std::size_t> order(raw.eigenvalues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw.eigenvalues[a] < raw.eigenvalues[b]; });
  std::vector<double> eigenvalues(order.size());
  std::vector<double> weights(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    eigenvalues[i] = raw.eigenvalues[order[i]] / scale;
    weights[i] = raw.weights[order[i]];
  }
  return Spectrum(std::move(eigenvalues), std::move(weights), scale, std::move(raw.source));
}

enum class SyntheticKind { gapped, uniform, clustered };

struct SyntheticParams {
  // gapped: no eigenvalue strictly inside (gap_lo, gap_hi)
  double gap_lo = -0.1;
  double gap_hi = 0.1;
  // clustered: eigenvalues spread uniformly within +-cluster_halfwidth of
  // `clusters` centres drawn from [-0.4, 0.4]
  int clusters = 3;
  double cluster_halfwidth = 0.02;
  // uniform: support interval
  double lo = -0.5;
  double hi = 0.5;
};

/// Random spectrum with maximally mixed weights; deterministic in `seed`.
inline Spectrum synthetic_spectrum(SyntheticKind kind, std::size_t dimension, std::uint64_t seed,
                                   const SyntheticParams& params = {}) {
  detail::require(dimension >= 1, "dimension must be >= 1");
  Engine engine = make_engine(seed, 0);
  std::vector<double> values(dimension);
  std::string source;
  switch (kind) {
    case SyntheticKind::uniform: {
      detail::require(-0.5 <= params.lo && params.lo <= params.hi && params.hi <= 0.5,
                      "uniform support must lie in [-1/2, 1/2]");
      for (double& x : values) x = uniform(engine, params.lo, params.hi);
      source = "synthetic uniform";
      break;
    }
    case SyntheticKind::gapped: {
      detail::require(-0.5 <= params.gap_lo && params.gap_lo < params.gap_hi && params.gap_hi <= 0.5,
                      "gap interval must lie inside [-1/2, 1/2]");
      const double left = params.gap_lo + 0.5;
      const double right = 0.5 - params.gap_hi;
      detail::require(left + right > 0.0, "gap covers the whole window");
      for (double& x : values) {
        const double r = uniform01(engine) * (left + right);
        x = r < left ? -0.5 + r : params.gap_hi + (r - left);
      }
      source = "synthetic gapped";
      break;
    }
    case SyntheticKind::clustered: {
      detail::require(params.clusters >= 1, "need at least one cluster");
      detail::require(params.cluster_halfwidth >= 0.0 && params.cluster_halfwidth <= 0.1,
                      "cluster half-width must be in [0, 0.1]");
      std::vector<double> centres(static_cast<std::size_t>(params.clusters));
      for (double& c : centres) c = uniform(engine, -0.4, 0.4);
      for (std::size_t i = 0; i < dimension; ++i) {
        const double c = centres[i % centres.size()];
        values[i] = c + params.cluster_halfwidth * (2.0 * uniform01(engine) - 1.0);
      }
      source = "synthetic clustered";
      break;
    }
  }
  std::sort(values.begin(), values.end());
  source += " dim=" + std::to_string(dimension) + " seed=" + std::to_string(seed);
  return Spectrum(std::move(values), std::vector<double>(dimension, 1.0 / static_cast<double>(dimension)),
                  1.0, std::move(source));
}

}  // namespace binspec
