#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "binspec/errors.hpp"
#include "binspec/hamiltonian.hpp"

namespace binspec {

inline constexpr int kDefaultQubitCap = 14;

/// alpha * P with P a Pauli string; character k acts on data qubit k
/// (bit k of the basis index).
struct PauliTerm {
  double coefficient = 1.0;
  std::string paulis;
};

namespace detail {

/// P|x> = phase |x'>, returned as (x', phase).
inline std::pair<std::uint64_t, std::complex<double>> apply_pauli(const std::string& paulis, std::uint64_t index) {
  std::complex<double> phase{1.0, 0.0};
  for (std::size_t k = 0; k < paulis.size(); ++k) {
    const std::uint64_t mask = std::uint64_t{1} << k;
    const bool bit = (index & mask) != 0;
    switch (paulis[k]) {
      case 'I':
        break;
      case 'X':
        index ^= mask;
        break;
      case 'Y':
        phase *= bit ? std::complex<double>{0.0, -1.0} : std::complex<double>{0.0, 1.0};
        index ^= mask;
        break;
      case 'Z':
        if (bit) phase = -phase;
        break;
      default:
        throw ValidationError(std::string("invalid Pauli character '") + paulis[k] + "'");
    }
  }
  return {index, phase};
}

inline void validate_terms(const std::vector<PauliTerm>& terms, int data_qubits) {
  detail::require(!terms.empty(), "need at least one Hamiltonian term");
  detail::require(data_qubits >= 1, "need at least one data qubit");
  for (const auto& term : terms) {
    detail::require(term.paulis.size() == static_cast<std::size_t>(data_qubits),
                    "Pauli string '" + term.paulis + "' does not match the data-qubit count");
    detail::require(std::isfinite(term.coefficient), "term coefficient must be finite");
    for (char c : term.paulis)
      detail::require(c == 'I' || c == 'X' || c == 'Y' || c == 'Z', "invalid Pauli string '" + term.paulis + "'");
  }
}

}  // namespace detail

/// Dense matrix of sum_i alpha_i P_i on the data register.
inline HamiltonianMatrix pauli_hamiltonian(const std::vector<PauliTerm>& terms, int data_qubits) {
  detail::validate_terms(terms, data_qubits);
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << data_qubits);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : terms) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      const auto [target, phase] = detail::apply_pauli(term.paulis, static_cast<std::uint64_t>(x));
      h(static_cast<Eigen::Index>(target), x) += term.coefficient * phase;
    }
  }
  std::string label = "pauli";
  for (const auto& term : terms) label += " " + std::to_string(term.coefficient) + "*" + term.paulis;
  return HamiltonianMatrix(std::move(h), std::move(label), dim);
}

/// Statevector simulation of the local-control time-series circuit.
///
/// Register layout: data qubits occupy bits [0, n), the control ancilla of
/// term k sits at bit n + k. The circuit prepares a cat state on the
/// ancillas (H on ancilla 0, CNOT fan-out), evolves under exp(i t H'/2) with
///   H' = sum_k alpha_k Z_{anc k} (x) P_k,
/// undoes the fan-out and reads <X_0'> + i<Y_0'> on ancilla 0. The result is
/// Tr[rho exp(-i t H)] = conj(g(t)).
class LocalControlSimulator {
 public:
  LocalControlSimulator(std::vector<PauliTerm> terms, int data_qubits, int qubit_cap = kDefaultQubitCap)
      : terms_(std::move(terms)), data_qubits_(data_qubits) {
    detail::validate_terms(terms_, data_qubits_);
    const int total = data_qubits_ + static_cast<int>(terms_.size());
    detail::require(total <= qubit_cap, "local-control circuit needs " + std::to_string(total) +
                                            " qubits, cap is " + std::to_string(qubit_cap));
    total_qubits_ = total;

    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << total);
    Eigen::MatrixXcd augmented = Eigen::MatrixXcd::Zero(dim, dim);
    const std::uint64_t data_mask = (std::uint64_t{1} << data_qubits_) - 1;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const std::uint64_t ancilla = std::uint64_t{1} << (data_qubits_ + static_cast<int>(k));
      for (Eigen::Index x = 0; x < dim; ++x) {
        const auto ux = static_cast<std::uint64_t>(x);
        const auto [data_target, phase] = detail::apply_pauli(terms_[k].paulis, ux & data_mask);
        const double z = (ux & ancilla) ? -1.0 : 1.0;
        const auto target = static_cast<Eigen::Index>((ux & ~data_mask) | data_target);
        augmented(target, x) += terms_[k].coefficient * z * phase;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(augmented);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on augmented Hamiltonian");
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  [[nodiscard]] int total_qubits() const { return total_qubits_; }
  [[nodiscard]] int data_qubits() const { return data_qubits_; }

  /// <X_0'> + i<Y_0'> for a pure data-register input state.
  [[nodiscard]] std::complex<double> run(double t, const Eigen::VectorXcd& psi) const {
    const auto data_dim = static_cast<Eigen::Index>(std::uint64_t{1} << data_qubits_);
    detail::require(psi.size() == data_dim, "input state has wrong dimension");
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << total_qubits_);
    const std::uint64_t anc0 = std::uint64_t{1} << data_qubits_;

    Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim);
    state.head(data_dim) = psi.normalized();

    // Hadamard on ancilla 0 (it starts in |0>).
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index x = 0; x < data_dim; ++x) {
      const auto amp = state(x);
      state(x) = r * amp;
      state(static_cast<Eigen::Index>(static_cast<std::uint64_t>(x) | anc0)) = r * amp;
    }
    fan_out(state);

    if (t != 0.0) {
      Eigen::VectorXcd coeffs = vectors_.adjoint() * state;
      for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) *= std::polar(1.0, 0.5 * t * values_(i));
      state = vectors_ * coeffs;
    }

    fan_out(state);

    // X + iY = 2 |0><1| on ancilla 0.
    std::complex<double> result{0.0, 0.0};
    for (Eigen::Index x = 0; x < dim; ++x) {
      const auto ux = static_cast<std::uint64_t>(x);
      if (ux & anc0) continue;
      result += std::conj(state(x)) * state(static_cast<Eigen::Index>(ux | anc0));
    }
    return 2.0 * result;
  }

  /// Maximally mixed input, as the average over computational basis states.
  [[nodiscard]] std::complex<double> run_maximally_mixed(double t) const {
    const auto data_dim = static_cast<Eigen::Index>(std::uint64_t{1} << data_qubits_);
    std::complex<double> sum{0.0, 0.0};
    for (Eigen::Index b = 0; b < data_dim; ++b) sum += run(t, Eigen::VectorXcd::Unit(data_dim, b));
    return sum / static_cast<double>(data_dim);
  }

 private:
  /// CNOT from ancilla 0 onto every other ancilla; self-inverse.
  void fan_out(Eigen::VectorXcd& state) const {
    const std::uint64_t anc0 = std::uint64_t{1} << data_qubits_;
    std::uint64_t others = 0;
    for (std::size_t k = 1; k < terms_.size(); ++k) others |= std::uint64_t{1} << (data_qubits_ + static_cast<int>(k));
    if (others == 0) return;
    for (Eigen::Index x = 0; x < state.size(); ++x) {
      const auto ux = static_cast<std::uint64_t>(x);
      const std::uint64_t partner = ux ^ others;
      if ((ux & anc0) && ux < partner) std::swap(state(x), state(static_cast<Eigen::Index>(partner)));
    }
  }

  std::vector<PauliTerm> terms_;
  int data_qubits_;
  int total_qubits_ = 0;
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

inline std::complex<double> simulate_local_control(const std::vector<PauliTerm>& terms, int data_qubits, double t,
                                                   const Eigen::VectorXcd& psi, int qubit_cap = kDefaultQubitCap) {
  return LocalControlSimulator(terms, data_qubits, qubit_cap).run(t, psi);
}

}  // namespace binspec
