#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <string>
#include <vector>

#include "binspec/local_control.hpp"
#include "binspec/rng.hpp"
#include "binspec/spectrum.hpp"
#include "binspec/timeseries.hpp"

using namespace binspec;
using cd = std::complex<double>;

namespace {

// <psi| exp(-i t H) |psi> by the matrix exponential.
cd direct_overlap(const HamiltonianMatrix& h, double t, const Eigen::VectorXcd& psi) {
  const Eigen::MatrixXcd u = (cd(0.0, -t) * h.entries()).exp();
  const Eigen::VectorXcd p = psi.normalized();
  return p.dot(u * p);
}

std::vector<PauliTerm> random_terms(Engine& e, int qubits, int count) {
  const char letters[] = {'I', 'X', 'Y', 'Z'};
  std::vector<PauliTerm> terms;
  for (int k = 0; k < count; ++k) {
    std::string p;
    for (int q = 0; q < qubits; ++q) p += letters[static_cast<int>(uniform01(e) * 4.0)];
    terms.push_back({uniform(e, -1.0, 1.0), p});
  }
  return terms;
}

Eigen::VectorXcd random_state(Engine& e, int dim) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cd(uniform(e, -1.0, 1.0), uniform(e, -1.0, 1.0));
  return v.normalized();
}

}  // namespace

TEST(PauliHamiltonian, SingleQubitMatrices) {
  const auto y = pauli_hamiltonian({{1.0, "Y"}}, 1).entries();
  EXPECT_EQ(y(0, 1), cd(0.0, -1.0));
  EXPECT_EQ(y(1, 0), cd(0.0, 1.0));
  const auto z = pauli_hamiltonian({{2.0, "Z"}}, 1).entries();
  EXPECT_EQ(z(0, 0), cd(2.0, 0.0));
  EXPECT_EQ(z(1, 1), cd(-2.0, 0.0));
  // character k acts on bit k
  const auto xi = pauli_hamiltonian({{1.0, "XI"}}, 2).entries();
  EXPECT_EQ(xi(1, 0), cd(1.0, 0.0));
  EXPECT_EQ(xi(2, 0), cd(0.0, 0.0));
}

TEST(PauliHamiltonian, RejectsBadTerms) {
  EXPECT_THROW(pauli_hamiltonian({{1.0, "XQ"}}, 2), ValidationError);
  EXPECT_THROW(pauli_hamiltonian({{1.0, "X"}}, 2), ValidationError);
}

TEST(LocalControl, ThreeQubitExampleMatchesExponential) {
  // H = X_a + Z_b Z_c on three data qubits
  const std::vector<PauliTerm> terms{{1.0, "XII"}, {1.0, "IZZ"}};
  const auto h = pauli_hamiltonian(terms, 3);
  const LocalControlSimulator sim(terms, 3);
  Engine e = make_engine(11, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = random_state(e, 8);
    for (double t = 0.0; t <= 5.0; t += 0.5)
      EXPECT_NEAR(std::abs(sim.run(t, psi) - direct_overlap(h, t, psi)), 0.0, 1e-10) << "t=" << t;
  }
}

TEST(LocalControl, MaximallyMixedIsConjugateTimeSeries) {
  const std::vector<PauliTerm> terms{{0.7, "XII"}, {0.4, "IZZ"}, {-0.2, "YIY"}};
  const auto h = pauli_hamiltonian(terms, 3);
  const auto raw = diagonalize(h);
  const LocalControlSimulator sim(terms, 3);
  for (double t : {0.1, 1.0, 2.5, 5.0}) {
    const cd g = exact_g(raw.eigenvalues, raw.weights, t);
    EXPECT_NEAR(std::abs(sim.run_maximally_mixed(t) - std::conj(g)), 0.0, 1e-10);
  }
}

TEST(LocalControl, RandomTwoQubitHamiltonians) {
  Engine e = make_engine(12, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto terms = random_terms(e, 2, 1 + trial % 4);
    const auto h = pauli_hamiltonian(terms, 2);
    const LocalControlSimulator sim(terms, 2);
    const auto psi = random_state(e, 4);
    for (double t : {0.1, 0.7, 1.3, 2.9, 5.0})
      EXPECT_NEAR(std::abs(sim.run(t, psi) - direct_overlap(h, t, psi)), 0.0, 1e-10);
  }
}

TEST(LocalControl, ZeroTimeIsNorm) {
  const LocalControlSimulator sim({{1.0, "XZ"}, {0.5, "ZZ"}}, 2);
  Engine e = make_engine(13, 0);
  EXPECT_NEAR(std::abs(sim.run(0.0, random_state(e, 4)) - cd(1.0, 0.0)), 0.0, 1e-12);
}

TEST(LocalControl, QubitCap) {
  std::vector<PauliTerm> many(12, PauliTerm{0.1, "XXX"});
  EXPECT_THROW(LocalControlSimulator(many, 3), ValidationError);
  std::vector<PauliTerm> few(4, PauliTerm{0.1, "XXX"});
  EXPECT_THROW(LocalControlSimulator(few, 3, 6), ValidationError);
  EXPECT_NO_THROW(LocalControlSimulator(few, 3, 7));
}
