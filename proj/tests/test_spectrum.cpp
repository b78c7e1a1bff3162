#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "binspec/hamiltonian.hpp"
#include "binspec/spectrum.hpp"

using namespace binspec;

namespace {

std::vector<double> sorted_eigenvalues(const HamiltonianMatrix& h) {
  auto raw = diagonalize(h);
  std::sort(raw.eigenvalues.begin(), raw.eigenvalues.end());
  return raw.eigenvalues;
}

FermiHubbardParams fh(int L, double u, double v, bool spinful, LatticeGeometry g = LatticeGeometry::square) {
  FermiHubbardParams p;
  p.L = L;
  p.u = u;
  p.v = v;
  p.spinful = spinful;
  p.geometry = g;
  return p;
}

}  // namespace

// Frozen values below come from a dense Jordan-Wigner construction with
// Kronecker products, independent of the bitstring builder.

TEST(FermiHubbard, SingleSiteSpinful) {
  const auto e = sorted_eigenvalues(build_fermi_hubbard(fh(1, 1.0, 0.0, true)));
  ASSERT_EQ(e.size(), 4u);
  EXPECT_NEAR(e[0], 0.0, 1e-14);
  EXPECT_NEAR(e[1], 0.0, 1e-14);
  EXPECT_NEAR(e[2], 0.0, 1e-14);
  EXPECT_NEAR(e[3], 1.0, 1e-14);
}

TEST(FermiHubbard, TwoSiteSpinlessChain) {
  const auto h = build_fermi_hubbard(fh(2, 3.0, 1.0, false, LatticeGeometry::chain));
  ASSERT_EQ(h.dimension(), 4u);
  const auto e = sorted_eigenvalues(h);
  const std::vector<double> expected{-1.0, 0.0, 0.0, 1.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(e[i], expected[i], 1e-12);
}

TEST(FermiHubbard, SquarePlaquetteSpinless) {
  const auto e = sorted_eigenvalues(build_fermi_hubbard(fh(2, 0.0, 1.0, false)));
  ASSERT_EQ(e.size(), 16u);
  const std::vector<double> expected{-2, -2, -2, -2, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 2, 2};
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(e[i], expected[i], 1e-12);
}

TEST(FermiHubbard, HubbardDimerHalfFilling) {
  auto p = fh(2, 4.0, 1.0, true, LatticeGeometry::chain);
  p.particles = 2;
  const auto e = sorted_eigenvalues(build_fermi_hubbard(p));
  ASSERT_EQ(e.size(), 6u);
  // (U - sqrt(U^2 + 16 v^2)) / 2 and its partner
  EXPECT_NEAR(e[0], (4.0 - std::sqrt(32.0)) / 2.0, 1e-12);
  EXPECT_NEAR(e[5], (4.0 + std::sqrt(32.0)) / 2.0, 1e-12);
  EXPECT_NEAR(e[4], 4.0, 1e-12);
}

TEST(FermiHubbard, SquareSpinfulHalfFillingFrozen) {
  auto p = fh(2, 4.0, 1.0, true);
  p.particles = 4;
  const auto h = build_fermi_hubbard(p);
  ASSERT_EQ(h.dimension(), 70u);
  const auto e = sorted_eigenvalues(h);
  EXPECT_NEAR(e[0], -2.10274848, 1e-8);
  EXPECT_NEAR(e[1], -1.80642385, 1e-8);
  EXPECT_NEAR(e[3], -1.80642385, 1e-8);
  EXPECT_NEAR(e.back(), 10.10274848346207, 1e-10);
}

TEST(FermiHubbard, ThreeSiteChainFullFock) {
  const auto e = sorted_eigenvalues(build_fermi_hubbard(fh(3, 2.0, 1.0, true, LatticeGeometry::chain)));
  ASSERT_EQ(e.size(), 64u);
  EXPECT_NEAR(e.front(), -2.27945231576861, 1e-11);
  EXPECT_NEAR(e.back(), 6.0, 1e-11);
  double sq = 0.0;
  for (double x : e) sq += x * x;
  EXPECT_NEAR(sq, 416.0, 1e-9);
}

TEST(FermiHubbard, SectorsAreSubsetsOfFullFock) {
  const auto full = sorted_eigenvalues(build_fermi_hubbard(fh(2, 2.5, 0.7, false)));
  std::vector<double> joined;
  for (int n = 0; n <= 4; ++n) {
    auto p = fh(2, 2.5, 0.7, false);
    p.particles = n;
    const auto part = sorted_eigenvalues(build_fermi_hubbard(p));
    for (double x : part) {
      const bool found = std::any_of(full.begin(), full.end(), [x](double y) { return std::abs(x - y) < 1e-10; });
      EXPECT_TRUE(found) << "sector " << n << " eigenvalue " << x;
    }
    joined.insert(joined.end(), part.begin(), part.end());
  }
  std::sort(joined.begin(), joined.end());
  ASSERT_EQ(joined.size(), full.size());
  for (std::size_t i = 0; i < full.size(); ++i) EXPECT_NEAR(joined[i], full[i], 1e-10);
}

TEST(FermiHubbard, DimensionCapEnforced) {
  auto p = fh(3, 1.0, 1.0, true);  // 18 modes
  EXPECT_THROW(build_fermi_hubbard(p), ValidationError);
  p.particles = 2;  // C(18,2) = 153
  EXPECT_EQ(build_fermi_hubbard(p).dimension(), 153u);
  auto bad = fh(2, 1.0, 1.0, false);
  bad.particles = 5;
  EXPECT_THROW(build_fermi_hubbard(bad), ValidationError);
}

TEST(FermiHubbard, SquareBondsRowMajor) {
  const auto b = lattice_bonds(3, LatticeGeometry::square);
  EXPECT_EQ(b.size(), 12u);
  EXPECT_EQ(lattice_bonds(4, LatticeGeometry::chain).size(), 3u);
}

TEST(Hamiltonian, RejectsNonHermitian) {
  Eigen::MatrixXcd m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(HamiltonianMatrix(m, "bad"), ValidationError);
  EXPECT_THROW(HamiltonianMatrix(Eigen::MatrixXcd(2, 3), "bad"), ValidationError);
  EXPECT_THROW(HamiltonianMatrix(Eigen::MatrixXcd::Zero(8, 8), "big", 4), ValidationError);
}

TEST(Spectrum, ValidationFailures) {
  EXPECT_THROW(Spectrum({}, {}, 1.0, ""), ValidationError);
  EXPECT_THROW(Spectrum({0.1}, {0.5, 0.5}, 1.0, ""), ValidationError);
  EXPECT_THROW(Spectrum({0.6}, {1.0}, 1.0, ""), ValidationError);
  EXPECT_THROW(Spectrum({0.2, 0.1}, {0.5, 0.5}, 1.0, ""), ValidationError);
  EXPECT_THROW(Spectrum({0.1, 0.2}, {0.7, 0.7}, 1.0, ""), ValidationError);
  EXPECT_THROW(Spectrum({0.1, 0.2}, {1.5, -0.5}, 1.0, ""), ValidationError);
  EXPECT_THROW(Spectrum({std::nan("")}, {1.0}, 1.0, ""), ValidationError);
  EXPECT_NO_THROW(Spectrum({-0.5, 0.5}, {0.5, 0.5}, 1.0, ""));
}

TEST(Spectrum, RescaleToPromise) {
  const auto h = build_fermi_hubbard(fh(2, 0.0, 1.0, false, LatticeGeometry::chain));
  const Spectrum s = rescale_to_promise(diagonalize(h));
  EXPECT_DOUBLE_EQ(s.eigenvalues().front(), -0.5);
  EXPECT_DOUBLE_EQ(s.eigenvalues().back(), 0.5);
  EXPECT_NEAR(s.scale_factor(), 2.0, 1e-12);
  const Spectrum b = rescale_to_promise(diagonalize(h), 10.0);
  EXPECT_NEAR(b.eigenvalues().back(), 0.1, 1e-12);
  EXPECT_THROW(rescale_to_promise(diagonalize(h), 1.0), ValidationError);
}

TEST(Spectrum, StateWeightsSumToOne) {
  auto p = fh(2, 4.0, 1.0, true);
  p.particles = 4;
  const auto h = build_fermi_hubbard(p);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(70);
  psi(0) = 1.0;
  psi(17) = std::complex<double>(0.3, -0.4);
  const Spectrum s = rescale_to_promise(diagonalize_for_state(h, psi));
  double sum = 0.0;
  for (double w : s.weights()) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Synthetic, GappedLeavesGapEmpty) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Spectrum s = synthetic_spectrum(SyntheticKind::gapped, 256, seed);
    for (double x : s.eigenvalues()) EXPECT_FALSE(x > -0.1 && x < 0.1);
  }
}

TEST(Synthetic, DeterministicInSeed) {
  for (auto kind : {SyntheticKind::gapped, SyntheticKind::uniform, SyntheticKind::clustered}) {
    EXPECT_EQ(synthetic_spectrum(kind, 64, 9), synthetic_spectrum(kind, 64, 9));
    EXPECT_FALSE(synthetic_spectrum(kind, 64, 9) == synthetic_spectrum(kind, 64, 10));
  }
}

TEST(Synthetic, ClusteredStaysNearCentres) {
  SyntheticParams sp;
  sp.clusters = 2;
  sp.cluster_halfwidth = 0.01;
  const Spectrum s = synthetic_spectrum(SyntheticKind::clustered, 100, 5, sp);
  const auto e = s.eigenvalues();
  // two clusters of width <= 0.02 each
  int jumps = 0;
  for (std::size_t i = 1; i < e.size(); ++i)
    if (e[i] - e[i - 1] > 0.02) ++jumps;
  EXPECT_LE(jumps, 1);
}
