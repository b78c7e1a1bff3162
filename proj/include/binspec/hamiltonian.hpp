#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "binspec/errors.hpp"

namespace binspec {

inline constexpr std::size_t kDefaultDimensionCap = 4096;

/// Dense Hermitian matrix with a free-form label.
class HamiltonianMatrix {
 public:
  HamiltonianMatrix(Eigen::MatrixXcd entries, std::string label,
                    std::size_t dimension_cap = kDefaultDimensionCap)
      : entries_(std::move(entries)), label_(std::move(label)) {
    detail::require(entries_.rows() >= 1 && entries_.rows() == entries_.cols(),
                    "Hamiltonian must be a non-empty square matrix");
    detail::require(static_cast<std::size_t>(entries_.rows()) <= dimension_cap,
                    "Hamiltonian dimension " + std::to_string(entries_.rows()) +
                        " exceeds cap " + std::to_string(dimension_cap));
    const double deviation = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    detail::require(deviation <= 1e-12, "Hamiltonian is not Hermitian (max deviation " +
                                            std::to_string(deviation) + ")");
  }

  [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }
  [[nodiscard]] const Eigen::MatrixXcd& entries() const { return entries_; }
  [[nodiscard]] const std::string& label() const { return label_; }

 private:
  Eigen::MatrixXcd entries_;
  std::string label_;
};

enum class LatticeGeometry { square, chain };

struct FermiHubbardParams {
  int L = 2;
  double u = 0.0;  // on-site coupling
  double v = 1.0;  // hopping coupling
  bool spinful = true;
  std::optional<int> particles;  // restrict to a fixed fermion number
  LatticeGeometry geometry = LatticeGeometry::square;
  std::size_t dimension_cap = kDefaultDimensionCap;
};

namespace detail {

inline std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (result > cap) return cap + 1;
  }
  return result;
}

/// Occupation bitstrings with a fixed popcount, ascending (Gosper's hack).
inline std::vector<std::uint64_t> fixed_popcount_states(int modes, int count) {
  std::vector<std::uint64_t> states;
  if (count == 0) {
    states.push_back(0);
    return states;
  }
  const std::uint64_t limit = std::uint64_t{1} << modes;
  for (std::uint64_t s = (std::uint64_t{1} << count) - 1; s < limit;) {
    states.push_back(s);
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return states;
}

/// Sign of the Jordan-Wigner string: parity of occupied modes below `mode`.
inline double jw_parity(std::uint64_t state, int mode) {
  const std::uint64_t below = state & ((std::uint64_t{1} << mode) - 1);
  return (std::popcount(below) & 1) ? -1.0 : 1.0;
}

}  // namespace detail

/// Nearest-neighbour bonds (i < j) of an open-boundary lattice; sites are
/// numbered row-major.
inline std::vector<std::pair<int, int>> lattice_bonds(int L, LatticeGeometry geometry) {
  std::vector<std::pair<int, int>> bonds;
  if (geometry == LatticeGeometry::chain) {
    for (int i = 0; i + 1 < L; ++i) bonds.emplace_back(i, i + 1);
    return bonds;
  }
  for (int r = 0; r < L; ++r) {
    for (int c = 0; c < L; ++c) {
      const int site = r * L + c;
      if (c + 1 < L) bonds.emplace_back(site, site + 1);
      if (r + 1 < L) bonds.emplace_back(site, site + L);
    }
  }
  return bonds;
}

/// Fermi-Hubbard Hamiltonian
///   H = u sum_i n_{i up} n_{i down} + v sum_{<ij>,s} (a+_{is} a_{js} + h.c.)
/// in the occupation-number basis. Modes are ordered site-major, spin-minor
/// (mode = site * nspin + spin, spin 0 = up) and a basis state's bit k is the
/// occupation of mode k. Fermionic signs follow the Jordan-Wigner string along
/// that mode order. With a particle sector the basis is the ascending list of
/// bitstrings with that popcount.
inline HamiltonianMatrix build_fermi_hubbard(const FermiHubbardParams& p) {
  detail::require(p.L >= 1, "lattice side must be >= 1");
  const int sites = p.geometry == LatticeGeometry::square ? p.L * p.L : p.L;
  const int nspin = p.spinful ? 2 : 1;
  const int modes = sites * nspin;
  detail::require(modes < 63, "too many fermionic modes");

  std::uint64_t dimension = 0;
  if (p.particles) {
    detail::require(*p.particles >= 0 && *p.particles <= modes,
                    "invalid particle sector " + std::to_string(*p.particles) + " for " +
                        std::to_string(modes) + " modes");
    dimension = detail::binomial_capped(modes, *p.particles, p.dimension_cap);
  } else {
    dimension = modes >= 40 ? p.dimension_cap + 1 : (std::uint64_t{1} << modes);
  }
  detail::require(dimension <= p.dimension_cap,
                  "Fermi-Hubbard dimension exceeds cap " + std::to_string(p.dimension_cap));

  std::vector<std::uint64_t> basis;
  if (p.particles) {
    basis = detail::fixed_popcount_states(modes, *p.particles);
  } else {
    basis.resize(dimension);
    for (std::uint64_t s = 0; s < dimension; ++s) basis[s] = s;
  }
  auto index_of = [&basis](std::uint64_t state) {
    return static_cast<Eigen::Index>(std::lower_bound(basis.begin(), basis.end(), state) - basis.begin());
  };

  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  const auto bonds = lattice_bonds(p.L, p.geometry);

  for (Eigen::Index col = 0; col < n; ++col) {
    const std::uint64_t s = basis[static_cast<std::size_t>(col)];
    if (p.spinful) {
      double doubly = 0.0;
      for (int site = 0; site < sites; ++site) {
        const std::uint64_t pair = std::uint64_t{3} << (2 * site);
        if ((s & pair) == pair) doubly += 1.0;
      }
      h(col, col) += p.u * doubly;
    }
    for (const auto& [i, j] : bonds) {
      for (int spin = 0; spin < nspin; ++spin) {
        const int mi = i * nspin + spin;
        const int mj = j * nspin + spin;
        for (const auto& [to, from] : {std::pair{mi, mj}, std::pair{mj, mi}}) {
          // a+_to a_from |s>
          if (!(s >> from & 1) || (s >> to & 1)) continue;
          const std::uint64_t removed = s ^ (std::uint64_t{1} << from);
          const double sign = detail::jw_parity(s, from) * detail::jw_parity(removed, to);
          const std::uint64_t target = removed | (std::uint64_t{1} << to);
          h(index_of(target), col) += p.v * sign;
        }
      }
    }
  }

  std::string label = "fermi_hubbard L=" + std::to_string(p.L) +
                      (p.geometry == LatticeGeometry::square ? " square" : " chain") +
                      (p.spinful ? " spinful" : " spinless") + " u=" + std::to_string(p.u) +
                      " v=" + std::to_string(p.v);
  if (p.particles) label += " N=" + std::to_string(*p.particles);
  return HamiltonianMatrix(std::move(h), std::move(label), p.dimension_cap);
}

}  // namespace binspec
