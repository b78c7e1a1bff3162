#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "binspec/errors.hpp"
#include "binspec/indicator.hpp"
#include "binspec/rqeep.hpp"

namespace binspec {

enum class Synthesis { subcircuit, standard };
enum class Term { onsite, hopping };

inline std::string to_string(Synthesis s) { return s == Synthesis::subcircuit ? "subcircuit" : "standard"; }

inline Synthesis synthesis_from_string(const std::string& name) {
  if (name == "subcircuit") return Synthesis::subcircuit;
  if (name == "standard") return Synthesis::standard;
  throw ValidationError("unknown synthesis '" + name + "'");
}

inline constexpr std::array<int, 3> kTrotterOrders{1, 2, 4};

inline int trotter_order_index(int p) {
  for (std::size_t i = 0; i < kTrotterOrders.size(); ++i)
    if (kTrotterOrders[i] == p) return static_cast<int>(i);
  throw ValidationError("Trotter order must be 1, 2 or 4");
}

/// Per-step layer multiplier: order 2 symmetrises (x2), order 4 is five
/// second-order stages (x10).
inline double trotter_order_multiplier(int p) {
  switch (p) {
    case 1: return 1.0;
    case 2: return 2.0;
    case 4: return 10.0;
    default: throw ValidationError("Trotter order must be 1, 2 or 4");
  }
}

struct CostScenario {
  int L = 3;
  double u = 1.0;
  double v = 1.0;
  std::optional<double> Lambda;  // fermion count, defaults to L^2
  Synthesis synthesis = Synthesis::subcircuit;
  int trotter_order = 1;
  std::array<double, 3> trotter_constants{1.0, 1.0, 1.0};  // W_1, W_2, W_4
  IndicatorKind indicator = IndicatorKind::cos2;
  double epsilon = 0.1;
  double q_noise = 1e-6;
  double epsilon_tar = 0.1;
  /// Fraction of epsilon given to the Trotter error budget.
  double trotter_split = 1.0;
  /// Added to the encoding qubit count in the noise budget.
  int extra_qubits = 0;

  [[nodiscard]] double fermions() const { return Lambda ? *Lambda : static_cast<double>(L) * L; }
  [[nodiscard]] double trotter_constant() const {
    return trotter_constants[static_cast<std::size_t>(trotter_order_index(trotter_order))];
  }

  void validate() const {
    detail::require(L >= 2, "lattice side L must be >= 2");
    auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
    detail::require(finite_nonneg(u) && finite_nonneg(v), "couplings must be finite and non-negative");
    detail::require(!Lambda || (std::isfinite(*Lambda) && *Lambda > 0.0), "fermion count must be positive");
    trotter_order_index(trotter_order);
    for (double w : trotter_constants) detail::require(std::isfinite(w) && w > 0.0, "Trotter constants must be positive");
    detail::require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
    detail::require(q_noise >= 0.0 && q_noise <= 1.0, "noise rate must lie in [0, 1]");
    detail::require(epsilon_tar > 0.0 && epsilon_tar < 1.0, "epsilon_tar must lie in (0, 1)");
    detail::require(trotter_split > 0.0 && std::isfinite(trotter_split), "Trotter split must be positive");
    detail::require(extra_qubits >= 0, "extra qubits must be non-negative");
  }
};

/// Runtime of one local Trotter term.
///   subcircuit onsite:  |u d|/2 + 2 sqrt(2 |u d|)
///   subcircuit hopping: 12 (2 |v d|)^{1/3}
///   standard: 5pi/4 (onsite), 5pi/2 (hopping)
inline double gate_cost(Synthesis synthesis, Term term, double coupling, double delta) {
  detail::require(delta >= 0.0, "Trotter step must be non-negative");
  if (synthesis == Synthesis::standard)
    return term == Term::onsite ? 5.0 * std::numbers::pi / 4.0 : 5.0 * std::numbers::pi / 2.0;
  const double x = std::abs(coupling * delta);
  if (term == Term::onsite) return x / 2.0 + 2.0 * std::sqrt(2.0 * x);
  return 12.0 * std::cbrt(2.0 * x);
}

/// prefactor * |t|^{1/(k-1)}: leading-order runtime of a k-local Pauli
/// rotation by angle t. Not used by the Fermi-Hubbard pipeline.
inline double general_k_cost(int k, double t, double prefactor = 1.0) {
  detail::require(k >= 2, "locality k must be >= 2");
  return prefactor * std::pow(std::abs(t), 1.0 / (k - 1));
}

/// One onsite layer plus four hopping layers, times the order multiplier.
inline double trotter_step_cost(const CostScenario& scn, double delta) {
  const double layer = gate_cost(scn.synthesis, Term::onsite, scn.u, delta) +
                       4.0 * gate_cost(scn.synthesis, Term::hopping, scn.v, delta);
  return trotter_order_multiplier(scn.trotter_order) * layer;
}

/// W_p T delta^p.
inline double trotter_error(const CostScenario& scn, double T, double delta) {
  detail::require(T > 0.0 && delta > 0.0, "T and delta must be positive");
  return scn.trotter_constant() * T * std::pow(delta, scn.trotter_order);
}

/// log(1 - eps_tar) / (Q log(1 - q)); +inf when q = 0.
inline double noise_runtime_budget(double qubits, double q_noise, double epsilon_tar) {
  detail::require(qubits > 0.0, "qubit count must be positive");
  detail::require(q_noise >= 0.0 && q_noise < 1.0, "noise rate must lie in [0, 1)");
  detail::require(epsilon_tar > 0.0 && epsilon_tar < 1.0, "epsilon_tar must lie in (0, 1)");
  if (q_noise == 0.0) return std::numeric_limits<double>::infinity();
  return std::log1p(-epsilon_tar) / (qubits * std::log1p(-q_noise));
}

/// Largest noise rate whose budget still covers `runtime`: the inverse of
/// noise_runtime_budget in q.
inline double noise_rate_threshold(double qubits, double runtime, double epsilon_tar) {
  detail::require(qubits > 0.0 && runtime > 0.0, "qubits and runtime must be positive");
  detail::require(epsilon_tar > 0.0 && epsilon_tar < 1.0, "epsilon_tar must lie in (0, 1)");
  return -std::expm1(std::log1p(-epsilon_tar) / (qubits * runtime));
}

/// 2 [L^2 + (L-1)^2 + 2(L-1)] qubits for the compact encoding.
inline int qubit_count(int L) {
  detail::require(L >= 2, "lattice side L must be >= 2");
  return 2 * (L * L + (L - 1) * (L - 1) + 2 * (L - 1));
}

/// Indicator truncation time rescaled by 1/(10 Lambda).
inline double evolution_time(IndicatorKind kind, double eta, double epsilon, double Lambda) {
  detail::require(Lambda > 0.0, "fermion count must be positive");
  return min_time(kind, eta, epsilon) / (10.0 * Lambda);
}

struct CostBreakdown {
  double evolution_time = 0.0;
  double delta = 0.0;
  std::int64_t steps = 0;
  double step_cost = 0.0;
  double total_runtime = 0.0;
  double trotter_error = 0.0;
  double combined_error = 0.0;
  int qubit_count = 0;
  int trotter_order = 1;
};

/// Runtime to reach bin width eta: delta saturates W_p T delta^p = split*eps,
/// then is shrunk to T/ceil(T/delta) so the steps tile T exactly.
inline CostBreakdown total_cost(const CostScenario& scn, double eta) {
  scn.validate();
  detail::require(eta > 0.0 && eta <= 1.0, "bin width must lie in (0, 1]");
  const double budget = scn.trotter_split * scn.epsilon;
  if (!(budget > 0.0)) throw ValidationError("no feasible Trotter step: error budget is non-positive");
  CostBreakdown out;
  out.trotter_order = scn.trotter_order;
  out.evolution_time = evolution_time(scn.indicator, eta, scn.epsilon, scn.fermions());
  const double T = out.evolution_time;
  const double saturating = std::pow(budget / (scn.trotter_constant() * T), 1.0 / scn.trotter_order);
  const double steps = std::max(1.0, std::ceil(T / saturating * (1.0 - 1e-12)));
  detail::require(steps < 9e18, "Trotter step count overflows");
  out.steps = static_cast<std::int64_t>(steps);
  out.delta = T / steps;
  out.step_cost = trotter_step_cost(scn, out.delta);
  out.total_runtime = steps * out.step_cost;
  out.trotter_error = trotter_error(scn, T, out.delta);
  out.combined_error = std::hypot(scn.epsilon, out.trotter_error);
  out.qubit_count = qubit_count(scn.L) + scn.extra_qubits;
  return out;
}

inline constexpr double kEtaFloor = 1e-6;
inline constexpr double kEtaRelativeTolerance = 1e-4;

struct AchievableEta {
  bool feasible = false;  // false: even eta = 1 exceeds the budget
  double eta_min = std::numeric_limits<double>::quiet_NaN();
  int best_p = 0;
  CostBreakdown breakdown;
};

/// Smallest eta (to relative tolerance) whose runtime fits the budget, for a
/// single Trotter order. The runtime is non-increasing in eta.
inline AchievableEta achievable_eta_for_order(const CostScenario& scn, double runtime_budget,
                                              double eta_floor = kEtaFloor,
                                              double rel_tol = kEtaRelativeTolerance) {
  detail::require(runtime_budget > 0.0, "runtime budget must be positive");
  AchievableEta out;
  out.best_p = scn.trotter_order;
  const CostBreakdown at_one = total_cost(scn, 1.0);
  if (at_one.total_runtime > runtime_budget) return out;
  out.feasible = true;
  const CostBreakdown at_floor = total_cost(scn, eta_floor);
  if (at_floor.total_runtime <= runtime_budget) {
    out.eta_min = eta_floor;
    out.breakdown = at_floor;
    return out;
  }
  double lo = eta_floor;  // infeasible
  double hi = 1.0;        // feasible
  CostBreakdown best = at_one;
  while (hi / lo > 1.0 + rel_tol) {
    const double mid = std::sqrt(lo * hi);
    const CostBreakdown c = total_cost(scn, mid);
    if (c.total_runtime <= runtime_budget) {
      hi = mid;
      best = c;
    } else {
      lo = mid;
    }
  }
  out.eta_min = hi;
  out.breakdown = best;
  return out;
}

/// Best achievable eta over Trotter orders 1, 2, 4 (ties to the lower order).
inline AchievableEta achievable_eta(const CostScenario& scn, double runtime_budget, double eta_floor = kEtaFloor,
                                    double rel_tol = kEtaRelativeTolerance) {
  AchievableEta best;
  for (int p : kTrotterOrders) {
    CostScenario s = scn;
    s.trotter_order = p;
    const AchievableEta r = achievable_eta_for_order(s, runtime_budget, eta_floor, rel_tol);
    if (r.feasible && (!best.feasible || r.eta_min < best.eta_min)) best = r;
  }
  return best;
}

/// Smallest runtime over Trotter orders needed to reach bin width eta.
inline CostBreakdown min_runtime_for_eta(const CostScenario& scn, double eta) {
  CostBreakdown best;
  best.total_runtime = HUGE_VAL;
  for (int p : kTrotterOrders) {
    CostScenario s = scn;
    s.trotter_order = p;
    const CostBreakdown c = total_cost(s, eta);
    if (c.total_runtime < best.total_runtime) best = c;
  }
  return best;
}

/// Largest depolarizing rate at which eta becomes achievable under the
/// scenario's eps_tar.
inline double noise_threshold_for_eta(const CostScenario& scn, double eta) {
  const CostBreakdown c = min_runtime_for_eta(scn, eta);
  return noise_rate_threshold(c.qubit_count, c.total_runtime, scn.epsilon_tar);
}

struct SweepGrid {
  std::vector<int> L{3, 5, 10};
  std::vector<double> epsilon{0.1, 0.05, 0.01};
  std::vector<Synthesis> synthesis{Synthesis::subcircuit, Synthesis::standard};
  std::vector<IndicatorKind> indicator{IndicatorKind::somma, IndicatorKind::cos2};
  std::vector<double> q_noise{1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
  /// Template for the remaining scenario fields (couplings, W_p, ...).
  CostScenario base;
  /// eps_tar follows each row's epsilon when true, base.epsilon_tar otherwise.
  bool epsilon_tar_follows_epsilon = true;

  [[nodiscard]] std::size_t size() const {
    return L.size() * epsilon.size() * synthesis.size() * indicator.size() * q_noise.size();
  }
};

struct SweepRow {
  int L = 0;
  double epsilon = 0.0;
  Synthesis synthesis = Synthesis::subcircuit;
  IndicatorKind indicator = IndicatorKind::cos2;
  double q_noise = 0.0;
  int trotter_order = 0;  // 0 when infeasible
  double runtime_budget = 0.0;
  double eta_min = std::numeric_limits<double>::quiet_NaN();
  bool feasible = false;
  int m = 0;
  double delta_over_dim = 0.0;
};

inline CostScenario sweep_scenario(const SweepGrid& grid, std::size_t index, double* q_out) {
  std::size_t i = index;
  const std::size_t nq = grid.q_noise.size();
  const std::size_t ni = grid.indicator.size();
  const std::size_t ns = grid.synthesis.size();
  const std::size_t ne = grid.epsilon.size();
  const double q = grid.q_noise[i % nq];
  i /= nq;
  const IndicatorKind kind = grid.indicator[i % ni];
  i /= ni;
  const Synthesis syn = grid.synthesis[i % ns];
  i /= ns;
  const double eps = grid.epsilon[i % ne];
  i /= ne;
  CostScenario scn = grid.base;
  scn.L = grid.L[i];
  scn.epsilon = eps;
  scn.synthesis = syn;
  scn.indicator = kind;
  scn.q_noise = q;
  if (grid.epsilon_tar_follows_epsilon) scn.epsilon_tar = eps;
  *q_out = q;
  return scn;
}

inline SweepRow sweep_cell(const SweepGrid& grid, std::size_t index) {
  double q = 0.0;
  const CostScenario scn = sweep_scenario(grid, index, &q);
  SweepRow row;
  row.L = scn.L;
  row.epsilon = scn.epsilon;
  row.synthesis = scn.synthesis;
  row.indicator = scn.indicator;
  row.q_noise = q;
  row.runtime_budget = noise_runtime_budget(qubit_count(scn.L) + scn.extra_qubits, q, scn.epsilon_tar);
  const AchievableEta a = achievable_eta(scn, row.runtime_budget);
  row.feasible = a.feasible;
  row.delta_over_dim = 16.0 * scn.epsilon;
  if (a.feasible) {
    row.eta_min = a.eta_min;
    row.trotter_order = a.best_p;
    row.m = inverse_params(a.eta_min, scn.epsilon, 1.0).m;
  }
  return row;
}

/// Cartesian sweep in grid order (L, epsilon, synthesis, indicator, q); rows
/// are written by index so the output does not depend on scheduling.
inline std::vector<SweepRow> figure_sweep(const SweepGrid& grid, int workers = 1) {
  grid.base.validate();
  const std::size_t n = grid.size();
  std::vector<SweepRow> rows(n);
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) rows[i] = sweep_cell(grid, i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = sweep_cell(grid, i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(workers, static_cast<int>(n));
  for (int w = 0; w < count; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace binspec
