#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "binspec/qeep.hpp"
#include "binspec/rng.hpp"

using namespace binspec;

namespace {

// p_j by brute force over every (eigenvalue, bin) pair.
std::vector<double> brute_p(const Spectrum& s, const IndicatorFunction& ind) {
  const int M = max_bin_index(ind.eta());
  std::vector<double> p(static_cast<std::size_t>(M + 1), 0.0);
  for (int j = 0; j <= M; ++j)
    for (std::size_t i = 0; i < s.dimension(); ++i)
      p[static_cast<std::size_t>(j)] += s.weights()[i] * ind.value(s.eigenvalues()[i] - (j * ind.eta() - 0.5));
  return p;
}

}  // namespace

TEST(ExactP, MatchesBruteForce) {
  for (auto kind : {IndicatorKind::cos2, IndicatorKind::somma}) {
    const auto ind = IndicatorFunction::make(kind, 0.07);
    const Spectrum s = synthetic_spectrum(SyntheticKind::uniform, 40, 8);
    const auto p = exact_p(s, ind);
    const auto q = brute_p(s, ind);
    for (std::size_t j = 0; j < q.size(); ++j) EXPECT_NEAR(p.values[j], q[j], 1e-15);
  }
}

TEST(ExactP, InteriorSpectrumSumsToOne) {
  // eigenvalues at distance >= eta from the window edges keep all their mass
  SyntheticParams sp;
  sp.lo = -0.35;
  sp.hi = 0.35;
  for (auto kind : {IndicatorKind::cos2, IndicatorKind::somma}) {
    const auto p = exact_p(synthetic_spectrum(SyntheticKind::uniform, 64, 9, sp), IndicatorFunction::make(kind, 0.1));
    EXPECT_NEAR(std::accumulate(p.values.begin(), p.values.end(), 0.0), 1.0, kind == IndicatorKind::cos2 ? 1e-12 : 1e-7);
  }
}

TEST(ExactP, EdgeSpectrumSumsAtMostOne) {
  const Spectrum s({-0.5, 0.5}, {0.5, 0.5}, 1.0, "edges");
  const auto p = exact_p(s, IndicatorFunction::cos2(0.3));  // M = 3, w_3 = 0.4
  const double total = std::accumulate(p.values.begin(), p.values.end(), 0.0);
  EXPECT_LE(total, 1.0 + 1e-12);
  EXPECT_NEAR(p.values[0], 0.5, 1e-15);
}

TEST(EstimateQ, TwoLevelExactSeries) {
  const Spectrum s({-0.2, 0.13}, {0.4, 0.6}, 1.0, "two-level");
  for (auto kind : {IndicatorKind::cos2, IndicatorKind::somma}) {
    const auto ind = IndicatorFunction::make(kind, 0.1);
    const int T = truncation_time(ind, 0.1);
    const auto q = estimate_q(exact_series(s, T), ind, T, 0.1);
    EXPECT_LE(l1_distance(q, exact_p(s, ind)), 0.05);
    EXPECT_LT(q.imag_residue, 1e-10);
    EXPECT_EQ(q.provenance, Provenance::estimated_q);
    EXPECT_EQ(q.truncation_T, T);
  }
}

TEST(EstimateQ, RandomSpectraWithinHalfEpsilon) {
  Engine e = make_engine(31, 0);
  for (int trial = 0; trial < 6; ++trial) {
    const auto kind = trial % 2 ? SyntheticKind::clustered : SyntheticKind::uniform;
    const Spectrum s = synthetic_spectrum(kind, 16 + 40 * trial, split_seed(31, trial));
    const double eta = uniform(e, 0.05, 0.3);
    for (double eps : {0.1, 0.01}) {
      const auto ind = IndicatorFunction::cos2(eta);
      const int T = truncation_time(ind, eps);
      EXPECT_LE(truncation_residual(s, ind, T), eps / 2.0);
    }
  }
}

TEST(EstimateQ, LinearInSeries) {
  const auto ind = IndicatorFunction::cos2(0.2);
  const Spectrum a = synthetic_spectrum(SyntheticKind::uniform, 10, 1);
  const Spectrum b = synthetic_spectrum(SyntheticKind::uniform, 10, 2);
  const int T = 30;
  const auto ga = exact_series(a, T);
  const auto gb = exact_series(b, T);
  std::vector<cplx> mix(ga.samples().size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 0.3 * ga.samples()[i] + 0.7 * gb.samples()[i];
  const auto qa = estimate_q(ga, ind, T);
  const auto qb = estimate_q(gb, ind, T);
  const auto qm = estimate_q(TimeSeries(T, mix, SeriesMode::exact, 0, 0), ind, T);
  for (std::size_t j = 0; j < qm.values.size(); ++j)
    EXPECT_NEAR(qm.values[j], 0.3 * qa.values[j] + 0.7 * qb.values[j], 1e-13);
  const auto zero = estimate_q(TimeSeries::zeros(T), ind, T);
  for (double v : zero.values) EXPECT_EQ(v, 0.0);
}

TEST(EstimateQ, ResidualShrinksWithT) {
  const Spectrum s = synthetic_spectrum(SyntheticKind::gapped, 32, 3);
  const auto ind = IndicatorFunction::cos2(0.1);
  double prev = HUGE_VAL;
  for (int T : {20, 60, 180, 540}) {
    const double r = truncation_residual(s, ind, T);
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(EstimateQ, Validation) {
  const auto ind = IndicatorFunction::cos2(0.1);
  const auto g = TimeSeries::zeros(5);
  EXPECT_THROW(estimate_q(g, ind, 0), ValidationError);
  EXPECT_THROW(estimate_q(g, ind, 6), ValidationError);
}

TEST(TruncationTimeInteger, SommaRespectsAlphaFloor) {
  const auto ind = IndicatorFunction::somma(0.5, 500.0);
  EXPECT_EQ(truncation_time(ind, 0.1), 1000);
  EXPECT_EQ(truncation_time(IndicatorFunction::cos2(0.1), 0.1), 179);
}

TEST(ClipAndRenormalize, KeepsTotalAndRange) {
  BinnedEstimate q;
  q.eta = 0.25;
  q.values = {-0.05, 0.3, 0.5, 0.3, -0.05};
  const auto c = clip_and_renormalize(q);
  for (double v : c.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_NEAR(std::accumulate(c.values.begin(), c.values.end(), 0.0), 1.0, 1e-14);
}
