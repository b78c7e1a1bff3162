#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "binspec/indicator.hpp"
#include "binspec/product_log.hpp"
#include "binspec/rng.hpp"

using namespace binspec;

namespace {

// Composite Simpson rule, used as a quadrature independent of the library's.
template <class F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// W_{-1} by plain bisection on [-800, -1].
double product_log_bisect(double y) {
  double lo = -800.0, hi = -1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) > y) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(ProductLog, FrozenValues) {
  // mpmath lambertw(y, -1)
  EXPECT_NEAR(product_log_m1(-0.3678), -1.0209272394094255, 1e-9);
  EXPECT_NEAR(product_log_m1(-0.2), -2.5426413577735263, 1e-13);
  EXPECT_NEAR(product_log_m1(-1e-3), -9.1180064704027401, 1e-12);
  EXPECT_NEAR(product_log_m1(-1e-8), -21.488183944009797, 1e-12);
  EXPECT_NEAR(product_log_m1(-1e-100), -235.72115887568531, 1e-10);
  EXPECT_DOUBLE_EQ(product_log_m1(-1.0 / std::numbers::e), -1.0);
}

TEST(ProductLog, AgreesWithBisection) {
  Engine e = make_engine(21, 0);
  for (int i = 0; i < 200; ++i) {
    const double y = -std::exp(uniform(e, -300.0, -1.0));
    const double w = product_log_m1(y);
    EXPECT_NEAR(w, product_log_bisect(y), 1e-9 * std::abs(w));
    EXPECT_NEAR(w * std::exp(w), y, 1e-12 * std::abs(y));
    EXPECT_LE(w, -1.0);
  }
}

TEST(ProductLog, DomainErrors) {
  EXPECT_THROW(product_log_m1(0.0), ValidationError);
  EXPECT_THROW(product_log_m1(-0.5), ValidationError);
  EXPECT_THROW(product_log_m1(std::nan("")), ValidationError);
}

TEST(Bump, IntegralFrozen) {
  EXPECT_NEAR(detail::bump_integral(), 0.443993816168079437823, 1e-14);
  EXPECT_NEAR(somma_unit_norm(), 1.0 / 0.443993816168079437823, 1e-13);
}

TEST(Bump, NormalisationScalesWithEta) {
  for (double eta : {0.01, 0.1, 0.5}) {
    const auto n = normalize_somma(eta);
    EXPECT_NEAR(n.c, 2.0 / eta, 1e-15);
    EXPECT_NEAR(n.a * eta / 2.0, somma_unit_norm(), 1e-9 * somma_unit_norm());
  }
}

TEST(Somma, PointValuesFrozen) {
  // mpmath: Phi(2w/eta + 1) - Phi(2w/eta - 1)
  EXPECT_NEAR(IndicatorFunction::somma(0.1).value(0.0), 1.0, 1e-14);
  EXPECT_NEAR(IndicatorFunction::somma(0.1).value(0.03), 0.81287223431123231, 1e-12);
  EXPECT_NEAR(IndicatorFunction::somma(0.1).value(-0.07), 0.18712776568876769, 1e-12);
  EXPECT_NEAR(IndicatorFunction::somma(0.2).value(0.15), 0.12296728327732916, 1e-12);
  EXPECT_NEAR(IndicatorFunction::somma(0.05).value(0.01), 0.93059627949989589, 1e-12);
}

TEST(Somma, FourierCoefficientsFrozen) {
  // mpmath: (1/2pi) int f(w) cos(t w) dw with f from nested quadrature
  EXPECT_NEAR(IndicatorFunction::somma(0.1).fourier_coeff(1), 0.015905719641245197, 1e-14);
  EXPECT_NEAR(IndicatorFunction::somma(0.1).fourier_coeff(10), 0.014961073398882578, 1e-14);
  EXPECT_NEAR(IndicatorFunction::somma(0.1).fourier_coeff(37), 0.0062357837429411191, 1e-14);
  EXPECT_NEAR(IndicatorFunction::somma(0.2).fourier_coeff(5), 0.029922146797765157, 1e-14);
  EXPECT_NEAR(IndicatorFunction::somma(0.25).fourier_coeff(-20), 0.0055695368125237216, 1e-14);
}

TEST(Somma, CoefficientMatchesDirectConvolutionIntegral) {
  const auto ind = IndicatorFunction::somma(0.3);
  for (long t : {0L, 2L, 9L, 25L}) {
    const double direct =
        simpson([&](double w) { return ind.value(w) * std::cos(t * w); }, -0.3, 0.3, 4000) / (2.0 * std::numbers::pi);
    EXPECT_NEAR(ind.fourier_coeff(t), direct, 1e-10) << t;
  }
}

TEST(Cos2, CoefficientsFrozen) {
  EXPECT_NEAR(IndicatorFunction::cos2(0.1).fourier_coeff(1), 0.015905096977612591, 1e-15);
  EXPECT_NEAR(IndicatorFunction::cos2(0.1).fourier_coeff(31), 0.0081159158669555775, 1e-15);
  EXPECT_NEAR(IndicatorFunction::cos2(0.3).fourier_coeff(7), 0.035479444055283335, 1e-15);
  EXPECT_NEAR(IndicatorFunction::cos2(0.05).fourier_coeff(100), 0.00099552897904650085, 1e-15);
}

TEST(Cos2, RemovablePointIsEtaOverFourPi) {
  // eta = pi/10 puts t = 10 exactly on pi/eta
  const double eta = std::numbers::pi / 10.0;
  EXPECT_NEAR(IndicatorFunction::cos2(eta).fourier_coeff(10), eta / (4.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(IndicatorFunction::cos2(eta).fourier_coeff(0), eta / (2.0 * std::numbers::pi), 1e-16);
}

TEST(Cos2, ClosedFormMatchesQuadratureProperty) {
  Engine e = make_engine(22, 0);
  for (int i = 0; i < 60; ++i) {
    const double eta = uniform(e, 0.02, 1.0);
    const long t = static_cast<long>(uniform(e, 0.0, 400.0));
    const auto ind = IndicatorFunction::cos2(eta);
    const double direct = simpson([&](double w) { return ind.value(w) * std::cos(t * w); }, -eta, eta, 200000) /
                          (2.0 * std::numbers::pi);
    EXPECT_NEAR(ind.fourier_coeff(t), direct, 1e-10) << "eta=" << eta << " t=" << t;
    EXPECT_EQ(ind.fourier_coeff(t), ind.fourier_coeff(-t));
  }
}

TEST(Indicators, PartitionOfUnityAndRange) {
  Engine e = make_engine(23, 0);
  for (int trial = 0; trial < 8; ++trial) {
    const double eta = uniform(e, 0.01, 0.9);
    for (auto kind : {IndicatorKind::cos2, IndicatorKind::somma}) {
      const auto ind = IndicatorFunction::make(kind, eta);
      const double tol = kind == IndicatorKind::cos2 ? 1e-12 : 1e-7;
      for (int i = 0; i <= 200; ++i) {
        const double w = eta * i / 200.0;
        EXPECT_NEAR(ind.value(w) + ind.value(w - eta), 1.0, tol);
        EXPECT_GE(ind.value(w), 0.0);
        EXPECT_LE(ind.value(w), 1.0 + 1e-15);
        EXPECT_NEAR(ind.value(w), ind.value(-w), 1e-15);
      }
      EXPECT_EQ(ind.value(eta), 0.0);
      EXPECT_EQ(ind.value(-1.5 * eta), 0.0);
    }
  }
}

TEST(Indicators, Validation) {
  EXPECT_THROW(IndicatorFunction::cos2(0.0), ValidationError);
  EXPECT_THROW(IndicatorFunction::cos2(1.5), ValidationError);
  EXPECT_THROW(IndicatorFunction::somma(0.1, 0.5), ValidationError);
  EXPECT_THROW(indicator_kind_from_string("gauss"), ValidationError);
  EXPECT_EQ(max_bin_index(0.1), 10);
  EXPECT_EQ(max_bin_index(0.3), 3);
  EXPECT_EQ(max_bin_index(1.0), 1);
}

TEST(Somma, DecayBoundAndAlpha) {
  const double eta = 0.1;
  const auto a = estimate_alpha(eta);
  EXPECT_GE(a.alpha, 1.0);
  const auto ind = IndicatorFunction::somma(eta, a.alpha);
  for (long t = a.verified_t_min; t <= a.verified_t_max; t += 7)
    EXPECT_LE(std::abs(ind.fourier_coeff(t)), decay_bound_somma(eta, t, a.alpha));
  EXPECT_THROW(decay_bound_somma(eta, 1.0, 2.0), ValidationError);
}

TEST(TruncationTime, FrozenValues) {
  // mpmath: (2/eta)(1 + W_{-1}(-eps eta/(32e)))^2 and (pi/eta) e^{x/2}/sqrt(e^x - 1)
  EXPECT_NEAR(min_time_somma(0.1, 0.1), 2211.1002844266479, 1e-8);
  EXPECT_NEAR(min_time_somma(0.05, 0.01), 7571.8027706051942, 1e-7);
  EXPECT_NEAR(min_time_somma(1e-3, 0.01), 642168.11153227364, 1e-5);
  EXPECT_NEAR(min_time_cos2(0.1, 0.1), 178.63927499248502, 1e-9);
  EXPECT_NEAR(min_time_cos2(0.05, 0.01), 1585.9535177688244, 1e-8);
  EXPECT_NEAR(min_time_cos2(1e-3, 0.01), 560503.52379536242, 1e-5);
  EXPECT_NEAR(min_time_cos2(0.5, 0.1), 16.479780944492769, 1e-11);
}

TEST(TruncationTime, SommaSaturatesDecayIdentity) {
  for (double eta : {0.01, 0.1, 0.4}) {
    for (double eps : {0.1, 0.01}) {
      const double s = std::sqrt(min_time_somma(eta, eps) * eta / 2.0);
      EXPECT_NEAR(std::exp(-s) * (1.0 + s), eps * eta / 32.0, 1e-12 * eps * eta);
    }
  }
}

TEST(TruncationTime, MonotoneAndOrdered) {
  for (double eta = 1e-3; eta < 0.5; eta *= 1.3) {
    for (double eps : {0.1, 0.05, 0.01}) {
      EXPECT_LT(min_time_cos2(eta, eps), min_time_somma(eta, eps));
      EXPECT_GT(min_time_cos2(eta, eps / 2), min_time_cos2(eta, eps));
      EXPECT_GT(min_time_somma(eta, eps / 2), min_time_somma(eta, eps));
    }
  }
}
