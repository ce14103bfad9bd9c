#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "absorb/jump_law.hpp"
#include "absorb/limits.hpp"

using namespace absorb;
using boost::math::tgamma;

namespace {

// Γ(1−α)Γ(αx+1)/Γ(α(x−1)+1) − 1 straight from tgamma; fine for the small x used here.
double phi_oracle(double a, double x) { return tgamma(1 - a) * tgamma(a * x + 1) / tgamma(a * (x - 1) + 1) - 1; }

}  // namespace

TEST(Phi, Examples) {
  EXPECT_EQ(phi(0.3, 0.0), 0.0);
  EXPECT_NEAR(phi(0.5, 1.0), M_PI / 2 - 1, 1e-14);
  EXPECT_NEAR(phi(0.3, 5.0), phi_levy_integral(0.3, 5.0), 1e-8);
  EXPECT_THROW(phi(1.0, 1.0), std::domain_error);
  EXPECT_THROW(phi(0.5, -1.0), std::domain_error);
}

TEST(Phi, PositiveIncreasingAndLevyIntegral) {
  for (int ia = 1; ia <= 9; ++ia) {
    const double a = ia / 10.0;
    double prev = 0.0;
    for (double x = 0.1; x <= 20.0 + 1e-9; x += 0.1) {
      const double v = phi(a, x);
      ASSERT_GT(v, prev) << "a=" << a << " x=" << x;
      ASSERT_NEAR(v, phi_oracle(a, x), 1e-11 * std::max(1.0, v));
      ASSERT_NEAR(v, phi_levy_integral(a, x), 1e-8 * std::max(1.0, v)) << "a=" << a << " x=" << x;
      prev = v;
    }
  }
}

TEST(Phi, LaplaceExponentCallable) {
  const LaplaceExponent f(0.4);
  EXPECT_EQ(f.alpha(), 0.4);
  EXPECT_EQ(f(3.0), phi(0.4, 3.0));
  EXPECT_GT(levy_density(0.4, 1.0), 0.0);
}

TEST(ExpFunctional, Examples) {
  const auto m = exp_functional_moments(0.5, 3);
  EXPECT_EQ(m[0], 1.0);
  EXPECT_NEAR(m[1], 1.0 / (M_PI / 2 - 1), 1e-12);
  EXPECT_NEAR(m[1], 1.75194, 1e-5);
  EXPECT_THROW(exp_functional_moments(0.5, 13), std::domain_error);
}

TEST(ExpFunctional, TelescopesToMittagLeffler) {
  for (int ia = 1; ia <= 9; ++ia) {
    const double a = ia / 10.0;
    const auto ml = mittag_leffler_moments(a, 10);
    double v = 1.0;
    for (int k = 1; k <= 10; ++k) {
      v *= k / (1.0 + phi(a, k));
      EXPECT_NEAR(v, ml[k], 1e-10 * ml[k]) << "a=" << a << " k=" << k;
    }
  }
}

TEST(MittagLeffler, Examples) {
  EXPECT_EQ(mittag_leffler_moments(0.5, 0)[0], 1.0);
  EXPECT_NEAR(mittag_leffler_moments(0.5, 1)[1], 2.0 / M_PI, 1e-14);
  EXPECT_NEAR(mittag_leffler_moments(0.0, 3)[3], 6.0, 1e-13);
  for (double v : mittag_leffler_moments(1.0, 5)) EXPECT_EQ(v, 1.0);
}

TEST(Mixed, Examples) {
  EXPECT_NEAR(mixed_moments(0.5, 0, 0, MixedKind::QM), 1.0, 1e-15);
  const double a = 0.5;
  const double ref = 1.0 / ((1 + phi_oracle(a, 1)) * (1 + phi_oracle(a, 2)));
  EXPECT_NEAR(mixed_moments(a, 1, 1, MixedKind::QM), ref, 1e-14);
  EXPECT_NEAR(ref, 1.0 / M_PI, 1e-14);
  // E Q^n A^m carries the factor m!/(φ(1)⋯φ(m))
  const double qa = mixed_moments(a, 2, 3, MixedKind::QA);
  EXPECT_NEAR(qa, mixed_moments(a, 2, 3, MixedKind::QM) * exp_functional_moments(a, 3)[3], 1e-13 * qa);
}

TEST(Mixed, EtaMoments) {
  for (int ia = 1; ia <= 9; ++ia) {
    const double a = ia / 10.0;
    for (int m = 0; m <= 20; ++m) {
      const double eta = tgamma(a * (m - 1) + 1) / (tgamma(1 - a) * tgamma(a * m + 1));
      EXPECT_NEAR(mixed_moments(a, 0, m, MixedKind::QM), eta, 1e-10 * eta) << "a=" << a << " m=" << m;
    }
  }
}

TEST(Mixed, GeneralExponent) {
  // φ(s) = s: n!/∏_{k=0}^n (1+m+k)
  const auto lin = [](double s) { return s; };
  EXPECT_NEAR(mixed_moments(lin, 2, 1, MixedKind::QM), 2.0 / (2 * 3 * 4), 1e-15);
  EXPECT_NEAR(mixed_moments(lin, 0, 3, MixedKind::QA), 1.0 / 4, 1e-15);
}

TEST(Bivar, Examples) {
  EXPECT_NEAR(bivar_limit_moments(0.3, 0, 0), 1.0, 1e-14);
  EXPECT_NEAR(bivar_limit_moments(0.5, 1, 0), 2.0 / M_PI, 1e-14);
  for (double a : {0.2, 0.5, 0.8}) {
    const auto ml = mittag_leffler_moments(a, 6);
    for (int j = 0; j <= 6; ++j) EXPECT_NEAR(bivar_limit_moments(a, 0, j), ml[j], 1e-12 * ml[j]);
  }
}

TEST(Normalizers, WeakLaw) {
  const auto spec = normalizers_thm1(JumpLaw::bolthausen_sznitman(), 1000);
  EXPECT_EQ(spec.regime, Regime::WeakLaw);
  double h = 0.0;
  for (int k = 1; k <= 1000; ++k) h += 1.0 / k;
  EXPECT_NEAR(spec.a(1000), 1000 / h, 1e-9);
}

TEST(Normalizers, FiniteVariance) {
  const double q = 0.3;
  const auto spec = normalizers_thm2(JumpLaw::geometric(q));
  EXPECT_TRUE(spec.finite_variance);
  EXPECT_EQ(spec.target->alpha, 2.0);
  EXPECT_NEAR(spec.b(1000), 1000 * (1 - q), 1e-9);
  const double m = 1 / (1 - q), v = q / ((1 - q) * (1 - q));
  EXPECT_NEAR(spec.a(1000), std::sqrt(v * 1000 / (m * m * m)), 1e-9);
  EXPECT_THROW(normalizers_thm2(JumpLaw::bolthausen_sznitman()), std::domain_error);
}

TEST(Normalizers, InfiniteVarianceBeta) {
  for (double a : {0.25, 0.5, 0.75}) {
    const double al = 2 - a;
    const auto spec = normalizers_thm2(JumpLaw::beta_coalescent(a));
    EXPECT_FALSE(spec.finite_variance);
    EXPECT_NEAR(spec.target->C, 1 / tgamma(a), 1e-14);
    EXPECT_NEAR(spec.b(1e4), 1e4 * (al - 1), 1e-8);
    EXPECT_NEAR(spec.a(1e4), std::pow(al - 1, (al + 1) / al) * std::pow(1e4, 1 / al), 1e-8);
  }
}

TEST(Normalizers, SecondMomentGrowth) {
  for (double a : {0.5, 0.75}) {
    const auto law = JumpLaw::beta_coalescent(a);
    double s = 0.0;
    for (std::int64_t k = 1; k <= 100000; ++k) s += double(k) * double(k) * law.pmf(k);
    EXPECT_NEAR(s / std::pow(1e5, a), (2 - a) / tgamma(a + 1), 0.05 * (2 - a) / tgamma(a + 1)) << a;
  }
}

TEST(Normalizers, ExpFunctionalRegime) {
  const auto law = JumpLaw::beta_coalescent(1.5);
  const auto spec = normalizers_thm3(law);
  EXPECT_EQ(spec.regime, Regime::ExpFunctional);
  EXPECT_NEAR(spec.alpha, 0.5, 1e-15);
  EXPECT_NEAR(spec.a(1000), 1 / law.tail(1000), 1e-9);
}

TEST(Normalizers, BsClosedForms) {
  const auto spec = normalizers_thm4(JumpLaw::bolthausen_sznitman());
  EXPECT_EQ(spec.regime, Regime::StableOne);
  const double x = 1e6, l = std::log(x);
  const double b = x / l + x * std::log(l) / (l * l);
  EXPECT_NEAR(spec.b(x), b, 1e-6 * b);
  EXPECT_NEAR(spec.a(x), b * b / x, 1e-6 * b * b / x);
  EXPECT_EQ(spec.c(x), x);
  EXPECT_THROW(normalizers_thm4(JumpLaw::geometric(0.5)), std::domain_error);
}

TEST(Normalizers, GenericPathAgreesWithClosedForm) {
  const auto law = JumpLaw::bolthausen_sznitman();
  const auto closed = normalizers_thm4(law);
  const auto generic = normalizers_thm4(law, Thm4Path::Generic, 1e6);
  for (double x : {1e4, 1e6}) {
    const double r = generic.b(x) / closed.b(x);
    EXPECT_GE(r, 0.9) << x;
    EXPECT_LE(r, 1.1) << x;
    EXPECT_NEAR(generic.psi(generic.b(x)) / x, 1.0, 0.1) << x;
    EXPECT_NEAR(closed.psi(closed.b(x)) / x, 1.0, 0.1) << x;
  }
}
