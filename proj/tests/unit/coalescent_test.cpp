#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <gtest/gtest.h>

#include "absorb/coalescent.hpp"
#include "absorb/exact.hpp"
#include "absorb/limits.hpp"
#include "absorb/stats.hpp"

using namespace absorb;

namespace {

// g_{nk} = ∫ x^{n−k−1}(1−x)^{k−1} Λ(dx) with Λ = beta(a, b) by quadrature.
double rate_quad(double a, double b, int n, int k) {
  const double B = boost::math::beta(a, b);
  auto f = [&](double x) { return std::pow(x, n - k - 1 + a - 1) * std::pow(1 - x, k - 1 + b - 1) / B; };
  return boost::math::binomial_coefficient<double>(n, k - 1) *
         boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
}

}  // namespace

TEST(Rates, QuadratureAtUniform) {
  const CoalescentParams p{1.0, 1.0};
  for (int k : {1, 2}) EXPECT_NEAR(rate_gnk(p, 3, k), rate_quad(1, 1, 3, k), 1e-10);
  for (int k = 1; k < 7; ++k) EXPECT_NEAR(rate_gnk({0.7, 2.3}, 8, k), rate_quad(0.7, 2.3, 8, k), 1e-10);
}

TEST(Rates, AdjacentMerger) {
  for (double a : {0.5, 1.0, 1.5})
    for (int k = 2; k < 30; ++k) {
      const double ref = k * (k + 1) / 2.0 * boost::math::beta(a, k) / boost::math::beta(a, 1.0);
      EXPECT_NEAR(rate_gnk({a, 1.0}, k + 1, k), ref, 1e-12 * ref);
    }
  EXPECT_NEAR(rate_gnk({1.0, 1.0}, 3, 2), 1.5, 1e-15);
}

TEST(Rates, SimplifiedMatchesGeneral) {
  for (double a : {0.5, 1.0, 1.5})
    for (int n = 2; n <= 100; ++n)
      for (int k = 1; k < n; ++k) {
        const CoalescentParams p{a, 1.0};
        const double g = rate_gnk_general(p, n, k);
        ASSERT_NEAR(rate_gnk(p, n, k), g, 1e-12 * g) << a << ' ' << n << ' ' << k;
        ASSERT_GT(g, 0.0);
      }
}

TEST(Rates, Positive) {
  for (auto p : {CoalescentParams{0.3, 0.4}, CoalescentParams{2.0, 1.0}, CoalescentParams{5.0, 3.0}})
    for (int n = 2; n <= 200; n += 3)
      for (int k = 1; k < n; ++k) ASSERT_GT(rate_gnk(p, n, k), 0.0);
  EXPECT_THROW(rate_gnk({1.0, 1.0}, 3, 3), std::domain_error);
  EXPECT_THROW(CoalescentParams({0.0, 1.0}).validate(), std::domain_error);
}

TEST(TotalRate, Examples) {
  EXPECT_NEAR(total_rate({2.0, 1.0}, 3), 5.0 / 3, 1e-14);
  EXPECT_NEAR(total_rate_closed({2.0, 1.0}, 3), 5.0 / 3, 1e-14);
  EXPECT_EQ(total_rate({0.7, 2.0}, 2), rate_gnk({0.7, 2.0}, 2, 1));
  for (double a : {0.5, 1.0, 1.5, 1.9, 3.0}) {
    const double s = total_rate({a, 1.0}, 50);
    EXPECT_NEAR(total_rate_closed({a, 1.0}, 50), s, 1e-9 * s) << a;
  }
}

TEST(CollisionKernelTest, MatchesJumpLawKernel) {
  for (double a : {0.25, 0.5, 1.0, 1.5, 1.75}) {
    const auto ck = collision_kernel({a, 1.0}, 200);
    EXPECT_TRUE(ck.jump_law_regime);
    const auto law = JumpLaw::beta_coalescent(a);
    for (std::int64_t n = 2; n <= 200; ++n) {
      const auto dense = kernel_of(law, n);
      const auto row = ck.kernel.row(n);
      ASSERT_NEAR(row.sum(), 1.0, 1e-12);
      for (std::int64_t j = 1; j < n; ++j) ASSERT_NEAR(row.coeff(j), dense[j - 1], 1e-10) << a << ' ' << n << ' ' << j;
    }
  }
  const auto bs = collision_kernel({1.0, 1.0}, 3).kernel;
  EXPECT_NEAR(bs.probability(3, 1), 0.75, 1e-15);
  EXPECT_NEAR(bs.probability(3, 2), 0.25, 1e-15);
}

TEST(CollisionKernelTest, OutsideRegimeFlagged) {
  const auto ck = collision_kernel({2.0, 1.0}, 50);
  EXPECT_FALSE(ck.jump_law_regime);
  EXPECT_FALSE(ck.kernel.jump_law_form());
  EXPECT_NEAR(ck.kernel.row(50).sum(), 1.0, 1e-12);
  EXPECT_FALSE(collision_kernel({1.0, 2.0}, 10).jump_law_regime);
}

TEST(Collisions, StateTwo) {
  Stream s(1, 0);
  EXPECT_EQ(simulate_collisions({1.3, 0.8}, 2, s), 1);
}

TEST(Collisions, MatchExactLaw) {
  const CoalescentParams p{1.5, 1.0};
  const auto k = collision_kernel(p, 12).kernel;
  for (std::int64_t n : {3, 6, 12}) {
    const auto x = collision_counts(p, n, 1000000, 77);
    EXPECT_GT(chi_square_gof(make_histogram(x), pmf_X(k, n)).p_value, 1e-3) << n;
  }
  // general (a, b): the jump chain is still exact
  const CoalescentParams q{0.8, 2.5};
  const auto x = collision_counts(q, 10, 200000, 78);
  EXPECT_GT(chi_square_gof(make_histogram(x), pmf_X(collision_kernel(q, 10).kernel, 10)).p_value, 1e-3);
}

TEST(Collisions, UncachedRowsAgree) {
  // a zero-byte cache forces every draw through the on-demand path
  const CoalescentParams p{1.0, 1.0};
  const CollisionSampler cached(p, 40), bare(p, 40, 0);
  EXPECT_EQ(bare.cached_max(), 1);
  Stream a(9, 0), b(9, 0);
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t m = 2 + i % 39;
    ASSERT_EQ(cached.draw(m, a), bare.draw(m, b));
  }
}

TEST(Collisions, ThreadInvariant) {
  EXPECT_EQ(collision_counts({1.2, 1.0}, 300, 3000, 5, 1), collision_counts({1.2, 1.0}, 300, 3000, 5, 3));
}

// The scaled spread widens slowly towards the stable limit (log-order corrections);
// at these sizes it is still about half of the limiting IQR.
TEST(Collisions, BsSpreadApproachesStableLimit) {
  const auto spec = normalizers_thm4(JumpLaw::bolthausen_sznitman());
  const auto spread = [&](std::int64_t n) {
    const auto x = collision_counts({1.0, 1.0}, n, 10000, 100 + n);
    std::vector<double> z;
    for (auto v : x) z.push_back((v - spec.b(n)) / spec.a(n));
    return quantile(z, 0.75) - quantile(z, 0.25);
  };
  const auto inverse = [&](double p) {
    double lo = -50, hi = 50;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (stable_cdf(*spec.target, mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double limit = inverse(0.75) - inverse(0.25);
  const double small = spread(1000), large = spread(10000);
  std::printf("IQR n=1e3: %.4f  n=1e4: %.4f  limit: %.4f\n", small, large, limit);
  EXPECT_LT(small, large);
  EXPECT_LT(large, limit);
}
