#include <cmath>

#include <gtest/gtest.h>

#include "absorb/coalescent.hpp"
#include "absorb/jump_law.hpp"
#include "absorb/kernel.hpp"

using namespace absorb;

TEST(Kernel, BsAtThree) {
  const auto k = kernel_of(JumpLaw::bolthausen_sznitman(), 3);
  ASSERT_EQ(k.size(), 2);
  EXPECT_NEAR(k[0], 0.75, 1e-15);
  EXPECT_NEAR(k[1], 0.25, 1e-15);
}

TEST(Kernel, StateTwoIsPointMass) {
  for (const auto& law : {JumpLaw::bolthausen_sznitman(), JumpLaw::geometric(0.9), JumpLaw::beta_coalescent(0.3)}) {
    const auto k = kernel_of(law, 2);
    ASSERT_EQ(k.size(), 1);
    EXPECT_EQ(k[0], 1.0);
  }
  EXPECT_THROW(kernel_of(JumpLaw::geometric(0.5), 1), std::invalid_argument);
}

TEST(Kernel, RowsSumToOne) {
  for (const auto& law : {JumpLaw::bolthausen_sznitman(), JumpLaw::beta_coalescent(0.25), JumpLaw::beta_coalescent(1.75),
                          JumpLaw::geometric(0.5), JumpLaw::table({0.1, 0.0, 0.9})}) {
    for (std::int64_t n : {2, 3, 10, 100, 1000, 10000}) {
      const auto k = kernel_of(law, n);
      ASSERT_LT(std::abs(k.sum() - 1.0), 1e-12) << law.name() << " n=" << n;
      ASSERT_GE(k.minCoeff(), 0.0);
    }
  }
}

TEST(Kernel, MatchesCoalescentRates) {
  for (double a : {0.5, 1.0, 1.5}) {
    const auto k = kernel_of(JumpLaw::beta_coalescent(a), 10);
    const CoalescentParams p{a, 1.0};
    const double g = total_rate(p, 10);
    for (std::int64_t j = 1; j < 10; ++j) EXPECT_NEAR(k[j - 1], rate_gnk(p, 10, 10 - j) / g, 1e-10) << "a=" << a;
  }
}

TEST(Kernel, TransitionKernelWrapsJumpLaw) {
  const auto law = JumpLaw::beta_coalescent(1.5);
  const auto tk = TransitionKernel::from_jump_law(law);
  ASSERT_NE(tk.jump_law(), nullptr);
  EXPECT_TRUE(tk.jump_law_form());
  const auto dense = kernel_of(law, 40);
  const auto row = tk.row(40);
  for (std::int64_t j = 1; j < 40; ++j) {
    EXPECT_NEAR(tk.probability(40, j), dense[j - 1], 1e-15);
    EXPECT_NEAR(row.coeff(j), dense[j - 1], 1e-15);
  }
  EXPECT_EQ(tk.probability(40, 40), 0.0);
}

TEST(Kernel, Counterexample) {
  const auto tk = counterexample_kernel();
  EXPECT_EQ(tk.jump_law(), nullptr);
  EXPECT_FALSE(tk.jump_law_form());
  EXPECT_EQ(tk.probability(2, 1), 1.0);
  EXPECT_NEAR(tk.probability(10, 9), 0.1, 1e-15);
  EXPECT_NEAR(tk.probability(10, 1), 0.9, 1e-15);
  EXPECT_EQ(tk.probability(10, 5), 0.0);
}
