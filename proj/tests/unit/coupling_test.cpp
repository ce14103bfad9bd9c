#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "absorb/coupling.hpp"
#include "absorb/exact.hpp"
#include "absorb/stats.hpp"

using namespace absorb;

namespace {

std::vector<std::int64_t> to_int(const std::vector<double>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Coupling, StateTwo) {
  Stream s(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto r = simulate_replicate(JumpLaw::beta_coalescent(1.5), 2, s, {.track_jump_sizes = true});
    ASSERT_EQ(r.M, 1);
    ASSERT_EQ(r.N, r.Y == 2 ? 1 : 2);
    ASSERT_GE(r.T, 1);
    ASSERT_EQ(r.jump_size_counts.size(), 1u);
    ASSERT_EQ(r.jump_size_counts.begin()->first, 1);
  }
}

TEST(Coupling, PathwiseInvariants) {
  Stream s(6, 0);
  for (const auto& law : {JumpLaw::bolthausen_sznitman(), JumpLaw::geometric(0.5), JumpLaw::beta_coalescent(0.5)}) {
    for (int i = 0; i < 2000; ++i) {
      const std::int64_t n = 2 + i % 300;
      const auto r = simulate_replicate(law, n, s, {.track_jump_sizes = true});
      std::int64_t weighted = 0, count = 0;
      for (const auto& [size, c] : r.jump_size_counts) {
        weighted += size * c;
        count += c;
      }
      ASSERT_EQ(weighted, n - 1);
      ASSERT_EQ(count, r.M);
      ASSERT_EQ(r.T, r.M + r.M0);
      ASSERT_GE(r.Y, 1);
      ASSERT_LE(r.Y, n);
      ASSERT_LE(r.N, n);
      ASSERT_LE(r.M, n - 1);
    }
  }
}

TEST(Coupling, IterationCap) {
  Stream s(1, 0);
  EXPECT_THROW(simulate_replicate(JumpLaw::geometric(0.999), 1000, s, {.max_proposals = 3}), IterationCapExceeded);
}

TEST(Coupling, MatchesExactLawOfX) {
  for (const auto& law : {JumpLaw::bolthausen_sznitman(), JumpLaw::beta_coalescent(0.5), JumpLaw::table({0.3, 0.3, 0.4})}) {
    for (std::int64_t n : {3, 7, 12}) {
      const auto sum = run_experiment(law, n, 200000, 11, {statistic("M")}, {.keep_samples = true});
      const auto exact = pmf_X(TransitionKernel::from_jump_law(law), n);
      EXPECT_GT(chi_square_gof(make_histogram(to_int(sum["M"].sample)), exact).p_value, 1e-3) << law.name() << n;
    }
  }
}

TEST(Coupling, MatchesExactLawOfN) {
  const auto law = JumpLaw::beta_coalescent(1.5);
  const auto sum = run_experiment(law, 100, 200000, 12, {statistic("N")}, {.keep_samples = true});
  EXPECT_GT(chi_square_gof(make_histogram(to_int(sum["N"].sample)), pmf_N(law, 100)).p_value, 1e-3);
}

TEST(Coupling, OvershootMean) {
  const auto law = JumpLaw::geometric(0.5);
  const auto sum = run_experiment(law, 100, 100000, 13, {statistic("Y")});
  EXPECT_NEAR(sum["Y"].mean, pmf_Y(law, 100).mean(), 4.0 * sum["Y"].std_error);
}

TEST(Experiment, SingleReplicate) {
  const auto sum = run_experiment(JumpLaw::bolthausen_sznitman(), 50, 1, 3, {statistic("M"), statistic("N")});
  Stream s(3, 0);
  const auto r = simulate_replicate(JumpLaw::bolthausen_sznitman(), 50, s);
  EXPECT_EQ(sum["M"].mean, r.M);
  EXPECT_EQ(sum["N"].mean, r.N);
  EXPECT_TRUE(std::isnan(sum["M"].std_error));
  EXPECT_THROW(sum["T"], std::out_of_range);
}

TEST(Experiment, DeterministicAcrossThreads) {
  const auto law = JumpLaw::beta_coalescent(1.5);
  const std::vector<Statistic> st{statistic("M"), statistic("N"), statistic("Y"), statistic("M0")};
  const auto a = run_experiment(law, 500, 5000, 99, st, {.threads = 1});
  const auto b = run_experiment(law, 500, 5000, 99, st, {.threads = 4});
  const auto c = run_experiment(law, 500, 5000, 99, st, {.threads = 1});
  for (std::size_t i = 0; i < st.size(); ++i)
    for (int p = 0; p < 4; ++p) {
      EXPECT_EQ(a.stats[i].power_sum[p], b.stats[i].power_sum[p]);
      EXPECT_EQ(a.stats[i].power_sum[p], c.stats[i].power_sum[p]);
    }
}

// E M_n log n / n is still 1.195 at n = 1e4 (exact), so the check is against the
// exact mean rather than against the limit 1.
TEST(Experiment, BsWeakLaw) {
  const auto law = JumpLaw::bolthausen_sznitman();
  const auto sum = run_experiment(law, 10000, 10000, 21, {statistic("M")});
  const double exact = moments_X(TransitionKernel::from_jump_law(law), 10000, 1)(1, 10000);
  EXPECT_NEAR(sum["M"].mean, exact, 4 * sum["M"].std_error);
  const double r = exact * std::log(1e4) / 1e4;
  EXPECT_GT(r, 1.0);
  EXPECT_LT(r, 1.2);
}

// n = 2: M_2 = 1 and N_2 = 2 exactly when ξ_1 = 1, which leaves Y_2 = 1 and M̂_1 = 0.
TEST(Decomposition, StateTwo) {
  const auto d = decomposition_check(JumpLaw::geometric(0.5), 2, 1000, 1);
  for (std::size_t i = 0; i < d.coupled.size(); ++i) {
    ASSERT_EQ(d.coupled[i], d.coupled_y[i] == 2 ? 1 : 0);
    ASSERT_EQ(d.resampled[i], d.resampled_y[i] == 2 ? 1 : 0);
  }
}

TEST(Decomposition, EqualInLaw) {
  const auto g = decomposition_check(JumpLaw::geometric(0.5), 50, 100000, 31);
  EXPECT_GT(chi_square_two_sample(make_histogram(g.coupled), make_histogram(g.resampled)).p_value, 1e-3);
  const auto b = decomposition_check(JumpLaw::beta_coalescent(1.5), 1000, 10000, 32);
  EXPECT_GT(chi_square_two_sample(make_histogram(b.coupled), make_histogram(b.resampled)).p_value, 1e-3);
}

// M_n − N_n settles to M'_W − 1 in the finite-mean regime.
TEST(Decomposition, FiniteMeanStabilizes) {
  const auto law = JumpLaw::geometric(0.5);
  const std::vector<Statistic> st{statistic("M_minus_N_plus_1")};
  const auto a = run_experiment(law, 500, 1000000, 41, st, {.keep_samples = true});
  const auto b = run_experiment(law, 1000, 1000000, 42, st, {.keep_samples = true});
  const auto ha = make_histogram(to_int(a.stats[0].sample)), hb = make_histogram(to_int(b.stats[0].sample));
  std::map<std::int64_t, double> diff;
  for (const auto& [k, c] : ha) diff[k] += c / 1e6;
  for (const auto& [k, c] : hb) diff[k] -= c / 1e6;
  double tv = 0.0;
  for (const auto& [k, d] : diff) tv += std::abs(d);
  EXPECT_LT(tv / 2, 0.02);

  // exact limit: Σ_w P{W=w} P{X_w = j}
  const auto w = pmf_W(law, 60);
  const auto tab = pmf_X_table(TransitionKernel::from_jump_law(law), 60);
  Eigen::VectorXd lim = Eigen::VectorXd::Zero(61);
  for (std::int64_t k = 1; k <= 60; ++k)
    for (std::int64_t j = 0; j <= 60; ++j) lim[j] += w.at(k) * tab[k - 1].at(j);
  const PmfVector limit(0, lim, w.residual);
  EXPECT_GT(chi_square_gof(hb, limit).p_value, 1e-3);
}
