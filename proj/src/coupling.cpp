#include "absorb/coupling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <mutex>
#include <thread>

#include "absorb/exact.hpp"

namespace absorb {

ReplicateResult simulate_replicate(const JumpLaw& law, std::int64_t n, Stream& stream, const SimulationOptions& opts) {
  if (n < 2) throw std::invalid_argument("simulate_replicate: need n >= 2");
  ReplicateResult out;
  out.n = n;
  std::int64_t S = 0;
  std::int64_t R = 0;
  std::int64_t k = 0;
  bool have_N = false;
  bool hit = false;
  while (!(have_N && hit)) {
    if (k >= opts.max_proposals) throw IterationCapExceeded("simulate_replicate: proposal cap reached");
    const std::int64_t xi = sample_xi(law, stream);
    ++k;
    if (!have_N) {
      if (xi >= n - S) {
        out.N = k;
        out.Y = n - S;
        have_N = true;
      } else {
        S += xi;
      }
    }
    if (!hit) {
      ++out.T;
      if (xi < n - R) {
        R += xi;
        ++out.M;
        if (opts.track_jump_sizes) ++out.jump_size_counts[xi];
        hit = (R == n - 1);
      } else {
        ++out.M0;
      }
    }
  }
  return out;
}

Statistic statistic(const std::string& name) {
  using R = ReplicateResult;
  if (name == "M") return {name, [](const R& r) { return static_cast<double>(r.M); }};
  if (name == "N") return {name, [](const R& r) { return static_cast<double>(r.N); }};
  if (name == "Y") return {name, [](const R& r) { return static_cast<double>(r.Y); }};
  if (name == "T") return {name, [](const R& r) { return static_cast<double>(r.T); }};
  if (name == "M0") return {name, [](const R& r) { return static_cast<double>(r.M0); }};
  if (name == "M_minus_N_plus_1") return {name, [](const R& r) { return static_cast<double>(r.M - r.N + 1); }};
  throw std::invalid_argument("unknown statistic: " + name);
}

const StatisticSummary& ExperimentSummary::operator[](const std::string& name) const {
  for (const auto& s : stats) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("no statistic named " + name);
}

void parallel_blocks(std::int64_t count, int threads,
                     const std::function<void(std::int64_t, std::int64_t)>& body) {
  constexpr std::int64_t kBlock = 1024;
  const std::int64_t blocks = (count + kBlock - 1) / kBlock;
  const int workers = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(blocks, 1)));
  std::atomic<std::int64_t> next{0};
  auto run = [&] {
    for (std::int64_t b = next++; b < blocks; b = next++) body(b * kBlock, std::min(count, (b + 1) * kBlock));
  };
  if (workers == 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      try {
        run();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = blocks;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

ExperimentSummary run_experiment(const JumpLaw& law, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                 const std::vector<Statistic>& stats, const ExperimentOptions& opts) {
  if (reps < 1) throw std::invalid_argument("run_experiment: need reps >= 1");
  const auto n_stats = stats.size();
  std::vector<double> values(static_cast<std::size_t>(reps) * n_stats);
  std::vector<ReplicateResult> kept(opts.keep_replicates ? reps : 0);

  parallel_blocks(reps, opts.threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      Stream stream(seed, static_cast<std::uint64_t>(r));
      ReplicateResult res = simulate_replicate(law, n, stream, opts.sim);
      for (std::size_t s = 0; s < n_stats; ++s) values[r * n_stats + s] = stats[s].fn(res);
      if (opts.keep_replicates) kept[r] = std::move(res);
    }
  });

  ExperimentSummary out;
  out.law = law.name();
  out.n = n;
  out.reps = reps;
  out.seed = seed;
  out.replicates = std::move(kept);
  const double dr = static_cast<double>(reps);
  for (std::size_t s = 0; s < n_stats; ++s) {
    StatisticSummary sum;
    sum.name = stats[s].name;
    sum.count = reps;
    double p8[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    // fixed replicate order keeps the reduction bit-stable
    for (std::int64_t r = 0; r < reps; ++r) {
      const double v = values[r * n_stats + s];
      double pw = 1.0;
      for (int p = 0; p < 8; ++p) {
        pw *= v;
        p8[p] += pw;
      }
    }
    for (int p = 0; p < 4; ++p) {
      sum.power_sum[p] = p8[p];
      sum.moment[p] = p8[p] / dr;
    }
    sum.mean = sum.moment[0];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (reps > 1) {
      const double var = std::max(0.0, (p8[1] - dr * sum.mean * sum.mean) / (dr - 1.0));
      sum.std_dev = std::sqrt(var);
      sum.std_error = sum.std_dev / std::sqrt(dr);
      for (int p = 0; p < 4; ++p) {
        const double m2p = p8[2 * p + 1] / dr;
        const double vp = std::max(0.0, m2p - sum.moment[p] * sum.moment[p]) * dr / (dr - 1.0);
        sum.moment_std_error[p] = std::sqrt(vp / dr);
      }
    } else {
      sum.std_dev = nan;
      sum.std_error = nan;
      for (double& e : sum.moment_std_error) e = nan;
    }
    if (opts.keep_samples) {
      sum.sample.resize(reps);
      for (std::int64_t r = 0; r < reps; ++r) sum.sample[r] = values[r * n_stats + s];
    }
    out.stats.push_back(std::move(sum));
  }
  return out;
}

DecompositionSample decomposition_check(const JumpLaw& law, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                        int threads) {
  if (n < 2) throw std::invalid_argument("decomposition_check: need n >= 2");
  if (reps < 1) throw std::invalid_argument("decomposition_check: need reps >= 1");
  const PmfVector y_law = pmf_Y(law, n);
  std::vector<double> cum(y_law.prob.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y_law.prob.size(); ++i) cum[i] = (acc += y_law.prob[i]);

  DecompositionSample out;
  out.coupled.resize(reps);
  out.coupled_y.resize(reps);
  out.resampled.resize(reps);
  out.resampled_y.resize(reps);
  parallel_blocks(reps, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      Stream coupled(seed, static_cast<std::uint64_t>(r), 0);
      const ReplicateResult res = simulate_replicate(law, n, coupled);
      out.coupled[r] = res.M - res.N + 1;
      out.coupled_y[r] = res.Y;

      Stream fresh(seed, static_cast<std::uint64_t>(r), 1);
      const double u = fresh.uniform_open() * acc;
      const auto idx = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
      const std::int64_t y = std::min<std::int64_t>(idx, static_cast<std::int64_t>(cum.size()) - 1) + 1;
      out.resampled_y[r] = y;
      out.resampled[r] = y >= 2 ? simulate_replicate(law, y, fresh).M : 0;  // M'_1 = 0
    }
  });
  return out;
}

void write_replicates_csv(std::ostream& os, const std::vector<ReplicateResult>& reps) {
  os << "n,M,N,Y,T,M0\n";
  for (const auto& r : reps) os << r.n << ',' << r.M << ',' << r.N << ',' << r.Y << ',' << r.T << ',' << r.M0 << '\n';
}

}  // namespace absorb
