#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "absorb/jump_law.hpp"
#include "absorb/rng.hpp"

namespace absorb {

/// One path of the coupled pair (S, R^{(n)}) driven by a single draw sequence
/// ξ_1, ξ_2, …
///
///   S_k = ξ_1 + … + ξ_k             (unconstrained walk)
///   R_k = R_{k−1} + ξ_k 1{R_{k−1} + ξ_k < n}   (walk that refuses to reach n)
struct ReplicateResult {
  std::int64_t n = 0;
  std::int64_t M = 0;   ///< accepted jumps of R (has the law of X_n)
  std::int64_t N = 0;   ///< first k with S_k ≥ n
  std::int64_t Y = 0;   ///< n − S_{N−1}
  std::int64_t T = 0;   ///< proposals until R first equals n − 1
  std::int64_t M0 = 0;  ///< rejected proposals before that time
  /// jump size i → number of accepted jumps of size i (only when tracked)
  std::map<std::int64_t, std::int64_t> jump_size_counts;
};

struct SimulationOptions {
  std::int64_t max_proposals = 100'000'000;
  bool track_jump_sizes = false;
};

/// Thrown when a replicate exceeds its proposal budget.
class IterationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ReplicateResult simulate_replicate(const JumpLaw& law, std::int64_t n, Stream& stream,
                                   const SimulationOptions& opts = {});

/// A scalar functional of one replicate.
struct Statistic {
  std::string name;
  std::function<double(const ReplicateResult&)> fn;
};

/// Built-in functionals by name: M, N, Y, T, M0, M_minus_N_plus_1.
Statistic statistic(const std::string& name);

struct StatisticSummary {
  std::string name;
  std::int64_t count = 0;
  /// raw power sums Σ v^p for p = 1..4
  double power_sum[4] = {0, 0, 0, 0};
  double mean = 0.0;
  /// raw sample moments E v^p, p = 1..4
  double moment[4] = {0, 0, 0, 0};
  double std_dev = 0.0;
  /// sample std / √reps; NaN when reps == 1
  double std_error = 0.0;
  /// standard error of the p-th raw moment estimate; NaN when reps == 1
  double moment_std_error[4] = {0, 0, 0, 0};
  std::vector<double> sample;  ///< filled only when raw samples are retained
};

struct ExperimentSummary {
  std::string law;
  std::int64_t n = 0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<StatisticSummary> stats;
  /// empty unless raw replicates were requested
  std::vector<ReplicateResult> replicates;

  const StatisticSummary& operator[](const std::string& name) const;
};

struct ExperimentOptions {
  int threads = 1;
  bool keep_samples = false;
  bool keep_replicates = false;
  SimulationOptions sim;
};

/// Replicate r is driven by Stream(seed, r). Summaries depend only on
/// (law, n, reps, seed, statistics) and never on the thread count.
ExperimentSummary run_experiment(const JumpLaw& law, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                 const std::vector<Statistic>& stats, const ExperimentOptions& opts = {});

/// Runs `body(r)` for r in [0, count) on up to `threads` workers. Work is cut
/// into fixed-size blocks whose boundaries do not depend on `threads`.
void parallel_blocks(std::int64_t count, int threads,
                     const std::function<void(std::int64_t begin, std::int64_t end)>& body);

/// Coupled vs. resampled samples of M_n − N_n + 1.
struct DecompositionSample {
  std::vector<std::int64_t> coupled;      ///< M_n − N_n + 1 from coupled paths
  std::vector<std::int64_t> coupled_y;    ///< matching Y_n
  std::vector<std::int64_t> resampled;    ///< M'_Y with Y ~ pmf_Y and fresh draws
  std::vector<std::int64_t> resampled_y;
};

DecompositionSample decomposition_check(const JumpLaw& law, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                        int threads = 1);

/// Raw replicate dump: header "n,M,N,Y,T,M0" then one row per replicate.
void write_replicates_csv(std::ostream& os, const std::vector<ReplicateResult>& reps);

}  // namespace absorb
