#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "absorb/kernel.hpp"
#include "absorb/rng.hpp"

namespace absorb {

/// Λ = beta(a, b) on [0, 1].
struct CoalescentParams {
  double a = 1.0;
  double b = 1.0;

  void validate() const;
  /// b = 1 and 0 < a < 2: collision steps are then conditioned i.i.d. draws.
  bool jump_law_regime() const { return b == 1.0 && a > 0.0 && a < 2.0; }
};

/// Rate g_{nk} at which n blocks become k blocks, 1 ≤ k < n:
///   C(n, k−1) B(a+n−k−1, b+k−1) / B(a, b).
/// For b = 1 the reduced form n!/(n−k+1)! · a Γ(a+n−k−1)/Γ(a+n−1) is used.
double rate_gnk(const CoalescentParams& p, std::int64_t n, std::int64_t k);
/// Always the general beta-function form.
double rate_gnk_general(const CoalescentParams& p, std::int64_t n, std::int64_t k);

/// g_n = Σ_{k<n} g_{nk}, by summation.
double total_rate(const CoalescentParams& p, std::int64_t n);
/// b = 1 closed form: a/(a−2)(1 − Γ(a)Γ(n+1)/Γ(a+n−1)), or 2(h_n − 1) at a = 2.
double total_rate_closed(const CoalescentParams& p, std::int64_t n);

struct CollisionKernel {
  TransitionKernel kernel;
  /// false when the rows cannot be written as p_k/(p_1+…+p_{n−1}) with p_k ≥ 0
  /// (b ≠ 1 or a ∉ (0, 2)); the recursion results for jump-law kernels do not apply.
  bool jump_law_regime = false;
};

/// Decrement law P{I_m = j} = g_{m,m−j}/g_m for states 2 ≤ m ≤ n_max.
CollisionKernel collision_kernel(const CoalescentParams& p, std::int64_t n_max);

/// Draws decrements I_m for 2 ≤ m ≤ n_max. Cumulative rows are precomputed for
/// the smallest states until `cache_bytes` is used; larger states are inverted
/// on demand by accumulating the row from I = 1 upward. Immutable after
/// construction, so one sampler can serve many threads.
class CollisionSampler {
 public:
  static constexpr std::size_t kDefaultCacheBytes = std::size_t{256} << 20;

  CollisionSampler(const CoalescentParams& p, std::int64_t n_max, std::size_t cache_bytes = kDefaultCacheBytes);

  std::int64_t n_max() const { return n_max_; }
  /// Largest state with a cached row.
  std::int64_t cached_max() const { return cached_max_; }
  const CoalescentParams& params() const { return p_; }

  std::int64_t draw(std::int64_t m, Stream& stream) const;

 private:
  std::int64_t draw_uncached(std::int64_t m, double u) const;

  CoalescentParams p_;
  std::int64_t n_max_;
  std::int64_t cached_max_ = 1;
  std::vector<std::size_t> offset_;  // row m starts at cum_[offset_[m]]
  std::vector<double> cum_;          // cumulative P{I_m ≤ j}, j = 1..m−1
};

/// Number of collisions until one block remains, starting from n blocks.
std::int64_t simulate_collisions(const CollisionSampler& sampler, std::int64_t n, Stream& stream);
std::int64_t simulate_collisions(const CoalescentParams& p, std::int64_t n, Stream& stream);

/// X_n for replicates r = 0..reps−1, replicate r driven by Stream(seed, r, 2).
std::vector<std::int64_t> collision_counts(const CoalescentParams& p, std::int64_t n, std::int64_t reps,
                                           std::uint64_t seed, int threads = 1);

}  // namespace absorb
