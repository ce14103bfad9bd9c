#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absorb/rng.hpp"

namespace absorb {

enum class Family { BetaColB1, BolthausenSznitman, Geometric, CustomTable };

/// Largest value a draw of ξ can take. Heavier tails saturate here; every
/// consumer only compares ξ against levels far below it.
inline constexpr std::int64_t kXiSaturation = std::int64_t{1} << 62;

/// Step distribution p_k = P{ξ = k} on the positive integers, p_1 > 0.
///
/// Immutable after construction. The first kTailCache values of P{ξ ≥ n} are
/// tabulated; beyond that tails come from the closed forms.
class JumpLaw {
 public:
  /// p_k = (2−a)Γ(a+k−1)/(Γ(a)Γ(k+2)), 0 < a < 2 (beta(a,1) collision steps).
  static JumpLaw beta_coalescent(double a);
  /// p_k = 1/(k(k+1)).
  static JumpLaw bolthausen_sznitman();
  /// p_k = (1−q) q^{k−1}, 0 < q < 1.
  static JumpLaw geometric(double q);
  /// Weights over 1..K, renormalized; throws unless p_1 > 0 and all weights ≥ 0.
  static JumpLaw table(std::vector<double> weights);

  Family family() const { return family_; }
  /// a for BetaColB1, q for Geometric, NaN otherwise.
  double parameter() const { return param_; }
  std::string name() const;

  /// P{ξ = k}; 0 for k < 1 or beyond a table's support.
  double pmf(std::int64_t k) const;
  /// P{ξ ≥ n}; 1 for n ≤ 1.
  double tail(std::int64_t n) const;
  /// P{ξ > y} for real y ≥ 0 (piecewise constant).
  double tail_above(double y) const;

  /// Eξ, empty when infinite.
  std::optional<double> mean() const;
  /// Var ξ, empty when infinite.
  std::optional<double> variance() const;
  /// Σ_{k>n} P{ξ ≥ k} = E(ξ−n)^+, computed without cancellation; +inf for
  /// infinite-mean laws.
  double excess_mean(std::int64_t n) const;

  /// Support bound K for tables, empty for unbounded families.
  std::optional<std::int64_t> support_max() const;

  /// Inverse-CDF draw from a uniform u ∈ (0, 1]: max{n : P{ξ ≥ n} ≥ u}.
  std::int64_t quantile(double u) const;

 private:
  JumpLaw(Family f, double param);
  void build_tail_cache();
  double tail_closed(std::int64_t n) const;

  static constexpr std::int64_t kTailCache = 4096;

  Family family_;
  double param_;
  std::vector<double> table_;   // p_1..p_K at index 0..K−1 (CustomTable)
  std::vector<double> tails_;   // tails_[n] = P{ξ ≥ n}, n = 0..cache_max+1
};

/// sample_xi: one i.i.d. draw of ξ from a caller-owned stream.
std::int64_t sample_xi(const JumpLaw& law, Stream& stream);

}  // namespace absorb
