#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "absorb/jump_law.hpp"

namespace absorb {

/// Tail-derived normalizing sequences of a step law, tabulated up to n_max.
///
///   L(n)       = Σ_{m=1}^{n} P{ξ ≥ m}
///   m_trunc(x) = ∫_0^x P{ξ > y} dy   (exact: the integrand is a step function)
///   w(n)       = 1 / P{ξ ≥ n}
///
/// L(n) is the partial tail sum itself. It is only asymptotically equivalent to
/// the slowly varying function of the limit theorems.
class Normalizers {
 public:
  Normalizers(const JumpLaw& law, std::int64_t n_max);

  std::int64_t n_max() const { return n_max_; }
  double L(std::int64_t n) const;
  double w(std::int64_t n) const;
  /// Valid for 0 ≤ x ≤ n_max.
  double m_trunc(double x) const;

 private:
  std::int64_t n_max_;
  Eigen::VectorXd partial_;  // partial_[n] = L(n), partial_[0] = 0
  Eigen::VectorXd tail_;     // tail_[n] = P{ξ ≥ n}, n ≤ n_max + 1
};

inline Normalizers normalizers(const JumpLaw& law, std::int64_t n_max) { return Normalizers(law, n_max); }

}  // namespace absorb
