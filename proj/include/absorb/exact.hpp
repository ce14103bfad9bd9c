#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "absorb/jump_law.hpp"
#include "absorb/kernel.hpp"

namespace absorb {

/// Finite distribution on {offset, offset+1, …}. `residual` is mass that lies
/// beyond the tabulated range (e.g. P{S_m > n_cap}); it is never stored
/// pointwise.
struct PmfVector {
  std::int64_t offset = 0;
  Eigen::VectorXd prob;
  double residual = 0.0;

  PmfVector() = default;
  /// Entries in [−1e−15, 0) are clamped to zero; anything more negative throws.
  PmfVector(std::int64_t offset, Eigen::VectorXd probabilities, double residual = 0.0);

  std::int64_t min_value() const { return offset; }
  std::int64_t max_value() const { return offset + static_cast<std::int64_t>(prob.size()) - 1; }
  double at(std::int64_t j) const;
  /// Tabulated mass (excludes the residual).
  double total() const { return prob.sum(); }
  double moment(int k) const;
  double mean() const { return moment(1); }
  /// P{V ≤ j} over the tabulated part.
  double cdf(std::int64_t j) const;
};

/// Total variation distance. Residual masses are taken to sit outside both
/// tabulated ranges.
double tv_distance(const PmfVector& a, const PmfVector& b);

enum class MomentKind { X, N };

/// values(k, n) = E V_n^k for 0 ≤ k ≤ k_max, 1 ≤ n ≤ n_max (column 0 unused).
class MomentTable {
 public:
  MomentTable(MomentKind which, int k_max, std::int64_t n_max);

  MomentKind which() const { return which_; }
  int k_max() const { return static_cast<int>(values_.rows()) - 1; }
  std::int64_t n_max() const { return values_.cols() - 1; }
  double operator()(int k, std::int64_t n) const { return values_(k, n); }
  double& operator()(int k, std::int64_t n) { return values_(k, n); }
  const Eigen::MatrixXd& values() const { return values_; }

 private:
  MomentKind which_;
  Eigen::MatrixXd values_;
};

/// u_k = Σ_{i=0}^{k} P{S_i = k}, k = 0..n.
struct RenewalSeq {
  Eigen::VectorXd u;
};

struct ExactOptions {
  /// pmf_X refuses n above this (its cost grows like n^3 for dense kernels).
  std::int64_t pmf_cap = 2000;
};

/// Exact law of X_n (absorption time from n); X_1 ≡ 0.
PmfVector pmf_X(const TransitionKernel& kernel, std::int64_t n, const ExactOptions& opts = {});
/// Laws of X_1, …, X_{n_max} by the backward recursion P{X_n = j} =
/// Σ_k P{I_n = k} P{X_{n−k} = j−1}. Element i holds X_{i+1}.
std::vector<PmfVector> pmf_X_table(const TransitionKernel& kernel, std::int64_t n_max,
                                   const ExactOptions& opts = {});

/// a_k(n) = E X_n^k through a_k(n) = Σ_i P{I_n = i} Σ_j C(k,j) a_j(n−i).
MomentTable moments_X(const TransitionKernel& kernel, std::int64_t n_max, int k_max);
/// b_k(n) = E N_n^k through b_k(n) = P{ξ ≥ n} + Σ_{i<n} p_i Σ_j C(k,j) b_j(n−i).
MomentTable moments_N(const JumpLaw& law, std::int64_t n_max, int k_max);

/// P{S_m = j} for 0 ≤ j ≤ n_cap; residual = P{S_m > n_cap}.
PmfVector pmf_S(const JumpLaw& law, std::int64_t m, std::int64_t n_cap);
/// Law of N_n = inf{k ≥ 1 : S_k ≥ n} on {1, …, n}.
PmfVector pmf_N(const JumpLaw& law, std::int64_t n);

RenewalSeq renewal_seq(const JumpLaw& law, std::int64_t n);
/// e_k = u_k − 1/m for k = 0..n, by e_k = Σ_i p_i e_{k−i} − P{ξ ≥ k+1}/m.
/// Finite-mean laws only; avoids the cancellation in u_k − 1/m.
Eigen::VectorXd renewal_defect(const JumpLaw& law, std::int64_t n);

/// Law of Y_n = n − S_{N_n−1}: P{Y_n = j} = P{ξ ≥ j} u_{n−j}, j = 1..n.
PmfVector pmf_Y(const JumpLaw& law, std::int64_t n);
/// P{W = k} = P{ξ ≥ k}/m, k = 1..k_max; residual = P{W > k_max}.
PmfVector pmf_W(const JumpLaw& law, std::int64_t k_max);
/// TV(law of Y_n, law of W), built from renewal_defect so that it stays
/// accurate far below machine epsilon.
double tv_overshoot_to_limit(const JumpLaw& law, std::int64_t n);

}  // namespace absorb
