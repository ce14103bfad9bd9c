#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "absorb/jump_law.hpp"

namespace absorb {

/// Row n of a kernel: entry k holds P{I_n = k}, k ∈ {1, …, n−1}.
using KernelRow = Eigen::SparseVector<double>;

/// Law of the decrement I_n of a death chain at state n.
///
/// Either derived from a JumpLaw by conditioning on ξ < n, or given as an
/// explicit row generator (coalescent rates, counterexamples). Copies share
/// the same immutable state.
class TransitionKernel {
 public:
  using RowFn = std::function<KernelRow(std::int64_t n)>;

  static TransitionKernel from_jump_law(const JumpLaw& law);
  /// `jump_law_form` records whether the rows are known to have the form
  /// p_k / (p_1 + … + p_{n−1}) for some step law.
  static TransitionKernel explicit_rows(std::string name, RowFn rows, bool jump_law_form);

  /// P{I_n = k}.
  double probability(std::int64_t n, std::int64_t k) const;
  /// Full row for state n ≥ 2 (SparseVector of size n).
  KernelRow row(std::int64_t n) const;

  /// Non-null when the kernel was built from a JumpLaw.
  const JumpLaw* jump_law() const { return law_ ? law_.get() : nullptr; }
  bool jump_law_form() const { return jump_law_form_; }
  const std::string& name() const { return name_; }

 private:
  std::shared_ptr<const JumpLaw> law_;
  RowFn rows_;
  std::string name_;
  bool jump_law_form_ = false;
};

/// kernel_of: conditioned law of I_n for n ≥ 2, dense over {1, …, n−1}.
Eigen::VectorXd kernel_of(const JumpLaw& law, std::int64_t n);

/// I_2 ≡ 1 and, for n ≥ 3, P{I_n = n−1} = 1/n, P{I_n = 1} = 1 − 1/n: the chain
/// either falls straight to 1 or steps down by one.
TransitionKernel counterexample_kernel();

}  // namespace absorb
