#include "absorb/kernel.hpp"

#include <stdexcept>

namespace absorb {

TransitionKernel TransitionKernel::from_jump_law(const JumpLaw& law) {
  TransitionKernel k;
  k.law_ = std::make_shared<const JumpLaw>(law);
  k.name_ = "conditioned(" + law.name() + ")";
  k.jump_law_form_ = true;
  return k;
}

TransitionKernel TransitionKernel::explicit_rows(std::string name, RowFn rows, bool jump_law_form) {
  TransitionKernel k;
  k.rows_ = std::move(rows);
  k.name_ = std::move(name);
  k.jump_law_form_ = jump_law_form;
  return k;
}

double TransitionKernel::probability(std::int64_t n, std::int64_t k) const {
  if (n < 2 || k < 1 || k >= n) return 0.0;
  if (law_) return law_->pmf(k) / (1.0 - law_->tail(n));
  return rows_(n).coeff(k);
}

KernelRow TransitionKernel::row(std::int64_t n) const {
  if (n < 2) throw std::invalid_argument("kernel row requested for n < 2");
  if (!law_) return rows_(n);
  const Eigen::VectorXd dense = kernel_of(*law_, n);
  KernelRow r(n);
  r.reserve(n - 1);
  for (std::int64_t k = 1; k < n; ++k) {
    if (dense[k - 1] > 0.0) r.insertBack(k) = dense[k - 1];
  }
  return r;
}

Eigen::VectorXd kernel_of(const JumpLaw& law, std::int64_t n) {
  if (n < 2) throw std::invalid_argument("kernel_of: need n >= 2");
  Eigen::VectorXd p(n - 1);
  for (std::int64_t k = 1; k < n; ++k) p[k - 1] = law.pmf(k);
  // p_1 > 0 keeps the normalizer strictly positive
  return p / p.sum();
}

TransitionKernel counterexample_kernel() {
  return TransitionKernel::explicit_rows(
      "counterexample",
      [](std::int64_t n) {
        KernelRow r(n);
        if (n == 2) {
          r.insert(1) = 1.0;
          return r;
        }
        const double to_one = 1.0 / static_cast<double>(n);
        r.insert(1) = 1.0 - to_one;
        r.insert(n - 1) = to_one;
        return r;
      },
      false);
}

}  // namespace absorb
