#include "absorb/normalizers.hpp"

#include <cmath>
#include <stdexcept>

namespace absorb {

Normalizers::Normalizers(const JumpLaw& law, std::int64_t n_max) : n_max_(n_max) {
  if (n_max < 1) throw std::invalid_argument("normalizers: need n_max >= 1");
  tail_.resize(n_max + 2);
  partial_.resize(n_max + 1);
  tail_[0] = 1.0;
  partial_[0] = 0.0;
  for (std::int64_t n = 1; n <= n_max + 1; ++n) tail_[n] = law.tail(n);
  for (std::int64_t n = 1; n <= n_max; ++n) partial_[n] = partial_[n - 1] + tail_[n];
}

double Normalizers::L(std::int64_t n) const {
  if (n < 0 || n > n_max_) throw std::out_of_range("Normalizers::L: n outside table");
  return partial_[n];
}

double Normalizers::w(std::int64_t n) const {
  if (n < 0 || n > n_max_ + 1) throw std::out_of_range("Normalizers::w: n outside table");
  return 1.0 / tail_[n];
}

double Normalizers::m_trunc(double x) const {
  if (x < 0.0 || x > static_cast<double>(n_max_)) throw std::out_of_range("Normalizers::m_trunc: x outside table");
  const double f = std::floor(x);
  const auto j = static_cast<std::int64_t>(f);
  if (j == n_max_) return partial_[j];
  return partial_[j] + (x - f) * tail_[j + 1];
}

}  // namespace absorb
