#include "absorb/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "absorb/coupling.hpp"
#include "absorb/special.hpp"

namespace absorb {

namespace {

void check_nk(std::int64_t n, std::int64_t k) {
  if (n < 2 || k < 1 || k >= n) throw std::domain_error("coalescent rate: need 1 <= k < n");
}

// Row of P{I_m = i}, i = 1..m−1, from the ratio
//   q_{i+1}/q_i = (m−i−1)(a+i−1) / ((i+2)(b+m−i−2)).
template <class Visit>
void walk_row(const CoalescentParams& p, std::int64_t m, double g_m, Visit visit) {
  double q = rate_gnk(p, m, m - 1) / g_m;
  for (std::int64_t i = 1; i < m; ++i) {
    if (!visit(i, q)) return;
    double di = static_cast<double>(i), dm = static_cast<double>(m);
    q *= (dm - di - 1.0) * (p.a + di - 1.0) / ((di + 2.0) * (p.b + dm - di - 2.0));
  }
}

double rate_sum(const CoalescentParams& p, std::int64_t n) {
  double s = 0.0;
  walk_row(p, n, 1.0, [&](std::int64_t, double q) {
    s += q;
    return true;
  });
  return s;
}

}  // namespace

void CoalescentParams::validate() const {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("coalescent: a and b must be > 0");
}

double rate_gnk_general(const CoalescentParams& p, std::int64_t n, std::int64_t k) {
  p.validate();
  check_nk(n, k);
  double dn = static_cast<double>(n), dk = static_cast<double>(k);
  double log_choose = log_gamma(dn + 1.0) - log_gamma(dk) - log_gamma(dn - dk + 2.0);
  return std::exp(log_choose + log_beta(p.a + dn - dk - 1.0, p.b + dk - 1.0) - log_beta(p.a, p.b));
}

double rate_gnk(const CoalescentParams& p, std::int64_t n, std::int64_t k) {
  if (p.b != 1.0) return rate_gnk_general(p, n, k);
  p.validate();
  check_nk(n, k);
  double dn = static_cast<double>(n), dk = static_cast<double>(k);
  double lv = log_gamma(dn + 1.0) - log_gamma(dn - dk + 2.0) + log_gamma(p.a + dn - dk - 1.0) -
              log_gamma(p.a + dn - 1.0);
  return p.a * std::exp(lv);
}

double total_rate(const CoalescentParams& p, std::int64_t n) {
  if (n < 2) throw std::domain_error("total_rate: need n >= 2");
  p.validate();
  double s = 0.0;
  for (std::int64_t k = 1; k < n; ++k) s += rate_gnk(p, n, k);
  return s;
}

double total_rate_closed(const CoalescentParams& p, std::int64_t n) {
  if (n < 2) throw std::domain_error("total_rate_closed: need n >= 2");
  p.validate();
  if (p.b != 1.0) throw std::domain_error("total_rate_closed: needs b = 1");
  double dn = static_cast<double>(n);
  if (p.a == 2.0) return 2.0 * (harmonic(dn) - 1.0);
  double r = std::exp(log_gamma(p.a) + log_gamma(dn + 1.0) - log_gamma(p.a + dn - 1.0));
  return p.a / (p.a - 2.0) * (1.0 - r);
}

CollisionKernel collision_kernel(const CoalescentParams& p, std::int64_t n_max) {
  p.validate();
  if (n_max < 2) throw std::domain_error("collision_kernel: need n >= 2");
  CollisionKernel out;
  out.jump_law_regime = p.jump_law_regime();
  auto rows = [p, n_max](std::int64_t m) {
    if (m > n_max) throw std::out_of_range("collision_kernel: state above n_max");
    double g = total_rate(p, m);
    KernelRow r(m);
    r.reserve(m - 1);
    for (std::int64_t i = 1; i < m; ++i) r.insertBack(i) = rate_gnk(p, m, m - i) / g;
    return r;
  };
  out.kernel = TransitionKernel::explicit_rows("beta-coalescent(a=" + std::to_string(p.a) +
                                                   ",b=" + std::to_string(p.b) + ")",
                                               rows, out.jump_law_regime);
  return out;
}

CollisionSampler::CollisionSampler(const CoalescentParams& p, std::int64_t n_max, std::size_t cache_bytes)
    : p_(p), n_max_(n_max) {
  p.validate();
  if (n_max < 2) throw std::domain_error("CollisionSampler: need n_max >= 2");
  const std::size_t budget = cache_bytes / sizeof(double);
  std::size_t used = 0;
  std::int64_t m = 2;
  for (; m <= n_max && used + static_cast<std::size_t>(m - 1) <= budget; ++m) used += static_cast<std::size_t>(m - 1);
  cached_max_ = m - 1;
  offset_.assign(static_cast<std::size_t>(cached_max_) + 1, 0);
  cum_.resize(used);
  std::size_t pos = 0;
  for (m = 2; m <= cached_max_; ++m) {
    offset_[static_cast<std::size_t>(m)] = pos;
    double acc = 0.0;
    walk_row(p_, m, 1.0, [&](std::int64_t, double q) {
      acc += q;
      cum_[pos++] = acc;
      return true;
    });
    // normalize by the accumulated total so the last entry is exactly 1
    double* row = cum_.data() + offset_[static_cast<std::size_t>(m)];
    for (std::int64_t j = 0; j < m - 1; ++j) row[j] /= acc;
    row[m - 2] = 1.0;
  }
}

std::int64_t CollisionSampler::draw_uncached(std::int64_t m, double u) const {
  const double g = p_.b == 1.0 ? total_rate_closed(p_, m) : rate_sum(p_, m);
  std::int64_t pick = m - 1, last_positive = 1;
  double acc = 0.0;
  walk_row(p_, m, g, [&](std::int64_t i, double q) {
    acc += q;
    if (q > 0.0) last_positive = i;
    if (acc >= u) {
      pick = i;
      return false;
    }
    return true;
  });
  // rounding can leave acc a hair below u after the last term
  if (acc < u) pick = last_positive;
  return pick;
}

std::int64_t CollisionSampler::draw(std::int64_t m, Stream& stream) const {
  if (m < 2 || m > n_max_) throw std::out_of_range("CollisionSampler::draw: state out of range");
  const double u = stream.uniform();
  if (m > cached_max_) return draw_uncached(m, u);
  const double* row = cum_.data() + offset_[static_cast<std::size_t>(m)];
  const double* hit = std::lower_bound(row, row + (m - 1), u);
  return static_cast<std::int64_t>(hit - row) + 1;
}

std::int64_t simulate_collisions(const CollisionSampler& sampler, std::int64_t n, Stream& stream) {
  if (n < 2) throw std::domain_error("simulate_collisions: need n >= 2");
  std::int64_t state = n, x = 0;
  while (state > 1) {
    state -= sampler.draw(state, stream);
    ++x;
  }
  return x;
}

std::int64_t simulate_collisions(const CoalescentParams& p, std::int64_t n, Stream& stream) {
  CollisionSampler s(p, n);
  return simulate_collisions(s, n, stream);
}

std::vector<std::int64_t> collision_counts(const CoalescentParams& p, std::int64_t n, std::int64_t reps,
                                           std::uint64_t seed, int threads) {
  CollisionSampler sampler(p, n);
  std::vector<std::int64_t> out(static_cast<std::size_t>(reps));
  parallel_blocks(reps, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      Stream st(seed, static_cast<std::uint64_t>(r), 2);
      out[static_cast<std::size_t>(r)] = simulate_collisions(sampler, n, st);
    }
  });
  return out;
}

}  // namespace absorb
