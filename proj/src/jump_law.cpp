#include "absorb/jump_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "absorb/special.hpp"

namespace absorb {

JumpLaw::JumpLaw(Family f, double param) : family_(f), param_(param) {}

JumpLaw JumpLaw::beta_coalescent(double a) {
  if (!(a > 0.0 && a < 2.0)) throw std::invalid_argument("beta_coalescent: need 0 < a < 2");
  JumpLaw law(Family::BetaColB1, a);
  law.build_tail_cache();
  return law;
}

JumpLaw JumpLaw::bolthausen_sznitman() {
  JumpLaw law(Family::BolthausenSznitman, std::numeric_limits<double>::quiet_NaN());
  law.build_tail_cache();
  return law;
}

JumpLaw JumpLaw::geometric(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("geometric: need 0 < q < 1");
  JumpLaw law(Family::Geometric, q);
  law.build_tail_cache();
  return law;
}

JumpLaw JumpLaw::table(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("table: empty weight list");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("table: weights must be finite and >= 0");
  }
  if (!(weights.front() > 0.0)) throw std::invalid_argument("table: p_1 must be positive");
  while (weights.back() == 0.0) weights.pop_back();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  JumpLaw law(Family::CustomTable, std::numeric_limits<double>::quiet_NaN());
  law.table_ = std::move(weights);
  law.build_tail_cache();
  return law;
}

std::string JumpLaw::name() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case Family::BetaColB1: os << "beta(a=" << param_ << ")"; break;
    case Family::BolthausenSznitman: os << "bs"; break;
    case Family::Geometric: os << "geometric(q=" << param_ << ")"; break;
    case Family::CustomTable: os << "table(K=" << table_.size() << ")"; break;
  }
  return os.str();
}

void JumpLaw::build_tail_cache() {
  if (family_ == Family::CustomTable) {
    const auto K = static_cast<std::int64_t>(table_.size());
    tails_.assign(K + 2, 0.0);
    double s = 0.0;
    for (std::int64_t n = K; n >= 1; --n) {
      s += table_[n - 1];
      tails_[n] = s;
    }
    tails_[1] = 1.0;
    tails_[0] = 1.0;
    return;
  }
  tails_.resize(kTailCache + 2);
  tails_[0] = 1.0;
  for (std::int64_t n = 1; n <= kTailCache + 1; ++n) tails_[n] = tail_closed(n);
}

double JumpLaw::tail_closed(std::int64_t n) const {
  if (n <= 1) return 1.0;
  const double x = static_cast<double>(n);
  switch (family_) {
    case Family::BetaColB1:
      return std::exp(log_gamma(param_ + x - 1.0) - log_gamma(param_) - log_gamma(x + 1.0));
    case Family::BolthausenSznitman:
      return 1.0 / x;
    case Family::Geometric:
      return std::pow(param_, x - 1.0);
    case Family::CustomTable:
      return n < static_cast<std::int64_t>(tails_.size()) ? tails_[n] : 0.0;
  }
  return 0.0;
}

double JumpLaw::pmf(std::int64_t k) const {
  if (k < 1) return 0.0;
  const double x = static_cast<double>(k);
  switch (family_) {
    case Family::BetaColB1:
      return std::exp(std::log(2.0 - param_) + log_gamma(param_ + x - 1.0) - log_gamma(param_) -
                      log_gamma(x + 2.0));
    case Family::BolthausenSznitman:
      return 1.0 / (x * (x + 1.0));
    case Family::Geometric:
      return (1.0 - param_) * std::pow(param_, x - 1.0);
    case Family::CustomTable:
      return k <= static_cast<std::int64_t>(table_.size()) ? table_[k - 1] : 0.0;
  }
  return 0.0;
}

double JumpLaw::tail(std::int64_t n) const {
  if (n <= 1) return 1.0;
  if (n < static_cast<std::int64_t>(tails_.size())) return tails_[n];
  return tail_closed(n);
}

double JumpLaw::tail_above(double y) const {
  if (y < 0.0) return 1.0;
  // P{ξ > y} = P{ξ ≥ ⌊y⌋ + 1}
  const double f = std::floor(y);
  if (f >= static_cast<double>(kXiSaturation)) return 0.0;
  return tail(static_cast<std::int64_t>(f) + 1);
}

std::optional<double> JumpLaw::mean() const {
  switch (family_) {
    case Family::BetaColB1:
      if (param_ < 1.0) return 1.0 / (1.0 - param_);
      return std::nullopt;
    case Family::BolthausenSznitman:
      return std::nullopt;
    case Family::Geometric:
      return 1.0 / (1.0 - param_);
    case Family::CustomTable: {
      double m = 0.0;
      for (std::size_t k = 0; k < table_.size(); ++k) m += static_cast<double>(k + 1) * table_[k];
      return m;
    }
  }
  return std::nullopt;
}

std::optional<double> JumpLaw::variance() const {
  switch (family_) {
    case Family::Geometric:
      return param_ / ((1.0 - param_) * (1.0 - param_));
    case Family::CustomTable: {
      const double m = *mean();
      double v = 0.0;
      for (std::size_t k = 0; k < table_.size(); ++k) {
        const double d = static_cast<double>(k + 1) - m;
        v += d * d * table_[k];
      }
      return v;
    }
    default:
      return std::nullopt;
  }
}

double JumpLaw::excess_mean(std::int64_t n) const {
  if (n < 0) n = 0;
  const double x = static_cast<double>(n);
  switch (family_) {
    case Family::BetaColB1:
      if (param_ >= 1.0) return std::numeric_limits<double>::infinity();
      // Σ_{k>n} Γ(a+k−1)/(Γ(a)Γ(k+1)) = Γ(a+n)/(Γ(a)Γ(n+1)(1−a))
      return std::exp(log_gamma(param_ + x) - log_gamma(param_) - log_gamma(x + 1.0)) / (1.0 - param_);
    case Family::BolthausenSznitman:
      return std::numeric_limits<double>::infinity();
    case Family::Geometric:
      return std::pow(param_, x) / (1.0 - param_);
    case Family::CustomTable: {
      double s = 0.0;
      const auto K = static_cast<std::int64_t>(table_.size());
      for (std::int64_t k = K; k > n; --k) s += tails_[k];
      return s;
    }
  }
  return 0.0;
}

std::optional<std::int64_t> JumpLaw::support_max() const {
  if (family_ == Family::CustomTable) return static_cast<std::int64_t>(table_.size());
  return std::nullopt;
}

std::int64_t JumpLaw::quantile(double u) const {
  if (u >= 1.0) return 1;
  if (!(u > 0.0)) throw std::domain_error("quantile: u must lie in (0, 1]");

  if (family_ == Family::Geometric) {
    const double e = std::floor(std::log(u) / std::log(param_));
    if (e >= static_cast<double>(kXiSaturation - 1)) return kXiSaturation;
    auto n = static_cast<std::int64_t>(e) + 1;
    // guard the boundary against rounding in the logarithms
    while (n > 1 && tail(n) < u) --n;
    while (tail(n + 1) >= u) ++n;
    return n;
  }

  // tails_ is non-increasing; find the first cached index with tail < u.
  const auto first = tails_.begin() + 1;
  const auto it = std::partition_point(first, tails_.end(), [u](double t) { return t >= u; });
  if (it != tails_.end()) return static_cast<std::int64_t>(it - tails_.begin()) - 1;

  // Beyond the cache: bracket with doubling, then bisect on the closed form.
  std::int64_t lo = static_cast<std::int64_t>(tails_.size()) - 1;  // tail(lo) ≥ u
  std::int64_t hi = lo;
  do {
    if (hi >= kXiSaturation / 2) return kXiSaturation;
    lo = hi;
    hi *= 2;
  } while (tail_closed(hi) >= u);
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (tail_closed(mid) >= u) lo = mid; else hi = mid;
  }
  return lo;
}

std::int64_t sample_xi(const JumpLaw& law, Stream& stream) { return law.quantile(stream.uniform()); }

}  // namespace absorb
