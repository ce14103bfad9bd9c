#include "absorb/limits.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "absorb/normalizers.hpp"
#include "absorb/special.hpp"

namespace absorb {

namespace {

void require_alpha_open(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error(std::string(what) + ": alpha must lie in (0, 1)");
}

double log_factorial(int k) { return log_gamma(k + 1.0); }

}  // namespace

double phi(double alpha, double x) {
  require_alpha_open(alpha, "phi");
  if (!(x >= 0.0)) throw std::domain_error("phi: x must be >= 0");
  if (x == 0.0) return 0.0;
  double lg = log_gamma(1.0 - alpha) + log_gamma(alpha * x + 1.0) - log_gamma(alpha * (x - 1.0) + 1.0);
  return std::expm1(lg);
}

double levy_density(double alpha, double y) {
  require_alpha_open(alpha, "levy_density");
  if (!(y > 0.0)) throw std::domain_error("levy_density: y must be > 0");
  double s = y / alpha;
  return std::exp(-s) / std::pow(-std::expm1(-s), alpha + 1.0);
}

double phi_levy_integral(double alpha, double x) {
  require_alpha_open(alpha, "phi_levy_integral");
  if (!(x >= 0.0)) throw std::domain_error("phi_levy_integral: x must be >= 0");
  if (x == 0.0) return 0.0;
  auto f = [&](double y) {
    if (y <= 0.0) return 0.0;
    // in logs: near 0 the factors underflow separately
    const double s = y / alpha;
    return std::exp(std::log(-std::expm1(-x * y)) - s - (alpha + 1.0) * std::log(-std::expm1(-s)));
  };
  // y^{−α} singularity at 0 on [0, 1], exponential decay beyond
  boost::math::quadrature::tanh_sinh<double> head;
  boost::math::quadrature::exp_sinh<double> tail;
  return head.integrate(f, 0.0, 1.0, 1e-15) + tail.integrate(f, 1.0, std::numeric_limits<double>::infinity(), 1e-15);
}

LaplaceExponent::LaplaceExponent(double alpha) : alpha_(alpha) { require_alpha_open(alpha, "LaplaceExponent"); }

std::vector<double> exp_functional_moments(double alpha, int k_max) {
  require_alpha_open(alpha, "exp_functional_moments");
  if (k_max < 0 || k_max > 12) throw std::domain_error("exp_functional_moments: k_max must be in [0, 12]");
  std::vector<double> a(k_max + 1);
  a[0] = 1.0;
  for (int k = 1; k <= k_max; ++k) a[k] = a[k - 1] * k / phi(alpha, k);
  return a;
}

std::vector<double> mittag_leffler_moments(double alpha, int k_max) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("mittag_leffler_moments: alpha must lie in [0, 1]");
  if (k_max < 0) throw std::domain_error("mittag_leffler_moments: k_max must be >= 0");
  std::vector<double> out(k_max + 1, 1.0);
  if (alpha == 1.0) return out;  // θ_1 = δ_1
  double lg1 = log_gamma(1.0 - alpha);
  for (int k = 1; k <= k_max; ++k) out[k] = std::exp(log_factorial(k) - k * lg1 - log_gamma(1.0 + k * alpha));
  return out;
}

double mixed_moments(const std::function<double(double)>& f, int n, int m, MixedKind which) {
  if (n < 0 || m < 0) throw std::domain_error("mixed_moments: n, m must be >= 0");
  double log_v = log_factorial(n);
  for (int k = 0; k <= n; ++k) log_v -= std::log1p(f(m + k));
  if (which == MixedKind::QA) {
    log_v += log_factorial(m);
    for (int j = 1; j <= m; ++j) log_v -= std::log(f(j));
  }
  return std::exp(log_v);
}

double mixed_moments(double alpha, int n, int m, MixedKind which) {
  LaplaceExponent f(alpha);
  return mixed_moments([&](double x) { return f(x); }, n, m, which);
}

double bivar_limit_moments(double alpha, int i, int j) {
  require_alpha_open(alpha, "bivar_limit_moments");
  if (i < 0 || j < 0) throw std::domain_error("bivar_limit_moments: i, j must be >= 0");
  double lv = log_factorial(j) + log_gamma(alpha * (i - 1) + 1.0) - (j + 1) * log_gamma(1.0 - alpha) -
              log_gamma(alpha * (i + j) + 1.0);
  return std::exp(lv);
}

// ---------------------------------------------------------------------------

LimitSpec normalizers_thm1(const JumpLaw& law, std::int64_t n_max) {
  auto tab = std::make_shared<Normalizers>(law, n_max);
  LimitSpec s;
  s.regime = Regime::WeakLaw;
  s.alpha = 1.0;
  s.a = [tab](double n) {
    auto k = static_cast<std::int64_t>(std::floor(n));
    return n / tab->L(k);
  };
  s.b = [](double) { return 0.0; };
  return s;
}

LimitSpec normalizers_thm2(const JumpLaw& law) {
  auto mean = law.mean();
  if (!mean) throw std::domain_error("normalizers_thm2: step law has infinite mean");
  double m = *mean;
  LimitSpec s;
  s.regime = Regime::StableFiniteMean;
  s.b = [m](double n) { return n / m; };
  if (auto var = law.variance()) {
    double v = *var;
    s.alpha = 2.0;
    s.finite_variance = true;
    s.target = StableLaw{2.0, 1.0};
    s.a = [m, v](double n) { return std::sqrt(v * n / (m * m * m)); };
    return s;
  }
  if (law.family() != Family::BetaColB1)
    throw std::domain_error("normalizers_thm2: infinite-variance case is only tabulated for beta(a,1) laws");
  double a = law.parameter();
  double alpha = 2.0 - a;
  s.alpha = alpha;
  s.target = StableLaw{alpha, 1.0 / gamma_fn(a)};
  double scale = std::pow(alpha - 1.0, (alpha + 1.0) / alpha);
  s.a = [scale, alpha](double n) { return scale * std::pow(n, 1.0 / alpha); };
  return s;
}

LimitSpec normalizers_thm3(const JumpLaw& law) {
  if (law.family() != Family::BetaColB1 || !(law.parameter() > 1.0))
    throw std::domain_error("normalizers_thm3: needs a regularly varying tail of index in (0, 1)");
  LimitSpec s;
  s.regime = Regime::ExpFunctional;
  s.alpha = 2.0 - law.parameter();
  auto held = std::make_shared<JumpLaw>(law);
  s.a = [held](double n) { return 1.0 / held->tail(static_cast<std::int64_t>(std::floor(n))); };
  s.b = [](double) { return 0.0; };
  return s;
}

namespace {

template <class F>
double bisect_increasing(F f, double target, double lo, double hi, const char* what) {
  // f increasing; grow hi until f(hi) ≥ target, then bisect to 1e−9 relative.
  int grow = 0;
  while (f(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 200 || !std::isfinite(hi)) throw std::runtime_error(std::string(what) + ": bracket growth failed");
  }
  for (int it = 0; it < 400; ++it) {
    if (hi - lo <= 1e-9 * hi) return 0.5 * (lo + hi);
    double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  throw std::runtime_error(std::string(what) + ": bisection did not converge");
}

struct Thm4Generic {
  std::shared_ptr<JumpLaw> law;
  std::shared_ptr<Normalizers> tab;

  // Tail interpolated log-linearly between integers.
  double tail_interp(double y) const {
    if (y <= 1.0) return 1.0;
    double f = std::floor(y);
    double th = y - f;
    auto k = static_cast<std::int64_t>(f);
    double t0 = law->tail(k), t1 = law->tail(k + 1);
    if (th == 0.0) return t0;
    return std::exp((1.0 - th) * std::log(t0) + th * std::log(t1));
  }
  // x·P̃(c) = 1
  double c(double x) const {
    if (x <= 1.0) return 1.0;
    return bisect_increasing([this](double y) { return -tail_interp(y); }, -1.0 / x, 1.0, 2.0, "normalizers_thm4 c");
  }
  double psi(double x) const { return x * tab->m_trunc(c(x)); }
  double b(double x) const {
    if (x <= 1.0) return 1.0;
    return bisect_increasing([this](double y) { return psi(y); }, x, 1.0, 2.0, "normalizers_thm4 b");
  }
};

}  // namespace

LimitSpec normalizers_thm4(const JumpLaw& law, Thm4Path path, double x_max) {
  if (law.mean()) throw std::domain_error("normalizers_thm4: step law has finite mean");
  if (law.support_max()) throw std::domain_error("normalizers_thm4: step law has bounded support");
  LimitSpec s;
  s.regime = Regime::StableOne;
  s.alpha = 1.0;
  s.target = StableLaw{1.0, 1.0};
  if (path == Thm4Path::Auto && law.family() == Family::BolthausenSznitman) {
    s.c = [](double x) { return x; };
    s.psi = [](double x) {
      double f = std::floor(x);
      return x * (harmonic(f) + (x - f) / (f + 1.0));
    };
    s.b = [](double x) {
      double l = std::log(x);
      return x / l + x * std::log(l) / (l * l);
    };
    auto b = s.b;
    s.a = [b](double x) {
      double v = b(x);
      return v * v / x;
    };
    return s;
  }
  auto g = std::make_shared<Thm4Generic>();
  g->law = std::make_shared<JumpLaw>(law);
  // b(x) brackets ψ up to 2x, so m_trunc is needed up to c(2 x_max).
  Thm4Generic probe{g->law, nullptr};
  double c_top = probe.c(2.0 * x_max);
  if (c_top > 5e8) throw std::domain_error("normalizers_thm4: c(x_max) too large to tabulate");
  g->tab = std::make_shared<Normalizers>(law, static_cast<std::int64_t>(std::ceil(c_top)) + 2);
  s.c = [g](double x) { return g->c(x); };
  s.psi = [g](double x) { return g->psi(x); };
  s.b = [g](double x) { return g->b(x); };
  s.a = [g](double x) {
    double bx = g->b(x);
    return bx * g->c(bx) / x;
  };
  return s;
}

}  // namespace absorb
