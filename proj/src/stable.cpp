#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "absorb/limits.hpp"
#include "absorb/special.hpp"

namespace absorb {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

void check_stable(double alpha, double C) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) throw std::domain_error("stable law: alpha must lie in [1, 2]");
  if (!(C > 0.0)) throw std::domain_error("stable law: C must be > 0");
}

// For t > 0, ψ(t) = exp(−A t^α − i θ(t)): A is the modulus rate and θ the phase.
struct CfShape {
  double alpha, C, A, B;
  CfShape(double a, double c) : alpha(a), C(c) {
    if (alpha == 2.0) {
      A = C / 2.0;
      B = 0.0;
    } else if (alpha == 1.0) {
      A = C * kPi / 2.0;
      B = 0.0;
    } else {
      double k = C * gamma_fn(1.0 - alpha);
      A = k * std::cos(kPi * alpha / 2.0);
      B = k * std::sin(kPi * alpha / 2.0);
    }
  }
  double modulus(double t) const { return std::exp(-A * std::pow(t, alpha)); }
  double theta(double t) const {
    if (alpha == 1.0) return t > 0.0 ? -C * t * std::log(t) : 0.0;
    return B * std::pow(t, alpha);
  }
};

}  // namespace

StableLaw StableLaw::unit_skewed(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw std::domain_error("unit_skewed: alpha must lie in (1, 2)");
  return StableLaw{alpha, -1.0 / gamma_fn(1.0 - alpha)};
}

StandardStable StableLaw::to_standard() const {
  check_stable(alpha, C);
  if (alpha == 2.0) return {2.0, 0.0, std::sqrt(C / 2.0)};
  if (alpha == 1.0) return {1.0, -1.0, C * kPi / 2.0};
  double sa = C * gamma_fn(1.0 - alpha) * std::cos(kPi * alpha / 2.0);
  return {alpha, -1.0, std::pow(sa, 1.0 / alpha)};
}

std::complex<double> stable_cf(double alpha, double C, double t) {
  check_stable(alpha, C);
  if (t == 0.0) return {1.0, 0.0};
  double at = std::abs(t), sg = t > 0 ? 1.0 : -1.0;
  if (alpha == 2.0) return {std::exp(-C / 2.0 * t * t), 0.0};
  std::complex<double> expo;
  if (alpha == 1.0) {
    expo = -at * C * std::complex<double>(kPi / 2.0, -std::log(at) * sg);
  } else {
    double k = C * gamma_fn(1.0 - alpha);
    expo = -std::pow(at, alpha) * k * std::complex<double>(std::cos(kPi * alpha / 2.0), std::sin(kPi * alpha / 2.0) * sg);
  }
  return std::exp(expo);
}

// F(x) = 1/2 + (1/π) ∫_0^∞ e^{−A t^α} sin(tx + θ(t)) / t dt.
double stable_cdf(double alpha, double C, double x) {
  check_stable(alpha, C);
  if (std::isnan(x)) throw std::domain_error("stable_cdf: x is NaN");
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  CfShape s(alpha, C);
  const double T = std::pow(-std::log(1e-12) / s.A, 1.0 / alpha);
  const double ax = std::abs(x);
  constexpr double kMaxPanels = 2e4;

  double integral = 0.0, err = 0.0;
  if (ax * T / kPi <= kMaxPanels) {
    auto f = [&](double t) {
      if (t <= 0.0) return x;  // never hit: both rules skip the endpoints
      return s.modulus(t) * std::sin(t * x + s.theta(t)) / t;
    };
    double h = ax > 0.0 ? std::min(T, kPi / ax) : T;
    h = std::min(h, T / 8.0);
    // The first panel carries the log singularity of α = 1.
    boost::math::quadrature::tanh_sinh<double> ts;
    double e0 = 0.0;
    integral = ts.integrate(f, 0.0, h, 1e-13, &e0);
    err += std::abs(e0 * integral);
    for (double lo = h; lo < T; lo += h) {
      double hi = std::min(lo + h, T), e = 0.0;
      integral += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 4, 1e-10, &e);
      err += e;
    }
  } else {
    // Split off ∫ sin(tx)/t = (π/2) sgn x; the remainders decay or oscillate
    // slowly and go through double-exponential Fourier quadrature.
    double sg = x > 0 ? 1.0 : -1.0;
    auto g_sin = [&](double t) {
      double m = s.modulus(t);
      if (m == 0.0) return -1.0 / t;
      return (m * std::cos(s.theta(t)) - 1.0) / t;
    };
    auto g_cos = [&](double t) {
      double m = s.modulus(t);
      if (m == 0.0) return 0.0;
      return m * std::sin(s.theta(t)) / t;
    };
    boost::math::quadrature::ooura_fourier_sin<double> osin(1e-12);
    boost::math::quadrature::ooura_fourier_cos<double> ocos(1e-12);
    auto [is, es] = osin.integrate(g_sin, ax);
    double ic = 0.0, ec = 0.0;
    if (alpha != 2.0) std::tie(ic, ec) = ocos.integrate(g_cos, ax);
    integral = sg * kPi / 2.0 + sg * is + ic;
    err = std::abs(es * is) + std::abs(ec * ic);
  }
  if (!std::isfinite(integral) || err > 1e-7)
    throw std::runtime_error("stable_cdf: quadrature did not converge at x = " + std::to_string(x));
  return std::clamp(0.5 + integral / kPi, 0.0, 1.0);
}

std::vector<double> stable_cdf_grid(const StableLaw& law, const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  double run = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && xs[i] < xs[i - 1]) throw std::domain_error("stable_cdf_grid: grid must be increasing");
    run = std::max(run, stable_cdf(law, xs[i]));
    out[i] = run;
  }
  return out;
}

}  // namespace absorb
