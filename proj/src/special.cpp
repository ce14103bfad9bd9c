#include "absorb/special.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace absorb {

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  return boost::math::lgamma(x);
}

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double gamma_ratio(double x, double y) {
  return std::exp(log_gamma(x) - log_gamma(y));
}

double gamma_fn(double x) { return boost::math::tgamma(x); }

double harmonic(double x) {
  if (x < 0.0) throw std::domain_error("harmonic: argument must be non-negative");
  if (x == 0.0) return 0.0;
  return boost::math::digamma(x + 1.0) + boost::math::constants::euler<double>();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace absorb
