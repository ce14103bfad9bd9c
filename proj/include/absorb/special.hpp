#pragma once

// Shared gamma-function kernel. Every gamma or beta ratio in the library goes
// through differences of log_gamma so that large arguments never overflow.

namespace absorb {

/// log|Γ(x)| for x > 0.
double log_gamma(double x);

/// log B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// Γ(x) / Γ(y) for x, y > 0, evaluated as exp(log Γ(x) − log Γ(y)).
double gamma_ratio(double x, double y);

/// Γ(x) for any real x that is not a non-positive integer (sign included).
double gamma_fn(double x);

/// Harmonic number h_n = 1 + 1/2 + ... + 1/n, extended to real n ≥ 0 by
/// h(x) = digamma(x + 1) + Euler-Mascheroni.
double harmonic(double x);

/// Binomial coefficient C(n, k) as a double (exact for the small k used here).
double binomial(int n, int k);

}  // namespace absorb
