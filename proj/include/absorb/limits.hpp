#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "absorb/jump_law.hpp"

namespace absorb {

// ---------------------------------------------------------------------------
// Exponential functionals of the subordinator with Lévy density
//   ν(y) = e^{−y/α} / (1 − e^{−y/α})^{α+1},   y > 0,  0 < α < 1.
// Its Laplace exponent is Φ(x) = Γ(1−α)Γ(αx+1)/Γ(α(x−1)+1) − 1.
// ---------------------------------------------------------------------------

/// Φ(x) for α ∈ (0, 1), x ≥ 0.
double phi(double alpha, double x);

/// Lévy density ν(y) of the subordinator driving Φ.
double levy_density(double alpha, double y);

/// ∫_0^∞ (1 − e^{−xy}) ν(y) dy by double-exponential quadrature; equals Φ(x).
double phi_levy_integral(double alpha, double x);

/// Laplace exponent as a reusable callable.
class LaplaceExponent {
 public:
  explicit LaplaceExponent(double alpha);
  double alpha() const { return alpha_; }
  double operator()(double x) const { return phi(alpha_, x); }

 private:
  double alpha_;
};

/// a_k = k! / (Φ(1)⋯Φ(k)), k = 0..k_max (k_max ≤ 12): moments of ∫_0^∞ e^{−U_t} dt.
std::vector<double> exp_functional_moments(double alpha, int k_max);

/// k! / (Γ^k(1−α) Γ(1+kα)), k = 0..k_max, α ∈ [0, 1). α = 1 is the point mass at 1.
std::vector<double> mittag_leffler_moments(double alpha, int k_max);

enum class MixedKind { QM, QA };

/// E Q^n M^m = n!/∏_{k=0}^{n}(1+φ(m+k)) and
/// E Q^n A^m = E Q^n M^m · m!/(φ(1)⋯φ(m)), for a general Laplace exponent φ.
double mixed_moments(const std::function<double(double)>& laplace_exponent, int n, int m, MixedKind which);
/// Same with φ = Φ(α, ·).
double mixed_moments(double alpha, int n, int m, MixedKind which);

/// lim E w^i(Y_n) N_n^j / w^{i+j}(n) = j! Γ(α(i−1)+1) / (Γ^{j+1}(1−α) Γ(α(i+j)+1)).
double bivar_limit_moments(double alpha, int i, int j);

// ---------------------------------------------------------------------------
// Stable laws μ_α, α ∈ [1, 2], with characteristic functions
//   1 < α < 2: exp{−|t|^α C Γ(1−α)(cos(πα/2) + i sin(πα/2) sgn t)}
//   α = 1:     exp{−|t| C (π/2 − i log|t| sgn t)}
//   α = 2:     exp{−(C/2) t²}
// ---------------------------------------------------------------------------

/// Samorodnitsky–Taqqu parametrization S_α(σ, β, 0).
struct StandardStable {
  double alpha;
  double beta;
  double sigma;
};

struct StableLaw {
  double alpha;
  double C;

  /// Law with cf exp(|t|^α (cos(πα/2) + i sin(πα/2) sgn t)), 1 < α < 2.
  static StableLaw unit_skewed(double alpha);
  /// Equivalent (α, β, σ); every μ_α here is totally skewed to the left.
  StandardStable to_standard() const;
};

std::complex<double> stable_cf(double alpha, double C, double t);
inline std::complex<double> stable_cf(const StableLaw& law, double t) { return stable_cf(law.alpha, law.C, t); }

/// Gil-Pelaez inversion F(x) = 1/2 − (1/π)∫_0^∞ Im(e^{−itx}ψ(t))/t dt, truncated
/// where |ψ| < 1e−12; clamped to [0, 1]. Throws on quadrature failure.
double stable_cdf(double alpha, double C, double x);
inline double stable_cdf(const StableLaw& law, double x) { return stable_cdf(law.alpha, law.C, x); }
/// CDF over an increasing grid, with the running maximum enforced.
std::vector<double> stable_cdf_grid(const StableLaw& law, const std::vector<double>& xs);

// ---------------------------------------------------------------------------
// Normalizing sequences of the limit theorems
// ---------------------------------------------------------------------------

enum class Regime { WeakLaw, StableFiniteMean, ExpFunctional, StableOne };

/// (X_n − b_n)/a_n converges to `target` (a stable law) or, for ExpFunctional,
/// X_n / a_n converges to ∫_0^∞ e^{−U_t} dt with index `alpha`.
struct LimitSpec {
  Regime regime;
  double alpha = 0.0;
  std::optional<StableLaw> target;
  bool finite_variance = false;
  std::function<double(double)> a;
  std::function<double(double)> b;
  // StableOne only
  std::function<double(double)> c;
  std::function<double(double)> psi;
};

/// Weak law: X_n / a_n → 1 with a_n = n / L(n), L the partial tail sum (n ≤ n_max).
LimitSpec normalizers_thm1(const JumpLaw& law, std::int64_t n_max);
/// Finite mean, stable limit. σ² < ∞: a_n = (m^{−3}σ²n)^{1/2}, b_n = n/m, μ_2 with C = 1.
/// beta(a,1), 0 < a < 1: α = 2 − a, C = 1/Γ(a), a_n = (α−1)^{(α+1)/α} n^{1/α}, b_n = n(α−1).
LimitSpec normalizers_thm2(const JumpLaw& law);
/// Tail ~ L(n)/n^α with α ∈ (0, 1): a_n = w(n) = 1/P{ξ ≥ n}.
LimitSpec normalizers_thm3(const JumpLaw& law);

enum class Thm4Path { Auto, Generic };

/// Tail ~ L(n)/n with infinite mean. The generic path solves x P̃(c) = 1 for c
/// (P̃ the log-interpolated tail), sets ψ(x) = x m_trunc(c(x)), inverts ψ for
/// b and sets a(x) = b(x) c(b(x)) / x, all by bracketed bisection to 1e−9
/// relative. The Bolthausen-Sznitman law uses closed forms under Auto:
/// c(x) = x, b(x) = x/log x + x log log x/(log x)², a(x) = b(x)²/x.
/// Callables are valid for arguments up to x_max.
LimitSpec normalizers_thm4(const JumpLaw& law, Thm4Path path = Thm4Path::Auto, double x_max = 1e6);

}  // namespace absorb
