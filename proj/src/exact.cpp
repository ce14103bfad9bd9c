#include "absorb/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "absorb/special.hpp"

namespace absorb {

PmfVector::PmfVector(std::int64_t off, Eigen::VectorXd probabilities, double res)
    : offset(off), prob(std::move(probabilities)), residual(res) {
  for (Eigen::Index i = 0; i < prob.size(); ++i) {
    if (prob[i] < 0.0) {
      if (prob[i] < -1e-15) throw std::logic_error("PmfVector: negative probability " + std::to_string(prob[i]));
      prob[i] = 0.0;
    }
  }
  if (residual < 0.0 && residual > -1e-12) residual = 0.0;
}

double PmfVector::at(std::int64_t j) const {
  if (j < min_value() || j > max_value()) return 0.0;
  return prob[j - offset];
}

double PmfVector::moment(int k) const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < prob.size(); ++i) {
    s += std::pow(static_cast<double>(offset + i), k) * prob[i];
  }
  return s;
}

double PmfVector::cdf(std::int64_t j) const {
  if (j < min_value()) return 0.0;
  const std::int64_t last = std::min(j, max_value());
  return prob.head(last - offset + 1).sum();
}

double tv_distance(const PmfVector& a, const PmfVector& b) {
  const std::int64_t lo = std::min(a.min_value(), b.min_value());
  const std::int64_t hi = std::max(a.max_value(), b.max_value());
  double s = 0.0;
  for (std::int64_t j = lo; j <= hi; ++j) s += std::abs(a.at(j) - b.at(j));
  return 0.5 * (s + a.residual + b.residual);
}

MomentTable::MomentTable(MomentKind which, int k_max, std::int64_t n_max)
    : which_(which), values_(Eigen::MatrixXd::Zero(k_max + 1, n_max + 1)) {}

namespace {

void check_moment_args(std::int64_t n_max, int k_max) {
  if (n_max < 1 || n_max > 100000) throw std::invalid_argument("moments: need 1 <= n_max <= 1e5");
  if (k_max < 0 || k_max > 8) throw std::invalid_argument("moments: need 0 <= k_max <= 8");
  if (k_max * std::log(static_cast<double>(n_max)) > 700.0) {
    throw std::overflow_error("moments: k_max * log(n_max) exceeds the floating-point range");
  }
}

Eigen::VectorXd pmf_head(const JumpLaw& law, std::int64_t n) {
  // p_1..p_n at index 0..n−1
  Eigen::VectorXd p(n);
  for (std::int64_t k = 1; k <= n; ++k) p[k - 1] = law.pmf(k);
  return p;
}

Eigen::MatrixXd binomials(int k_max) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k_max + 1, k_max + 1);
  for (int k = 0; k <= k_max; ++k)
    for (int j = 0; j <= k; ++j) c(k, j) = binomial(k, j);
  return c;
}

// Shared engine for the two moment recursions
//   V_n = shift + V'_{n−i}  with i drawn from a (possibly defective) row,
// where `self` is the probability of stopping at V_n = shift (N's tail term).
// shifted[k](m) holds E(V_m + 1)^k in reversed order so that the convolution
// over i = 1..n−1 is a contiguous dot product.
struct ShiftedBuffer {
  std::int64_t n_max;
  std::vector<Eigen::VectorXd> rev;

  ShiftedBuffer(int k_max, std::int64_t n) : n_max(n), rev(k_max + 1, Eigen::VectorXd::Zero(n + 1)) {}
  double& at(int k, std::int64_t m) { return rev[k][n_max - m]; }
  // entries for m = n−1, n−2, …, 1 (i.e. i = 1..n−1)
  auto window(int k, std::int64_t n) const { return rev[k].segment(n_max - n + 1, n - 1); }
};

void store_shifted(ShiftedBuffer& buf, const MomentTable& t, const Eigen::MatrixXd& binom, std::int64_t m) {
  for (int k = 0; k <= t.k_max(); ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += binom(k, j) * t(j, m);
    buf.at(k, m) = s;
  }
}

}  // namespace

MomentTable moments_X(const TransitionKernel& kernel, std::int64_t n_max, int k_max) {
  check_moment_args(n_max, k_max);
  MomentTable t(MomentKind::X, k_max, n_max);
  const Eigen::MatrixXd binom = binomials(k_max);
  ShiftedBuffer buf(k_max, n_max);

  t(0, 1) = 1.0;  // X_1 = 0
  store_shifted(buf, t, binom, 1);

  if (const JumpLaw* law = kernel.jump_law()) {
    const Eigen::VectorXd p = pmf_head(*law, n_max);
    double prefix = 0.0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
      prefix += p[n - 2];
      const double r = 1.0 / prefix;
      const auto pw = p.head(n - 1);
      t(0, n) = 1.0;
      for (int k = 1; k <= k_max; ++k) t(k, n) = r * pw.dot(buf.window(k, n));
      store_shifted(buf, t, binom, n);
    }
  } else {
    for (std::int64_t n = 2; n <= n_max; ++n) {
      const KernelRow row = kernel.row(n);
      t(0, n) = 1.0;
      for (int k = 1; k <= k_max; ++k) {
        double s = 0.0;
        for (KernelRow::InnerIterator it(row); it; ++it) s += it.value() * buf.at(k, n - it.index());
        t(k, n) = s;
      }
      store_shifted(buf, t, binom, n);
    }
  }
  return t;
}

MomentTable moments_N(const JumpLaw& law, std::int64_t n_max, int k_max) {
  check_moment_args(n_max, k_max);
  MomentTable t(MomentKind::N, k_max, n_max);
  const Eigen::MatrixXd binom = binomials(k_max);
  ShiftedBuffer buf(k_max, n_max);
  const Eigen::VectorXd p = pmf_head(law, n_max);

  for (int k = 0; k <= k_max; ++k) t(k, 1) = 1.0;  // N_1 = 1
  store_shifted(buf, t, binom, 1);
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const double stop = law.tail(n);
    const auto pw = p.head(n - 1);
    t(0, n) = 1.0;
    for (int k = 1; k <= k_max; ++k) t(k, n) = stop + pw.dot(buf.window(k, n));
    store_shifted(buf, t, binom, n);
  }
  return t;
}

PmfVector pmf_X(const TransitionKernel& kernel, std::int64_t n, const ExactOptions& opts) {
  if (n < 1) throw std::invalid_argument("pmf_X: need n >= 1");
  if (n > opts.pmf_cap) throw std::length_error("pmf_X: n exceeds the configured cap");
  if (n == 1) return PmfVector(0, Eigen::VectorXd::Ones(1));

  // Forward propagation of the chain's state distribution; at step t the mass
  // that lands on state 1 is P{X_n = t}.
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd next(n + 1);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n - 1);
  mass[n] = 1.0;
  std::int64_t top = n;

  if (const JumpLaw* law = kernel.jump_law()) {
    const Eigen::VectorXd p = pmf_head(*law, n);
    Eigen::VectorXd prefix(n + 1);
    prefix[0] = prefix[1] = 0.0;
    for (std::int64_t s = 2; s <= n; ++s) prefix[s] = prefix[s - 1] + p[s - 2];
    Eigen::VectorXd weighted = Eigen::VectorXd::Zero(n + 1);
    for (std::int64_t step = 1; top >= 2; ++step) {
      for (std::int64_t s = 2; s <= top; ++s) weighted[s] = mass[s] / prefix[s];
      next.head(top).setZero();
      // next[j] = Σ_{i ≥ 1} p_i weighted[j + i]
      for (std::int64_t j = 1; j < top; ++j) next[j] = p.head(top - j).dot(weighted.segment(j + 1, top - j));
      out[step - 1] = next[1];
      next[1] = 0.0;
      mass.head(top).swap(next.head(top));
      mass[top] = 0.0;
      --top;
    }
  } else {
    std::vector<KernelRow> rows(n + 1);
    for (std::int64_t step = 1; top >= 2; ++step) {
      next.head(top).setZero();
      for (std::int64_t s = 2; s <= top; ++s) {
        if (mass[s] == 0.0) continue;
        if (rows[s].size() == 0) rows[s] = kernel.row(s);
        for (KernelRow::InnerIterator it(rows[s]); it; ++it) next[s - it.index()] += mass[s] * it.value();
      }
      out[step - 1] = next[1];
      next[1] = 0.0;
      mass.head(top).swap(next.head(top));
      mass[top] = 0.0;
      --top;
      while (top >= 2 && mass[top] == 0.0) --top;
    }
  }
  return PmfVector(1, std::move(out));
}

std::vector<PmfVector> pmf_X_table(const TransitionKernel& kernel, std::int64_t n_max, const ExactOptions& opts) {
  if (n_max < 1) throw std::invalid_argument("pmf_X_table: need n_max >= 1");
  if (n_max > opts.pmf_cap) throw std::length_error("pmf_X_table: n_max exceeds the configured cap");
  std::vector<PmfVector> table;
  table.reserve(n_max);
  table.emplace_back(0, Eigen::VectorXd::Ones(1));
  for (std::int64_t n = 2; n <= n_max; ++n) {
    // X_n takes values in {1, …, n−1}
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n - 1);
    const KernelRow row = kernel.row(n);
    for (KernelRow::InnerIterator it(row); it; ++it) {
      const PmfVector& prev = table[n - it.index() - 1];
      for (Eigen::Index i = 0; i < prev.prob.size(); ++i) {
        q[prev.offset + i] += it.value() * prev.prob[i];  // value j−1 = offset+i → index j−1
      }
    }
    table.emplace_back(1, std::move(q));
  }
  return table;
}

PmfVector pmf_S(const JumpLaw& law, std::int64_t m, std::int64_t n_cap) {
  if (m < 0 || n_cap < 0) throw std::invalid_argument("pmf_S: need m >= 0 and n_cap >= 0");
  Eigen::VectorXd cur = Eigen::VectorXd::Zero(n_cap + 1);
  cur[0] = 1.0;
  if (m == 0) return PmfVector(0, cur);
  const Eigen::VectorXd p = pmf_head(law, std::max<std::int64_t>(n_cap, 1));
  Eigen::VectorXd nxt(n_cap + 1);
  for (std::int64_t step = 1; step <= m; ++step) {
    nxt.setZero();
    for (std::int64_t j = step; j <= n_cap; ++j) {
      // Σ_{i=1}^{j} p_i cur[j−i]
      nxt[j] = p.head(j).dot(cur.head(j).reverse());
    }
    cur.swap(nxt);
  }
  const double kept = cur.sum();
  return PmfVector(0, cur, std::max(0.0, 1.0 - kept));
}

PmfVector pmf_N(const JumpLaw& law, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("pmf_N: need n >= 1");
  // P{N_n = m} = Σ_{j<n} P{S_{m−1} = j} P{ξ ≥ n − j}
  Eigen::VectorXd tails(n + 1);
  for (std::int64_t d = 1; d <= n; ++d) tails[d] = law.tail(d);
  const Eigen::VectorXd p = pmf_head(law, n);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);  // law of S_{m−1} restricted to [0, n−1]
  s[0] = 1.0;
  Eigen::VectorXd nxt(n);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (std::int64_t m = 1; m <= n; ++m) {
    double pm = 0.0;
    for (std::int64_t j = m - 1; j < n; ++j) pm += s[j] * tails[n - j];
    out[m - 1] = pm;
    nxt.setZero();
    for (std::int64_t j = m; j < n; ++j) nxt[j] = p.head(j).dot(s.head(j).reverse());
    s.swap(nxt);
  }
  return PmfVector(1, out);
}

RenewalSeq renewal_seq(const JumpLaw& law, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("renewal_seq: need n >= 0");
  const Eigen::VectorXd p = pmf_head(law, std::max<std::int64_t>(n, 1));
  // u is kept reversed (rev[n − k] = u_k) so each step is a contiguous dot
  Eigen::VectorXd rev = Eigen::VectorXd::Zero(n + 1);
  rev[n] = 1.0;
  for (std::int64_t k = 1; k <= n; ++k) rev[n - k] = p.head(k).dot(rev.segment(n - k + 1, k));
  RenewalSeq out{rev.reverse()};
  for (std::int64_t k = 0; k <= n; ++k) {
    if (out.u[k] > 1.0 + 1e-12) throw std::logic_error("renewal_seq: u_k exceeds 1");
  }
  return out;
}

Eigen::VectorXd renewal_defect(const JumpLaw& law, std::int64_t n) {
  const auto m = law.mean();
  if (!m) throw std::domain_error("renewal_defect: law has infinite mean");
  const double inv_m = 1.0 / *m;
  const Eigen::VectorXd p = pmf_head(law, std::max<std::int64_t>(n, 1));
  Eigen::VectorXd rev = Eigen::VectorXd::Zero(n + 1);
  rev[n] = 1.0 - inv_m;
  for (std::int64_t k = 1; k <= n; ++k) {
    rev[n - k] = p.head(k).dot(rev.segment(n - k + 1, k)) - law.tail(k + 1) * inv_m;
  }
  return rev.reverse();
}

PmfVector pmf_Y(const JumpLaw& law, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("pmf_Y: need n >= 1");
  const RenewalSeq r = renewal_seq(law, n - 1);
  Eigen::VectorXd y(n);
  for (std::int64_t j = 1; j <= n; ++j) y[j - 1] = law.tail(j) * r.u[n - j];
  return PmfVector(1, y);
}

PmfVector pmf_W(const JumpLaw& law, std::int64_t k_max) {
  const auto m = law.mean();
  if (!m) throw std::domain_error("pmf_W: law has infinite mean");
  if (k_max < 1) throw std::invalid_argument("pmf_W: need k_max >= 1");
  Eigen::VectorXd w(k_max);
  for (std::int64_t k = 1; k <= k_max; ++k) w[k - 1] = law.tail(k) / *m;
  return PmfVector(1, w, law.excess_mean(k_max) / *m);
}

double tv_overshoot_to_limit(const JumpLaw& law, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("tv_overshoot_to_limit: need n >= 1");
  const double m = *law.mean();
  const Eigen::VectorXd e = renewal_defect(law, n - 1);
  double s = 0.0;
  for (std::int64_t j = 1; j <= n; ++j) s += law.tail(j) * std::abs(e[n - j]);
  return 0.5 * (s + law.excess_mean(n) / m);
}

}  // namespace absorb
