#include "absorb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace absorb {

Histogram make_histogram(const std::vector<std::int64_t>& sample) {
  Histogram h;
  for (auto v : sample) ++h[v];
  return h;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(j) / n - f, f - static_cast<double>(i) / n});
    i = j;
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_lattice(const PmfVector& pmf, double scale, const std::function<double(double)>& cdf) {
  if (!(scale > 0.0)) throw std::invalid_argument("ks_lattice: scale must be > 0");
  double below = 0.0, d = 0.0;
  for (Eigen::Index i = 0; i < pmf.prob.size(); ++i) {
    if (pmf.prob[i] == 0.0) continue;
    const double f = cdf(static_cast<double>(pmf.offset + i) / scale);
    const double at = below + pmf.prob[i];
    d = std::max({d, std::abs(at - f), std::abs(f - below)});
    below = at;
  }
  return d;
}

double chi_square_sf(double stat, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_sf: dof must be >= 1");
  if (stat <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

ChiSquareResult chi_square_gof(const Histogram& observed, const PmfVector& pmf, double min_expected) {
  double total = 0.0;
  for (const auto& [v, c] : observed) total += static_cast<double>(c);
  if (total <= 0.0) throw std::invalid_argument("chi_square_gof: empty histogram");

  struct Cell {
    double obs, exp;
  };
  std::vector<Cell> cells;
  double in_table_obs = 0.0, in_table_p = 0.0;
  for (Eigen::Index i = 0; i < pmf.prob.size(); ++i) {
    const std::int64_t v = pmf.offset + i;
    auto it = observed.find(v);
    const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    cells.push_back({o, total * pmf.prob[i]});
    in_table_obs += o;
    in_table_p += pmf.prob[i];
  }
  cells.push_back({total - in_table_obs, total * std::max(0.0, 1.0 - in_table_p)});

  std::vector<Cell> pooled;
  Cell cur{0.0, 0.0};
  for (const auto& c : cells) {
    cur.obs += c.obs;
    cur.exp += c.exp;
    if (cur.exp >= min_expected) {
      pooled.push_back(cur);
      cur = {0.0, 0.0};
    }
  }
  if (cur.obs > 0.0 || cur.exp > 0.0) {
    if (pooled.empty())
      pooled.push_back(cur);
    else {
      pooled.back().obs += cur.obs;
      pooled.back().exp += cur.exp;
    }
  }
  if (pooled.size() < 2) throw std::domain_error("chi_square_gof: fewer than 2 cells after pooling");

  ChiSquareResult r;
  for (const auto& c : pooled) {
    if (c.exp <= 0.0) {
      r.statistic = c.obs > 0.0 ? INFINITY : r.statistic;
      continue;
    }
    r.statistic += (c.obs - c.exp) * (c.obs - c.exp) / c.exp;
  }
  r.bins = static_cast<int>(pooled.size());
  r.dof = r.bins - 1;
  r.p_value = std::isinf(r.statistic) ? 0.0 : chi_square_sf(r.statistic, r.dof);
  return r;
}

ChiSquareResult chi_square_two_sample(const Histogram& x, const Histogram& y, double min_expected) {
  double nx = 0.0, ny = 0.0;
  for (const auto& [v, c] : x) nx += static_cast<double>(c);
  for (const auto& [v, c] : y) ny += static_cast<double>(c);
  if (nx <= 0.0 || ny <= 0.0) throw std::invalid_argument("chi_square_two_sample: empty sample");
  const double n = nx + ny, small = std::min(nx, ny);

  Histogram keys;
  for (const auto& [v, c] : x) keys[v] += 0;
  for (const auto& [v, c] : y) keys[v] += 0;

  struct Col {
    double cx, cy;
  };
  std::vector<Col> cols;
  Col cur{0.0, 0.0};
  for (const auto& [v, unused] : keys) {
    auto ix = x.find(v), iy = y.find(v);
    cur.cx += ix == x.end() ? 0.0 : static_cast<double>(ix->second);
    cur.cy += iy == y.end() ? 0.0 : static_cast<double>(iy->second);
    if ((cur.cx + cur.cy) * small / n >= min_expected) {
      cols.push_back(cur);
      cur = {0.0, 0.0};
    }
  }
  if (cur.cx + cur.cy > 0.0) {
    if (cols.empty())
      cols.push_back(cur);
    else {
      cols.back().cx += cur.cx;
      cols.back().cy += cur.cy;
    }
  }
  if (cols.size() < 2) throw std::domain_error("chi_square_two_sample: fewer than 2 cells after pooling");

  ChiSquareResult r;
  for (const auto& c : cols) {
    const double col = c.cx + c.cy;
    const double ex = col * nx / n, ey = col * ny / n;
    r.statistic += (c.cx - ex) * (c.cx - ex) / ex + (c.cy - ey) * (c.cy - ey) / ey;
  }
  r.bins = static_cast<int>(cols.size());
  r.dof = r.bins - 1;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

double quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("quantile: q must lie in [0, 1]");
  std::sort(sample.begin(), sample.end());
  const double h = q * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

}  // namespace absorb
