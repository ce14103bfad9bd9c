#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "absorb/exact.hpp"

namespace absorb {

using Histogram = std::map<std::int64_t, std::int64_t>;

Histogram make_histogram(const std::vector<std::int64_t>& sample);

/// sup_x |F_emp(x) − F(x)| over a sample, two-sided at every sample point.
/// Ties are grouped, so `cdf` is evaluated once per distinct value.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Kolmogorov distance between the lattice law of X/scale (X ~ pmf) and a
/// continuous CDF, checked on both sides of every atom. Residual mass is
/// treated as lying above the table.
double ks_lattice(const PmfVector& pmf, double scale, const std::function<double(double)>& cdf);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;  ///< after pooling
};

/// Goodness of fit of an integer histogram against an exact pmf. Cells are
/// pooled left to right until each has expected count ≥ `min_expected`; mass
/// outside the table forms one more cell. Throws if fewer than 2 cells remain.
ChiSquareResult chi_square_gof(const Histogram& observed, const PmfVector& pmf, double min_expected = 5.0);

/// Homogeneity test of two integer samples (2×K contingency table), pooling
/// adjacent values until every expected cell count is ≥ `min_expected`.
ChiSquareResult chi_square_two_sample(const Histogram& x, const Histogram& y, double min_expected = 5.0);

/// Upper tail P{χ²_dof ≥ stat}.
double chi_square_sf(double stat, int dof);

/// Linear-interpolation quantile (type 7), 0 ≤ q ≤ 1.
double quantile(std::vector<double> sample, double q);

}  // namespace absorb
