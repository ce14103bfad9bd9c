#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absorb/coalescent.hpp"
#include "absorb/jump_law.hpp"

namespace absorb {

using KeyValues = std::map<std::string, std::string>;

/// Flat "key = value" text; '#' starts a comment, blank lines are ignored.
KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::string& path);

/// Step law from a short spec:
///   bs | geometric:q=0.5 | beta:a=1.5 | table:0.5,0.3,0.2
JumpLaw parse_law(const std::string& spec);
/// "a=1.5,b=1" (either key optional, default 1).
CoalescentParams parse_coalescent(const std::string& spec);

/// Thresholds and run sizes of the acceptance criteria. Every tolerance lives
/// here so that it can be changed from a config file without rebuilding.
struct AcceptanceConfig {
  double chi2_level = 1e-3;
  int threads = 1;

  std::int64_t a1_reps = 1'000'000;
  std::int64_t a1_n_max = 12;

  std::int64_t a2_n_exact = 100'000;
  std::int64_t a2_n_mc = 10'000;
  std::int64_t a2_reps = 100'000;
  double a2_rel_tol = 0.10;
  double a2_se_mult = 4.0;

  std::int64_t a3_n = 10'000;
  std::int64_t a3_reps = 100'000;
  double a3_ks_tol = 0.05;

  std::int64_t a4_n = 10'000;
  std::int64_t a4_reps = 100'000;
  double a4_ks_tol = 0.02;

  std::int64_t a5_n_max = 100'000;
  double a5_lo = 0.85;
  double a5_hi = 1.15;

  double a6_tol = 1e-10;

  double a7_tol = 1e-10;
  std::int64_t a7_moment_n = 200;
  std::int64_t a7_equ_n = 100;
  std::int64_t a7_y_n = 10'000;

  double a8_tol = 1e-10;
  std::int64_t a8_n = 200;
  std::int64_t a8_quad_n = 10;

  std::int64_t a9_n = 50;
  std::int64_t a9_reps = 100'000;

  std::int64_t a10_n = 10'000;
  std::int64_t a10_reps = 100'000;
  double a10_rel_tol = 0.15;
  double a10_se_mult = 4.0;

  std::int64_t a11_n_exact = 10'000;
  double a11_ks_tol = 0.01;
  std::int64_t a11_reps = 1'000'000;
  std::int64_t a11_n_path = 100;

  double a12_tv_max = 0.01;

  /// Overrides fields by name; unknown keys throw.
  void apply(const KeyValues& kv);
  KeyValues to_key_values() const;
};

/// One CLI run.
struct ExperimentConfig {
  std::string law = "bs";
  std::string coalescent = "a=1,b=1";
  std::vector<std::int64_t> n_grid{100};
  std::int64_t reps = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> statistics{"M", "N", "Y"};
  std::string limit;
  std::string out;
  std::string format = "csv";
  int threads = 1;
  int k_max = 4;

  void apply(const KeyValues& kv);
  KeyValues to_key_values() const;
  /// n-grid strictly increasing with n ≥ 1; reps ≥ 100 when standard errors
  /// are requested; format is csv or json.
  void validate(bool needs_standard_errors) const;
};

std::vector<std::int64_t> parse_int_list(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

}  // namespace absorb
