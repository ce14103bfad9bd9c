// absorb: exact tables, simulations, coalescent rates and limit-law constants.
//
//   absorb exact      --law bs --n 10,100 --what moments|pmf|N|Y|W|tv
//   absorb simulate   --law geometric:q=0.5 --n 100 --reps 10000 --stats M,N,Y
//   absorb coalescent --params a=1.5,b=1 --n 50 --what rates|kernel|collisions
//   absorb limits     --what phi|ef|ml|mixed|bivar|cdf|thm2|thm4 --alpha 0.5
//   absorb verify     --ids A6,A12
//
// Common flags: --seed --reps --n --law --out --format csv|json --threads --config.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "absorb/acceptance.hpp"
#include "absorb/coalescent.hpp"
#include "absorb/config.hpp"
#include "absorb/coupling.hpp"
#include "absorb/exact.hpp"
#include "absorb/kernel.hpp"
#include "absorb/limits.hpp"
#include "absorb/report.hpp"
#include "absorb/stats.hpp"

using namespace absorb;

namespace {

struct Common {
  std::string config_path;
  std::string law, n, out, format, coalescent, stats;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  int k_max = 0;
  CLI::App* app = nullptr;

  bool given(const std::string& flag) const {
    const auto* o = app->get_option_no_throw(flag);
    return o != nullptr && o->count() > 0;
  }

  // Config file first, then whatever was given on the command line.
  ExperimentConfig resolve() const {
    ExperimentConfig c;
    if (!config_path.empty()) c.apply(read_key_values(config_path));
    if (given("--law")) c.law = law;
    if (given("--n")) c.n_grid = parse_int_list(n);
    if (given("--reps")) c.reps = reps;
    if (given("--seed")) c.seed = seed;
    if (given("--out")) c.out = out;
    if (given("--format")) c.format = format;
    if (given("--threads")) c.threads = threads;
    if (given("--params")) c.coalescent = coalescent;
    if (given("--stats")) c.statistics = split(stats, ',');
    if (given("--k")) c.k_max = k_max;
    return c;
  }
};

void add_common(CLI::App* sub, Common& c, bool with_law = true) {
  c.app = sub;
  sub->add_option("--config", c.config_path, "flat key = value config file (CLI flags win)");
  if (with_law) sub->add_option("--law", c.law, "bs | geometric:q=Q | beta:a=A | table:w1,w2,...");
  sub->add_option("--n", c.n, "n or comma-separated increasing n-grid");
  sub->add_option("--reps", c.reps, "replicates");
  sub->add_option("--seed", c.seed, "u64 seed");
  sub->add_option("--out", c.out, "output path (default stdout)");
  sub->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--k", c.k_max, "highest moment");
}

void emit(const ExperimentConfig& cfg, const std::string& command, const KeyValues& extra, const Table& t) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + cfg.out);
    os = &file;
  }
  os->imbue(std::locale::classic());
  if (cfg.format == "json") {
    KeyValues echo = cfg.to_key_values();
    for (const auto& [k, v] : extra) echo[k] = v;
    write_json(*os, command, echo, {t});
  } else {
    write_csv(*os, t);
  }
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(std::stod(p));
  return out;
}

// ---------------------------------------------------------------------------

int run_exact(const ExperimentConfig& cfg, const std::string& what) {
  cfg.validate(false);
  const bool counter = cfg.law == "counterexample";
  std::unique_ptr<JumpLaw> law;
  if (!counter) law = std::make_unique<JumpLaw>(parse_law(cfg.law));
  const TransitionKernel kernel = counter ? counterexample_kernel() : TransitionKernel::from_jump_law(*law);
  const std::int64_t n_top = cfg.n_grid.back();
  Table t;
  t.name = what;
  if (what == "moments") {
    t.columns = {"n", "k", "EX", "EN"};
    const auto mx = moments_X(kernel, n_top, cfg.k_max);
    std::unique_ptr<MomentTable> mn;
    if (law) mn = std::make_unique<MomentTable>(moments_N(*law, n_top, cfg.k_max));
    for (auto n : cfg.n_grid)
      for (int k = 1; k <= cfg.k_max; ++k)
        t.add({n, std::int64_t{k}, mx(k, n), mn ? Cell{(*mn)(k, n)} : Cell{}});
  } else if (what == "pmf" || what == "N" || what == "Y") {
    if (what != "pmf" && counter) throw std::invalid_argument(what + " needs a step law");
    t.columns = {"n", "value", "probability"};
    ExactOptions o;
    o.pmf_cap = std::max<std::int64_t>(o.pmf_cap, n_top);
    for (auto n : cfg.n_grid) {
      const PmfVector p = what == "pmf" ? pmf_X(kernel, n, o) : what == "N" ? pmf_N(*law, n) : pmf_Y(*law, n);
      for (Eigen::Index i = 0; i < p.prob.size(); ++i) t.add({n, p.offset + i, p.prob[i]});
    }
  } else if (what == "W") {
    if (counter) throw std::invalid_argument("W needs a step law");
    t.columns = {"value", "probability"};
    const PmfVector w = pmf_W(*law, n_top);
    for (Eigen::Index i = 0; i < w.prob.size(); ++i) t.add({w.offset + i, w.prob[i]});
  } else if (what == "tv") {
    if (counter) throw std::invalid_argument("tv needs a step law");
    t.columns = {"n", "tv_Y_W"};
    for (auto n : cfg.n_grid) t.add({n, tv_overshoot_to_limit(*law, n)});
  } else {
    throw std::invalid_argument("exact: unknown --what '" + what + "'");
  }
  emit(cfg, "exact", {{"what", what}}, t);
  return 0;
}

int run_simulate(const ExperimentConfig& cfg, const std::string& replicates_out) {
  cfg.validate(true);
  const JumpLaw law = parse_law(cfg.law);
  std::vector<Statistic> stats;
  for (const auto& s : cfg.statistics) stats.push_back(statistic(s));
  Table t;
  t.name = "simulate";
  t.columns = {"n", "statistic", "reps", "mean", "std_error", "m1", "m2", "m3", "m4", "m1_se", "m2_se", "m3_se", "m4_se"};
  std::ofstream raw;
  if (!replicates_out.empty()) {
    raw.open(replicates_out, std::ios::binary);
    if (!raw) throw std::runtime_error("cannot write " + replicates_out);
  }
  for (auto n : cfg.n_grid) {
    if (n < 2) throw std::invalid_argument("simulate: n must be >= 2");
    ExperimentOptions o;
    o.threads = cfg.threads;
    o.keep_replicates = raw.is_open();
    const auto ex = run_experiment(law, n, cfg.reps, cfg.seed, stats, o);
    for (const auto& s : ex.stats)
      t.add({n, s.name, cfg.reps, s.mean, s.std_error, s.moment[0], s.moment[1], s.moment[2], s.moment[3],
             s.moment_std_error[0], s.moment_std_error[1], s.moment_std_error[2], s.moment_std_error[3]});
    if (raw.is_open()) write_replicates_csv(raw, ex.replicates);
  }
  emit(cfg, "simulate", {}, t);
  return 0;
}

int run_coalescent(const ExperimentConfig& cfg, const std::string& what) {
  cfg.validate(what == "collisions");
  const CoalescentParams p = parse_coalescent(cfg.coalescent);
  Table t;
  t.name = what;
  if (what == "rates") {
    t.columns = {"n", "k", "g_nk", "g_n"};
    for (auto n : cfg.n_grid) {
      const double g = total_rate(p, n);
      for (std::int64_t k = 1; k < n; ++k) t.add({n, k, rate_gnk(p, n, k), g});
    }
  } else if (what == "kernel") {
    t.columns = {"n", "decrement", "probability", "jump_law_regime"};
    const auto ck = collision_kernel(p, cfg.n_grid.back());
    for (auto n : cfg.n_grid) {
      const KernelRow row = ck.kernel.row(n);
      for (KernelRow::InnerIterator it(row); it; ++it)
        t.add({n, static_cast<std::int64_t>(it.index()), it.value(), ck.jump_law_regime});
    }
  } else if (what == "collisions") {
    t.columns = {"n", "collisions", "count", "exact_probability"};
    for (auto n : cfg.n_grid) {
      if (n < 2) throw std::invalid_argument("coalescent: n must be >= 2");
      const auto xs = collision_counts(p, n, cfg.reps, cfg.seed, cfg.threads);
      std::unique_ptr<PmfVector> exact;
      if (n <= 500) exact = std::make_unique<PmfVector>(pmf_X(collision_kernel(p, n).kernel, n));
      for (const auto& [x, c] : make_histogram(xs)) t.add({n, x, c, exact ? Cell{exact->at(x)} : Cell{}});
    }
  } else {
    throw std::invalid_argument("coalescent: unknown --what '" + what + "'");
  }
  emit(cfg, "coalescent", {{"what", what}}, t);
  return 0;
}

int run_limits(const ExperimentConfig& cfg, const std::string& what, double alpha, double C, const std::string& xs,
               int m) {
  Table t;
  t.name = what;
  KeyValues extra = {{"what", what}, {"alpha", format_double(alpha)}};
  if (what == "phi") {
    t.columns = {"x", "phi", "levy_integral"};
    for (double x : parse_real_list(xs)) t.add({x, phi(alpha, x), phi_levy_integral(alpha, x)});
  } else if (what == "ef" || what == "ml") {
    t.columns = {"k", what == "ef" ? "exp_functional_moment" : "mittag_leffler_moment"};
    const auto v = what == "ef" ? exp_functional_moments(alpha, cfg.k_max) : mittag_leffler_moments(alpha, cfg.k_max);
    for (int k = 0; k <= cfg.k_max; ++k) t.add({std::int64_t{k}, v[k]});
  } else if (what == "mixed") {
    t.columns = {"n", "m", "EQnMm", "EQnAm"};
    for (int n = 0; n <= cfg.k_max; ++n)
      for (int j = 0; j <= m; ++j)
        t.add({std::int64_t{n}, std::int64_t{j}, mixed_moments(alpha, n, j, MixedKind::QM),
               mixed_moments(alpha, n, j, MixedKind::QA)});
  } else if (what == "bivar") {
    t.columns = {"i", "j", "limit"};
    for (int i = 0; i <= cfg.k_max; ++i)
      for (int j = 0; j <= m; ++j) t.add({std::int64_t{i}, std::int64_t{j}, bivar_limit_moments(alpha, i, j)});
  } else if (what == "cdf") {
    extra["C"] = format_double(C);
    t.columns = {"x", "cdf"};
    std::vector<double> grid = parse_real_list(xs);
    const auto f = stable_cdf_grid(StableLaw{alpha, C}, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) t.add({grid[i], f[i]});
  } else if (what == "thm2" || what == "thm4") {
    const JumpLaw law = parse_law(cfg.law);
    const LimitSpec s = what == "thm2" ? normalizers_thm2(law) : normalizers_thm4(law);
    t.columns = {"n", "a_n", "b_n"};
    if (what == "thm4") t.columns = {"n", "a_n", "b_n", "c_n", "psi_n"};
    for (auto n : cfg.n_grid) {
      const double dn = static_cast<double>(n);
      if (what == "thm2")
        t.add({n, s.a(dn), s.b(dn)});
      else
        t.add({n, s.a(dn), s.b(dn), s.c(dn), s.psi(dn)});
    }
  } else {
    throw std::invalid_argument("limits: unknown --what '" + what + "'");
  }
  emit(cfg, "limits", extra, t);
  return 0;
}

int run_verify(const Common& c, const std::string& ids_arg, bool timings) {
  AcceptanceConfig acfg;
  if (!c.config_path.empty()) acfg.apply(read_key_values(c.config_path));
  if (c.given("--threads")) acfg.threads = c.threads;
  ExperimentConfig out;
  if (c.given("--out")) out.out = c.out;
  if (c.given("--format")) out.format = c.format;
  const std::uint64_t seed = c.given("--seed") ? c.seed : 1;
  std::vector<std::string> ids = ids_arg.empty() ? known_criteria() : split(ids_arg, ',');
  const auto rep = run_acceptance(ids, seed, acfg, [](const CriterionOutcome& o) {
    std::fprintf(stderr, "%s %-4s %7.1fs  %s%s%s\n", o.pass ? "PASS" : "FAIL", o.id.c_str(), o.runtime_s,
                 o.title.c_str(), o.error.empty() ? "" : "  error: ", o.error.c_str());
  });
  KeyValues echo = acfg.to_key_values();
  echo["seed"] = std::to_string(seed);
  echo["ids"] = ids_arg;
  if (out.format == "json") {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.out.empty()) {
      file.open(out.out, std::ios::binary);
      os = &file;
    }
    write_json(*os, "verify", echo, {report_table(rep, timings)});
  } else {
    emit(out, "verify", {}, report_table(rep, timings));
  }
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"absorption times of death chains: exact laws, coupling simulation, limit laws"};
  app.require_subcommand(1);

  Common ex, sim, coal, lim, ver;
  std::string ex_what = "moments", coal_what = "rates", lim_what = "phi", xs = "0.5,1,2,5", ids, replicates_out;
  double alpha = 0.5, C = 1.0;
  int m = 3;
  bool timings = false;

  auto* s_exact = app.add_subcommand("exact", "tables from the exact recursions");
  add_common(s_exact, ex);
  s_exact->add_option("--what", ex_what, "moments | pmf | N | Y | W | tv");

  auto* s_sim = app.add_subcommand("simulate", "coupled random-walk experiments");
  add_common(s_sim, sim);
  s_sim->add_option("--stats", sim.stats, "comma list of M,N,Y,T,M0,M_minus_N_plus_1");
  s_sim->add_option("--replicates", replicates_out, "also dump every replicate as CSV here");

  auto* s_coal = app.add_subcommand("coalescent", "beta-coalescent rates and collision counts");
  add_common(s_coal, coal, false);
  s_coal->add_option("--params", coal.coalescent, "a=A,b=B");
  s_coal->add_option("--what", coal_what, "rates | kernel | collisions");

  auto* s_lim = app.add_subcommand("limits", "limit-law constants, stable CDF grids, normalizers");
  add_common(s_lim, lim);
  s_lim->add_option("--what", lim_what, "phi | ef | ml | mixed | bivar | cdf | thm2 | thm4");
  s_lim->add_option("--alpha", alpha, "index α");
  s_lim->add_option("--C", C, "stable scale constant C");
  s_lim->add_option("--x", xs, "comma-separated evaluation points");
  s_lim->add_option("--m", m, "second index for mixed / bivar tables");

  auto* s_ver = app.add_subcommand("verify", "run acceptance criteria");
  add_common(s_ver, ver, false);
  s_ver->add_option("--ids", ids, "comma list, default all");
  s_ver->add_flag("--timings", timings, "include runtimes in the output file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*s_exact) return run_exact(ex.resolve(), ex_what);
    if (*s_sim) return run_simulate(sim.resolve(), replicates_out);
    if (*s_coal) return run_coalescent(coal.resolve(), coal_what);
    if (*s_lim) return run_limits(lim.resolve(), lim_what, alpha, C, xs, m);
    if (*s_ver) return run_verify(ver, ids, timings);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "absorb: %s\n", e.what());
    return 2;
  }
  return 2;
}
