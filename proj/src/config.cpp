#include "absorb/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace absorb {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
  return d;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  double d = to_double(key, v);  // accepts 1e6
  if (d != std::floor(d) || std::abs(d) > 9.0e18) throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
  return static_cast<std::int64_t>(d);
}

// key=value pairs separated by commas
KeyValues parse_params(const std::string& s) {
  KeyValues kv;
  for (const auto& part : split(s, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value in '" + s + "'");
    kv[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
  }
  return kv;
}

}  // namespace

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& p : split(s, ',')) out.push_back(to_int("list", p));
  return out;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": missing '='");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

JumpLaw parse_law(const std::string& spec) {
  std::string s = trim(spec);
  std::string head = s, rest;
  if (auto c = s.find(':'); c != std::string::npos) {
    head = trim(s.substr(0, c));
    rest = trim(s.substr(c + 1));
  }
  std::transform(head.begin(), head.end(), head.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (head == "bs") return JumpLaw::bolthausen_sznitman();
  if (head == "geometric") {
    auto kv = parse_params(rest);
    if (!kv.count("q")) throw std::invalid_argument("geometric law needs q");
    return JumpLaw::geometric(to_double("q", kv["q"]));
  }
  if (head == "beta") {
    auto kv = parse_params(rest);
    if (!kv.count("a")) throw std::invalid_argument("beta law needs a");
    return JumpLaw::beta_coalescent(to_double("a", kv["a"]));
  }
  if (head == "table") {
    std::vector<double> w;
    for (const auto& p : split(rest, ',')) w.push_back(to_double("table", p));
    return JumpLaw::table(std::move(w));
  }
  throw std::invalid_argument("unknown law '" + spec + "'");
}

CoalescentParams parse_coalescent(const std::string& spec) {
  CoalescentParams p;
  if (trim(spec).empty()) return p;
  for (const auto& [k, v] : parse_params(spec)) {
    if (k == "a")
      p.a = to_double(k, v);
    else if (k == "b")
      p.b = to_double(k, v);
    else
      throw std::invalid_argument("unknown coalescent parameter '" + k + "'");
  }
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------

namespace {

template <class Cfg>
struct FieldTable {
  std::map<std::string, std::function<void(Cfg&, const std::string&)>> set;
  std::map<std::string, std::function<std::string(const Cfg&)>> get;

  void real(const std::string& k, double Cfg::*f) {
    set[k] = [k, f](Cfg& c, const std::string& v) { c.*f = to_double(k, v); };
    get[k] = [f](const Cfg& c) {
      std::ostringstream os;
      os << c.*f;
      return os.str();
    };
  }
  void integer(const std::string& k, std::int64_t Cfg::*f) {
    set[k] = [k, f](Cfg& c, const std::string& v) { c.*f = to_int(k, v); };
    get[k] = [f](const Cfg& c) { return std::to_string(c.*f); };
  }
};

const FieldTable<AcceptanceConfig>& acceptance_fields() {
  static const FieldTable<AcceptanceConfig> t = [] {
    FieldTable<AcceptanceConfig> f;
    using A = AcceptanceConfig;
    f.real("chi2_level", &A::chi2_level);
    f.set["threads"] = [](A& c, const std::string& v) { c.threads = static_cast<int>(to_int("threads", v)); };
    f.get["threads"] = [](const A& c) { return std::to_string(c.threads); };
    f.integer("a1_reps", &A::a1_reps);
    f.integer("a1_n_max", &A::a1_n_max);
    f.integer("a2_n_exact", &A::a2_n_exact);
    f.integer("a2_n_mc", &A::a2_n_mc);
    f.integer("a2_reps", &A::a2_reps);
    f.real("a2_rel_tol", &A::a2_rel_tol);
    f.real("a2_se_mult", &A::a2_se_mult);
    f.integer("a3_n", &A::a3_n);
    f.integer("a3_reps", &A::a3_reps);
    f.real("a3_ks_tol", &A::a3_ks_tol);
    f.integer("a4_n", &A::a4_n);
    f.integer("a4_reps", &A::a4_reps);
    f.real("a4_ks_tol", &A::a4_ks_tol);
    f.integer("a5_n_max", &A::a5_n_max);
    f.real("a5_lo", &A::a5_lo);
    f.real("a5_hi", &A::a5_hi);
    f.real("a6_tol", &A::a6_tol);
    f.real("a7_tol", &A::a7_tol);
    f.integer("a7_moment_n", &A::a7_moment_n);
    f.integer("a7_equ_n", &A::a7_equ_n);
    f.integer("a7_y_n", &A::a7_y_n);
    f.real("a8_tol", &A::a8_tol);
    f.integer("a8_n", &A::a8_n);
    f.integer("a8_quad_n", &A::a8_quad_n);
    f.integer("a9_n", &A::a9_n);
    f.integer("a9_reps", &A::a9_reps);
    f.integer("a10_n", &A::a10_n);
    f.integer("a10_reps", &A::a10_reps);
    f.real("a10_rel_tol", &A::a10_rel_tol);
    f.real("a10_se_mult", &A::a10_se_mult);
    f.integer("a11_n_exact", &A::a11_n_exact);
    f.real("a11_ks_tol", &A::a11_ks_tol);
    f.integer("a11_reps", &A::a11_reps);
    f.integer("a11_n_path", &A::a11_n_path);
    f.real("a12_tv_max", &A::a12_tv_max);
    return f;
  }();
  return t;
}

}  // namespace

void AcceptanceConfig::apply(const KeyValues& kv) {
  const auto& t = acceptance_fields();
  for (const auto& [k, v] : kv) {
    auto it = t.set.find(k);
    if (it == t.set.end()) throw std::invalid_argument("unknown acceptance setting '" + k + "'");
    it->second(*this, v);
  }
}

KeyValues AcceptanceConfig::to_key_values() const {
  KeyValues kv;
  for (const auto& [k, g] : acceptance_fields().get) kv[k] = g(*this);
  return kv;
}

void ExperimentConfig::apply(const KeyValues& kv) {
  for (const auto& [k, v] : kv) {
    if (k == "law")
      law = v;
    else if (k == "coalescent")
      coalescent = v;
    else if (k == "n" || k == "n_grid")
      n_grid = parse_int_list(v);
    else if (k == "reps")
      reps = to_int(k, v);
    else if (k == "seed") {
      std::size_t pos = 0;
      seed = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("bad seed '" + v + "'");
    } else if (k == "statistics")
      statistics = split(v, ',');
    else if (k == "limit")
      limit = v;
    else if (k == "out")
      out = v;
    else if (k == "format")
      format = v;
    else if (k == "threads")
      threads = static_cast<int>(to_int(k, v));
    else if (k == "k_max")
      k_max = static_cast<int>(to_int(k, v));
    else
      throw std::invalid_argument("unknown config key '" + k + "'");
  }
}

KeyValues ExperimentConfig::to_key_values() const {
  auto join_ints = [](const std::vector<std::int64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::string st;
  for (std::size_t i = 0; i < statistics.size(); ++i) st += (i ? "," : "") + statistics[i];
  return {{"law", law},         {"coalescent", coalescent}, {"n", join_ints(n_grid)},
          {"reps", std::to_string(reps)}, {"seed", std::to_string(seed)}, {"statistics", st},
          {"limit", limit},     {"format", format},         {"threads", std::to_string(threads)},
          {"k_max", std::to_string(k_max)}};
}

void ExperimentConfig::validate(bool needs_standard_errors) const {
  if (n_grid.empty()) throw std::invalid_argument("n-grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw std::invalid_argument("n-grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("n-grid must be strictly increasing");
  }
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (needs_standard_errors && reps < 100) throw std::invalid_argument("reps must be >= 100 when standard errors are reported");
  if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

}  // namespace absorb
