#include "absorb/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace absorb {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("table '" + name + "': row width mismatch");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return std::isnan(d) ? "" : format_double(d); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
  };
  return std::visit(V{}, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  struct V {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
    nlohmann::ordered_json operator()(std::int64_t i) const { return i; }
    nlohmann::ordered_json operator()(double d) const {
      if (!std::isfinite(d)) return nullptr;
      return d;
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(V{}, c);
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const std::string& command, const KeyValues& config, const std::vector<Table>& tables) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) j["config"][k] = v;
  j["tables"] = nlohmann::ordered_json::object();
  for (const auto& t : tables) {
    nlohmann::ordered_json tj;
    tj["columns"] = t.columns;
    tj["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      auto r = nlohmann::ordered_json::array();
      for (const auto& c : row) r.push_back(json_cell(c));
      tj["rows"].push_back(std::move(r));
    }
    j["tables"][t.name] = std::move(tj);
  }
  os << j.dump(2) << '\n';
}

Table report_table(const TestReport& report, bool timings) {
  Table t;
  t.name = "acceptance";
  t.columns = {"criterion", "check", "observed", "target", "tolerance", "std_error", "pass", "informational", "note"};
  if (timings) t.columns.push_back("runtime_s");
  for (const auto& crit : report.criteria) {
    int failing = 0;
    for (const auto& r : report.rows) {
      if (r.id != crit.id) continue;
      if (!r.informational && !r.pass) ++failing;
      std::vector<Cell> row = {r.id, r.check, r.observed, r.target, r.tolerance, r.std_error, r.pass, r.informational,
                               r.note};
      if (timings) row.emplace_back(std::monostate{});
      t.add(std::move(row));
    }
    std::string note = crit.title;
    if (!crit.error.empty()) note += "; error: " + crit.error;
    std::vector<Cell> verdict = {crit.id, std::string("criterion verdict (failing checks)"),
                                 static_cast<double>(failing), 0.0, 0.0, std::monostate{}, crit.pass, false, note};
    if (timings) verdict.emplace_back(crit.runtime_s);
    t.add(std::move(verdict));
  }
  return t;
}

}  // namespace absorb
