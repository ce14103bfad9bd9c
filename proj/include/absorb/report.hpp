#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "absorb/acceptance.hpp"
#include "absorb/config.hpp"

namespace absorb {

using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string format_double(double v);

/// Header row, then one line per row. Empty cells for missing values.
void write_csv(std::ostream& os, const Table& t);

/// One object: {"command", "config", "tables": {name: {"columns", "rows"}}}.
/// Layout documented in docs/report.schema.json.
void write_json(std::ostream& os, const std::string& command, const KeyValues& config, const std::vector<Table>& tables);

/// Acceptance rows plus one verdict row per criterion. Runtimes are left out
/// unless `timings` is set so that reruns produce identical files.
Table report_table(const TestReport& report, bool timings);

}  // namespace absorb
