#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "cuspmass/verification.hpp"

namespace cuspmass::report {

/// First line of every table file: "# cuspmass v<semver>".
std::string schema_header();

/// Shortest round-trip decimal form (17 significant digits at most).
std::string format_number(double v);

using Cell = std::variant<std::string, double, long long, bool>;

/// Column-ordered table written as CSV under the schema header.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);
  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }

  void write_csv(std::ostream& os) const;
  /// Writes to `path`, or to standard output when the path is "-" or empty.
  void save(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_json_lines(std::ostream& os, const std::vector<verify::CheckReport>& reports);

}  // namespace cuspmass::report
