#include "cuspmass/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "cuspmass/error.hpp"
#include "cuspmass/version.hpp"

namespace cuspmass::report {

std::string schema_header() { return std::string("# cuspmass v") + kVersion; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string render(const Cell& c) {
  struct Visitor {
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw DomainError("Table: row width does not match the header");
  std::vector<std::string> out;
  out.reserve(row.size());
  for (const auto& c : row) out.push_back(render(c));
  rows_.push_back(std::move(out));
}

void Table::write_csv(std::ostream& os) const {
  os << schema_header() << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

void Table::save(const std::string& path) const {
  if (path.empty() || path == "-") {
    write_csv(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  write_csv(out);
}

void write_json_lines(std::ostream& os, const std::vector<verify::CheckReport>& reports) {
  for (const auto& r : reports) os << r.to_json_line() << '\n';
}

}  // namespace cuspmass::report
