#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "rfeh/error.hpp"

namespace rfeh::app {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

namespace {

std::string csv_field(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

nlohmann::json json_value(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_number(*d);
    return std::strtod(format_number(*d).c_str(), nullptr);
  }
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out << (i ? "," : "") << csv_field(t.columns[i]);
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

nlohmann::json table_to_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = json_value(row[i]);
    rows.push_back(std::move(obj));
  }
  return {{"columns", t.columns}, {"rows", rows}};
}

void write_table(std::ostream& out, const Table& t, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    write_csv(out, t);
  } else {
    out << table_to_json(t).dump(2) << '\n';
  }
}

}  // namespace rfeh::app
