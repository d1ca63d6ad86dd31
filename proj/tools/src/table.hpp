#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rfeh::app {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class OutputFormat { kCsv, kJson };

/// Numbers are printed with 12 significant digits in both formats, so CSV
/// and JSON carry the same values.
std::string format_number(double v);

void write_csv(std::ostream& out, const Table& t);
nlohmann::json table_to_json(const Table& t);
void write_table(std::ostream& out, const Table& t, OutputFormat format);

}  // namespace rfeh::app
