#pragma once

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace maisense {

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// 12 significant digits, '.' decimal point, locale independent.
std::string format_number(double v);

/// Header row plus one line per row, comma separated, LF endings.
std::string to_csv(const Table& t);

/// {"config": ..., "columns": [...], "rows": [[...], ...]}
nlohmann::json table_json(const Table& t, const nlohmann::json& config);

/// Writes to `path`, or stdout when path is empty or "-".
void write_text(const std::string& text, const std::string& path);

}  // namespace maisense
