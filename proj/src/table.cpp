#include "maisense/table.hpp"

#include "maisense/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace maisense {
namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_number(*d);
    return std::stod(format_number(*d));
  }
  if (const auto* l = std::get_if<long>(&c)) return *l;
  return std::get<std::string>(c);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("table row width does not match header");
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

nlohmann::json table_json(const Table& t, const nlohmann::json& config) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  return {{"config", config}, {"columns", t.columns}, {"rows", std::move(rows)}};
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + path);
  f << text;
  if (!f) throw ConfigError("failed writing output file: " + path);
}

}  // namespace maisense
