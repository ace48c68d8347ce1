#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nhlatt {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using TableCell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<TableCell>> rows;
};

enum class TableFormat { csv, json };
TableFormat parse_format(const std::string& name);

/// Locale-independent, 17 significant digits; round-trips doubles exactly.
std::string format_double(double value);

/// CSV: one header row, '.' decimal separator, LF line endings; the meta
/// object goes to a sibling <path>.meta.json.  JSON: one object with
/// "meta", "columns" and "rows".
void write_table(const Table& table, const nlohmann::json& meta,
                 TableFormat format, const std::string& path);

/// Reads a CSV written by write_table; numeric cells become doubles.
Table read_csv(const std::string& path);

} // namespace nhlatt
