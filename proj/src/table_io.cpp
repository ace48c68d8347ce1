#include "nhlatt/table_io.hpp"

#include "nhlatt/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nhlatt {

TableFormat parse_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw ValidationError("invalid-format: expected csv or json, got " + name);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const TableCell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("io-error: cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("io-error: write failed for " + path);
}

} // namespace

void write_table(const Table& table, const nlohmann::json& meta,
                 TableFormat format, const std::string& path) {
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw ValidationError("schema-mismatch: row width differs from header");
    }
  }

  if (format == TableFormat::csv) {
    std::ostringstream csv;
    for (size_t c = 0; c < table.columns.size(); ++c) {
      if (c) csv << ',';
      csv << table.columns[c];
    }
    csv << '\n';
    for (const auto& row : table.rows) {
      for (size_t c = 0; c < row.size(); ++c) {
        if (c) csv << ',';
        csv << cell_text(row[c]);
      }
      csv << '\n';
    }
    write_file(path, csv.str());
    if (!meta.is_null()) {
      write_file(path + ".meta.json", meta.dump(2) + "\n");
    }
    return;
  }

  nlohmann::json doc;
  doc["meta"] = meta;
  doc["columns"] = table.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      if (const double* d = std::get_if<double>(&cell)) {
        r.push_back(*d);
      } else {
        r.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  write_file(path, doc.dump(2) + "\n");
}

Table read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io-error: cannot open " + path);
  Table table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
      const size_t comma = line.find(',', start);
      parts.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (header) {
      table.columns = parts;
      header = false;
      continue;
    }
    std::vector<TableCell> row;
    row.reserve(parts.size());
    for (const std::string& p : parts) {
      char* end = nullptr;
      const double v = std::strtod(p.c_str(), &end);
      if (end == p.c_str() + p.size() && !p.empty()) {
        row.emplace_back(v);
      } else {
        row.emplace_back(p);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

} // namespace nhlatt
