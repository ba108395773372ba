#include "rte/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rte/errors.hpp"

namespace rte {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidArgumentError("csv: no column named '" + name + "'");
}

const std::string& CsvTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  throw InvalidArgumentError("csv: no metadata key '" + key + "'");
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (const auto& [k, v] : table.metadata) {
    if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos ||
        v.find('\n') != std::string::npos) {
      throw InvalidArgumentError("csv: metadata key '" + k + "' contains '=' or a newline");
    }
    out += "# " + k + "=" + v + "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (table.columns[i].find(',') != std::string::npos) {
      throw InvalidArgumentError("csv: column name '" + table.columns[i] + "' contains a comma");
    }
    out += (i ? "," : "") + table.columns[i];
  }
  out += "\n";
  char buf[32];
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw InvalidArgumentError("csv: row has " + std::to_string(row.size()) + " values for " +
                                 std::to_string(table.columns.size()) + " columns");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      if (i) out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
  const std::string text = format_csv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::stringstream in(text);
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!have_columns && line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw InvalidArgumentError("csv: malformed metadata line");
      table.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!have_columns) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
      have_columns = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw InvalidArgumentError("csv: non-numeric value '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != table.columns.size()) throw InvalidArgumentError("csv: ragged row");
    table.rows.push_back(std::move(row));
  }
  if (!have_columns) throw InvalidArgumentError("csv: missing column line");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace rte
