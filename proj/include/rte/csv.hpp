#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rte {

/// `# key=value` metadata lines, one column-name line, then numeric rows.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws InvalidArgumentError if absent.
  std::size_t column(const std::string& name) const;
  /// Value of a metadata key; throws InvalidArgumentError if absent.
  const std::string& meta(const std::string& key) const;
};

/// Values are written with 17 significant digits, so they read back exactly.
/// Throws InvalidArgumentError when a row length differs from the column
/// count and IoError when the file cannot be written.
void write_csv(const std::string& path, const CsvTable& table);
std::string format_csv(const CsvTable& table);

/// Inverse of write_csv. Throws IoError on unreadable files and
/// InvalidArgumentError on malformed content.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

}  // namespace rte
