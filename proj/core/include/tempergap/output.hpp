#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace tempergap {

using Cell = std::variant<double, long, std::string>;

/// Column-named table written as CSV (header row, 17 significant digits) or
/// as a JSON array of row objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class OutputFormat { Csv, Json };

OutputFormat output_format_from_string(const std::string& s);
std::string extension(OutputFormat f);

std::string format_number(double v);
std::string to_csv(const Table& t);
std::string to_json(const Table& t);
std::string render(const Table& t, OutputFormat f);

/// Write text, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tempergap
