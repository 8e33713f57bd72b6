#include "tempergap/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace tempergap {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("Table::add: row width does not match the header");
  rows.push_back(std::move(row));
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format '" + s + "'");
}

std::string extension(OutputFormat f) { return f == OutputFormat::Csv ? ".csv" : ".json"; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_number(*d);
  if (auto l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& c = row[i];
      if (auto d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) {
          obj[t.columns[i]] = *d;
        } else {
          obj[t.columns[i]] = format_number(*d);
        }
      } else if (auto l = std::get_if<long>(&c)) {
        obj[t.columns[i]] = *l;
      } else {
        obj[t.columns[i]] = std::get<std::string>(c);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string render(const Table& t, OutputFormat f) { return f == OutputFormat::Csv ? to_csv(t) : to_json(t); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace tempergap
