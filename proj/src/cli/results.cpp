#include "kerrcat/cli/results.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace kerrcat::cli {
namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return std::to_string(v);
      },
      c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv|json)");
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("ResultTable: no columns");
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("ResultTable: row has " + std::to_string(row.size()) + " fields, header has " +
                                std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
  std::string out;
  const auto line = [&](const auto& fields, auto&& text) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(text(fields[i]));
    }
    out += "\r\n";
  };
  line(columns_, [](const std::string& s) { return s; });
  for (const auto& r : rows_) line(r, cell_text);
  return out;
}

std::string ResultTable::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows_) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < columns_.size(); ++i)
      std::visit([&](const auto& v) { obj[columns_[i]] = v; }, r[i]);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string ResultTable::render(Format f) const { return f == Format::kCsv ? to_csv() : to_json(); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

}  // namespace kerrcat::cli
