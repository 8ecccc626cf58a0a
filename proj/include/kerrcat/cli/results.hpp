#pragma once
// Column-ordered result tables and their CSV / JSON renderings. Doubles are
// written with 17 significant digits via std::to_chars (locale independent).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kerrcat::cli {

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

enum class Format { kCsv, kJson };

// "csv" | "json"; throws std::invalid_argument otherwise.
Format parse_format(std::string_view name);

class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  // Throws std::invalid_argument when the row width differs from the header.
  void add_row(std::vector<Cell> row);

  // RFC 4180: CRLF line ends, fields with , " CR or LF quoted, quotes doubled.
  std::string to_csv() const;
  // Array of objects keyed by column name.
  std::string to_json() const;
  std::string render(Format f) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_double(double v);

// Writes the whole text or throws std::runtime_error; nothing is created when
// the file cannot be opened.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace kerrcat::cli
