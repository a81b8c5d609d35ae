#pragma once

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "creditnet/error.hpp"

namespace creditnet {

/// Shortest decimal representation that round-trips the exact double.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

/// Full-string strict parse; nullopt on any trailing garbage.
inline std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<long> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Quotes a field when it contains a comma, quote or leading '#'.
inline std::string csv_escape(std::string_view field) {
  bool needs_quotes = !field.empty() && field.front() == '#';
  for (char c : field)
    if (c == ',' || c == '"') needs_quotes = true;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) os << ',';
    os << csv_escape(fields[i]);
  }
  os << '\n';
}

struct CsvRow {
  std::size_t line_number{0};
  std::vector<std::string> fields;
};

/// Line-oriented CSV reader: UTF-8, comma separated, double-quote escaping
/// (doubled quotes inside quoted fields), '#' comment lines and blank lines
/// skipped. Fields may not span lines.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in, std::string path = "")
      : in_(in), path_(std::move(path)) {}

  /// Next data row, or nullopt at end of input.
  std::optional<CsvRow> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line.front() == '#') continue;
      return parse_line(line);
    }
    return std::nullopt;
  }

 private:
  CsvRow parse_line(const std::string& line) const {
    CsvRow row;
    row.line_number = line_;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            ++i;
          } else {
            in_quotes = false;
          }
        } else {
          field += c;
        }
      } else if (c == '"') {
        in_quotes = true;
      } else if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
      } else {
        field += c;
      }
    }
    if (in_quotes)
      throw LoadError(path_, {"line " + std::to_string(line_) +
                              ": unterminated quoted field"});
    row.fields.push_back(std::move(field));
    return row;
  }

  std::istream& in_;
  std::string path_;
  std::size_t line_ = 0;
};

}  // namespace creditnet
