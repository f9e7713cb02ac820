// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace tdcoord::csv {

// Shortest decimal string that round-trips to the same double. Integral
// values render without an exponent or trailing ".0" ("5", not "5.0").
std::string format_double(double v);

std::string format_int(long long v);

// Strict parsers: the whole token must be consumed. `context` names the
// file/row for error messages.
double parse_double(const std::string& tok, const std::string& context);
long long parse_int(const std::string& tok, const std::string& context);

// A parsed CSV file: header row plus data rows, comma separated, no quoting
// (fields in this project never contain commas).
class Table {
 public:
  static Table read_file(const std::filesystem::path& path);
  static Table from_string(const std::string& text, const std::string& name);

  const std::string& name() const { return name_; }
  std::size_t rows() const { return rows_.size(); }
  bool has_column(const std::string& col) const;

  // Field access by header name; row is 0-based over data rows.
  const std::string& cell(std::size_t row, const std::string& col) const;
  double number(std::size_t row, const std::string& col) const;
  long long integer(std::size_t row, const std::string& col) const;
  bool empty_cell(std::size_t row, const std::string& col) const;

  // Validates that the header contains exactly `cols` (order included).
  void require_columns(const std::vector<std::string>& cols) const;

  std::string row_context(std::size_t row) const;

 private:
  std::string name_;
  std::vector<std::string> header_;
  std::unordered_map<std::string, std::size_t> col_index_;
  std::vector<std::vector<std::string>> rows_;
};

// Incremental CSV writer with deterministic, locale-independent formatting.
class Writer {
 public:
  explicit Writer(std::vector<std::string> header);
  void add_row(std::vector<std::string> fields);
  std::string to_string() const;
  void write_file(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::vector<std::string> split(const std::string& line, char sep);

// Reads key=value lines; '#' starts a comment, blank lines skipped.
std::unordered_map<std::string, std::string> read_key_values(
    const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace tdcoord::csv
