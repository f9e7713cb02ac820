// SPDX-License-Identifier: Apache-2.0
#include "core/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace tdcoord::csv {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // normalizes -0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  // to_chars shortest form may use exponent; keep it, it round-trips.
  return s;
}

std::string format_int(long long v) { return std::to_string(v); }

double parse_double(const std::string& tok, const std::string& context) {
  if (tok.empty())
    throw ValidationError(context + ": empty numeric field");
  const char* begin = tok.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);  // handles "inf", exponents
  if (end != begin + tok.size() || errno == ERANGE)
    throw ValidationError(context + ": bad number '" + tok + "'");
  return v;
}

long long parse_int(const std::string& tok, const std::string& context) {
  long long v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ValidationError(context + ": bad integer '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

namespace {

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

Table Table::read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path.filename().string());
}

Table Table::from_string(const std::string& text, const std::string& name) {
  Table t;
  t.name_ = name;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (!have_header) {
      t.header_ = fields;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!t.col_index_.emplace(fields[i], i).second)
          throw ValidationError(name + ": duplicate column '" + fields[i] + "'");
      }
      have_header = true;
    } else {
      if (fields.size() != t.header_.size())
        throw ValidationError(name + " row " +
                              std::to_string(t.rows_.size() + 2) + ": expected " +
                              std::to_string(t.header_.size()) + " fields, got " +
                              std::to_string(fields.size()));
      t.rows_.push_back(std::move(fields));
    }
  }
  if (!have_header) throw ValidationError(name + ": missing header row");
  return t;
}

bool Table::has_column(const std::string& col) const {
  return col_index_.count(col) > 0;
}

const std::string& Table::cell(std::size_t row, const std::string& col) const {
  auto it = col_index_.find(col);
  if (it == col_index_.end())
    throw ValidationError(name_ + ": no column '" + col + "'");
  return rows_.at(row)[it->second];
}

double Table::number(std::size_t row, const std::string& col) const {
  return parse_double(cell(row, col), row_context(row) + " col " + col);
}

long long Table::integer(std::size_t row, const std::string& col) const {
  return parse_int(cell(row, col), row_context(row) + " col " + col);
}

bool Table::empty_cell(std::size_t row, const std::string& col) const {
  return cell(row, col).empty();
}

void Table::require_columns(const std::vector<std::string>& cols) const {
  if (header_ != cols) {
    std::string want, got;
    for (const auto& c : cols) want += c + ",";
    for (const auto& c : header_) got += c + ",";
    throw ValidationError(name_ + ": header mismatch, expected [" + want +
                          "] got [" + got + "]");
  }
}

std::string Table::row_context(std::size_t row) const {
  return name_ + " row " + std::to_string(row + 2);
}

Writer::Writer(std::vector<std::string> header) : header_(std::move(header)) {}

void Writer::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size())
    throw ValidationError("csv writer: row width " + std::to_string(fields.size()) +
                          " != header width " + std::to_string(header_.size()));
  rows_.push_back(std::move(fields));
}

std::string Writer::to_string() const {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out.push_back(',');
      out += fields[i];
    }
    out.push_back('\n');
  };
  append_row(header_);
  for (const auto& r : rows_) append_row(r);
  return out;
}

void Writer::write_file(const std::filesystem::path& path) const {
  write_text_file(path, to_string());
}

std::unordered_map<std::string, std::string> read_key_values(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::unordered_map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line.erase(0, start);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path.string() + " line " + std::to_string(lineno) +
                            ": expected key=value");
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      std::size_t e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!out.emplace(key, val).second)
      throw ValidationError(path.string() + ": duplicate key '" + key + "'");
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tdcoord::csv
