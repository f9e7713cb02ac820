// SPDX-License-Identifier: Apache-2.0
#include <unistd.h>
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>

#include "core/csv.hpp"
#include "core/error.hpp"

using namespace tdcoord;

namespace {

std::filesystem::path temp_file(const char* stem) {
  auto dir = std::filesystem::temp_directory_path();
  return dir / (std::string(stem) + "_" + std::to_string(::getpid()) + ".csv");
}

}  // namespace

TEST_CASE("format_double renders shortest round-trip form") {
  CHECK(csv::format_double(0.0) == "0");
  CHECK(csv::format_double(-0.0) == "0");
  CHECK(csv::format_double(5.0) == "5");
  CHECK(csv::format_double(-3.0) == "-3");
  CHECK(csv::format_double(0.1) == "0.1");
  CHECK(csv::format_double(1.5) == "1.5");

  const double vals[] = {1.0 / 3.0, 0.1 + 0.2, 1e-12, -6.02e23,
                         123456.789, 2.2250738585072014e-308};
  for (double v : vals) {
    std::string s = csv::format_double(v);
    CHECK(csv::parse_double(s, "roundtrip") == v);
  }
  CHECK(csv::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(csv::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(csv::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("strict parsers reject partial tokens") {
  CHECK(csv::parse_double("2.5", "t") == 2.5);
  CHECK(csv::parse_double("-1e3", "t") == -1000.0);
  CHECK_THROWS_AS(csv::parse_double("", "t"), ValidationError);
  CHECK_THROWS_AS(csv::parse_double("1.2x", "t"), ValidationError);
  CHECK_THROWS_AS(csv::parse_double("1.2 ", "t"), ValidationError);
  CHECK_THROWS_AS(csv::parse_double("1e99999", "t"), ValidationError);

  CHECK(csv::parse_int("42", "t") == 42);
  CHECK(csv::parse_int("-7", "t") == -7);
  CHECK_THROWS_AS(csv::parse_int("4.2", "t"), ValidationError);
  CHECK_THROWS_AS(csv::parse_int("", "t"), ValidationError);
  CHECK_THROWS_AS(csv::parse_int("9e9", "t"), ValidationError);
}

TEST_CASE("table parses header and rows") {
  auto t = csv::Table::from_string("a,b,c\n1,2.5,x\n\n4,5,\r\n", "mem");
  CHECK(t.rows() == 2);
  CHECK(t.has_column("b"));
  CHECK_FALSE(t.has_column("d"));
  CHECK(t.integer(0, "a") == 1);
  CHECK(t.number(0, "b") == 2.5);
  CHECK(t.cell(0, "c") == "x");
  CHECK(t.empty_cell(1, "c"));
  CHECK_FALSE(t.empty_cell(0, "c"));
  t.require_columns({"a", "b", "c"});
  CHECK_THROWS_AS(t.require_columns({"a", "c", "b"}), ValidationError);
  CHECK_THROWS_AS(t.require_columns({"a", "b"}), ValidationError);
  CHECK_THROWS_AS(t.cell(0, "nope"), ValidationError);
}

TEST_CASE("table rejects malformed input") {
  CHECK_THROWS_AS(csv::Table::from_string("", "mem"), ValidationError);
  CHECK_THROWS_AS(csv::Table::from_string("a,a\n1,2\n", "mem"),
                  ValidationError);
  CHECK_THROWS_AS(csv::Table::from_string("a,b\n1\n", "mem"), ValidationError);
  CHECK_THROWS_AS(csv::Table::from_string("a,b\n1,2,3\n", "mem"),
                  ValidationError);
  CHECK_THROWS_AS(csv::Table::read_file("/nonexistent/agh.csv"), IoError);
}

TEST_CASE("writer round-trips through a file") {
  csv::Writer w({"id", "value"});
  w.add_row({"first", csv::format_double(0.25)});
  w.add_row({"second", csv::format_double(-3.0)});
  CHECK(w.to_string() == "id,value\nfirst,0.25\nsecond,-3\n");
  CHECK_THROWS_AS(w.add_row({"only-one"}), ValidationError);

  auto path = temp_file("writer_rt");
  w.write_file(path);
  auto t = csv::Table::read_file(path);
  CHECK(t.rows() == 2);
  CHECK(t.cell(1, "id") == "second");
  CHECK(t.number(0, "value") == 0.25);
  std::filesystem::remove(path);
}

TEST_CASE("split keeps empty fields") {
  auto f = csv::split("a,,c", ',');
  REQUIRE(f.size() == 3);
  CHECK(f[0] == "a");
  CHECK(f[1].empty());
  CHECK(f[2] == "c");
  CHECK(csv::split("", ',').size() == 1);
}

TEST_CASE("key=value files skip comments and blanks") {
  auto path = temp_file("kv");
  csv::write_text_file(path,
                       "# leading comment\nalpha = 1\n\nbeta=two words\n");
  auto kv = csv::read_key_values(path);
  CHECK(kv.size() == 2);
  CHECK(kv.at("alpha") == "1");
  CHECK(kv.at("beta") == "two words");

  csv::write_text_file(path, "no_equals_here\n");
  CHECK_THROWS_AS(csv::read_key_values(path), ValidationError);
  csv::write_text_file(path, "dup=1\ndup=2\n");
  CHECK_THROWS_AS(csv::read_key_values(path), ValidationError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(csv::read_key_values(path), IoError);
}
