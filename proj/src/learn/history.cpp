// SPDX-License-Identifier: Apache-2.0
#include "learn/history.hpp"

#include <algorithm>
#include <cmath>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace tdcoord::learn {
namespace {

std::size_t feature_count(const std::vector<HistoryRecord>& records) {
  if (records.empty()) throw ValidationError("history: no records");
  std::size_t f = records.front().context.size();
  for (const auto& rec : records)
    if (rec.context.size() != f)
      throw ValidationError("history: inconsistent context arity for dn " + rec.dn_id);
  return f;
}

}  // namespace

void write_history(const std::vector<HistoryRecord>& records, const std::string& path) {
  std::size_t f = feature_count(records);
  std::vector<std::string> header = {"hour", "dn_id"};
  for (std::size_t i = 1; i <= f; ++i) header.push_back("feature_" + std::to_string(i));
  header.push_back("lambda");
  header.push_back("p_n");
  csv::Writer w(header);
  for (const auto& rec : records) {
    std::vector<std::string> row = {csv::format_int(rec.hour), rec.dn_id};
    for (double v : rec.context) row.push_back(csv::format_double(v));
    row.push_back(csv::format_double(rec.lambda));
    row.push_back(csv::format_double(rec.intake_mw));
    w.add_row(row);
  }
  w.write_file(path);
}

std::vector<HistoryRecord> read_history(const std::string& path) {
  csv::Table t = csv::Table::read_file(path);
  std::size_t f = 0;
  while (t.has_column("feature_" + std::to_string(f + 1))) ++f;
  std::vector<std::string> expect = {"hour", "dn_id"};
  for (std::size_t i = 1; i <= f; ++i) expect.push_back("feature_" + std::to_string(i));
  expect.push_back("lambda");
  expect.push_back("p_n");
  t.require_columns(expect);
  std::vector<HistoryRecord> out;
  out.reserve(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    HistoryRecord rec;
    rec.hour = static_cast<int>(t.integer(r, "hour"));
    rec.dn_id = t.cell(r, "dn_id");
    for (std::size_t i = 1; i <= f; ++i)
      rec.context.push_back(t.number(r, "feature_" + std::to_string(i)));
    rec.lambda = t.number(r, "lambda");
    rec.intake_mw = t.number(r, "p_n");
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw ValidationError("history: no records in " + path);
  return out;
}

std::vector<HistoryRecord> records_for(const std::vector<HistoryRecord>& records,
                                       const std::string& dn_id) {
  std::vector<HistoryRecord> out;
  for (const auto& rec : records)
    if (rec.dn_id == dn_id) out.push_back(rec);
  return out;
}

void write_bids(const std::vector<LabeledBid>& bids, const std::string& path) {
  csv::Writer w({"dn_id", "hour", "level_index", "breakpoint_price", "cumulative_mw"});
  for (const auto& bid : bids) {
    bid.curve.validate();
    w.add_row({bid.dn_id, csv::format_int(bid.hour), "0", "",
               csv::format_double(bid.curve.base_quantity)});
    for (std::size_t b = 0; b < bid.curve.blocks.size(); ++b)
      w.add_row({bid.dn_id, csv::format_int(bid.hour), csv::format_int(static_cast<int>(b) + 1),
                 csv::format_double(bid.curve.blocks[b].price),
                 csv::format_double(bid.curve.blocks[b].quantity)});
  }
  w.write_file(path);
}

std::vector<LabeledBid> read_bids(const std::string& path) {
  csv::Table t = csv::Table::read_file(path);
  t.require_columns({"dn_id", "hour", "level_index", "breakpoint_price", "cumulative_mw"});
  std::vector<LabeledBid> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    std::string dn = t.cell(r, "dn_id");
    int hour = static_cast<int>(t.integer(r, "hour"));
    int level = static_cast<int>(t.integer(r, "level_index"));
    if (level == 0) {
      if (!t.empty_cell(r, "breakpoint_price"))
        throw ValidationError("bids: level 0 must not carry a breakpoint " + t.row_context(r));
      LabeledBid bid;
      bid.dn_id = dn;
      bid.hour = hour;
      bid.curve.base_quantity = t.number(r, "cumulative_mw");
      out.push_back(std::move(bid));
    } else {
      if (out.empty() || out.back().dn_id != dn || out.back().hour != hour ||
          static_cast<int>(out.back().curve.blocks.size()) != level - 1)
        throw ValidationError("bids: levels out of order " + t.row_context(r));
      BidCurve::Block blk;
      blk.price = t.number(r, "breakpoint_price");
      blk.quantity = t.number(r, "cumulative_mw");
      out.back().curve.blocks.push_back(blk);
    }
  }
  if (out.empty()) throw ValidationError("bids: no curves in " + path);
  for (const auto& bid : out) bid.curve.validate();
  return out;
}

}  // namespace tdcoord::learn
