// SPDX-License-Identifier: Apache-2.0
#include "sim/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace tdcoord::sim {
namespace {

const std::vector<std::string> kReportHeader = {
    "hour",        "strategy",  "eta",      "delta_pct",        "sw_total",
    "sw_t",        "sw_d",      "sw_bn",    "forecast_mw",      "actual_mw",
    "slack_mw",    "flex_forecast_pct",     "flex_observed_pct"};

double sw_loss_pct(const ReportRow& row) {
  if (row.sw_bn == 0.0) throw ValidationError("report: zero benchmark welfare");
  return 100.0 * (row.sw_bn - row.sw_total) / row.sw_bn;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Groups report rows by (eta, strategy) in first-appearance order.
struct Group {
  double eta;
  coord::StrategyKind strategy;
  std::vector<const ReportRow*> rows;
};

std::vector<Group> group_rows(const std::vector<ReportRow>& rows) {
  std::vector<Group> groups;
  for (const auto& row : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.eta == row.eta && g.strategy == row.strategy;
    });
    if (it == groups.end()) {
      groups.push_back({row.eta, row.strategy, {}});
      it = groups.end() - 1;
    }
    it->rows.push_back(&row);
  }
  return groups;
}

}  // namespace

void write_reports(const std::vector<ReportRow>& rows, const std::filesystem::path& path) {
  csv::Writer w(kReportHeader);
  for (const auto& r : rows) {
    w.add_row({csv::format_int(r.hour), coord::to_string(r.strategy),
               csv::format_double(r.eta),
               r.delta_pct ? csv::format_double(*r.delta_pct) : "",
               csv::format_double(r.sw_total), csv::format_double(r.sw_t),
               csv::format_double(r.sw_d), csv::format_double(r.sw_bn),
               csv::format_double(r.forecast_mw), csv::format_double(r.actual_mw),
               csv::format_double(r.slack_mw),
               csv::format_double(r.flex_forecast_pct),
               csv::format_double(r.flex_observed_pct)});
  }
  w.write_file(path);
}

std::vector<ReportRow> read_reports(const std::filesystem::path& path) {
  csv::Table t = csv::Table::read_file(path);
  t.require_columns(kReportHeader);
  std::vector<ReportRow> rows;
  rows.reserve(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    ReportRow row;
    row.hour = static_cast<int>(t.integer(r, "hour"));
    row.strategy = coord::strategy_from_string(t.cell(r, "strategy"));
    row.eta = t.number(r, "eta");
    if (!t.empty_cell(r, "delta_pct")) row.delta_pct = t.number(r, "delta_pct");
    row.sw_total = t.number(r, "sw_total");
    row.sw_t = t.number(r, "sw_t");
    row.sw_d = t.number(r, "sw_d");
    row.sw_bn = t.number(r, "sw_bn");
    row.forecast_mw = t.number(r, "forecast_mw");
    row.actual_mw = t.number(r, "actual_mw");
    row.slack_mw = t.number(r, "slack_mw");
    row.flex_forecast_pct = t.number(r, "flex_forecast_pct");
    row.flex_observed_pct = t.number(r, "flex_observed_pct");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("report: no rows in " + path.string());
  return rows;
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw ValidationError("percentile: no values");
  if (!(pct >= 0.0 && pct <= 100.0)) throw ValidationError("percentile: pct out of range");
  std::sort(values.begin(), values.end());
  double n = static_cast<double>(values.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
  if (rank < 1) rank = 1;
  return values[rank - 1];
}

void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  csv::Writer w({"eta", "strategy", "delta_mean", "delta_p5", "delta_p95",
                 "swloss_mean", "swloss_p5", "swloss_p95", "flex_forecast_mean",
                 "flex_observed_mean", "tso_loss_pct", "dso_loss_pct",
                 "clear_seconds_mean", "speedup_vs_bn"});
  for (const auto& r : rows) {
    w.add_row({csv::format_double(r.eta), coord::to_string(r.strategy),
               csv::format_double(r.delta_mean), csv::format_double(r.delta_p5),
               csv::format_double(r.delta_p95), csv::format_double(r.swloss_mean),
               csv::format_double(r.swloss_p5), csv::format_double(r.swloss_p95),
               csv::format_double(r.flex_forecast_mean),
               csv::format_double(r.flex_observed_mean),
               csv::format_double(r.tso_loss_pct), csv::format_double(r.dso_loss_pct),
               csv::format_double(r.clear_seconds_mean),
               csv::format_double(r.speedup_vs_bn)});
  }
  w.write_file(path);
}

void write_figures(const std::vector<ReportRow>& rows, const std::filesystem::path& out_dir) {
  if (rows.empty()) throw ValidationError("report: no rows to aggregate");
  std::vector<Group> groups = group_rows(rows);

  csv::Writer imbalance({"eta", "strategy", "mean", "p5", "p95"});
  csv::Writer swloss({"eta", "strategy", "mean", "p5", "p95"});
  csv::Writer flex({"eta", "strategy", "flex_forecast", "flex_observed"});
  for (const auto& g : groups) {
    std::vector<double> deltas, losses, ff, fo;
    for (const ReportRow* r : g.rows) {
      if (r->delta_pct) deltas.push_back(*r->delta_pct);
      losses.push_back(sw_loss_pct(*r));
      ff.push_back(r->flex_forecast_pct);
      fo.push_back(r->flex_observed_pct);
    }
    if (g.strategy != coord::StrategyKind::kBenchmark && !deltas.empty())
      imbalance.add_row({csv::format_double(g.eta), coord::to_string(g.strategy),
                         csv::format_double(mean_of(deltas)),
                         csv::format_double(percentile(deltas, 5.0)),
                         csv::format_double(percentile(deltas, 95.0))});
    swloss.add_row({csv::format_double(g.eta), coord::to_string(g.strategy),
                    csv::format_double(mean_of(losses)),
                    csv::format_double(percentile(losses, 5.0)),
                    csv::format_double(percentile(losses, 95.0))});
    flex.add_row({csv::format_double(g.eta), coord::to_string(g.strategy),
                  csv::format_double(mean_of(ff)), csv::format_double(mean_of(fo))});
  }
  imbalance.write_file(out_dir / "fig_imbalance.csv");
  swloss.write_file(out_dir / "fig_swloss.csv");
  flex.write_file(out_dir / "fig_flexibility.csv");
}

}  // namespace tdcoord::sim
