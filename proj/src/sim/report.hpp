// SPDX-License-Identifier: Apache-2.0
#pragma once

// Experiment outputs: the per-hour report table, its aggregation into a
// summary, and the per-figure plot-data files.

#include <filesystem>
#include <optional>
#include <vector>

#include "coord/pipeline.hpp"

namespace tdcoord::sim {

struct ReportRow {
  int hour = 0;
  coord::StrategyKind strategy = coord::StrategyKind::kBenchmark;
  double eta = 1.0;
  std::optional<double> delta_pct;  // empty cell when undefined
  double sw_total = 0.0;
  double sw_t = 0.0;
  double sw_d = 0.0;
  double sw_bn = 0.0;  // benchmark welfare for the same hour and eta
  double forecast_mw = 0.0;
  double actual_mw = 0.0;
  double slack_mw = 0.0;
  double flex_forecast_pct = 0.0;
  double flex_observed_pct = 0.0;
};

void write_reports(const std::vector<ReportRow>& rows,
                   const std::filesystem::path& path);
std::vector<ReportRow> read_reports(const std::filesystem::path& path);

// Nearest-rank percentile: the ceil(pct/100 * n)-th smallest value.
double percentile(std::vector<double> values, double pct);

struct SummaryRow {
  double eta = 1.0;
  coord::StrategyKind strategy = coord::StrategyKind::kBenchmark;
  double delta_mean = 0.0, delta_p5 = 0.0, delta_p95 = 0.0;
  double swloss_mean = 0.0, swloss_p5 = 0.0, swloss_p95 = 0.0;
  double flex_forecast_mean = 0.0, flex_observed_mean = 0.0;
  double tso_loss_pct = 0.0, dso_loss_pct = 0.0;  // allocation of swloss_mean
  double clear_seconds_mean = 0.0;
  double speedup_vs_bn = 1.0;
};

void write_summary(const std::vector<SummaryRow>& rows,
                   const std::filesystem::path& path);

// fig_imbalance.csv, fig_swloss.csv (eta, strategy, mean, p5, p95) and
// fig_flexibility.csv (eta, strategy, flex_forecast, flex_observed), all
// derived from the report rows alone. The benchmark is left out of the
// imbalance figure: it has none by construction.
void write_figures(const std::vector<ReportRow>& rows,
                   const std::filesystem::path& out_dir);

}  // namespace tdcoord::sim
