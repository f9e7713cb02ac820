// SPDX-License-Identifier: Apache-2.0
#pragma once

// The full study protocol: for each impedance scaling eta, build operating
// history by clearing the benchmark over the training window, then run
// every strategy over the same sampled test hours and aggregate.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "coord/pipeline.hpp"
#include "learn/history.hpp"
#include "sim/report.hpp"

namespace tdcoord::sim {

struct ExperimentConfig {
  std::filesystem::path system_dir;
  std::vector<double> etas = {0.67, 1.0, 1.33};
  std::uint64_t seed = 1;
  int train_hours = 336;
  int test_hours = 24;
  int neighbors = 10;   // K for the learned strategies
  int max_blocks = 8;   // B for the bid curves
  std::vector<coord::StrategyKind> strategies = {
      coord::StrategyKind::kBenchmark, coord::StrategyKind::kSingleBus,
      coord::StrategyKind::kPriceAgnostic, coord::StrategyKind::kPriceAware};
  int polygon_sides = 16;
  double solver_tol = 1e-10;
  int threads = 0;  // 0 = all hardware threads
};

// key=value file; relative `system` paths resolve against the config file's
// directory. Unknown keys are rejected.
ExperimentConfig read_experiment_config(const std::filesystem::path& path);

// Multiplies every distribution line's r and x by eta; the transmission
// grid is untouched.
grid::PowerSystem scale_dn_impedances(grid::PowerSystem sys, double eta);

// Benchmark clearings over hours [0, hours); one record per (hour, DN).
// Hours whose clearing fails are skipped with a warning on `log`.
std::vector<learn::HistoryRecord> build_history(const grid::PowerSystem& sys,
                                                int hours,
                                                const opf::ClearingOptions& opt,
                                                int threads, std::ostream* log);

// `count` distinct hours drawn from [train_hours, horizon), ascending.
std::vector<int> sample_test_hours(int train_hours, int horizon, int count,
                                   std::uint64_t seed);

struct StrategyOutcome {
  coord::Strategy strategy;
  std::vector<coord::HourReport> hours;  // one per test hour, in order
  coord::WelfareShares shares;
};

struct EtaOutcome {
  double eta = 1.0;
  std::vector<int> test_hours;
  std::vector<learn::HistoryRecord> history;
  std::vector<learn::LabeledBid> bids;       // curves the PAW clearing used
  std::vector<coord::HourReport> benchmark;  // always evaluated
  std::vector<StrategyOutcome> strategies;   // in configured order
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<EtaOutcome> etas;
};

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log);

std::vector<ReportRow> report_rows(const ExperimentResult& result);
std::vector<SummaryRow> summarize(const ExperimentResult& result);

// Writes reports.csv, summary.csv, the figure files, and per-eta history
// (and, when the price-aware strategy ran, bid) files into out_dir.
void write_experiment(const ExperimentResult& result,
                      const std::filesystem::path& out_dir);

}  // namespace tdcoord::sim
