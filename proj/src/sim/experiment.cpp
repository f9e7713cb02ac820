// SPDX-License-Identifier: Apache-2.0
#include "sim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/rand.hpp"
#include "grid/io.hpp"

namespace tdcoord::sim {
namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto work = [&] {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::vector<double> parse_double_list(const std::string& value, const std::string& ctx) {
  std::vector<double> out;
  for (const std::string& tok : csv::split(value, ','))
    out.push_back(csv::parse_double(tok, ctx));
  return out;
}

opf::ClearingOptions clearing_options(const grid::PowerSystem& sys,
                                      const ExperimentConfig& cfg) {
  opf::ClearingOptions opt;
  opt.lambda_lo = sys.lambda_lo;
  opt.lambda_hi = sys.lambda_hi;
  opt.base_mva = sys.base_mva;
  opt.polygon_sides = cfg.polygon_sides;
  opt.solver.tol = cfg.solver_tol;
  return opt;
}

double mean_clear_seconds(const std::vector<coord::HourReport>& hours) {
  double s = 0.0;
  for (const auto& h : hours) s += h.clear_seconds;
  return hours.empty() ? 0.0 : s / static_cast<double>(hours.size());
}

}  // namespace

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  ExperimentConfig cfg;
  auto kv = csv::read_key_values(path);
  bool have_system = false;
  for (const auto& [key, value] : kv) {
    const std::string ctx = "experiment config " + path.string() + ": " + key;
    if (key == "system") {
      std::filesystem::path p(value);
      cfg.system_dir = p.is_absolute() ? p : path.parent_path() / p;
      have_system = true;
    } else if (key == "etas") {
      cfg.etas = parse_double_list(value, ctx);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(csv::parse_int(value, ctx));
    } else if (key == "train_hours") {
      cfg.train_hours = static_cast<int>(csv::parse_int(value, ctx));
    } else if (key == "test_hours") {
      cfg.test_hours = static_cast<int>(csv::parse_int(value, ctx));
    } else if (key == "neighbors") {
      cfg.neighbors = static_cast<int>(csv::parse_int(value, ctx));
    } else if (key == "max_blocks") {
      cfg.max_blocks = static_cast<int>(csv::parse_int(value, ctx));
    } else if (key == "strategies") {
      cfg.strategies.clear();
      for (const std::string& tok : csv::split(value, ','))
        cfg.strategies.push_back(coord::strategy_from_string(tok));
    } else if (key == "polygon_sides") {
      cfg.polygon_sides = static_cast<int>(csv::parse_int(value, ctx));
    } else if (key == "solver_tol") {
      cfg.solver_tol = csv::parse_double(value, ctx);
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(csv::parse_int(value, ctx));
    } else {
      throw ValidationError("experiment config: unknown key " + key);
    }
  }
  if (!have_system) throw ValidationError("experiment config: missing system=");
  if (cfg.etas.empty()) throw ValidationError("experiment config: etas must be non-empty");
  for (double eta : cfg.etas)
    if (!(eta > 0.0)) throw ValidationError("experiment config: etas must be positive");
  for (std::size_t i = 0; i < cfg.etas.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.etas.size(); ++j)
      if (cfg.etas[i] == cfg.etas[j])
        throw ValidationError("experiment config: duplicate eta");
  if (cfg.train_hours < 1) throw ValidationError("experiment config: train_hours must be >= 1");
  if (cfg.test_hours < 1) throw ValidationError("experiment config: test_hours must be >= 1");
  if (cfg.neighbors < 1) throw ValidationError("experiment config: neighbors must be >= 1");
  if (cfg.max_blocks < 1) throw ValidationError("experiment config: max_blocks must be >= 1");
  if (cfg.strategies.empty())
    throw ValidationError("experiment config: strategies must be non-empty");
  for (std::size_t i = 0; i < cfg.strategies.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.strategies.size(); ++j)
      if (cfg.strategies[i] == cfg.strategies[j])
        throw ValidationError("experiment config: duplicate strategy");
  if (cfg.threads < 0) throw ValidationError("experiment config: threads must be >= 0");
  if (!(cfg.solver_tol > 0.0)) throw ValidationError("experiment config: solver_tol must be > 0");
  return cfg;
}

grid::PowerSystem scale_dn_impedances(grid::PowerSystem sys, double eta) {
  if (!(eta > 0.0)) throw ValidationError("impedance scaling requires eta > 0");
  for (auto& dn : sys.dns)
    for (auto& line : dn.net.lines) {
      line.r *= eta;
      line.x *= eta;
    }
  return sys;
}

std::vector<learn::HistoryRecord> build_history(const grid::PowerSystem& sys,
                                                int hours,
                                                const opf::ClearingOptions& opt,
                                                int threads, std::ostream* log) {
  if (hours < 1) throw ValidationError("history: hours must be >= 1");
  if (hours > sys.horizon) throw ValidationError("history: hours exceed the horizon");
  std::vector<opf::DnModel> models(sys.dns.size());  // all embedded
  std::vector<std::vector<learn::HistoryRecord>> per_hour(hours);
  std::vector<std::string> warnings(hours);
  parallel_for(hours, threads, [&](int t) {
    try {
      opf::TransmissionDispatch d = opf::solve_transmission(sys, t, models, opt);
      for (std::size_t k = 0; k < sys.dns.size(); ++k) {
        learn::HistoryRecord rec;
        rec.hour = t;
        rec.dn_id = sys.dns[k].net.id;
        rec.context = coord::context_for(sys, static_cast<int>(k), t);
        rec.lambda = d.dn_price[k];
        rec.intake_mw = d.dn_import[k];
        per_hour[t].push_back(std::move(rec));
      }
    } catch (const SolverError& e) {
      warnings[t] = e.what();
    }
  });
  std::vector<learn::HistoryRecord> records;
  records.reserve(static_cast<std::size_t>(hours) * sys.dns.size());
  for (int t = 0; t < hours; ++t) {
    if (!warnings[t].empty() && log)
      *log << "warning: history hour " << t << " skipped: " << warnings[t] << "\n";
    for (auto& rec : per_hour[t]) records.push_back(std::move(rec));
  }
  return records;
}

std::vector<int> sample_test_hours(int train_hours, int horizon, int count,
                                   std::uint64_t seed) {
  if (train_hours < 0 || horizon <= train_hours)
    throw ValidationError("test sampling: empty candidate window");
  int pool_size = horizon - train_hours;
  if (count < 1 || count > pool_size)
    throw ValidationError("test sampling: need 1 <= count <= " + std::to_string(pool_size));
  std::vector<int> pool(pool_size);
  std::iota(pool.begin(), pool.end(), train_hours);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    int j = i + static_cast<int>(u01(rng) * static_cast<double>(pool_size - i));
    j = std::min(j, pool_size - 1);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log) {
  ExperimentResult result;
  result.config = config;
  grid::PowerSystem base = grid::load_system(config.system_dir);
  std::vector<int> test =
      sample_test_hours(config.train_hours, base.horizon, config.test_hours, config.seed);
  const int n_test = static_cast<int>(test.size());

  for (double eta : config.etas) {
    EtaOutcome out;
    out.eta = eta;
    out.test_hours = test;
    grid::PowerSystem sys = scale_dn_impedances(base, eta);
    opf::ClearingOptions opt = clearing_options(sys, config);

    if (log) *log << "eta " << eta << ": building history over " << config.train_hours
                  << " hours\n";
    out.history = build_history(sys, config.train_hours, opt, config.threads, log);

    coord::Strategy bn{coord::StrategyKind::kBenchmark, config.neighbors, config.max_blocks};
    out.benchmark.resize(n_test);
    parallel_for(n_test, config.threads, [&](int i) {
      out.benchmark[i] = coord::evaluate_hour(bn, sys, test[i], out.history, opt);
    });

    for (coord::StrategyKind kind : config.strategies) {
      StrategyOutcome so;
      so.strategy = {kind, config.neighbors, config.max_blocks};
      if (kind == coord::StrategyKind::kBenchmark) {
        so.hours = out.benchmark;
      } else {
        so.hours.resize(n_test);
        std::vector<std::vector<opf::DnModel>> models(n_test);
        parallel_for(n_test, config.threads, [&](int i) {
          so.hours[i] =
              coord::evaluate_hour(so.strategy, sys, test[i], out.history, opt, &models[i]);
        });
        if (kind == coord::StrategyKind::kPriceAware)
          for (int i = 0; i < n_test; ++i)
            for (std::size_t k = 0; k < sys.dns.size(); ++k)
              out.bids.push_back({sys.dns[k].net.id, test[i], models[i][k].bid});
      }
      so.shares = coord::welfare_allocation(so.hours, out.benchmark);
      if (log) *log << "eta " << eta << ": " << coord::to_string(kind) << " done\n";
      out.strategies.push_back(std::move(so));
    }
    result.etas.push_back(std::move(out));
  }
  return result;
}

std::vector<ReportRow> report_rows(const ExperimentResult& result) {
  std::vector<ReportRow> rows;
  for (const auto& out : result.etas) {
    for (const auto& so : out.strategies) {
      for (std::size_t i = 0; i < so.hours.size(); ++i) {
        const coord::HourReport& h = so.hours[i];
        ReportRow row;
        row.hour = h.hour;
        row.strategy = h.strategy;
        row.eta = out.eta;
        row.delta_pct = h.delta_pct;
        row.sw_total = h.sw_total;
        row.sw_t = h.sw_t;
        row.sw_d = h.sw_d;
        row.sw_bn = out.benchmark[i].sw_total;
        row.forecast_mw = h.forecast_mw;
        row.actual_mw = h.actual_mw;
        row.slack_mw = h.slack_mw;
        row.flex_forecast_pct = h.flex_forecast_pct;
        row.flex_observed_pct = h.flex_observed_pct;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
  std::vector<SummaryRow> rows;
  for (const auto& out : result.etas) {
    double bn_clear = mean_clear_seconds(out.benchmark);
    for (const auto& so : out.strategies) {
      SummaryRow row;
      row.eta = out.eta;
      row.strategy = so.strategy.kind;
      std::vector<double> deltas, losses, ff, fo;
      for (std::size_t i = 0; i < so.hours.size(); ++i) {
        const coord::HourReport& h = so.hours[i];
        if (h.delta_pct) deltas.push_back(*h.delta_pct);
        double bn_sw = out.benchmark[i].sw_total;
        if (bn_sw == 0.0) throw ValidationError("summary: zero benchmark welfare");
        losses.push_back(100.0 * (bn_sw - h.sw_total) / bn_sw);
        ff.push_back(h.flex_forecast_pct);
        fo.push_back(h.flex_observed_pct);
      }
      auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
      };
      row.delta_mean = mean(deltas);
      row.delta_p5 = deltas.empty() ? 0.0 : percentile(deltas, 5.0);
      row.delta_p95 = deltas.empty() ? 0.0 : percentile(deltas, 95.0);
      row.swloss_mean = mean(losses);
      row.swloss_p5 = percentile(losses, 5.0);
      row.swloss_p95 = percentile(losses, 95.0);
      row.flex_forecast_mean = mean(ff);
      row.flex_observed_mean = mean(fo);
      row.tso_loss_pct = so.shares.tso_pct;
      row.dso_loss_pct = so.shares.dso_pct;
      row.clear_seconds_mean = mean_clear_seconds(so.hours);
      row.speedup_vs_bn =
          row.clear_seconds_mean > 0.0 ? bn_clear / row.clear_seconds_mean : 1.0;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<ReportRow> rows = report_rows(result);
  write_reports(rows, out_dir / "reports.csv");
  write_summary(summarize(result), out_dir / "summary.csv");
  write_figures(rows, out_dir);
  for (const auto& out : result.etas) {
    std::string label = csv::format_double(out.eta);
    if (!out.history.empty())
      learn::write_history(out.history, (out_dir / ("history_eta_" + label + ".csv")).string());
    if (!out.bids.empty())
      learn::write_bids(out.bids, (out_dir / ("bids_eta_" + label + ".csv")).string());
  }
}

}  // namespace tdcoord::sim
